"""Exact resolutions and conic stratifications of tame piecewise-linear complexes."""
from .errors import TameError, InputError, DomainError, PreconditionError, InvariantError
from .linalg import Field
from .geometry import (HalfSpace, Cone, Arrangement, FaceSet, ComparabilityRelation, feasible,
                       region_op, refine, comparability, is_upset, is_downset, interior_ray)
from .poset import (FinitePoset, PosetModule, ModuleHom, PosetComplex, ChainMap, StalkComplex,
                    StalkMap, homology_at, is_quasi_iso, transition, validate_module, dualize)
from .encoding import (Encoding, PLComplex, validate_encoding, coarsest_encoding, interval_module,
                       indicator, conic_stalk, conic_stalk_map, support, is_compactly_supported)
from .resolutions import (IndicatorResolution, IndicatorComplex, upset_resolution, downset_resolution,
                          resolve_complex, lift_morphism, pull_back, adjust_topology, verify_resolution)
from .stratify import (Stratum, ConicStratification, conic_stratification, verify_stratification,
                       clip_bounded, verify_clip)

__version__ = "0.1.0"

__all__ = [
    "TameError",
    "InputError",
    "DomainError",
    "PreconditionError",
    "InvariantError",
    "Field",
    "HalfSpace",
    "Cone",
    "Arrangement",
    "FaceSet",
    "ComparabilityRelation",
    "feasible",
    "region_op",
    "refine",
    "comparability",
    "is_upset",
    "is_downset",
    "interior_ray",
    "FinitePoset",
    "PosetModule",
    "ModuleHom",
    "PosetComplex",
    "ChainMap",
    "StalkComplex",
    "StalkMap",
    "homology_at",
    "is_quasi_iso",
    "transition",
    "validate_module",
    "dualize",
    "Encoding",
    "PLComplex",
    "validate_encoding",
    "coarsest_encoding",
    "interval_module",
    "indicator",
    "conic_stalk",
    "conic_stalk_map",
    "support",
    "is_compactly_supported",
    "IndicatorResolution",
    "IndicatorComplex",
    "upset_resolution",
    "downset_resolution",
    "resolve_complex",
    "lift_morphism",
    "pull_back",
    "adjust_topology",
    "verify_resolution",
    "Stratum",
    "ConicStratification",
    "conic_stratification",
    "verify_stratification",
    "clip_bounded",
    "verify_clip",
]
