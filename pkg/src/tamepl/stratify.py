"""Conic stratifications of supports and bounded constant-sheaf pieces."""
from fractions import Fraction
from math import floor, ceil

from .errors import InputError, PreconditionError
from .geometry import HalfSpace, is_upset, is_downset, comparability
from .encoding import PLComplex, sample_probes, comparable_samples, is_compactly_supported
from .resolutions import (resolve_complex, pull_back, adjust_topology, IndicatorComplex, Summand,
                          Report, verify_resolution)

NONCOMPACT = ("support is not compact; only compactly supported inputs are handled "
              "(finite rather than locally finite stratifications)")


def _table(h):
    return tuple(sorted(h.items()))


class Stratum:
    def __init__(self, region, witness_upset, witness_downset, homology):
        self.region = region
        self.witness_upset = witness_upset
        self.witness_downset = witness_downset
        self.homology = dict(homology)

    def to_json(self):
        return {
            "region": self.region.to_json(),
            "witness_upset": self.witness_upset.to_json(),
            "witness_downset": self.witness_downset.to_json(),
            "homology": {str(k): v for k, v in sorted(self.homology.items())},
        }

    def __repr__(self):
        return f"Stratum({self.region.sign_strings()}, H={self.homology})"


class ConicStratification:
    def __init__(self, strata, source):
        self.strata = list(strata)
        self.source = source

    def __len__(self):
        return len(self.strata)

    def __iter__(self):
        return iter(self.strata)

    def to_json(self):
        return {"arrangement": self.source.arrangement.to_json(),
                "strata": [s.to_json() for s in self.strata]}


def _conic_tables(x):
    probes = sample_probes(x.arrangement, x.cone)
    cache = {}
    out = []
    for f in probes:
        if f not in cache:
            cache[f] = x.at_face(f).homology()
        out.append(cache[f])
    return out


def _downset_witness(region, upset, rel):
    """A closed downset ``D`` with ``upset & D == region``, or None."""
    d = rel.down_closure(region).closure()
    if (upset & d) == region and is_downset(d, rel):
        return d
    return None


def resolution_upsets(x):
    """Distinct nonempty open upsets of the adjusted upset resolution of ``x``."""
    res = resolve_complex(x.complex, "upset")
    ic = adjust_topology(pull_back(res, x.encoding))
    seen, out = set(), []
    for i in ic.degrees:
        for s in ic.summands(i):
            if s.region.members and s.region.members not in seen:
                seen.add(s.region.members)
                out.append(s.region)
    return out, ic


def conic_stratification(x):
    if not is_compactly_supported(x):
        raise PreconditionError(NONCOMPACT)
    arr = x.arrangement
    rel = x.encoding.rel
    ups, _ = resolution_upsets(x)
    groups = {}
    for face in range(arr.n_faces):
        sig = tuple(k for k, u in enumerate(ups) if face in u)
        groups.setdefault(sig, set()).add(face)
    tables = _conic_tables(x)
    strata = []
    full = arr.full()
    for sig, faces in groups.items():
        h = tables[min(faces)]
        if not h:
            continue
        region = arr.empty()._new(faces)
        wu = full
        for k in sig:
            wu = wu & ups[k]
        wd = _downset_witness(region, wu, rel)
        if wd is None:
            wd = full
            for k, u in enumerate(ups):
                if k not in sig:
                    wd = wd & u.complement()
        strata.append(Stratum(region, wu, wd, h))
    strata.sort(key=lambda s: min(s.region.members))
    return ConicStratification(strata, x)


def verify_stratification(s):
    x = s.source
    arr = x.arrangement
    rel = x.encoding.rel
    fails = []
    seen = set()
    for k, st in enumerate(s.strata):
        if st.region.members & seen:
            fails.append({"stratum": k, "reason": "strata overlap"})
        seen |= st.region.members
        if (st.witness_upset & st.witness_downset) != st.region:
            fails.append({"stratum": k, "reason": "region is not witness_upset & witness_downset"})
        if st.witness_upset.interior() != st.witness_upset or not is_upset(st.witness_upset, rel):
            fails.append({"stratum": k, "reason": "witness_upset is not an open upset"})
        if st.witness_downset.closure() != st.witness_downset or not is_downset(st.witness_downset, rel):
            fails.append({"stratum": k, "reason": "witness_downset is not a closed downset"})
        if not any(st.homology.values()):
            fails.append({"stratum": k, "reason": "stratum has zero homology"})
    tables = _conic_tables(x)
    supp = {i for i, h in enumerate(tables) if h}
    closures = set()
    for st in s.strata:
        closures |= st.region.closure().members
    if not supp <= closures:
        fails.append({"reason": "conic support not covered by stratum closures",
                      "faces": [arr.sign_string(i) for i in sorted(supp - closures)]})
    where = {}
    for k, st in enumerate(s.strata):
        for i in st.region.members:
            where[i] = k
            if _table(tables[i]) != _table(st.homology):
                fails.append({"stratum": k, "face": arr.sign_string(i),
                              "reason": "conic homology differs from the stratum's"})
    probes = sample_probes(arr, x.cone)
    for i, j in comparable_samples(arr, x.cone):
        if i in where and where.get(j) == where[i]:
            m = x.map_faces(probes[i], probes[j])
            if not m.is_quasi_iso():
                fails.append({"stratum": where[i], "face": arr.sign_string(i), "to": arr.sign_string(j),
                              "reason": "stalk map inside a stratum is not an isomorphism"})
    return Report(fails, len(s.strata))


# ---------------------------------------------------------------------------
# bounded pieces

class Piece:
    def __init__(self, region, degree, summand, witness_upset, witness_downset, label=None):
        self.region = region
        self.degree = degree
        self.summand = summand
        self.witness_upset = witness_upset
        self.witness_downset = witness_downset
        self.label = label

    def to_json(self):
        return {"degree": self.degree, "summand": self.summand,
                "region": self.region.to_json(),
                "witness_upset": self.witness_upset.to_json(),
                "witness_downset": self.witness_downset.to_json()}

    def __repr__(self):
        return f"Piece(deg={self.degree}, {self.region.sign_strings()})"


class ClipResult:
    """Bounded pieces, the clipped complex they form, and the box used."""

    def __init__(self, pieces, complex, original, p0, p1, arrangement):
        self.pieces = pieces
        self.complex = complex
        self.original = original
        self.p0 = p0
        self.p1 = p1
        self.arrangement = arrangement

    def __len__(self):
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def to_json(self):
        from .rational import format_fraction
        return {
            "arrangement": self.arrangement.to_json(),
            "p0": None if self.p0 is None else [format_fraction(v) for v in self.p0],
            "p1": None if self.p1 is None else [format_fraction(v) for v in self.p1],
            "pieces": [p.to_json() for p in self.pieces],
            "differentials": {str(i): [[self.complex.field.format(v) for v in row] for row in m]
                              for i, m in sorted(self.complex.diffs.items())},
        }


def bounding_points(region, cone):
    """``p0, p1`` with the region's closure inside ``(p0 + Q+°) & (p1 - Q+)``."""
    box = region.bounding_box()
    if box is None:
        return None, None
    lo, hi = box
    g = cone.interior_ray()
    base0 = [Fraction(floor(v)) for v in lo]
    base1 = [Fraction(ceil(v)) for v in hi]
    n = len(lo)
    corners = [()]
    for k in range(n):
        corners = [c + (v,) for c in corners for v in (lo[k], hi[k])]
    t = Fraction(1)
    while True:
        p0 = tuple(b - t * gi for b, gi in zip(base0, g))
        p1 = tuple(b + t * gi for b, gi in zip(base1, g))
        if all(cone.contains_interior([c - a for c, a in zip(cr, p0)])
               and cone.contains([a - c for c, a in zip(cr, p1)]) for cr in corners):
            return p0, p1
        t *= 2


def _box_halfspaces(cone, p0, p1):
    up, down = [], []
    for h in cone.hrep:
        a = h.normal
        up.append(HalfSpace(a, sum(x * y for x, y in zip(a, p0)), True))
        down.append(HalfSpace([-v for v in a], -sum(x * y for x, y in zip(a, p1)), False))
    return up, down


def clip_bounded(x):
    """Intersect every summand of an adjusted upset complex with a cone box."""
    if x.kind != "upset":
        raise InputError("clip_bounded expects an upset indicator complex")
    if x.augmentation is None:
        raise InputError("clip_bounded needs an augmented indicator complex")
    src = x.augmentation
    supp = src.alexandrov_support()
    if not supp.is_bounded():
        raise PreconditionError(NONCOMPACT)
    cone = x.cone
    p0, p1 = bounding_points(supp, cone)
    if p0 is None:
        empty = IndicatorComplex("upset", x.arrangement, cone, {}, {}, x.field, src, {})
        return ClipResult([], empty, x, None, None, x.arrangement)
    up, down = _box_halfspaces(cone, p0, p1)
    finer = x.arrangement.extend([(h.normal, h.offset) for h in up + down])
    lower = finer.region(up)
    upper = finer.region(down)
    box = lower & upper
    enc = src.encoding.refine(finer)
    terms, keep, pieces = {}, {}, []
    for i in x.degrees:
        terms[i], keep[i] = [], []
        for k, s in enumerate(x.summands(i)):
            u = s.region.refine(finer)
            piece = u & box
            if piece.is_empty():
                continue
            keep[i].append(k)
            terms[i].append(Summand(piece, s.label))
            pieces.append(Piece(piece, i, k, u & lower, upper, s.label))
    diffs = {}
    for i, m in x.diffs.items():
        if keep.get(i) and keep.get(i + 1):
            diffs[i] = m[keep[i + 1]][:, keep[i]]
    vecs = {i: [x.aug_vectors[i][k] for k in keep[i]] for i in keep if keep[i]}
    clipped = IndicatorComplex("upset", finer, cone, terms, diffs, x.field,
                               PLComplex(enc, src.complex), vecs)
    return ClipResult(pieces, clipped, x, p0, p1, finer)


def verify_clip(result, rel=None):
    """Boundedness, witnesses and stalkwise agreement with the unclipped complex."""
    fails = []
    arr = result.arrangement
    c = result.complex
    if rel is None:
        rel = comparability(arr, c.cone)
    for n, p in enumerate(result.pieces):
        if not p.region.is_bounded():
            fails.append({"piece": n, "reason": "piece is unbounded"})
        if (p.witness_upset & p.witness_downset) != p.region:
            fails.append({"piece": n, "reason": "piece is not witness_upset & witness_downset"})
        if p.witness_upset.interior() != p.witness_upset or not is_upset(p.witness_upset, rel):
            fails.append({"piece": n, "reason": "witness_upset is not an open upset"})
        if p.witness_downset.closure() != p.witness_downset or not is_downset(p.witness_downset, rel):
            fails.append({"piece": n, "reason": "witness_downset is not a closed downset"})
    if result.pieces:
        orig = result.original.refine(arr)
        probes = sample_probes(arr, c.cone)
        for face, f in enumerate(probes):
            if _table(c.at_face(f).homology()) != _table(orig.at_face(f).homology()):
                fails.append({"face": arr.sign_string(face), "reason": "clipped homology differs"})
        rep = verify_resolution(c, "conic")
        fails += rep.failures
    return Report(fails, len(result.pieces))
