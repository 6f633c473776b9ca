"""Finite encodings of tame PL modules and complexes, and conic stalks.

An encoding sends each face of a master arrangement to an element of a
finite poset, order-preservingly for the face comparability relation.  A PL
complex is a poset complex read through that map (Alexandrov semantics).

Conic stalks are computed with a probe: the stalk at ``q`` is the direct
limit over ``p`` in ``q - Q+°`` of sections over ``p + Q+°``.  Along the
ray ``q - t g`` (``g`` interior to the cone) the face of ``q - t g`` is
constant for small ``t > 0``; that *probe face* carries the limit.
"""
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import InputError, DomainError
from .geometry import FaceSet, comparability
from .linalg import Field
from .poset import FinitePoset, PosetComplex, PosetModule, StalkMap
from .rational import to_vector

QQ = Field()


# ---------------------------------------------------------------------------
# probes

def probe_epsilon(arrangement, g, q):
    """Half the first positive crossing time of ``q - t g``, or 1."""
    best = None
    for a, b in arrangement.hyperplanes:
        ag = sum(x * y for x, y in zip(a, g))
        if ag == 0:
            continue
        t = (sum(x * Fraction(y) for x, y in zip(a, q)) - b) / ag
        if t > 0 and (best is None or t < best):
            best = t
    return Fraction(1) if best is None else best / 2


def probe_point(arrangement, cone, q, eps=None):
    g = cone.interior_ray()
    if eps is None:
        eps = probe_epsilon(arrangement, g, q)
    return tuple(Fraction(x) - eps * y for x, y in zip(q, g))


def probe_face(arrangement, cone, q):
    q = to_vector(list(q), "point")
    if len(q) != arrangement.dim:
        raise InputError(f"point has dimension {len(q)}, expected {arrangement.dim}")
    return arrangement.locate(probe_point(arrangement, cone, q))


@lru_cache(maxsize=256)
def _sample_probes(arrangement, cone):
    pts = [probe_point(arrangement, cone, q) for q in arrangement.samples]
    return tuple(arrangement.locate_many(pts))


def sample_probes(arrangement, cone):
    """Probe face of every face sample, indexed by face."""
    return _sample_probes(arrangement, cone)


def comparable_samples(arrangement, cone):
    """Ordered pairs ``(i, j)``, ``i != j``, with ``sample_j - sample_i`` in the cone."""
    s = arrangement.samples
    n = len(s)
    return [(i, j) for i in range(n) for j in range(n) if i != j and cone.leq(s[i], s[j])]


# ---------------------------------------------------------------------------
# encodings

class Encoding:
    """Arrangement + cone + finite poset + face assignment."""

    def __init__(self, arrangement, cone, poset, assign, rel=None):
        if arrangement.dim != cone.dim:
            raise InputError(f"arrangement dim {arrangement.dim} != cone dim {cone.dim}")
        self.arrangement = arrangement
        self.cone = cone
        self.poset = poset
        if isinstance(assign, dict):
            missing = [i for i in range(arrangement.n_faces) if i not in assign]
            if missing:
                raise InputError(
                    f"assign is not total: face {arrangement.sign_string(missing[0])!r} unassigned",
                    "assign")
            assign = [assign[i] for i in range(arrangement.n_faces)]
        assign = tuple(assign)
        if len(assign) != arrangement.n_faces:
            raise InputError(f"assign has {len(assign)} entries for {arrangement.n_faces} faces", "assign")
        for i, e in enumerate(assign):
            if e not in poset.index:
                raise InputError(f"face {arrangement.sign_string(i)!r} assigned to unknown element {e!r}",
                                 f"assign/{arrangement.sign_string(i)}")
        self.assign = assign
        self._rel = rel

    @property
    def rel(self):
        if self._rel is None:
            self._rel = comparability(self.arrangement, self.cone)
        return self._rel

    def validate(self):
        """Face pairs ``(F, G)`` with ``F <= G`` but ``assign F`` not below ``assign G``.

        Only pairs whose images are incomparable need a geometric decision.
        """
        bad = []
        n = self.arrangement.n_faces
        idx = [self.poset.index[e] for e in self.assign]
        order = self.poset.order_matrix
        for i in range(n):
            for j in range(n):
                if not order[idx[i], idx[j]] and self.rel.holds(i, j):
                    bad.append((i, j))
        return bad

    def is_valid(self):
        return not self.validate()

    def fiber(self, p):
        return FaceSet(self.arrangement, frozenset(i for i, e in enumerate(self.assign) if e == p))

    def above(self, p):
        """``{F : assign F >= p}``, the pullback of ``p`` up."""
        leq = self.poset.leq
        return FaceSet(self.arrangement, frozenset(i for i, e in enumerate(self.assign) if leq(p, e)))

    def below(self, p):
        leq = self.poset.leq
        return FaceSet(self.arrangement, frozenset(i for i, e in enumerate(self.assign) if leq(e, p)))

    def refine(self, target):
        """The same encoding read on a finer arrangement."""
        proj = self.arrangement.projection_from(target)
        return Encoding(target, self.cone, self.poset, [self.assign[f] for f in proj])

    def to_json(self):
        arr = self.arrangement
        return {
            "hyperplanes": arr.to_json()["hyperplanes"],
            "dim": arr.dim,
            "cone": self.cone.to_json(),
            "poset": self.poset.to_json(),
            "assign": {arr.sign_string(i): str(e) for i, e in enumerate(self.assign)},
        }


def validate_encoding(e):
    return e.validate()


def coarsest_encoding(arrangement, cone, rel=None):
    """Quotient of the faces by the preorder generated by comparability.

    Elements are ``"c0", "c1", ...`` numbered by least member face.
    """
    rel = rel or comparability(arrangement, cone)
    tc = _kernels.transitive_closure(rel.matrix)
    n = arrangement.n_faces
    cls = [-1] * n
    reps = []
    for i in range(n):
        if cls[i] >= 0:
            continue
        k = len(reps)
        reps.append(i)
        for j in range(i, n):
            if tc[i, j] and tc[j, i]:
                cls[j] = k
    names = [f"c{k}" for k in range(len(reps))]
    m = len(reps)
    order = np.array([[bool(tc[reps[a], reps[b]]) for b in range(m)] for a in range(m)])
    hasse = []
    for a in range(m):
        for b in range(m):
            if a == b or not order[a, b]:
                continue
            if not any(order[a, c] and order[c, b] for c in range(m) if c != a and c != b):
                hasse.append((names[a], names[b]))
    poset = FinitePoset(names, hasse)
    return Encoding(arrangement, cone, poset, [names[c] for c in cls], rel=rel)


# ---------------------------------------------------------------------------
# PL complexes

class PLComplex:
    """A poset complex read through an encoding."""

    def __init__(self, encoding, complex):
        if complex.poset != encoding.poset:
            raise InputError("complex lives over a different poset than the encoding")
        self.encoding = encoding
        self.complex = complex

    @property
    def arrangement(self):
        return self.encoding.arrangement

    @property
    def cone(self):
        return self.encoding.cone

    @property
    def field(self):
        return self.complex.field

    def validate(self):
        out = [f"complex: {m}" for m in self.complex.validate()]
        arr = self.arrangement
        out += [f"assign not order-preserving: {arr.sign_string(i)!r} <= {arr.sign_string(j)!r}"
                for i, j in self.encoding.validate()]
        return out

    def at_face(self, i):
        """Alexandrov value on face ``i``."""
        return self.complex.at(self.encoding.assign[i])

    def map_faces(self, i, j):
        """Structure map from face ``i`` to face ``j`` (requires assign order)."""
        c = self.complex
        p, q = self.encoding.assign[i], self.encoding.assign[j]
        if not c.poset.leq(p, q):
            raise DomainError(f"faces {i} and {j} have incomparable images")
        mats = {k: m.transition(p, q) for k, m in c.terms.items()}
        return StalkMap(c.at(p), c.at(q), mats)

    def alexandrov_support(self):
        c = self.complex
        live = {p for p in c.poset if any(m.rank[p] for m in c.terms.values())}
        return FaceSet(self.arrangement,
                       frozenset(i for i, e in enumerate(self.encoding.assign) if e in live))

    def to_json(self):
        d = self.encoding.to_json()
        d["field"] = self.field.name
        d["complex"] = self.complex.to_json()
        return d


def interval_module(encoding, region, field=QQ, degree=0):
    """``k[S]`` for a region that is a union of fibers, convex in the poset."""
    poset = encoding.poset
    support = set()
    for i, e in enumerate(encoding.assign):
        if i in region:
            support.add(e)
    for i, e in enumerate(encoding.assign):
        if e in support and i not in region:
            raise InputError("region is not a union of encoding fibers")
    for p in support:
        for q in support:
            if poset.leq(p, q):
                for m in poset.elements:
                    if poset.leq(p, m) and poset.leq(m, q) and m not in support:
                        raise InputError("region is not convex in the encoding poset")
    m = PosetModule.constant(poset, field, support)
    return PLComplex(encoding, PosetComplex.from_module(m, degree))


def indicator(arrangement, cone, region, field=QQ, degree=0):
    """``k[S]`` on the coarsest encoding of the arrangement."""
    return interval_module(coarsest_encoding(arrangement, cone), region, field, degree)


# ---------------------------------------------------------------------------
# conic stalks (duck-typed over PLComplex and IndicatorComplex)

def conic_stalk(x, q):
    return x.at_face(probe_face(x.arrangement, x.cone, q))


def conic_stalk_at_face(x, i):
    """Conic stalk at the sample point of face ``i``."""
    return x.at_face(sample_probes(x.arrangement, x.cone)[i])


def conic_stalk_map(x, q, q2):
    q = to_vector(list(q), "point")
    q2 = to_vector(list(q2), "point")
    if not x.cone.leq(q, q2):
        raise DomainError("points are not comparable: q2 - q is not in the cone")
    return x.map_faces(probe_face(x.arrangement, x.cone, q), probe_face(x.arrangement, x.cone, q2))


def support(x, semantics="alexandrov"):
    if semantics == "alexandrov":
        return x.alexandrov_support()
    if semantics != "conic":
        raise InputError(f"unknown semantics {semantics!r}")
    probes = sample_probes(x.arrangement, x.cone)
    live = {}
    out = set()
    for i, f in enumerate(probes):
        if f not in live:
            live[f] = bool(x.at_face(f).homology())
        if live[f]:
            out.add(i)
    return FaceSet(x.arrangement, frozenset(out))


def is_compactly_supported(x):
    return x.alexandrov_support().is_bounded()


def stalk_homology(x, semantics="conic"):
    """Per-face homology table ``{face index: {degree: rank}}``."""
    if semantics == "conic":
        probes = sample_probes(x.arrangement, x.cone)
        return {i: x.at_face(f).homology() for i, f in enumerate(probes)}
    return {i: x.at_face(i).homology() for i in range(x.arrangement.n_faces)}
