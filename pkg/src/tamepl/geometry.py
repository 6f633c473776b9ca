"""Exact rational polyhedral geometry.

Regions are unions of relatively open faces of one hyperplane arrangement.
A face is identified by its sign vector over the arrangement's hyperplanes
(``-1``, ``0``, ``+1`` per hyperplane); interior, closure and complement are
then purely combinatorial.  All decisions go through :mod:`tamepl.fm`.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
import hashlib

import numpy as np

from . import _kernels
from . import fm
from .errors import InputError
from .linalg import Field
from .rational import to_vector, to_fraction, format_fraction, integer_row, common_denominator

SIGN_CHARS = {-1: "-", 0: "0", 1: "+"}
CHAR_SIGNS = {v: k for k, v in SIGN_CHARS.items()}

_Q = Field()


def _scale_first(normal, offset, positive_only):
    lead = next((v for v in normal if v != 0), None)
    if lead is None:
        raise InputError("zero normal vector")
    s = abs(lead) if positive_only else lead
    return tuple(v / s for v in normal), offset / s


@dataclass(frozen=True)
class HalfSpace:
    """``normal . x >= offset`` (or ``>`` when ``strict``)."""

    normal: tuple
    offset: Fraction = Fraction(0)
    strict: bool = False

    def __post_init__(self):
        normal = tuple(to_fraction(v) for v in self.normal)
        normal, offset = _scale_first(normal, to_fraction(self.offset), positive_only=True)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "strict", bool(self.strict))

    @property
    def dim(self):
        return len(self.normal)

    def row(self):
        return fm.make_row(self.normal, self.offset, fm.GT if self.strict else fm.GE)

    def contains(self, x):
        v = sum(a * Fraction(b) for a, b in zip(self.normal, x))
        return v > self.offset if self.strict else v >= self.offset

    def to_json(self):
        return {
            "normal": [format_fraction(v) for v in self.normal],
            "offset": format_fraction(self.offset),
            "strict": self.strict,
        }

    @classmethod
    def from_json(cls, d, path="halfspace"):
        if not isinstance(d, dict) or "normal" not in d:
            raise InputError("half-space needs a 'normal'", path)
        try:
            return cls(to_vector(d["normal"], f"{path}/normal"),
                       to_fraction(d.get("offset", 0), f"{path}/offset"),
                       bool(d.get("strict", False)))
        except InputError as e:
            if e.path is None:
                e.path = path
            raise


def feasible(constraints, dim=None):
    """Exact feasibility of a conjunction of half-spaces."""
    constraints = list(constraints)
    dims = {h.dim for h in constraints}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise InputError(f"dimension mismatch among constraints: {sorted(dims)}")
    if not constraints:
        return True
    return fm.feasible([h.row() for h in constraints], dims.pop())


def find_point(constraints, dim):
    return fm.solve([h.row() for h in constraints], dim)


def _primitive(v):
    return tuple(Fraction(x) for x in integer_row(v))


def _null_vector(vectors, n):
    """The unique (up to scale) vector orthogonal to ``vectors``, or None."""
    if vectors:
        a = _Q.array([list(v) for v in vectors])
    else:
        a = _Q.zeros(0, n)
    ns = _Q.nullspace(a)
    if ns.shape[1] != 1:
        return None
    return _primitive(tuple(ns[:, 0]))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


class Cone:
    """A closed, full, pointed polyhedral cone (the positive cone).

    Give ``hrep`` (half-spaces through the origin), ``vrep`` (generating
    rays) or both; the missing side is computed and both are cross-checked.
    """

    def __init__(self, hrep=None, vrep=None, dim=None):
        hrep = [h if isinstance(h, HalfSpace) else HalfSpace(*h) for h in (hrep or [])]
        vrep = [tuple(to_fraction(x) for x in r) for r in (vrep or [])]
        dims = {h.dim for h in hrep} | {len(r) for r in vrep}
        if dim is not None:
            dims.add(dim)
        if len(dims) != 1:
            raise InputError(f"cone dimension ambiguous or inconsistent: {sorted(dims)}")
        self.dim = dims.pop()
        for r in vrep:
            if not any(r):
                raise InputError("zero generating ray")
        for h in hrep:
            if h.strict or h.offset != 0:
                raise InputError("cone half-spaces must be closed and pass through the origin")
        if not hrep and not vrep:
            raise InputError("cone needs hrep or vrep")
        if not hrep:
            hrep = self._facets_from_rays(vrep)
        self.hrep = tuple(dict.fromkeys(hrep))
        self.extreme_rays = self._rays_from_facets(self.hrep)
        self.vrep = tuple(dict.fromkeys(_primitive(r) for r in vrep)) if vrep else self.extreme_rays
        self._validate()

    def _facets_from_rays(self, rays):
        n = self.dim
        out = []
        for sub in combinations(rays, n - 1):
            h = _null_vector(list(sub), n)
            if h is None:
                continue
            vals = [_dot(h, r) for r in rays]
            if all(v >= 0 for v in vals):
                out.append(HalfSpace(h))
            if all(v <= 0 for v in vals):
                out.append(HalfSpace(tuple(-x for x in h)))
        if not out:
            raise InputError("rays do not generate a full pointed cone")
        return out

    def _rays_from_facets(self, hrep):
        n = self.dim
        normals = [h.normal for h in hrep]
        out = []
        for sub in combinations(normals, n - 1):
            d = _null_vector(list(sub), n)
            if d is None:
                continue
            for cand in (d, tuple(-x for x in d)):
                if all(_dot(a, cand) >= 0 for a in normals) and cand not in out:
                    out.append(cand)
        return tuple(sorted(out))

    def _validate(self):
        n = self.dim
        normals = [list(h.normal) for h in self.hrep]
        if _Q.rank(_Q.array(normals)) < n:
            raise InputError("cone is not pointed (unit group is nontrivial)")
        if not fm.feasible([fm.make_row(a, 0, fm.GT) for a in normals], n):
            raise InputError("cone is not full (empty interior)")
        for r in self.vrep:
            if not self.contains(r):
                raise InputError(f"generator {r} violates the cone's half-spaces")
        # every extreme ray must lie in the conical hull of the given generators
        k = len(self.vrep)
        for e in self.extreme_rays:
            rows = [fm.make_row([r[i] for r in self.vrep], e[i], fm.EQ) for i in range(n)]
            rows += [fm.make_row([1 if j == i else 0 for j in range(k)], 0, fm.GE) for i in range(k)]
            if not fm.feasible(rows, k):
                raise InputError("vrep does not generate the hrep cone")

    @classmethod
    def orthant(cls, n):
        return cls(vrep=[tuple(1 if i == j else 0 for j in range(n)) for i in range(n)])

    def contains(self, v):
        return all(_dot(h.normal, v) >= 0 for h in self.hrep)

    def contains_interior(self, v):
        return all(_dot(h.normal, v) > 0 for h in self.hrep)

    @cached_property
    def _interior_ray(self):
        g = tuple(sum(r[i] for r in self.vrep) for i in range(self.dim))
        if not self.contains_interior(g):
            g = tuple(sum(r[i] for r in self.extreme_rays) for i in range(self.dim))
        if not self.contains_interior(g):
            raise InputError("cone is not full")
        return g

    def interior_ray(self):
        """Sum of the generators; strictly inside every facet."""
        return self._interior_ray

    def leq(self, x, y):
        """The partial order ``x <= y  <=>  y - x in cone``."""
        return self.contains(tuple(Fraction(b) - Fraction(a) for a, b in zip(x, y)))

    def to_json(self):
        return {
            "hrep": [h.to_json() for h in self.hrep],
            "vrep": [[format_fraction(x) for x in r] for r in self.vrep],
        }

    @classmethod
    def from_json(cls, d, path="cone"):
        if not isinstance(d, dict):
            raise InputError("cone must be an object", path)
        hrep = [HalfSpace.from_json(h, f"{path}/hrep/{i}") for i, h in enumerate(d.get("hrep") or [])]
        vrep = [to_vector(r, f"{path}/vrep/{i}") for i, r in enumerate(d.get("vrep") or [])]
        try:
            return cls(hrep=hrep, vrep=vrep)
        except InputError as e:
            if e.path is None:
                e.path = path
            raise

    def __eq__(self, other):
        return isinstance(other, Cone) and set(self.hrep) == set(other.hrep)

    def __hash__(self):
        return hash(frozenset(self.hrep))

    def __repr__(self):
        return f"Cone(dim={self.dim}, rays={[tuple(map(str, r)) for r in self.extreme_rays]})"


def canonical_hyperplane(normal, offset):
    normal = tuple(to_fraction(v) for v in normal)
    return _scale_first(normal, to_fraction(offset), positive_only=False)


class Arrangement:
    """All faces of a finite hyperplane arrangement in Q^n.

    ``hyperplanes`` are ``(normal, offset)`` pairs, each the hyperplane
    ``normal . x = offset``.  Duplicates (after scaling) are dropped, keeping
    first occurrences in order.  Faces are sorted lexicographically by sign
    vector with ``- < 0 < +``.
    """

    def __init__(self, hyperplanes, dim=None):
        hs = []
        for normal, offset in hyperplanes:
            h = canonical_hyperplane(normal, offset)
            if h not in hs:
                hs.append(h)
        dims = {len(h[0]) for h in hs}
        if dim is not None:
            dims.add(dim)
        if len(dims) != 1:
            raise InputError(f"arrangement dimension ambiguous or inconsistent: {sorted(dims)}")
        self.dim = dims.pop()
        if self.dim < 1:
            raise InputError("ambient dimension must be >= 1")
        self.hyperplanes = tuple(hs)
        self._int_rows = [integer_row(list(a) + [b]) for a, b in hs]
        self.faces, self.samples = self._enumerate()
        self.index = {s: i for i, s in enumerate(self.faces)}

    def _row(self, k, s):
        return self._rows[k][s + 1]

    @cached_property
    def _rows(self):
        out = []
        for a, b in self.hyperplanes:
            out.append((fm.make_row([-v for v in a], -b, fm.GT), fm.make_row(a, b, fm.EQ),
                        fm.make_row(a, b, fm.GT)))
        return out

    def _sign_rows(self, signs):
        return [self._row(k, s) for k, s in enumerate(signs)]

    def _enumerate(self):
        partial = [()]
        for k in range(len(self.hyperplanes)):
            nxt = []
            for signs in partial:
                base = self._sign_rows(signs)
                for s in (-1, 0, 1):
                    cand = signs + (s,)
                    rows = base + [self._row(k, s)]
                    if fm.feasible(rows, self.dim):
                        nxt.append(cand)
            partial = nxt
        faces = tuple(sorted(partial))
        samples = tuple(fm.solve(self._sign_rows(f), self.dim) for f in faces)
        return faces, samples

    @property
    def n_faces(self):
        return len(self.faces)

    @cached_property
    def id(self):
        text = ";".join(
            ",".join(format_fraction(v) for v in a) + "|" + format_fraction(b) for a, b in self.hyperplanes
        )
        return hashlib.sha256(f"{self.dim}:{text}".encode()).hexdigest()[:12]

    def face_rows(self, i):
        return self._sign_rows(self.faces[i])

    def sign_string(self, i):
        return "".join(SIGN_CHARS[s] for s in self.faces[i])

    def face_of_string(self, s, path=None):
        try:
            key = tuple(CHAR_SIGNS[c] for c in s)
        except KeyError:
            raise InputError(f"bad sign-vector string {s!r}", path) from None
        if key not in self.index:
            raise InputError(f"sign vector {s!r} is not a face of the arrangement", path)
        return self.index[key]

    def signs_of(self, x):
        out = []
        for a, b in self.hyperplanes:
            v = sum(ai * Fraction(xi) for ai, xi in zip(a, x)) - b
            out.append((v > 0) - (v < 0))
        return tuple(out)

    def locate(self, x):
        """Index of the face containing the rational point ``x``."""
        return self.index[self.signs_of(x)]

    def locate_many(self, points):
        """Vectorized :meth:`locate` through the integer sign kernel."""
        if not points:
            return []
        if not self.hyperplanes:
            return [0] * len(points)
        normals = [list(r[:-1]) for r in self._int_rows]
        offsets = [r[-1] for r in self._int_rows]
        pts, dens = [], []
        for x in points:
            d = common_denominator(x)
            pts.append([int(Fraction(v) * d) for v in x])
            dens.append(d)
        if not _kernels.fits_int64(normals, offsets, pts, dens):
            return [self.locate(x) for x in points]
        signs = _kernels.sign_vectors(np.array(normals), np.array(offsets), np.array(pts), np.array(dens))
        return [self.index[tuple(int(v) for v in row)] for row in signs]

    def in_closure(self, i, j):
        """Face i lies in the closure of face j."""
        return all(a == b or a == 0 for a, b in zip(self.faces[i], self.faces[j]))

    @cached_property
    def _closure_below(self):
        out = []
        for j in range(self.n_faces):
            out.append(frozenset(i for i in range(self.n_faces) if self.in_closure(i, j)))
        return tuple(out)

    def closure_of_face(self, j):
        return self._closure_below[j]

    def face_dim(self, i):
        zero = [list(a) for s, (a, _) in zip(self.faces[i], self.hyperplanes) if s == 0]
        if not zero:
            return self.dim
        return self.dim - _Q.rank(_Q.array(zero))

    @cached_property
    def _bounded(self):
        return tuple(self._face_bounded(i) for i in range(self.n_faces))

    def _face_bounded(self, i):
        n = self.dim
        rows = []
        for s, (a, _) in zip(self.faces[i], self.hyperplanes):
            if s == 0:
                rows.append(fm.make_row(a, 0, fm.EQ))
            else:
                rows.append(fm.make_row([s * v for v in a], 0, fm.GE))
        for j in range(n):
            for sgn in (1, -1):
                e = [sgn if k == j else 0 for k in range(n)]
                if fm.feasible(rows + [fm.make_row(e, 1, fm.GE)], n):
                    return False
        return True

    def is_bounded(self, i):
        return self._bounded[i]

    def vertices(self):
        return [i for i in range(self.n_faces) if self.face_dim(i) == 0]

    def extend(self, hyperplanes):
        """A refinement: these hyperplanes followed by ``hyperplanes``."""
        return Arrangement(list(self.hyperplanes) + list(hyperplanes), dim=self.dim)

    def contains_hyperplanes_of(self, other):
        return set(other.hyperplanes) <= set(self.hyperplanes)

    def projection_from(self, finer):
        """Map each face of ``finer`` to the face of ``self`` containing it."""
        if finer.dim != self.dim or not finer.contains_hyperplanes_of(self):
            raise InputError("target arrangement does not contain the source hyperplanes")
        pos = [finer.hyperplanes.index(h) for h in self.hyperplanes]
        return [self.index[tuple(f[k] for k in pos)] for f in finer.faces]

    def full(self):
        return FaceSet(self, frozenset(range(self.n_faces)))

    def empty(self):
        return FaceSet(self, frozenset())

    def region(self, constraints):
        """Faces whose points satisfy every half-space (faces are uniform)."""
        constraints = list(constraints)
        return FaceSet(self, frozenset(
            i for i, x in enumerate(self.samples) if all(h.contains(x) for h in constraints)))

    def __eq__(self, other):
        return isinstance(other, Arrangement) and other.dim == self.dim and other.hyperplanes == self.hyperplanes

    def __hash__(self):
        return hash((self.dim, self.hyperplanes))

    def __repr__(self):
        return f"Arrangement(dim={self.dim}, hyperplanes={len(self.hyperplanes)}, faces={self.n_faces})"

    def to_json(self):
        return {
            "id": self.id,
            "dim": self.dim,
            "hyperplanes": [
                {"normal": [format_fraction(v) for v in a], "offset": format_fraction(b)}
                for a, b in self.hyperplanes
            ],
        }

    @classmethod
    def from_json(cls, d, dim=None, path="hyperplanes"):
        """Accepts ``{"dim", "hyperplanes"}`` or a bare hyperplane list."""
        if isinstance(d, dict):
            dim = d.get("dim", dim)
            d = d.get("hyperplanes", [])
        if not isinstance(d, list):
            raise InputError("hyperplanes must be a list", path)
        hs = []
        for k, h in enumerate(d):
            if not isinstance(h, dict) or "normal" not in h:
                raise InputError("hyperplane needs a 'normal'", f"{path}/{k}")
            normal = to_vector(h["normal"], f"{path}/{k}/normal")
            if not any(normal):
                raise InputError("hyperplane normal is zero", f"{path}/{k}/normal")
            hs.append((normal, to_fraction(h.get("offset", 0), f"{path}/{k}/offset")))
        try:
            return cls(hs, dim=dim)
        except InputError as e:
            if e.path is None:
                e.path = path
            raise


@dataclass(frozen=True)
class FaceSet:
    """A union of faces of one arrangement."""

    arrangement: Arrangement
    members: frozenset

    def __post_init__(self):
        m = frozenset(int(i) for i in self.members)
        if any(i < 0 or i >= self.arrangement.n_faces for i in m):
            raise InputError("face index out of range")
        object.__setattr__(self, "members", m)

    def _new(self, members):
        return FaceSet(self.arrangement, frozenset(members))

    def _check(self, other):
        if other.arrangement != self.arrangement:
            raise InputError("face sets live in different arrangements")

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, i):
        return i in self.members

    def __and__(self, other):
        self._check(other)
        return self._new(self.members & other.members)

    def __or__(self, other):
        self._check(other)
        return self._new(self.members | other.members)

    def __sub__(self, other):
        self._check(other)
        return self._new(self.members - other.members)

    def __le__(self, other):
        self._check(other)
        return self.members <= other.members

    def is_empty(self):
        return not self.members

    def closure(self):
        arr = self.arrangement
        out = set()
        for j in self.members:
            out |= arr.closure_of_face(j)
        return self._new(out)

    def complement(self):
        return self._new(set(range(self.arrangement.n_faces)) - self.members)

    def interior(self):
        return self.complement().closure().complement()

    def is_bounded(self):
        return all(self.arrangement.is_bounded(i) for i in self.members)

    def refine(self, target):
        proj = self.arrangement.projection_from(target)
        return FaceSet(target, frozenset(i for i, f in enumerate(proj) if f in self.members))

    def sign_strings(self):
        return [self.arrangement.sign_string(i) for i in sorted(self.members)]

    def bounding_box(self):
        """Componentwise (min, max) over the closure; requires boundedness."""
        arr = self.arrangement
        if not self.is_bounded():
            raise InputError("bounding box of an unbounded region")
        pts = [arr.samples[i] for i in self.closure().members if arr.face_dim(i) == 0]
        if not pts:
            return None
        lo = tuple(min(p[k] for p in pts) for k in range(arr.dim))
        hi = tuple(max(p[k] for p in pts) for k in range(arr.dim))
        return lo, hi

    def to_json(self):
        return {"arrangement_id": self.arrangement.id, "faces": self.sign_strings()}

    @classmethod
    def from_json(cls, d, arrangement, path="faceset"):
        if not isinstance(d, dict) or not isinstance(d.get("faces"), list):
            raise InputError("face set needs a 'faces' list", path)
        aid = d.get("arrangement_id")
        if aid is not None and aid != arrangement.id:
            raise InputError(f"arrangement id {aid!r} does not match {arrangement.id!r}", path)
        return cls(arrangement, frozenset(
            arrangement.face_of_string(s, f"{path}/faces/{k}") for k, s in enumerate(d["faces"])))

    def __repr__(self):
        return f"FaceSet({self.sign_strings()})"


def region_op(region, op):
    if op == "closure":
        return region.closure()
    if op == "interior":
        return region.interior()
    if op == "complement":
        return region.complement()
    raise InputError(f"unknown region operation {op!r}")


def refine(region, target):
    return region.refine(target)


class ComparabilityRelation:
    """``F <= G`` iff some ``x`` in F and ``y`` in G have ``y - x`` in the cone.

    Entries are decided lazily and cached; :attr:`matrix` forces all of them.
    """

    def __init__(self, arrangement, cone):
        if arrangement.dim != cone.dim:
            raise InputError(f"arrangement dim {arrangement.dim} != cone dim {cone.dim}")
        self.arrangement = arrangement
        self.cone = cone
        n = arrangement.n_faces
        self._known = np.zeros((n, n), dtype=bool)
        self._value = np.zeros((n, n), dtype=bool)
        self._shadow = {}

    def _down_shadow(self, j):
        """H-rep of ``G_j - cone`` in the x variables."""
        if j not in self._shadow:
            n = self.arrangement.dim
            rows = []
            for a, b, kind in self.arrangement.face_rows(j):
                rows.append(fm._norm(tuple(a) + tuple(a), b, kind))
            for h in self.cone.hrep:
                rows.append(fm.make_row((0,) * n + h.normal, 0, fm.GE))
            proj = fm.project(rows, range(n, 2 * n))
            if proj is None:
                raise AssertionError("empty face in arrangement")
            self._shadow[j] = [fm._norm(a[:n], b, kind) for a, b, kind in proj]
        return self._shadow[j]

    def _decide(self, i, j):
        if i == j:
            return True
        arr = self.arrangement
        if self.cone.leq(arr.samples[i], arr.samples[j]):
            return True
        return fm.feasible(arr.face_rows(i) + self._down_shadow(j), arr.dim)

    def holds(self, i, j):
        if not self._known[i, j]:
            self._value[i, j] = self._decide(i, j)
            self._known[i, j] = True
        return bool(self._value[i, j])

    @property
    def complete(self):
        return bool(self._known.all())

    @property
    def matrix(self):
        n = self.arrangement.n_faces
        if not self._known.all():
            for i in range(n):
                for j in range(n):
                    self.holds(i, j)
        return self._value

    @property
    def pairs(self):
        m = self.matrix
        return frozenset((int(i), int(j)) for i, j in np.argwhere(m))

    def _closure(self, region, m):
        # the face relation is not transitive, so iterate to a fixpoint
        mem = np.zeros(self.arrangement.n_faces, dtype=bool)
        mem[list(region.members)] = True
        while True:
            nxt = mem | m[mem].any(axis=0)
            if (nxt == mem).all():
                break
            mem = nxt
        return FaceSet(self.arrangement, frozenset(np.nonzero(mem)[0].tolist()))

    def up_closure(self, region):
        """Smallest upset containing the region."""
        return self._closure(region, self.matrix)

    def down_closure(self, region):
        """Smallest downset containing the region."""
        return self._closure(region, self.matrix.T)


def comparability(arrangement, cone):
    return ComparabilityRelation(arrangement, cone)


def _membership(region, rel):
    if region.arrangement != rel.arrangement:
        raise InputError("region and relation live in different arrangements")
    mem = np.zeros(region.arrangement.n_faces, dtype=bool)
    mem[list(region.members)] = True
    return mem


def upset_violations(region, rel, first=False):
    """Pairs ``(i, j)`` with ``i`` in the region, ``i <= j`` and ``j`` outside.

    Uses the vectorized kernel once the relation is fully decided; otherwise
    only the pairs crossing the region boundary are decided.
    """
    mem = _membership(region, rel)
    if rel.complete:
        return [tuple(map(int, p)) for p in _kernels.upclosed_violations(rel.matrix, mem)]
    out = []
    outside = np.nonzero(~mem)[0].tolist()
    for i in sorted(region.members):
        for j in outside:
            if rel.holds(i, j):
                out.append((i, j))
                if first:
                    return out
    return out


def downset_violations(region, rel, first=False):
    """Pairs ``(j, i)`` with ``i`` in the region, ``j <= i`` and ``j`` outside."""
    mem = _membership(region, rel)
    if rel.complete:
        return [(int(j), int(i)) for i, j in _kernels.upclosed_violations(rel.matrix.T, mem)]
    out = []
    outside = np.nonzero(~mem)[0].tolist()
    for i in sorted(region.members):
        for j in outside:
            if rel.holds(j, i):
                out.append((j, i))
                if first:
                    return out
    return out


def is_upset(region, rel):
    return not upset_violations(region, rel, first=True)


def is_downset(region, rel):
    return not downset_violations(region, rel, first=True)


def interior_ray(cone):
    return cone.interior_ray()
