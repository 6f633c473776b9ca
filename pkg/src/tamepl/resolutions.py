"""Upset and downset resolutions, at poset level and pulled back to PL regions.

Upset resolutions over a finite poset are built from principal upset modules
``k[g up]`` (the indecomposable projectives).  A bounded complex ``C`` is
resolved from the top degree down: at degree ``i`` the new generators form
a minimal projective cover of

    W^i = {(p, c) in P^(i+1) + C^i : d p = 0, eps p = d c},

the cocycles of the partial mapping cone.  Covering them makes the cone of
``eps : P -> C`` acyclic one degree further down, and the process stops
once ``W`` vanishes below the bottom of ``C``.  Downset resolutions are
the duals of upset resolutions over the opposite poset.

Degrees are cohomological throughout; homological degree ``k`` of a
resolution is cohomological ``-k``.
"""
import numpy as np

from .errors import InputError, InvariantError
from .geometry import FaceSet, is_upset, is_downset
from .poset import (PosetComplex, PosetModule, ModuleHom, ChainMap, StalkComplex, StalkMap,
                    free_module, cofree_module, scalar_hom, kernel, direct_sum, active)
from .encoding import PLComplex, sample_probes, comparable_samples

KINDS = ("upset", "downset")


def _check_kind(kind):
    if kind not in KINDS:
        raise InputError(f"kind must be 'upset' or 'downset', got {kind!r}")


class IndicatorResolution:
    """A complex of principal indicator modules over a finite poset.

    ``gens[i]`` lists generator elements in degree ``i``; ``diffs[i]`` is the
    scalar matrix of ``d^i`` (rows: degree ``i+1`` generators).  For upsets
    ``aug[i][j]`` is the vector in ``C^i`` at ``gens[i][j]`` hit by generator
    ``j``; for downsets it is the covector on ``C^i`` at that element read by
    cogenerator ``j``.
    """

    def __init__(self, kind, poset, field, gens, diffs, aug, source):
        _check_kind(kind)
        self.kind = kind
        self.poset = poset
        self.field = field
        self.gens = {i: list(g) for i, g in gens.items() if g}
        f = field
        self.diffs = {}
        for i in self.gens:
            if i + 1 in self.gens:
                m = diffs.get(i)
                shape = (len(self.gens[i + 1]), len(self.gens[i]))
                if m is None:
                    m = f.zeros(*shape)
                if m.shape != shape:
                    raise InputError(f"differential {i} has shape {m.shape}, expected {shape}")
                self.diffs[i] = m
        self.aug = {i: list(aug.get(i, [])) for i in self.gens}
        self.source = source

    def generators(self, i):
        return self.gens.get(i, [])

    def d(self, i):
        m = self.diffs.get(i)
        if m is None:
            return self.field.zeros(len(self.generators(i + 1)), len(self.generators(i)))
        return m

    @property
    def degrees(self):
        return sorted(self.gens)

    @property
    def n_summands(self):
        return sum(len(g) for g in self.gens.values())

    @property
    def length(self):
        """Span of nonzero degrees, ``max - min`` (0 for a single degree)."""
        if not self.gens:
            return 0
        return max(self.gens) - min(self.gens)

    def term(self, i):
        build = free_module if self.kind == "upset" else cofree_module
        return build(self.poset, self.generators(i), self.field)

    def to_poset_complex(self):
        terms = {i: self.term(i) for i in self.gens}
        diffs = {}
        for i, m in self.diffs.items():
            diffs[i] = scalar_hom(self.poset, self.gens[i], self.gens[i + 1], m, self.field,
                                  self.kind, terms[i], terms[i + 1])
        return PosetComplex(terms, diffs, poset=self.poset, field=self.field)

    def augmentation_at(self, i, q):
        """Matrix of the augmentation in degree ``i`` at element ``q``."""
        f = self.field
        c = self.source.term(i)
        gens = self.generators(i)
        act = active(self.poset, gens, q, self.kind)
        if self.kind == "upset":
            cols = [f.matmul(c.transition(gens[j], q), self.aug[i][j]) for j in act]
            return f.hstack(cols, c.rank[q])
        rows = [f.matmul(self.aug[i][j], c.transition(q, gens[j])) for j in act]
        return f.vstack(rows, c.rank[q])

    def augmentation(self, res_complex=None):
        """Chain map ``P -> C`` (upset) or ``C -> P`` (downset)."""
        pc = res_complex or self.to_poset_complex()
        comps = {}
        for i in set(self.gens) | set(self.source.terms):
            mats = {q: self.augmentation_at(i, q) for q in self.poset}
            if self.kind == "upset":
                comps[i] = ModuleHom(pc.term(i), self.source.term(i), mats)
            else:
                comps[i] = ModuleHom(self.source.term(i), pc.term(i), mats)
        if self.kind == "upset":
            return ChainMap(pc, self.source, comps)
        return ChainMap(self.source, pc, comps)

    def dual(self, source=None):
        """The dual resolution over the opposite poset (other kind)."""
        source = source if source is not None else self.source.dualize()
        kind = "downset" if self.kind == "upset" else "upset"
        gens = {-i: g for i, g in self.gens.items()}
        diffs = {-i - 1: m.T.copy() for i, m in self.diffs.items()}
        aug = {-i: [v.T.copy() for v in vs] for i, vs in self.aug.items()}
        return IndicatorResolution(kind, self.poset.opposite(), self.field, gens, diffs, aug, source)

    def check_connected(self):
        """Differential entries violating the order condition of a connected map."""
        bad = []
        leq = self.poset.leq
        for i, m in self.diffs.items():
            src, tgt = self.gens[i], self.gens[i + 1]
            for r in range(m.shape[0]):
                for c in range(m.shape[1]):
                    if m[r, c] == 0:
                        continue
                    # k[s] -> k[t] can be nonzero only when t <= s, for either kind
                    if not leq(tgt[r], src[c]):
                        bad.append((i, r, c))
        return bad

    def verify(self):
        """Problems with this resolution (empty when it is one)."""
        out = [f"not connected at degree {i} entry ({r}, {c})" for i, r, c in self.check_connected()]
        pc = self.to_poset_complex()
        out += pc.validate()
        aug = self.augmentation(pc)
        bad = aug.validate()
        out += bad
        if not bad:
            for q in self.poset:
                if not aug.at(q).is_quasi_iso():
                    out.append(f"augmentation is not a quasi-isomorphism at {q!r}")
        return out

    def to_json(self):
        f = self.field
        return {
            "kind": self.kind,
            "generators": {str(i): [str(g) for g in gs] for i, gs in sorted(self.gens.items())},
            "differentials": {str(i): [[f.format(v) for v in row] for row in m]
                              for i, m in sorted(self.diffs.items())},
        }


# ---------------------------------------------------------------------------
# construction

def projective_cover(m):
    """Minimal generators ``[(element, vector)]`` of a module.

    Walks a linear extension; at each element the images from lower covers
    span the radical, and standard basis vectors complete it greedily.
    """
    f = m.field
    poset = m.poset
    out = []
    for q in poset.linear_extension:
        n = m.rank[q]
        if n == 0:
            continue
        imgs = [m.edges[(p, q)] for p in poset.lower_covers[q] if m.rank[p]]
        span = f.hstack(imgs, n)
        for k in f.extend_basis(span, n):
            v = f.zeros(n, 1)
            v[k, 0] = f.one()
            out.append((q, v))
    return out


def _upset_resolution(c):
    f = c.field
    poset = c.poset
    gens, diffs, aug = {}, {}, {}
    if c.is_zero():
        return IndicatorResolution("upset", poset, f, {}, {}, {}, c)
    lo, hi = min(c.degrees), max(c.degrees)
    limit = (hi - lo + 1) + len(poset) + 1
    zero = PosetModule.zero(poset, f)
    i = hi
    steps = 0
    prev = None  # (free module P^(i+1), d as ModuleHom P^(i+1) -> P^(i+2), eps ModuleHom)
    while True:
        steps += 1
        if steps > limit:
            raise InvariantError("resolution did not terminate within the directedness bound")
        ci, cnext = c.term(i), c.term(i + 1)
        if prev is None:
            p1 = zero
            d1 = ModuleHom.zero(zero, zero)
            e1 = ModuleHom.zero(zero, cnext)
        else:
            p1, d1, e1 = prev
        total, inj, proj = direct_sum([p1, ci])
        tgt, tinj, tproj = direct_sum([d1.target, cnext])
        comps = {}
        dc = c.d(i)
        for q in poset:
            # (p, x) -> (d p, eps p - d_C x)
            top = f.hstack([d1[q], f.zeros(d1.target.rank[q], ci.rank[q])], d1.target.rank[q])
            bot = f.hstack([e1[q], f.neg(dc[q])], cnext.rank[q])
            comps[q] = f.vstack([top, bot], total.rank[q])
        phi = ModuleHom(total, tgt, comps)
        w, incl = kernel(phi)
        if w.is_zero():
            if i < lo:
                break
            gens_i = []
        else:
            gens_i = projective_cover(w)
        np1 = p1.rank
        g_i = [g for g, _ in gens_i]
        g_next = gens.get(i + 1, [])
        dmat = f.zeros(len(g_next), len(g_i))
        vecs = []
        for col, (g, v) in enumerate(gens_i):
            x = f.matmul(incl[g], v)
            k = np1[g]
            act = active(poset, g_next, g)
            for r, j in enumerate(act):
                dmat[j, col] = x[r, 0]
            vecs.append(x[k:, :].copy())
        if g_i:
            gens[i] = g_i
            aug[i] = vecs
            if g_next:
                diffs[i] = dmat
        pi = free_module(poset, g_i, f)
        if g_i and g_next:
            dnew = scalar_hom(poset, g_i, g_next, dmat, f, "upset", pi, p1)
        else:
            dnew = ModuleHom.zero(pi, p1)
        emats = {}
        for q in poset:
            act = active(poset, g_i, q)
            emats[q] = f.hstack([f.matmul(ci.transition(g_i[j], q), vecs[j]) for j in act], ci.rank[q])
        prev = (pi, dnew, ModuleHom(pi, ci, emats))
        i -= 1
    return IndicatorResolution("upset", poset, f, gens, diffs, aug, c)


def _as_complex(x):
    if isinstance(x, PosetModule):
        return PosetComplex.from_module(x)
    if isinstance(x, PosetComplex):
        return x
    raise InputError(f"expected a PosetModule or PosetComplex, got {type(x).__name__}")


def resolve_complex(c, kind="upset"):
    _check_kind(kind)
    c = _as_complex(c)
    if kind == "upset":
        return _upset_resolution(c)
    return _upset_resolution(c.dualize()).dual(source=c)


def upset_resolution(m):
    return resolve_complex(m, "upset")


def downset_resolution(m):
    return resolve_complex(m, "downset")


# ---------------------------------------------------------------------------
# morphisms

class ResolutionMap:
    """Chain map between two resolutions, as scalar matrices per degree."""

    def __init__(self, source, target, mats, base):
        self.source = source
        self.target = target
        self.mats = mats
        self.base = base  # ChainMap between the resolved complexes

    @property
    def kind(self):
        return self.source.kind

    def m(self, i):
        f = self.source.field
        mat = self.mats.get(i)
        if mat is None:
            return f.zeros(len(self.target.generators(i)), len(self.source.generators(i)))
        return mat

    def to_chain_map(self, src_complex=None, tgt_complex=None):
        s = src_complex or self.source.to_poset_complex()
        t = tgt_complex or self.target.to_poset_complex()
        comps = {}
        for i in set(self.source.gens) | set(self.target.gens):
            comps[i] = scalar_hom(s.poset, self.source.generators(i), self.target.generators(i),
                                  self.m(i), s.field, self.kind, s.term(i), t.term(i))
        return ChainMap(s, t, comps)

    def check_connected(self):
        leq = self.source.poset.leq
        bad = []
        for i, mat in self.mats.items():
            src, tgt = self.source.generators(i), self.target.generators(i)
            for r in range(mat.shape[0]):
                for c in range(mat.shape[1]):
                    if mat[r, c] != 0 and not leq(tgt[r], src[c]):
                        bad.append((i, r, c))
        return bad

    def augmentation_defects(self):
        """``(degree, element)`` where the augmentation square fails."""
        f = self.source.field
        s, t = self.source, self.target
        bad = []
        poset = s.poset
        degs = set(s.gens) | set(t.gens) | set(s.source.terms)
        for i in sorted(degs):
            for q in poset:
                phi = self.m_at(i, q)
                fq = self.base.c(i)[q]
                if self.kind == "upset":
                    lhs = f.matmul(t.augmentation_at(i, q), phi)
                    rhs = f.matmul(fq, s.augmentation_at(i, q))
                else:
                    lhs = f.matmul(phi, s.augmentation_at(i, q))
                    rhs = f.matmul(t.augmentation_at(i, q), fq)
                if not f.equal(lhs, rhs):
                    bad.append((i, q))
        return bad

    def m_at(self, i, q):
        kind = self.kind
        mat = self.m(i)
        rs = active(self.source.poset, self.target.generators(i), q, kind)
        cs = active(self.source.poset, self.source.generators(i), q, kind)
        f = self.source.field
        return mat[np.ix_(rs, cs)] if rs and cs else f.zeros(len(rs), len(cs))


def _lift_upset(f_map, rs, rt):
    fld = rs.field
    poset = rs.poset
    mats = {}
    if not rs.gens:
        return ResolutionMap(rs, rt, {}, f_map)
    for i in sorted(rs.gens, reverse=True):
        gs = rs.gens[i]
        gt = rt.generators(i)
        mat = fld.zeros(len(gt), len(gs))
        ta = rt.generators(i + 1)
        for col, g in enumerate(gs):
            act_t = active(poset, gt, g)
            # target values: phi^(i+1)(d_S gen) in P_T^(i+1) at g, and f(eps_S gen) in D^i at g
            sd = rs.d(i)[:, col:col + 1]
            nxt = mats.get(i + 1)
            if nxt is not None and ta:
                want_p_full = fld.matmul(nxt, sd)
            else:
                want_p_full = fld.zeros(len(ta), 1)
            act_next = active(poset, ta, g)
            want_p = want_p_full[act_next, :] if act_next else fld.zeros(0, 1)
            want_c = fld.matmul(f_map.c(i)[g], rs.aug[i][col])
            dt = rt.d(i)
            dmat = dt[np.ix_(act_next, act_t)] if act_next and act_t else fld.zeros(len(act_next), len(act_t))
            emat = rt.augmentation_at(i, g)
            a = fld.vstack([dmat, emat], len(act_t))
            b = fld.vstack([want_p, want_c], 1)
            if not act_t:
                if not fld.is_zero(b):
                    raise InvariantError(f"no lift for generator {col} in degree {i}")
                continue
            x = fld.solve(a, b)
            if x is None:
                raise InvariantError(f"no lift for generator {col} in degree {i}")
            for r, j in enumerate(act_t):
                mat[j, col] = x[r, 0]
        mats[i] = mat
    return ResolutionMap(rs, rt, mats, f_map)


def _as_chain_map(f, rs, rt):
    if isinstance(f, ChainMap):
        return f
    if isinstance(f, ModuleHom):
        return ChainMap(rs.source, rt.source, {0: f})
    raise InputError(f"expected a ModuleHom or ChainMap, got {type(f).__name__}")


def _dual_chain_map(f):
    s = f.source.dualize()
    t = f.target.dualize()
    comps = {}
    for i, h in f.components.items():
        comps[-i] = ModuleHom(t.term(-i), s.term(-i), {p: m.T.copy() for p, m in h.components.items()})
    return ChainMap(t, s, comps)


def lift_morphism(f, res_source, res_target):
    """Comparison chain map between resolutions covering ``f``."""
    if res_source.kind != res_target.kind:
        raise InputError("resolutions have different kinds")
    if res_source.poset != res_target.poset:
        raise InputError("resolutions live over different posets")
    f = _as_chain_map(f, res_source, res_target)
    if res_source.kind == "upset":
        return _lift_upset(f, res_source, res_target)
    fd = _dual_chain_map(f)
    # the duals of the downset resolutions are upset resolutions of the duals
    ds = res_source.dual(source=fd.target)
    dt = res_target.dual(source=fd.source)
    lifted = _lift_upset(fd, dt, ds)
    mats = {-i: m.T.copy() for i, m in lifted.mats.items()}
    return ResolutionMap(res_source, res_target, mats, f)


# ---------------------------------------------------------------------------
# PL indicator complexes

class Summand:
    __slots__ = ("region", "label")

    def __init__(self, region, label=None):
        self.region = region
        self.label = label

    def __repr__(self):
        return f"Summand({self.label!r}, {self.region.sign_strings()})"


class IndicatorComplex:
    """A complex of indicator sheaves ``k[U]`` (or ``k[D]``) on face sets.

    The optional augmentation goes to (upset) or from (downset) a
    :class:`PLComplex`; it is stored per summand as a label in the encoding
    poset plus a vector, exactly as in :class:`IndicatorResolution`.
    """

    def __init__(self, kind, arrangement, cone, terms, diffs, field, augmentation=None, aug_vectors=None):
        _check_kind(kind)
        self.kind = kind
        self.arrangement = arrangement
        self.cone = cone
        self.field = field
        self.terms = {int(i): list(s) for i, s in terms.items() if s}
        for i, ss in self.terms.items():
            for s in ss:
                if s.region.arrangement != arrangement:
                    raise InputError(f"summand in degree {i} lives in another arrangement")
        self.diffs = {}
        for i in self.terms:
            if i + 1 in self.terms:
                shape = (len(self.terms[i + 1]), len(self.terms[i]))
                m = diffs.get(i)
                if m is None:
                    m = field.zeros(*shape)
                if m.shape != shape:
                    raise InputError(f"differential {i} has shape {m.shape}, expected {shape}")
                self.diffs[i] = m
        self.augmentation = augmentation
        self.aug_vectors = aug_vectors or {}
        self._faces = {}

    @property
    def degrees(self):
        return sorted(self.terms)

    def summands(self, i):
        return self.terms.get(i, [])

    def d(self, i):
        m = self.diffs.get(i)
        if m is None:
            return self.field.zeros(len(self.summands(i + 1)), len(self.summands(i)))
        return m

    def _active(self, face):
        if face not in self._faces:
            self._faces[face] = {i: [k for k, s in enumerate(ss) if face in s.region]
                                 for i, ss in self.terms.items()}
        return self._faces[face]

    def at_face(self, face):
        f = self.field
        act = self._active(face)
        dims = {i: len(a) for i, a in act.items()}
        diffs = {}
        for i, m in self.diffs.items():
            r, c = act.get(i + 1, []), act[i]
            diffs[i] = m[np.ix_(r, c)] if r and c else f.zeros(len(r), len(c))
        return StalkComplex(dims, diffs, f)

    def map_faces(self, i, j):
        """Identity on summands common to both faces."""
        f = self.field
        a, b = self._active(i), self._active(j)
        src, tgt = self.at_face(i), self.at_face(j)
        mats = {}
        for k in self.terms:
            m = f.zeros(len(b[k]), len(a[k]))
            for c, s in enumerate(a[k]):
                if s in b[k]:
                    m[b[k].index(s), c] = f.one()
            mats[k] = m
        return StalkMap(src, tgt, mats)

    def alexandrov_support(self):
        out = set()
        for ss in self.terms.values():
            for s in ss:
                out |= s.region.members
        return FaceSet(self.arrangement, frozenset(out))

    @property
    def n_summands(self):
        return sum(len(s) for s in self.terms.values())

    def check_regions(self, rel):
        """Summands that are not upsets (or downsets)."""
        test = is_upset if self.kind == "upset" else is_downset
        return [(i, k) for i, ss in self.terms.items() for k, s in enumerate(ss) if not test(s.region, rel)]

    def check_connected(self):
        bad = []
        for i, m in self.diffs.items():
            src, tgt = self.terms[i], self.terms[i + 1]
            for r in range(m.shape[0]):
                for c in range(m.shape[1]):
                    if m[r, c] == 0:
                        continue
                    if self.kind == "upset":
                        ok = src[c].region <= tgt[r].region
                    else:
                        ok = tgt[r].region <= src[c].region
                    if not ok:
                        bad.append((i, r, c))
        return bad

    def check_d_squared(self):
        bad = []
        for face in range(self.arrangement.n_faces):
            if not self.at_face(face).is_complex():
                bad.append(face)
        return bad

    def with_regions(self, fn, arrangement=None):
        terms = {i: [Summand(fn(s.region), s.label) for s in ss] for i, ss in self.terms.items()}
        aug = self.augmentation
        arrangement = arrangement or self.arrangement
        if aug is not None and arrangement != aug.arrangement:
            aug = PLComplex(aug.encoding.refine(arrangement), aug.complex)
        return IndicatorComplex(self.kind, arrangement, self.cone, terms, self.diffs, self.field,
                                aug, self.aug_vectors)

    def refine(self, target):
        return self.with_regions(lambda r: r.refine(target), target)

    def augmentation_at(self, i, face):
        """Augmentation matrix between the stalk at ``face`` and the PL value there."""
        x = self.augmentation
        if x is None:
            raise InputError("indicator complex has no augmentation")
        f = self.field
        q = x.encoding.assign[face]
        c = x.complex.term(i)
        act = self._active(face).get(i, [])
        vecs = self.aug_vectors.get(i, [])
        labels = [s.label for s in self.summands(i)]
        if self.kind == "upset":
            cols = [f.matmul(c.transition(labels[k], q), vecs[k]) for k in act]
            return f.hstack(cols, c.rank[q])
        rows = [f.matmul(vecs[k], c.transition(q, labels[k])) for k in act]
        return f.vstack(rows, c.rank[q])

    def augmentation_map(self, face):
        x = self.augmentation
        degs = set(self.terms) | set(x.complex.terms)
        mats = {i: self.augmentation_at(i, face) for i in degs}
        if self.kind == "upset":
            return StalkMap(self.at_face(face), x.at_face(face), mats)
        return StalkMap(x.at_face(face), self.at_face(face), mats)

    def to_json(self):
        f = self.field
        d = {
            "kind": self.kind,
            "arrangement_id": self.arrangement.id,
            "terms": {str(i): [dict(s.region.to_json(), label=None if s.label is None else str(s.label))
                               for s in ss] for i, ss in sorted(self.terms.items())},
            "differentials": {str(i): [[f.format(v) for v in row] for row in m]
                              for i, m in sorted(self.diffs.items())},
        }
        if self.augmentation is not None:
            d["augmentation"] = {
                str(i): [[f.format(v) for v in np.asarray(vec).ravel()] for vec in vs]
                for i, vs in sorted(self.aug_vectors.items()) if vs}
        return d


def pull_back(res, encoding, check=True):
    """Read a poset-level resolution through an encoding."""
    if res.poset != encoding.poset:
        raise InputError("resolution and encoding use different posets")
    if check:
        bad = encoding.validate()
        if bad:
            arr = encoding.arrangement
            i, j = bad[0]
            raise InputError(f"encoding is not order-preserving on {arr.sign_string(i)!r} <= {arr.sign_string(j)!r}")
    region = encoding.above if res.kind == "upset" else encoding.below
    terms = {i: [Summand(region(g), g) for g in gs] for i, gs in res.gens.items()}
    aug = PLComplex(encoding, res.source)
    out = IndicatorComplex(res.kind, encoding.arrangement, encoding.cone, terms, res.diffs, res.field,
                           aug, {i: list(v) for i, v in res.aug.items()})
    if check:
        bad = out.check_regions(encoding.rel)
        if bad:
            raise InvariantError(f"pulled-back summands are not {res.kind}s: {bad[:3]}")
    return out


def adjust_topology(x):
    """Upsets to their interiors, downsets to their closures."""
    if x.kind == "upset":
        return x.with_regions(lambda r: r.interior())
    return x.with_regions(lambda r: r.closure())


class Report:
    """Truthy iff no failures; ``failures`` carries face-level diagnostics."""

    def __init__(self, failures=None, checked=0):
        self.failures = list(failures or [])
        self.checked = checked

    def __bool__(self):
        return not self.failures

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {"ok": self.ok, "checked": self.checked, "failures": self.failures}

    def __repr__(self):
        return f"Report(ok={self.ok}, failures={self.failures[:3]})"


def verify_resolution(x, semantics="alexandrov"):
    if x.augmentation is None:
        raise InputError("verification needs an augmented indicator complex")
    arr = x.arrangement
    failures = []
    for i, r, c in x.check_connected():
        failures.append({"reason": "differential not connected", "degree": i, "entry": [r, c]})
    if semantics == "alexandrov":
        faces = list(range(arr.n_faces))
    elif semantics == "conic":
        faces = list(sample_probes(arr, x.cone))
    else:
        raise InputError(f"unknown semantics {semantics!r}")
    checked = 0
    cache = {}
    for face, probe in enumerate(faces):
        if probe not in cache:
            cache[probe] = _check_face(x, probe)
        checked += 1
        if cache[probe]:
            failures.append({"face": arr.sign_string(face), "probe": arr.sign_string(probe),
                             "reason": cache[probe]})
    if semantics == "conic":
        pl = x.augmentation
        seen = set()
        for i, j in comparable_samples(arr, x.cone):
            a, b = faces[i], faces[j]
            if a == b or (a, b) in seen:
                continue
            seen.add((a, b))
            if cache[a] or cache[b]:
                continue
            rm = x.map_faces(a, b)
            cm = pl.map_faces(a, b)
            ea, eb = x.augmentation_map(a), x.augmentation_map(b)
            if x.kind == "upset":
                ok = eb.compose(rm).equals(cm.compose(ea))
            else:
                ok = rm.compose(ea).equals(eb.compose(cm))
            if not ok:
                failures.append({"face": arr.sign_string(i), "to": arr.sign_string(j),
                                 "reason": "augmentation not natural"})
    return Report(failures, checked)


def _check_face(x, face):
    s = x.at_face(face)
    if not s.is_complex():
        return "d o d != 0"
    e = x.augmentation_map(face)
    if not e.is_chain_map():
        return "augmentation is not a chain map"
    if not e.is_quasi_iso():
        return "augmentation is not a quasi-isomorphism"
    return None
