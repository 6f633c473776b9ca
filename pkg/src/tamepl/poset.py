"""Finite posets and finite-dimensional modules and complexes over them.

Conventions
-----------
* A module is presented by its ranks and one matrix per covering pair
  ``(p, q)`` (``p`` covered by ``q``), of shape ``rank(q) x rank(p)``.
* Complexes are cohomological: ``differentials[i]`` maps degree ``i`` to
  degree ``i + 1``.  Homological degree ``k`` is cohomological ``-k``.
"""
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import InputError, DomainError
from .linalg import Field

QQ = Field()


class FinitePoset:
    """A finite poset given by its covering pairs."""

    def __init__(self, elements, hasse=()):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise InputError("poset elements are not unique")
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        adj = np.zeros((n, n), dtype=bool)
        covers = []
        for pair in hasse:
            p, q = pair
            if p not in self.index or q not in self.index:
                raise InputError(f"hasse pair {pair!r} names an unknown element")
            if p == q:
                raise InputError(f"hasse pair {pair!r} is a loop")
            adj[self.index[p], self.index[q]] = True
            covers.append((self.index[p], self.index[q]))
        reach = _kernels.transitive_closure(adj)
        both = reach & reach.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = np.argwhere(both)[0]
            raise InputError(f"hasse relation has a cycle through {elements[i]!r} and {elements[j]!r}")
        self._leq = reach
        for i, j in set(covers):
            between = reach[i] & reach[:, j]
            between[i] = between[j] = False
            if between.any():
                raise InputError(
                    f"({elements[i]!r}, {elements[j]!r}) is not a covering pair")
        self.covers = tuple(sorted(set(covers)))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (isinstance(other, FinitePoset) and self.elements == other.elements
                and self.covers == other.covers)

    def __hash__(self):
        return hash((self.elements, self.covers))

    def __repr__(self):
        return f"FinitePoset({list(self.elements)}, covers={len(self.covers)})"

    def leq(self, p, q):
        return bool(self._leq[self.index[p], self.index[q]])

    def leq_index(self, i, j):
        return bool(self._leq[i, j])

    @property
    def order_matrix(self):
        return self._leq

    @cached_property
    def hasse_pairs(self):
        return tuple((self.elements[i], self.elements[j]) for i, j in self.covers)

    @cached_property
    def lower_covers(self):
        out = {e: [] for e in self.elements}
        for p, q in self.hasse_pairs:
            out[q].append(p)
        return out

    @cached_property
    def linear_extension(self):
        """Deterministic topological order (smallest index first)."""
        n = len(self)
        indeg = [0] * n
        succ = [[] for _ in range(n)]
        for i, j in self.covers:
            indeg[j] += 1
            succ[i].append(j)
        ready = sorted(i for i in range(n) if indeg[i] == 0)
        order = []
        while ready:
            i = ready.pop(0)
            order.append(self.elements[i])
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
                    ready.sort()
        return tuple(order)

    def up(self, p):
        i = self.index[p]
        return [e for j, e in enumerate(self.elements) if self._leq[i, j]]

    def down(self, p):
        i = self.index[p]
        return [e for j, e in enumerate(self.elements) if self._leq[j, i]]

    def opposite(self):
        return FinitePoset(self.elements, [(q, p) for p, q in self.hasse_pairs])

    @cached_property
    def height(self):
        """Number of covering steps in a longest chain."""
        best = {}
        for e in self.linear_extension:
            best[e] = max((best[m] + 1 for m in self.lower_covers[e]), default=0)
        return max(best.values(), default=0)

    def comparable_pairs(self):
        return [(p, q) for p in self.elements for q in self.elements if self.leq(p, q)]

    def to_json(self):
        return {"elements": [str(e) for e in self.elements],
                "hasse": [[str(p), str(q)] for p, q in self.hasse_pairs]}

    @classmethod
    def from_json(cls, d, path="poset"):
        if not isinstance(d, dict) or not isinstance(d.get("elements"), list):
            raise InputError("poset needs an 'elements' list", path)
        hasse = d.get("hasse", [])
        if not isinstance(hasse, list) or any(not isinstance(h, list) or len(h) != 2 for h in hasse):
            raise InputError("hasse must be a list of [p, q] pairs", f"{path}/hasse")
        try:
            return cls([str(e) for e in d["elements"]], [(str(p), str(q)) for p, q in hasse])
        except InputError as e:
            if e.path is None:
                e.path = path
            raise


class PosetModule:
    """Ranks plus one matrix per covering pair."""

    def __init__(self, poset, rank, edges=None, field=QQ):
        self.poset = poset
        self.field = field
        self.rank = {}
        for e in poset:
            r = int(rank.get(e, 0))
            if r < 0:
                raise InputError(f"negative rank at {e!r}")
            self.rank[e] = r
        extra = set(rank) - set(poset.elements)
        if extra:
            raise InputError(f"ranks given for unknown elements {sorted(map(str, extra))}")
        edges = dict(edges or {})
        cover_set = set(poset.hasse_pairs)
        for key in edges:
            if key not in cover_set:
                raise InputError(f"edge map on {key!r}, which is not a covering pair")
        self.edges = {}
        for p, q in poset.hasse_pairs:
            shape = (self.rank[q], self.rank[p])
            m = edges.get((p, q))
            if m is None:
                if shape[0] and shape[1]:
                    raise InputError(f"missing edge map for covering pair ({p!r}, {q!r})")
                m = field.zeros(*shape)
            elif not isinstance(m, np.ndarray):
                m = field.array(m, shape=shape)
            if m.shape != shape:
                raise InputError(
                    f"edge map ({p!r}, {q!r}) has shape {m.shape}, expected {shape}")
            self.edges[(p, q)] = m
        self._trans = {}

    def __repr__(self):
        return f"PosetModule(ranks={self.rank})"

    def dim(self, p):
        return self.rank[p]

    @property
    def total_rank(self):
        return sum(self.rank.values())

    def is_zero(self):
        return self.total_rank == 0

    def _transitions_from(self, p):
        if p not in self._trans:
            poset = self.poset
            f = self.field
            out = {p: f.eye(self.rank[p])}
            for q in poset.linear_extension:
                if q == p or not poset.leq(p, q):
                    continue
                m = next(m for m in poset.lower_covers[q] if m in out)
                out[q] = f.matmul(self.edges[(m, q)], out[m])
            self._trans[p] = out
        return self._trans[p]

    def transition(self, p, q):
        """The structure map ``M_p -> M_q`` for ``p <= q``."""
        if not self.poset.leq(p, q):
            raise DomainError(f"{p!r} is not <= {q!r}")
        return self._transitions_from(p)[q]

    def validate(self):
        """All comparable triples ``(p, m, q)`` violating path independence."""
        bad = []
        f = self.field
        poset = self.poset
        for p in poset:
            tp = self._transitions_from(p)
            for m in tp:
                tm = self._transitions_from(m)
                for q in tm:
                    if not f.equal(f.matmul(tm[q], tp[m]), tp[q]):
                        bad.append((p, m, q))
        return bad

    def is_valid(self):
        return not self.validate()

    def dualize(self):
        """Transpose every map; lives over the opposite poset."""
        op = self.poset.opposite()
        return PosetModule(op, self.rank, {(q, p): m.T.copy() for (p, q), m in self.edges.items()},
                           self.field)

    def equals(self, other):
        f = self.field
        return (self.poset == other.poset and self.rank == other.rank
                and all(f.equal(self.edges[k], other.edges[k]) for k in self.edges))

    @classmethod
    def zero(cls, poset, field=QQ):
        return cls(poset, {}, {}, field)

    @classmethod
    def constant(cls, poset, field=QQ, support=None):
        """``k`` on ``support`` (default everywhere); must be convex."""
        support = set(poset.elements if support is None else support)
        rank = {e: 1 if e in support else 0 for e in poset}
        edges = {}
        for p, q in poset.hasse_pairs:
            if p in support and q in support:
                edges[(p, q)] = field.eye(1)
        return cls(poset, rank, edges, field)

    def to_json(self):
        f = self.field
        return {
            "rank": {str(e): self.rank[e] for e in self.poset},
            "edges": {f"{p}->{q}": [[f.format(v) for v in row] for row in m]
                      for (p, q), m in self.edges.items() if m.size},
        }

    @classmethod
    def from_json(cls, d, poset, field=QQ, path="module"):
        if not isinstance(d, dict):
            raise InputError("module must be an object", path)
        rank = d.get("rank", {})
        if not isinstance(rank, dict):
            raise InputError("'rank' must be an object", f"{path}/rank")
        for k, v in rank.items():
            if k not in poset.index:
                raise InputError(f"unknown element {k!r}", f"{path}/rank/{k}")
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputError("rank must be a nonnegative integer", f"{path}/rank/{k}")
        rank = {k: int(v) for k, v in rank.items()}
        edges = {}
        for key, mat in (d.get("edges") or {}).items():
            epath = f"{path}/edges/{key}"
            if "->" not in key:
                raise InputError("edge keys look like 'p->q'", epath)
            p, q = key.split("->", 1)
            if p not in poset.index or q not in poset.index:
                raise InputError(f"edge {key!r} names an unknown element", epath)
            shape = (rank.get(q, 0), rank.get(p, 0))
            edges[(p, q)] = field.array(mat, shape=shape, path=epath)
        try:
            return cls(poset, rank, edges, field)
        except InputError as e:
            if e.path is None:
                e.path = path
            raise


class ModuleHom:
    """A family of matrices ``source_p -> target_p``."""

    def __init__(self, source, target, components=None):
        if source.poset != target.poset:
            raise InputError("homomorphism between modules over different posets")
        self.source = source
        self.target = target
        self.field = f = source.field
        components = dict(components or {})
        self.components = {}
        for p in source.poset:
            shape = (target.rank[p], source.rank[p])
            m = components.get(p)
            if m is None:
                m = f.zeros(*shape)
            elif not isinstance(m, np.ndarray):
                m = f.array(m, shape=shape)
            if m.shape != shape:
                raise InputError(f"component at {p!r} has shape {m.shape}, expected {shape}")
            self.components[p] = m

    def __getitem__(self, p):
        return self.components[p]

    def validate(self):
        """Covering pairs where the square fails to commute."""
        f = self.field
        bad = []
        for p, q in self.source.poset.hasse_pairs:
            lhs = f.matmul(self.components[q], self.source.edges[(p, q)])
            rhs = f.matmul(self.target.edges[(p, q)], self.components[p])
            if not f.equal(lhs, rhs):
                bad.append((p, q))
        return bad

    def is_valid(self):
        return not self.validate()

    def compose(self, other):
        """``self o other``."""
        f = self.field
        return ModuleHom(other.source, self.target,
                         {p: f.matmul(self.components[p], other.components[p]) for p in self.components})

    def add(self, other):
        f = self.field
        return ModuleHom(self.source, self.target,
                         {p: f.add(self.components[p], other.components[p]) for p in self.components})

    def scale(self, c):
        f = self.field
        return ModuleHom(self.source, self.target, {p: f.scale(c, m) for p, m in self.components.items()})

    def is_zero(self):
        return all(self.field.is_zero(m) for m in self.components.values())

    def equals(self, other):
        f = self.field
        return all(f.equal(self.components[p], other.components[p]) for p in self.components)

    def dualize(self, source_dual=None, target_dual=None):
        """The transpose ``target^* -> source^*`` over the opposite poset."""
        sd = source_dual or self.source.dualize()
        td = target_dual or self.target.dualize()
        return ModuleHom(td, sd, {p: m.T.copy() for p, m in self.components.items()})

    @classmethod
    def identity(cls, m):
        return cls(m, m, {p: m.field.eye(m.rank[p]) for p in m.poset})

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, {})

    def to_json(self):
        f = self.field
        return {"components": {str(p): [[f.format(v) for v in row] for row in m]
                               for p, m in self.components.items() if m.size}}

    @classmethod
    def from_json(cls, d, source, target, path="hom"):
        if not isinstance(d, dict):
            raise InputError("homomorphism must be an object", path)
        f = source.field
        comps = {}
        for p, mat in (d.get("components") or {}).items():
            if p not in source.poset.index:
                raise InputError(f"unknown element {p!r}", f"{path}/components/{p}")
            comps[p] = f.array(mat, shape=(target.rank[p], source.rank[p]), path=f"{path}/components/{p}")
        return cls(source, target, comps)


class StalkComplex:
    """A bounded cochain complex of finite-dimensional vector spaces."""

    def __init__(self, dims, diffs, field=QQ):
        self.field = field
        self.dims = {int(k): int(v) for k, v in dims.items() if v}
        self.diffs = {}
        for i, m in diffs.items():
            shape = (self.dim(i + 1), self.dim(i))
            if m.shape != shape:
                raise InputError(f"stalk differential {i} has shape {m.shape}, expected {shape}")
            if m.size:
                self.diffs[int(i)] = m

    def dim(self, i):
        return self.dims.get(i, 0)

    def d(self, i):
        m = self.diffs.get(i)
        return m if m is not None else self.field.zeros(self.dim(i + 1), self.dim(i))

    @property
    def degrees(self):
        return sorted(self.dims)

    def is_complex(self):
        f = self.field
        return all(f.is_zero(f.matmul(self.d(i + 1), self.d(i))) for i in self.degrees)

    def homology(self):
        """Ranks ``dim ker d^i - rank d^(i-1)``; zero entries omitted."""
        f = self.field
        out = {}
        for i in self.degrees:
            h = self.dim(i) - f.rank(self.d(i)) - f.rank(self.d(i - 1))
            if h:
                out[i] = h
        return out

    def is_acyclic(self):
        return not self.homology()

    def signature(self):
        return tuple(sorted(self.dims.items())), tuple(sorted(self.homology().items()))


class StalkMap:
    """A chain map of :class:`StalkComplex` objects."""

    def __init__(self, source, target, mats):
        self.source = source
        self.target = target
        self.field = f = source.field
        self.mats = {}
        for i in set(source.dims) | set(target.dims):
            m = mats.get(i)
            shape = (target.dim(i), source.dim(i))
            if m is None:
                m = f.zeros(*shape)
            if m.shape != shape:
                raise InputError(f"stalk map degree {i} has shape {m.shape}, expected {shape}")
            self.mats[i] = m

    def m(self, i):
        m = self.mats.get(i)
        return m if m is not None else self.field.zeros(self.target.dim(i), self.source.dim(i))

    def is_chain_map(self):
        f = self.field
        for i in set(self.source.dims) | set(self.target.dims) | {i - 1 for i in self.source.dims}:
            lhs = f.matmul(self.m(i + 1), self.source.d(i))
            rhs = f.matmul(self.target.d(i), self.m(i))
            if not f.equal(lhs, rhs):
                return False
        return True

    def compose(self, other):
        """``self o other``."""
        f = self.field
        degs = set(other.source.dims) | set(self.target.dims)
        return StalkMap(other.source, self.target, {i: f.matmul(self.m(i), other.m(i)) for i in degs})

    def equals(self, other):
        f = self.field
        degs = set(self.source.dims) | set(self.target.dims)
        return all(f.equal(self.m(i), other.m(i)) for i in degs)

    def cone(self):
        """Mapping cone: degree i is ``source^(i+1) + target^i``."""
        f = self.field
        s, t = self.source, self.target
        degs = {i - 1 for i in s.dims} | set(t.dims)
        dims = {i: s.dim(i + 1) + t.dim(i) for i in degs}
        diffs = {}
        for i in degs:
            # (x, y) -> (-d_s x, f x + d_t y)
            top = f.hstack([f.neg(s.d(i + 1)), f.zeros(s.dim(i + 2), t.dim(i))], s.dim(i + 2))
            bot = f.hstack([self.m(i + 1), t.d(i)], t.dim(i + 1))
            diffs[i] = f.vstack([top, bot], s.dim(i + 1) + t.dim(i))
        dims.update({i + 1: s.dim(i + 2) + t.dim(i + 1) for i in degs})
        return StalkComplex(dims, {i: m for i, m in diffs.items()}, f)

    def is_quasi_iso(self):
        return self.cone().is_acyclic()


class PosetComplex:
    """A bounded cochain complex of modules over one poset."""

    def __init__(self, terms, differentials=None, poset=None, field=None):
        terms = {int(k): v for k, v in terms.items()}
        if poset is None:
            if not terms:
                raise InputError("empty complex needs an explicit poset")
            poset = next(iter(terms.values())).poset
        if field is None:
            field = next(iter(terms.values())).field if terms else QQ
        self.poset = poset
        self.field = field
        for i, m in terms.items():
            if m.poset != poset:
                raise InputError(f"term {i} lives over a different poset")
        self.terms = {i: m for i, m in terms.items() if not m.is_zero()}
        self._zero = PosetModule.zero(poset, field)
        self.differentials = {}
        for i, d in (differentials or {}).items():
            i = int(i)
            if d.source.rank != self.term(i).rank or d.target.rank != self.term(i + 1).rank:
                raise InputError(f"differential {i} does not map term {i} to term {i + 1}")
            if not d.is_zero():
                self.differentials[i] = d

    def term(self, i):
        return self.terms.get(i, self._zero)

    def d(self, i):
        d = self.differentials.get(i)
        return d if d is not None else ModuleHom.zero(self.term(i), self.term(i + 1))

    @property
    def degrees(self):
        return sorted(self.terms)

    def is_zero(self):
        return not self.terms

    def validate(self):
        """Human-readable list of violations (empty when valid)."""
        out = []
        f = self.field
        for i, m in self.terms.items():
            out += [f"term {i}: path dependence at {t}" for t in m.validate()]
        for i, d in self.differentials.items():
            out += [f"differential {i}: not a homomorphism on {e}" for e in d.validate()]
        for i in self.degrees:
            for p in self.poset:
                if not f.is_zero(f.matmul(self.d(i + 1)[p], self.d(i)[p])):
                    out.append(f"d{i + 1} o d{i} != 0 at {p!r}")
        return out

    def is_valid(self):
        return not self.validate()

    def at(self, p):
        dims = {i: m.rank[p] for i, m in self.terms.items()}
        return StalkComplex(dims, {i: d[p] for i, d in self.differentials.items()}, self.field)

    def homology_at(self, p):
        return self.at(p).homology()

    def dualize(self):
        """Degree ``j`` of the dual is the dual of degree ``-j``."""
        duals = {i: m.dualize() for i, m in self.terms.items()}
        op = self.poset.opposite()
        zero = PosetModule.zero(op, self.field)
        diffs = {}
        for i, d in self.differentials.items():
            # d^i : C^i -> C^(i+1) dualizes to (C^(i+1))^* -> (C^i)^*, degree -(i+1) -> -i
            diffs[-i - 1] = d.dualize(duals.get(i, zero), duals.get(i + 1, zero))
        return PosetComplex({-i: m for i, m in duals.items()}, diffs, poset=op, field=self.field)

    @classmethod
    def from_module(cls, m, degree=0):
        return cls({degree: m}, {}, poset=m.poset, field=m.field)

    def to_json(self):
        return {"terms": {str(i): m.to_json() for i, m in sorted(self.terms.items())},
                "differentials": {str(i): d.to_json() for i, d in sorted(self.differentials.items())}}

    @classmethod
    def from_json(cls, d, poset, field=QQ, path="complex"):
        if not isinstance(d, dict):
            raise InputError("complex must be an object", path)
        terms = {}
        for k, t in (d.get("terms") or {}).items():
            try:
                i = int(k)
            except ValueError:
                raise InputError("term degrees must be integers", f"{path}/terms/{k}") from None
            terms[i] = PosetModule.from_json(t, poset, field, f"{path}/terms/{k}")
        zero = PosetModule.zero(poset, field)
        diffs = {}
        for k, h in (d.get("differentials") or {}).items():
            try:
                i = int(k)
            except ValueError:
                raise InputError("differential degrees must be integers",
                                 f"{path}/differentials/{k}") from None
            diffs[i] = ModuleHom.from_json(h, terms.get(i, zero), terms.get(i + 1, zero),
                                           f"{path}/differentials/{k}")
        return cls(terms, diffs, poset=poset, field=field)


class ChainMap:
    """A degreewise family of module homomorphisms between complexes."""

    def __init__(self, source, target, components=None):
        self.source = source
        self.target = target
        self.field = source.field
        components = dict(components or {})
        self.components = {}
        for i in set(source.terms) | set(target.terms):
            h = components.get(i)
            if h is None:
                h = ModuleHom.zero(source.term(i), target.term(i))
            self.components[i] = h

    def c(self, i):
        h = self.components.get(i)
        return h if h is not None else ModuleHom.zero(self.source.term(i), self.target.term(i))

    def validate(self):
        out = []
        f = self.field
        for i, h in self.components.items():
            out += [f"component {i}: not a homomorphism on {e}" for e in h.validate()]
        degs = set(self.components) | {i - 1 for i in self.components}
        for i in sorted(degs):
            for p in self.source.poset:
                lhs = f.matmul(self.c(i + 1)[p], self.source.d(i)[p])
                rhs = f.matmul(self.target.d(i)[p], self.c(i)[p])
                if not f.equal(lhs, rhs):
                    out.append(f"not a chain map in degree {i} at {p!r}")
        return out

    def at(self, p):
        return StalkMap(self.source.at(p), self.target.at(p),
                        {i: h[p] for i, h in self.components.items()})

    def is_quasi_iso(self):
        """Mapping-cone acyclicity at every element; input must be a chain map."""
        bad = self.validate()
        if bad:
            raise InputError("not a chain map: " + "; ".join(bad[:3]))
        return all(self.at(p).is_quasi_iso() for p in self.source.poset)

    def mapping_cone(self):
        f = self.field
        s, t = self.source, self.target
        degs = sorted({i - 1 for i in s.terms} | set(t.terms))
        terms = {}
        for i in degs:
            terms[i], _, _ = direct_sum([s.term(i + 1), t.term(i)])
        zero = PosetModule.zero(s.poset, f)
        diffs = {}
        for i in degs:
            src = terms[i]
            tgt = terms.get(i + 1, zero)
            comps = {}
            for p in s.poset:
                a, b = s.term(i + 2).rank[p], t.term(i + 1).rank[p]
                top = f.hstack([f.neg(s.d(i + 1)[p]), f.zeros(a, t.term(i).rank[p])], a)
                bot = f.hstack([self.c(i + 1)[p], t.d(i)[p]], b)
                comps[p] = f.vstack([top, bot], src.rank[p])
            if i + 1 in terms:
                diffs[i] = ModuleHom(src, tgt, comps)
        return PosetComplex(terms, diffs, poset=s.poset, field=f)


def is_quasi_iso(f):
    return f.is_quasi_iso()


def homology_at(c, p):
    return c.homology_at(p)


def transition(m, p, q):
    return m.transition(p, q)


def validate_module(m):
    return m.validate()


def dualize(m):
    return m.dualize()


# ---------------------------------------------------------------------------
# constructions


def direct_sum(modules):
    """``(S, injections, projections)`` for a list of modules."""
    poset, f = modules[0].poset, modules[0].field
    rank = {p: sum(m.rank[p] for m in modules) for p in poset}
    edges = {}
    for p, q in poset.hasse_pairs:
        out = f.zeros(rank[q], rank[p])
        r = c = 0
        for m in modules:
            e = m.edges[(p, q)]
            out[r:r + e.shape[0], c:c + e.shape[1]] = e
            r += e.shape[0]
            c += e.shape[1]
        edges[(p, q)] = out
    s = PosetModule(poset, rank, edges, f)
    inj, proj = [], []
    offs = {p: 0 for p in poset}
    for m in modules:
        ic, pc = {}, {}
        for p in poset:
            a = f.zeros(rank[p], m.rank[p])
            for k in range(m.rank[p]):
                a[offs[p] + k, k] = f.one()
            ic[p] = a
            pc[p] = a.T.copy()
            offs[p] += m.rank[p]
        inj.append(ModuleHom(m, s, ic))
        proj.append(ModuleHom(s, m, pc))
    return s, inj, proj


def submodule(m, bases):
    """Submodule spanned at each ``p`` by the columns of ``bases[p]``.

    The columns must be independent and the family closed under the
    structure maps.  Returns ``(S, inclusion)``.
    """
    f = m.field
    poset = m.poset
    rank = {p: bases[p].shape[1] for p in poset}
    edges = {}
    for p, q in poset.hasse_pairs:
        img = f.matmul(m.edges[(p, q)], bases[p])
        x = f.solve(bases[q], img)
        if x is None:
            raise InputError(f"subspaces are not closed under the map {p!r} -> {q!r}")
        edges[(p, q)] = x
    s = PosetModule(poset, rank, edges, f)
    return s, ModuleHom(s, m, {p: bases[p] for p in poset})


def kernel(h):
    f = h.field
    bases = {p: f.nullspace(h.components[p]) if h.source.rank[p] else f.zeros(0, 0)
             for p in h.source.poset}
    return submodule(h.source, bases)


def image(h):
    f = h.field
    bases = {}
    for p, c in h.components.items():
        cols = f.independent_columns(c)
        bases[p] = c[:, list(cols)] if cols else f.zeros(c.shape[0], 0)
    return submodule(h.target, bases)


def cokernel(h):
    """``(C, projection)`` with ``C_p = target_p / image_p``."""
    f = h.field
    tgt = h.target
    poset = tgt.poset
    quot, lift = {}, {}
    for p in poset:
        c = h.components[p]
        n = tgt.rank[p]
        cols = f.independent_columns(c) if c.size else ()
        a = c[:, list(cols)] if cols else f.zeros(n, 0)
        extra = f.extend_basis(a, n)
        s = f.zeros(n, len(extra))
        for j, i in enumerate(extra):
            s[i, j] = f.one()
        full = f.hstack([a, s], n)
        q = f.solve(full, f.eye(n)) if n else f.zeros(0, 0)
        quot[p] = q[len(cols):, :] if n else f.zeros(0, 0)
        lift[p] = s
    rank = {p: quot[p].shape[0] for p in poset}
    edges = {(p, q): f.matmul(quot[q], f.matmul(tgt.edges[(p, q)], lift[p]))
             for p, q in poset.hasse_pairs}
    cm = PosetModule(poset, rank, edges, f)
    return cm, ModuleHom(tgt, cm, quot)


def hom_space(m, n):
    """A basis of ``Hom(m, n)`` as a list of :class:`ModuleHom`."""
    f = m.field
    poset = m.poset
    slots, offset = {}, 0
    for p in poset:
        slots[p] = offset
        offset += n.rank[p] * m.rank[p]
    if offset == 0:
        return []
    rows = []
    for p, q in poset.hasse_pairs:
        em, en = m.edges[(p, q)], n.edges[(p, q)]
        # X_q em - en X_p = 0, entrywise (r, c) of an n_q x m_p matrix
        for r in range(n.rank[q]):
            for c in range(m.rank[p]):
                row = [f.coerce(0)] * offset
                for k in range(m.rank[q]):
                    if em[k, c] != 0:
                        idx = slots[q] + r * m.rank[q] + k
                        row[idx] = row[idx] + em[k, c]
                for k in range(n.rank[p]):
                    if en[r, k] != 0:
                        idx = slots[p] + k * m.rank[p] + c
                        row[idx] = row[idx] - en[r, k]
                rows.append(row)
    if rows:
        ns = f.nullspace(f.array(rows))
    else:
        ns = f.eye(offset)
    if f.p is not None:
        ns = ns % f.p
    out = []
    for j in range(ns.shape[1]):
        comps = {}
        for p in poset:
            a, b = n.rank[p], m.rank[p]
            comps[p] = ns[slots[p]:slots[p] + a * b, j].reshape(a, b).copy()
        out.append(ModuleHom(m, n, comps))
    return out


# ---------------------------------------------------------------------------
# sums of principal upset / downset modules

def free_module(poset, gens, field=QQ):
    """``sum_j k[gens[j] up]``: at ``q`` the basis is ``j`` with ``gens[j] <= q``."""
    rank = {q: sum(1 for g in gens if poset.leq(g, q)) for q in poset}
    edges = {}
    for p, q in poset.hasse_pairs:
        sp = [j for j, g in enumerate(gens) if poset.leq(g, p)]
        sq = [j for j, g in enumerate(gens) if poset.leq(g, q)]
        e = field.zeros(len(sq), len(sp))
        for c, j in enumerate(sp):
            e[sq.index(j), c] = field.one()
        edges[(p, q)] = e
    return PosetModule(poset, rank, edges, field)


def cofree_module(poset, gens, field=QQ):
    """``sum_j k[gens[j] down]``: at ``q`` the basis is ``j`` with ``q <= gens[j]``."""
    rank = {q: sum(1 for g in gens if poset.leq(q, g)) for q in poset}
    edges = {}
    for p, q in poset.hasse_pairs:
        sp = [j for j, g in enumerate(gens) if poset.leq(p, g)]
        sq = [j for j, g in enumerate(gens) if poset.leq(q, g)]
        e = field.zeros(len(sq), len(sp))
        for r, j in enumerate(sq):
            e[r, sp.index(j)] = field.one()
        edges[(p, q)] = e
    return PosetModule(poset, rank, edges, field)


def active(poset, gens, q, kind="upset"):
    if kind == "upset":
        return [j for j, g in enumerate(gens) if poset.leq(g, q)]
    return [j for j, g in enumerate(gens) if poset.leq(q, g)]


def scalar_hom(poset, src_gens, tgt_gens, mat, field=QQ, kind="upset", source=None, target=None):
    """Evaluate a scalar matrix between principal sums as a :class:`ModuleHom`."""
    builder = free_module if kind == "upset" else cofree_module
    source = source or builder(poset, src_gens, field)
    target = target or builder(poset, tgt_gens, field)
    comps = {}
    for q in poset:
        rs = active(poset, tgt_gens, q, kind)
        cs = active(poset, src_gens, q, kind)
        comps[q] = mat[np.ix_(rs, cs)] if rs and cs else field.zeros(len(rs), len(cs))
    return ModuleHom(source, target, comps)
