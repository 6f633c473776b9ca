"""Seeded random generators for property and acceptance tests."""
from fractions import Fraction

from tamepl.encoding import Encoding, PLComplex, coarsest_encoding
from tamepl.geometry import Arrangement, Cone, FaceSet, comparability
from tamepl.linalg import Field
from tamepl import _kernels
from tamepl.poset import (FinitePoset, PosetComplex, ModuleHom, cokernel, free_module,
                          hom_space, image, kernel, scalar_hom)

QQ = Field()

CONES = [
    [(1, 0), (0, 1)],
    [(1, 0), (1, 1)],
    [(2, -1), (-1, 2)],
    [(1, 2), (1, -1)],
]


def random_cone(rng, dim=2):
    if dim == 1:
        return Cone(vrep=[(1,)])
    return Cone(vrep=rng.choice(CONES))


def random_arrangement(rng, max_lines=4, dim=2):
    k = rng.randint(1, max_lines)
    lines = []
    while len(lines) < k:
        a = tuple(rng.randint(-2, 2) for _ in range(dim))
        if any(a):
            lines.append((a, rng.randint(-2, 2)))
    return Arrangement(lines, dim=dim)


def bounded_arrangement(rng, max_lines=4):
    """A random 2-D arrangement with at least one bounded cell."""
    while True:
        a = random_arrangement(rng, max_lines)
        if len(a.hyperplanes) >= 3 and any(a.is_bounded(i) and a.face_dim(i) == 2 for i in range(a.n_faces)):
            return a


def boolean_poset(m):
    names = ["b" + "".join(str((s >> k) & 1) for k in range(m)) for s in range(2 ** m)]
    hasse = [(names[s], names[s | (1 << k)]) for s in range(2 ** m) for k in range(m) if not s & (1 << k)]
    return FinitePoset(names, hasse), names


def random_upset(rng, rel, size=None):
    n = rel.arrangement.n_faces
    size = size or rng.randint(1, 2)
    seeds = FaceSet(rel.arrangement, frozenset(rng.sample(range(n), min(size, n))))
    return rel.up_closure(seeds)


def random_downset(rng, rel, size=None):
    n = rel.arrangement.n_faces
    size = size or rng.randint(1, 2)
    seeds = FaceSet(rel.arrangement, frozenset(rng.sample(range(n), min(size, n))))
    return rel.down_closure(seeds)


def random_encoding(rng, arr=None, cone=None, max_upsets=3):
    """Faces mapped to the Boolean lattice by membership in random upsets."""
    arr = arr or random_arrangement(rng)
    cone = cone or random_cone(rng, arr.dim)
    rel = comparability(arr, cone)
    m = rng.randint(1, max_upsets)
    ups = [random_upset(rng, rel) for _ in range(m)]
    poset, names = boolean_poset(m)
    assign = [names[sum(1 << k for k, u in enumerate(ups) if i in u)] for i in range(arr.n_faces)]
    return Encoding(arr, cone, poset, assign, rel=rel)


def random_connected_matrix(rng, poset, rows, cols, field=QQ, lo=-2, hi=2):
    """Scalars for a map ``sum k[cols up] -> sum k[rows up]``."""
    m = field.zeros(len(rows), len(cols))
    for r, g in enumerate(rows):
        for c, h in enumerate(cols):
            if poset.leq(g, h):
                m[r, c] = field.coerce(rng.randint(lo, hi))
    return m


def random_module(rng, poset, field=QQ, max_gens=3):
    """Cokernel of a random connected map of principal upset sums."""
    elems = list(poset.elements)
    g0 = [rng.choice(elems) for _ in range(rng.randint(1, max_gens))]
    g1 = [rng.choice(elems) for _ in range(rng.randint(0, max_gens))]
    if not g1:
        return free_module(poset, g0, field)
    mat = random_connected_matrix(rng, poset, g0, g1, field)
    h = scalar_hom(poset, g1, g0, mat, field)
    return cokernel(h)[0]


def random_hom(rng, m, n):
    basis = hom_space(m, n)
    h = ModuleHom.zero(m, n)
    for b in basis:
        c = rng.randint(-2, 2)
        if c:
            h = h.add(b.scale(c))
    return h


def random_complex(rng, poset, field=QQ, terms=2):
    """A bounded complex in degrees ``-terms+1 .. 0``."""
    if terms == 1:
        return PosetComplex.from_module(random_module(rng, poset, field))
    a = random_module(rng, poset, field)
    b = random_module(rng, poset, field)
    d = random_hom(rng, a, b)
    if terms == 2:
        return PosetComplex({-1: a, 0: b}, {-1: d}, poset=poset, field=field)
    # three terms: a free module mapping into the kernel of d
    k, inc = kernel(d)
    gens = [rng.choice(poset.elements) for _ in range(rng.randint(1, 2))]
    fm = free_module(poset, gens, field)
    e = inc.compose(random_hom(rng, fm, k))
    return PosetComplex({-2: fm, -1: a, 0: b}, {-2: e, -1: d}, poset=poset, field=field)


def short_exact(rng, poset, field=QQ):
    """``(S, M, Q, i, p)`` with ``0 -> S -> M -> Q -> 0`` exact."""
    m = random_module(rng, poset, field)
    gens = [rng.choice(poset.elements) for _ in range(rng.randint(1, 2))]
    h = random_hom(rng, free_module(poset, gens, field), m)
    s, inc = image(h)
    q, proj = cokernel(inc)
    return s, m, q, inc, proj


def random_pl(rng, max_lines=4, terms=2, field=QQ):
    enc = random_encoding(rng, random_arrangement(rng, max_lines))
    return PLComplex(enc, random_complex(rng, enc.poset, field, terms))


def _interval(tc, lo, hi):
    n = tc.shape[0]
    return frozenset(i for i in range(n) if tc[lo, i] and tc[i, hi])


def random_compact(rng, field=QQ):
    """A compactly supported PL complex built from bounded intervals."""
    from tamepl.encoding import interval_module
    while True:
        arr = bounded_arrangement(rng)
        cone = random_cone(rng)
        enc = coarsest_encoding(arr, cone)
        tc = _kernels.transitive_closure(enc.rel.matrix)
        bounded = [i for i in range(arr.n_faces) if arr.is_bounded(i)]
        pairs = [(i, j) for i in bounded for j in bounded if tc[i, j]]
        rng.shuffle(pairs)
        regions = []
        for i, j in pairs:
            s = _interval(tc, i, j)
            if all(arr.is_bounded(f) for f in s):
                regions.append(FaceSet(arr, s))
            if len(regions) == 2:
                break
        if not regions:
            continue
        mods = [interval_module(enc, r, field).complex.term(0) for r in regions]
        if len(mods) == 1 or rng.random() < 0.3:
            return PLComplex(enc, PosetComplex.from_module(mods[0]))
        d = random_hom(rng, mods[0], mods[1])
        return PLComplex(enc, PosetComplex({-1: mods[0], 0: mods[1]}, {-1: d}, poset=enc.poset, field=field))


def single(kind, region, cone, field=QQ):
    """One indicator summand ``k[region]`` in degree 0."""
    from tamepl.resolutions import IndicatorComplex, Summand
    return IndicatorComplex(kind, region.arrangement, cone, {0: [Summand(region)]}, {}, field)


def random_point(rng, arr, cone):
    """A face sample or a random rational point."""
    if rng.random() < 0.5:
        return arr.samples[rng.randrange(arr.n_faces)]
    return tuple(Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(arr.dim))


def random_cone_vector(rng, cone):
    lam = [Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in cone.vrep]
    return tuple(sum(c * r[k] for c, r in zip(lam, cone.vrep)) for k in range(cone.dim))
