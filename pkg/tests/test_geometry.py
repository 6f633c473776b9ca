import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from tamepl import fm
from tamepl.errors import InputError
from tamepl.geometry import (Arrangement, Cone, FaceSet, HalfSpace, comparability, is_downset, is_upset,
                             region_op, refine, interior_ray, upset_violations)

from gen import random_arrangement, random_cone, random_upset, random_downset

Q2 = Cone.orthant(2)
AXES = Arrangement([((1, 0), 0), ((0, 1), 0)])
DIAG = Arrangement([((1, 0), 0), ((0, 1), 0), ((1, -1), 0)])


def faces(arr, *signs):
    return FaceSet(arr, frozenset(arr.face_of_string(s) for s in signs))


def closed_quadrant(arr=AXES):
    return arr.region([HalfSpace((1, 0), 0), HalfSpace((0, 1), 0)])


# arrangements

def test_face_counts():
    one = Arrangement([((1,), 0)])
    assert [one.sign_string(i) for i in range(one.n_faces)] == ["-", "0", "+"]
    assert AXES.n_faces == 9
    tri = Arrangement([((1, 0), 0), ((0, 1), 0), ((1, 1), 1)])
    dims = [tri.face_dim(i) for i in range(tri.n_faces)]
    assert tri.n_faces == 19
    assert (dims.count(0), dims.count(1), dims.count(2)) == (3, 9, 7)


def test_duplicates_and_zero_normal():
    a = Arrangement([((1, 0), 0), ((2, 0), 0), ((-3, 0), 0)])
    assert len(a.hyperplanes) == 1
    with pytest.raises(InputError):
        Arrangement([((0, 0), 1)])
    with pytest.raises(InputError):
        Arrangement.from_json([{"normal": [0, 0], "offset": 0}])


def test_faces_sorted_and_deterministic():
    a = Arrangement([((1, 1), 1), ((1, -1), 0)])
    assert list(a.faces) == sorted(a.faces)
    assert a.id == Arrangement([((1, 1), 1), ((1, -1), 0)]).id


def test_json_round_trip():
    a = Arrangement([((1, 2), Fr(1, 3)), ((0, 1), -1)])
    b = Arrangement.from_json(a.to_json())
    assert a == b and a.faces == b.faces
    r = faces(a, a.sign_string(0), a.sign_string(3))
    assert FaceSet.from_json(r.to_json(), a) == r


# region operations

def test_interior_of_closed_quadrant():
    assert region_op(closed_quadrant(), "interior") == faces(AXES, "++")


def test_closure_of_open_quadrant():
    assert region_op(faces(AXES, "++"), "closure") == closed_quadrant()


def test_removed_diagonal_restored():
    x = faces(DIAG, "++-", "+++")
    assert x.closure().interior() == faces(DIAG, "++-", "++0", "+++")
    assert region_op(x, "complement") == DIAG.full() - x


# comparability

def test_comparability_examples():
    rel = comparability(AXES, Q2)
    f = AXES.face_of_string
    assert rel.holds(f("00"), f("++"))
    assert not rel.holds(f("++"), f("--"))
    assert rel.holds(f("-+"), f("++"))
    assert all(rel.holds(i, i) for i in range(AXES.n_faces))


def test_comparability_dimension_mismatch():
    with pytest.raises(InputError):
        comparability(AXES, Cone(vrep=[(1,)]))


def _direct(arr, cone, i, j):
    n = arr.dim
    rows = [(tuple(a) + (0,) * n, b, k) for a, b, k in arr.face_rows(i)]
    rows += [((0,) * n + tuple(a), b, k) for a, b, k in arr.face_rows(j)]
    for h in cone.hrep:
        rows.append(fm.make_row(tuple(-v for v in h.normal) + h.normal, 0, fm.GE))
    return fm.feasible(rows, 2 * n)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_comparability_matches_2n_system(seed):
    rng = random.Random(seed)
    arr = random_arrangement(rng, 3)
    cone = random_cone(rng)
    rel = comparability(arr, cone)
    for i in range(arr.n_faces):
        for j in range(arr.n_faces):
            assert rel.holds(i, j) == _direct(arr, cone, i, j)


# upsets

def test_upset_examples():
    rel = comparability(AXES, Q2)
    assert is_upset(faces(AXES, "++"), rel)
    lower = AXES.region([HalfSpace((-1, 0), 0), HalfSpace((0, -1), 0)])
    assert not is_upset(lower, rel) and is_downset(lower, rel)
    half = AXES.region([HalfSpace((1, 0), 0, True)])
    assert is_upset(half, rel)
    assert upset_violations(lower, rel)


def test_up_closure_is_an_upset():
    rel = comparability(AXES, Q2)
    u = rel.up_closure(faces(AXES, "-0"))
    assert is_upset(u, rel)
    assert u == AXES.region([HalfSpace((0, 1), 0)])


# refinement

def test_refine_examples():
    q = faces(AXES, "++")
    assert refine(q, DIAG) == faces(DIAG, "++-", "++0", "+++")
    assert refine(q, AXES) == q
    assert refine(AXES.empty(), DIAG) == DIAG.empty()
    with pytest.raises(InputError):
        refine(faces(DIAG, "+++"), AXES)


# cones

def test_interior_ray_examples():
    assert interior_ray(Q2) == (1, 1)
    assert interior_ray(Cone(vrep=[(1, 0), (1, 1)])) == (2, 1)
    assert interior_ray(Cone(vrep=[(1,)])) == (1,)


def test_cone_hrep_vrep_agree():
    c = Cone(vrep=[(1, 0), (1, 1)])
    d = Cone(hrep=[HalfSpace(h.normal) for h in c.hrep])
    assert c == d and set(d.extreme_rays) == {(1, 0), (1, 1)}
    assert Cone.from_json(c.to_json()) == c


@pytest.mark.parametrize("rays", [[(1, 0), (-1, 0)], [(1, 0)], [(0, 0), (1, 1)]])
def test_bad_cones(rays):
    with pytest.raises(InputError):
        Cone(vrep=rays)


# properties

seeds = st.integers(0, 10 ** 6)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_partition(seed):
    rng = random.Random(seed)
    arr = random_arrangement(rng, 4)
    for _ in range(1000):
        x = (Fr(rng.randint(-40, 40), rng.randint(1, 8)), Fr(rng.randint(-40, 40), rng.randint(1, 8)))
        hits = [i for i in range(arr.n_faces) if all(fm.satisfies(r, x) for r in arr.face_rows(i))]
        assert hits == [arr.locate(x)]


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_duality_idempotence_and_complements(seed):
    rng = random.Random(seed)
    arr = random_arrangement(rng, 4)
    rel = comparability(arr, random_cone(rng))
    x = FaceSet(arr, frozenset(i for i in range(arr.n_faces) if rng.random() < 0.4))
    assert x.interior() == x.complement().closure().complement()
    assert x.closure() == x.complement().interior().complement()
    assert x.closure().closure() == x.closure()
    assert x.interior().interior() == x.interior()
    assert x.interior() <= x <= x.closure()
    assert is_upset(x, rel) == is_downset(x.complement(), rel)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_upset_faithfulness(seed):
    rng = random.Random(seed)
    arr = random_arrangement(rng, 4)
    cone = random_cone(rng)
    rel = comparability(arr, cone)
    u = random_upset(rng, rel)
    assert is_upset(u, rel)
    members = sorted(u.members)
    for _ in range(200):
        x = arr.samples[rng.choice(members)]
        lam = [Fr(rng.randint(0, 20), rng.randint(1, 4)) for _ in cone.vrep]
        q = [sum(c * r[k] for c, r in zip(lam, cone.vrep)) for k in range(2)]
        assert cone.contains(q)
        assert arr.locate(tuple(a + b for a, b in zip(x, q))) in u


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_interior_of_upset_closure_of_downset(seed):
    rng = random.Random(seed)
    arr = random_arrangement(rng, 4)
    rel = comparability(arr, random_cone(rng))
    assert is_upset(random_upset(rng, rel).interior(), rel)
    assert is_downset(random_downset(rng, rel).closure(), rel)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_locate_many_matches_locate(seed):
    rng = random.Random(seed)
    arr = random_arrangement(rng, 4)
    pts = [(Fr(rng.randint(-9, 9), rng.randint(1, 3)), Fr(rng.randint(-9, 9), rng.randint(1, 3))) for _ in range(50)]
    pts += list(arr.samples)
    assert arr.locate_many(pts) == [arr.locate(p) for p in pts]
