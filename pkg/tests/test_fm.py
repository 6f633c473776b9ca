from fractions import Fraction as Fr
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from tamepl import fm
from tamepl.errors import InputError
from tamepl.geometry import HalfSpace, feasible, find_point


def hs(normal, offset=0, strict=False):
    return HalfSpace(normal, offset, strict)


def test_contradictory_pair():
    assert not feasible([hs((1,), 0), hs((-1,), 0, True)])


def test_open_triangle():
    cons = [hs((1, 0), 0, True), hs((0, 1), 0, True), hs((-1, -1), -1, True)]
    assert feasible(cons)
    x = find_point(cons, 2)
    assert all(h.contains(x) for h in cons)


def test_only_closed_solution_excluded():
    # x + y >= 2, x <= 1, y <= 1 forces (1, 1); x < 1 kills it
    cons = [hs((1, 1), 2), hs((-1, 0), -1), hs((0, -1), -1), hs((-1, 0), -1, True)]
    assert not feasible(cons)
    assert feasible(cons[:3])
    assert find_point(cons[:3], 2) == (1, 1)


def test_dimension_mismatch():
    with pytest.raises(InputError):
        feasible([hs((1,), 0), hs((1, 0), 0)])


def test_empty_system_and_equalities():
    assert feasible([], dim=2)
    assert fm.feasible([fm.make_row((1, 1), 1, fm.EQ), fm.make_row((1, -1), 0, fm.EQ)], 2)
    assert fm.solve([fm.make_row((1, 1), 1, fm.EQ), fm.make_row((1, -1), 0, fm.EQ)], 2) == (Fr(1, 2), Fr(1, 2))
    assert not fm.feasible([fm.make_row((1, 1), 1, fm.EQ), fm.make_row((1, 1), 2, fm.EQ)], 2)


def test_projection_keeps_strictness():
    # exists y: x < y < 1  <=>  x < 1
    rows = [fm.make_row((-1, 1), 0, fm.GT), fm.make_row((0, -1), -1, fm.GT)]
    proj = fm.project(rows, [1])
    assert all(fm.satisfies((a[:1], b, k), (Fr(1, 2),)) for a, b, k in proj)
    assert not all(fm.satisfies((a[:1], b, k), (Fr(1),)) for a, b, k in proj)


# grid oracle: integer offsets and normals in {-1,0,1}^2 put every face of
# the constraint arrangement on the 1/8 grid shifted by multiples of 1/16

BOX = [hs((1, 0), -2), hs((-1, 0), -2), hs((0, 1), -2), hs((0, -1), -2)]
GRID = [(Fr(i, 16), Fr(j, 16)) for i in range(-32, 33) for j in range(-32, 33)]


@st.composite
def bounded_systems(draw):
    normals = [n for n in product((-1, 0, 1), repeat=2) if any(n)]
    k = draw(st.integers(1, 4))
    cons = [hs(draw(st.sampled_from(normals)), draw(st.integers(-2, 2)), draw(st.booleans())) for _ in range(k)]
    return BOX + cons


@settings(max_examples=40, deadline=None)
@given(bounded_systems())
def test_feasibility_grid_oracle(cons):
    hit = any(all(h.contains(p) for h in cons) for p in GRID)
    assert feasible(cons) == hit
    if hit:
        x = find_point(cons, 2)
        assert all(h.contains(x) for h in cons)
