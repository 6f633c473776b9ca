"""Acceptance criteria, one test per criterion.

Each test records a one-line PASS/FAIL summary; ``conftest.py`` prints the
lines at the end of the run.  ``python3 tests/test_acceptance.py`` runs the
criteria directly and prints the same lines.
"""
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from tamepl.encoding import (Encoding, PLComplex, indicator, sample_probes, comparable_samples, support)
from tamepl.geometry import Arrangement, Cone, HalfSpace, comparability
from tamepl.linalg import Field
from tamepl.poset import FinitePoset, PosetModule
from tamepl.resolutions import (adjust_topology, lift_morphism, pull_back, resolve_complex,
                                verify_resolution)
from tamepl.stratify import clip_bounded, conic_stratification, verify_clip, verify_stratification

sys.path.insert(0, str(Path(__file__).parent))
from gen import (random_arrangement, random_complex, random_compact, random_cone, random_encoding,
                 random_downset, random_hom, random_module, random_upset, short_exact, single)

QQ = Field()
FIX = Path(__file__).parent / "fixtures"
RESULTS = []


def record(n, name, ok, detail):
    line = f"acceptance {n} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def hs(normal, offset, strict=False):
    return HalfSpace(normal, offset, strict)


# 1. interval suite

def criterion_1():
    t0 = time.perf_counter()
    line = Arrangement([((1,), 0), ((1,), 1)])
    chain = FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assign = ["a" if x[0] < 0 else "b" if x[0] < 1 else "c" for x in line.samples]
    enc = Encoding(line, Cone(vrep=[(1,)]), chain, assign)
    m = PosetModule.constant(chain, support=["b"])
    checks = []
    up = resolve_complex(m, "upset")
    ic = pull_back(up, enc)
    regions = {i: [s.region for s in ic.summands(i)] for i in ic.degrees}
    checks.append(regions == {0: [line.region([hs((1,), 0)])], -1: [line.region([hs((1,), 1)])]})
    down = resolve_complex(m, "downset")
    dc = pull_back(down, enc)
    regions = {i: [s.region for s in dc.summands(i)] for i in dc.degrees}
    checks.append(regions == {0: [line.region([hs((-1,), -1, True)])], 1: [line.region([hs((-1,), 0, True)])]})
    for x in (ic, dc):
        checks.append(bool(verify_resolution(x, "alexandrov")))
        checks.append(bool(verify_resolution(x, "conic")))
        checks.append(bool(verify_resolution(adjust_topology(x), "conic")))
    adj = adjust_topology(ic)
    checks.append([s.region for s in adj.summands(-1)] == [line.region([hs((1,), 1, True)])])
    dt = time.perf_counter() - t0
    ok = all(checks) and dt < 1.0
    return record(1, "interval", ok, f"{sum(checks)}/{len(checks)} checks in {dt:.2f}s (limit 1s)")


# 2. square suite

def _square():
    grid = Arrangement([((1, 0), 0), ((1, 0), 1), ((0, 1), 0), ((0, 1), 1)])
    s = grid.region([hs((1, 0), 0), hs((0, 1), 0), hs((-1, 0), -1), hs((0, -1), -1)])
    return grid, indicator(grid, Cone.orthant(2), s)


def criterion_2():
    t0 = time.perf_counter()
    grid, x = _square()
    res = resolve_complex(x.complex, "upset")
    ranks = {-i: len(g) for i, g in res.gens.items()}
    checks = [res.n_summands == 4, ranks == {0: 1, 1: 2, 2: 1}, res.verify() == []]
    ic = adjust_topology(pull_back(res, x.encoding))
    checks.append(bool(verify_resolution(ic, "conic")))
    half_open = grid.region([hs((1, 0), 0, True), hs((0, 1), 0, True), hs((-1, 0), -1), hs((0, -1), -1)])
    checks.append(support(ic, "conic") == half_open)
    s = conic_stratification(x)
    checks.append(len(s) == 1)
    if len(s) == 1:
        st = s.strata[0]
        checks.append(st.region == half_open and st.homology == {0: 1})
    checks.append(bool(verify_stratification(s)))
    dt = time.perf_counter() - t0
    ok = all(checks) and dt < 5.0
    return record(2, "square", ok, f"{sum(checks)}/{len(checks)} checks in {dt:.2f}s (limit 5s)")


# 3. randomized syzygy oracle

def criterion_3(n=100, seed=3):
    rng = random.Random(seed)
    t0 = time.perf_counter()
    passed, notes = 0, []
    for k in range(n):
        enc = random_encoding(rng, random_arrangement(rng, 4))
        poset = enc.poset
        c = random_complex(rng, poset, terms=2)
        ok = len(poset) <= 8 and len(enc.arrangement.hyperplanes) <= 4
        ok &= all(r <= 3 for m in c.terms.values() for r in m.rank.values())
        pl = PLComplex(enc, c)
        ok &= not pl.validate()
        for kind in ("upset", "downset"):
            res = resolve_complex(c, kind)
            ic = pull_back(res, enc)
            ok &= bool(verify_resolution(ic, "alexandrov"))
            ok &= bool(verify_resolution(adjust_topology(ic), "conic"))
            ok &= res.length <= len(poset)
        passed += bool(ok)
        if not ok:
            notes.append(k)
    dt = time.perf_counter() - t0
    ok = passed == n and dt < 60.0
    extra = f", failing cases {notes[:5]}" if notes else ""
    return record(3, "random syzygies", ok, f"{passed}/{n} in {dt:.1f}s (limit 60s){extra}")


# 4. interiors of upsets, closures of downsets

def _same_sheaf(x, y):
    arr, cone = x.arrangement, x.cone
    probes = sample_probes(arr, cone)
    for f in probes:
        if x.at_face(f).signature() != y.at_face(f).signature():
            return False
    for i, j in comparable_samples(arr, cone):
        a, b = x.map_faces(probes[i], probes[j]), y.map_faces(probes[i], probes[j])
        # one summand in degree 0: the maps are 1x1, 1x0, 0x1 or 0x0
        if a.m(0).shape != b.m(0).shape or not QQ.equal(a.m(0), b.m(0)):
            return False
    return True


def criterion_4(n=50, seed=4):
    rng = random.Random(seed)
    passed = 0
    for k in range(2 * n):
        arr = random_arrangement(rng, 4)
        cone = random_cone(rng)
        rel = comparability(arr, cone)
        if k < n:
            u = random_upset(rng, rel)
            passed += _same_sheaf(single("upset", u, cone), single("upset", u.interior(), cone))
        else:
            d = random_downset(rng, rel)
            passed += _same_sheaf(single("downset", d, cone), single("downset", d.closure(), cone))
    return record(4, "upset interiors / downset closures", passed == 2 * n, f"{passed}/{2 * n}")


# 5. exactness of conic stalks

def _rank(m):
    return QQ.rank(m) if m.size else 0


def criterion_5(n=25, seed=5):
    rng = random.Random(seed)
    passed = 0
    for _ in range(n):
        enc = random_encoding(rng, random_arrangement(rng, 4))
        s, m, q, inc, proj = short_exact(rng, enc.poset)
        ok = True
        for f in sample_probes(enc.arrangement, enc.cone):
            e = enc.assign[f]
            a, b = inc[e], proj[e]
            ok &= _rank(a) == s.rank[e]
            ok &= _rank(b) == q.rank[e]
            ok &= s.rank[e] + q.rank[e] == m.rank[e]
            ok &= QQ.is_zero(QQ.matmul(b, a)) if a.size and b.size else True
        passed += bool(ok)
    return record(5, "exact stalk sequences", passed == n, f"{passed}/{n}")


# 6. bounded pieces

def _clip_ok(x):
    ic = adjust_topology(pull_back(resolve_complex(x.complex, "upset"), x.encoding))
    r = clip_bounded(ic)
    return bool(verify_clip(r)) and all(p.region.is_bounded() for p in r.pieces) and len(r) > 0


def criterion_6(n=20, seed=6):
    rng = random.Random(seed)
    passed = _clip_ok(_square()[1])
    for _ in range(n):
        passed += _clip_ok(random_compact(rng))
    return record(6, "bounded pieces", passed == n + 1, f"{passed}/{n + 1}")


# 7. morphism lifting

def criterion_7(n=20, seed=7):
    from gen import boolean_poset
    rng = random.Random(seed)
    passed = 0
    for _ in range(n):
        poset, _ = boolean_poset(rng.randint(1, 3))
        for _ in range(20):
            a, b = random_module(rng, poset), random_module(rng, poset)
            h = random_hom(rng, a, b)
            if not h.is_zero():
                break
        ok = h.is_valid()
        for kind in ("upset", "downset"):
            lifted = lift_morphism(h, resolve_complex(a, kind), resolve_complex(b, kind))
            ok &= lifted.augmentation_defects() == [] and lifted.check_connected() == []
        passed += bool(ok)
    return record(7, "morphism lifting", passed == n, f"{passed}/{n}")


# 8. non-compact rejection

def criterion_8():
    codes = []
    for cmd in ("stratify", "clip"):
        p = subprocess.run([sys.executable, "-m", "tamepl", cmd, str(FIX / "quadrant.json")],
                           capture_output=True, text=True)
        codes.append(p.returncode)
    return record(8, "non-compact rejection", codes == [2, 2], f"exit codes {codes}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k + 1}" for k in range(len(CRITERIA))])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
