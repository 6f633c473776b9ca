"""Compare the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json out.json]

Each kernel is run once to trigger compilation, then timed; outputs of the
two backends are asserted equal before any timing is reported.
"""
import argparse
import json
import time

import numpy as np

from tamepl import _kernels as K

P = 2_147_483_647


def cases(rng):
    a = rng.integers(0, P, size=(120, 160), dtype=np.int64)
    b = rng.integers(0, P, size=(160, 90), dtype=np.int64)
    adj = rng.random((300, 300)) < 0.01
    normals = rng.integers(-5, 6, size=(12, 3)).astype(np.int64)
    offsets = rng.integers(-5, 6, size=12).astype(np.int64)
    pts = rng.integers(-1000, 1000, size=(20000, 3)).astype(np.int64)
    dens = rng.integers(1, 64, size=20000).astype(np.int64)
    rel = K.transitive_closure(rng.random((400, 400)) < 0.02)
    member = rng.random(400) < 0.5
    return {
        "rref_mod": ((a, P), K._rref_mod_numpy, getattr(K, "_rref_mod_numba", None)),
        "matmul_mod": ((a, b, P), K._matmul_mod_numpy, getattr(K, "_matmul_mod_numba", None)),
        "transitive_closure": ((adj,), K._transitive_closure_numpy, getattr(K, "_transitive_closure_numba", None)),
        "sign_vectors": ((normals, offsets, pts, dens), K._sign_vectors_numpy,
                         getattr(K, "_sign_vectors_numba", None)),
        "upclosed_violations": ((rel, member), K._upclosed_violations_numpy,
                                getattr(K, "_upclosed_violations_numba", None)),
    }


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    return np.array_equal(np.asarray(x), np.asarray(y))


def _time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    rows = {}
    for name, (inp, py, nb) in cases(rng).items():
        ref = py(*inp)
        row = {"numpy_s": _time(py, inp, args.repeat)}
        if nb is not None:
            assert _same(ref, nb(*inp)), f"{name}: backends disagree"
            row["numba_s"] = _time(nb, inp, args.repeat)
            row["speedup"] = row["numpy_s"] / row["numba_s"]
        rows[name] = row
    print(f"numba available: {K.HAS_NUMBA}; default backend: {K.BACKEND}")
    for name, r in rows.items():
        nb = f"{r['numba_s'] * 1e3:9.2f} ms  x{r['speedup']:.1f}" if "numba_s" in r else "n/a"
        print(f"{name:22s} numpy {r['numpy_s'] * 1e3:9.2f} ms   numba {nb}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
