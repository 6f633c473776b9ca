"""Exact Fourier-Motzkin elimination with strict inequalities.

A row is a triple ``(a, b, kind)``: an integer coefficient tuple ``a``, a
:class:`~fractions.Fraction` right-hand side ``b`` and ``kind`` one of

* ``GE``: ``a . x >= b``
* ``GT``: ``a . x >  b``
* ``EQ``: ``a . x == b``

Coefficients are kept primitive (gcd 1) so rows stay small; equalities are
eliminated by substitution before any Fourier-Motzkin step.  Combining a
strict row with any row yields a strict row, which is what makes open and
half-open polyhedra come out right.
"""
from fractions import Fraction
from math import floor, ceil, gcd

GE, GT, EQ = 0, 1, 2


def make_row(a, b, kind):
    """Build a normalized row from rational coefficients."""
    from .rational import common_denominator

    vals = [Fraction(v) for v in a] + [Fraction(b)]
    d = common_denominator(vals)
    ints = [int(v * d) for v in vals[:-1]]
    return _norm(tuple(ints), vals[-1] * d, kind)


def _norm(a, b, kind):
    g = 0
    for v in a:
        g = gcd(g, v)
    if g == 0:
        return a, Fraction(b), kind
    if kind == EQ:
        for v in a:
            if v:
                if v < 0:
                    g = -g
                break
    if g != 1:
        a = tuple(v // g for v in a)
        b = Fraction(b) / g
    return a, Fraction(b), kind


def _const_ok(b, kind):
    if kind == GE:
        return b <= 0
    if kind == GT:
        return b < 0
    return b == 0


def _simplify(rows):
    """Drop dominated rows, detect trivial contradictions.

    Returns a list of rows, or ``None`` when the system is infeasible.
    """
    ineq = {}
    eqs = {}
    for a, b, kind in rows:
        if not any(a):
            if not _const_ok(b, kind):
                return None
            continue
        if kind == EQ:
            prev = eqs.get(a)
            if prev is not None and prev != b:
                return None
            eqs[a] = b
        else:
            cur = ineq.get(a)
            if cur is None or b > cur[0] or (b == cur[0] and kind == GT):
                ineq[a] = (b, kind == GT)
    for a in list(ineq):
        if a not in ineq:
            continue
        neg = tuple(-v for v in a)
        if neg not in ineq:
            continue
        b, s = ineq[a]
        c, t = ineq[neg]
        # b <= a.x <= -c
        if b > -c or (b == -c and (s or t)):
            return None
        if b == -c:
            del ineq[a], ineq[neg]
            ra, rb, _ = _norm(a, b, EQ)
            prev = eqs.get(ra)
            if prev is not None and prev != rb:
                return None
            eqs[ra] = rb
    out = [(a, b, EQ) for a, b in eqs.items()]
    out.extend((a, b, GT if s else GE) for a, (b, s) in ineq.items())
    return out


def _substitute(eq, k, rows):
    ea, eb, _ = eq
    ak = ea[k]
    out = []
    for a, b, kind in rows:
        rk = a[k]
        if rk == 0:
            out.append((a, b, kind))
            continue
        na = tuple(ak * x - rk * y for x, y in zip(a, ea))
        out.append(_norm(na, ak * b - rk * eb, kind))
    return out


def _fm_step(k, rows):
    pos, neg, rest = [], [], []
    for r in rows:
        c = r[0][k]
        if c > 0:
            pos.append(r)
        elif c < 0:
            neg.append(r)
        else:
            rest.append(r)
    for pa, pb, pk in pos:
        cp = pa[k]
        for na, nb, nk in neg:
            cn = -na[k]
            a = tuple(cn * x + cp * y for x, y in zip(pa, na))
            kind = GT if (pk == GT or nk == GT) else GE
            rest.append(_norm(a, cn * pb + cp * nb, kind))
    return rest, pos + neg


def _pick_var(rows, allowed):
    best, best_cost = None, None
    for k in allowed:
        p = n = 0
        for a, _, _ in rows:
            if a[k] > 0:
                p += 1
            elif a[k] < 0:
                n += 1
        if p == 0 and n == 0:
            continue
        cost = p * n - (p + n)
        if best is None or cost < best_cost:
            best, best_cost = k, cost
    return best


def _run(rows, allowed):
    """Eliminate the variables in ``allowed``; return (rows, stages) or None."""
    rows = _simplify(rows)
    if rows is None:
        return None
    allowed = list(allowed)
    stages = []
    while True:
        eq = None
        for r in rows:
            if r[2] == EQ:
                k = next((j for j in allowed if r[0][j]), None)
                if k is not None:
                    eq = (r, k)
                    break
        if eq is not None:
            r, k = eq
            others = [s for s in rows if s is not r]
            stages.append(("eq", k, r))
            rows = _simplify(_substitute(r, k, others))
            if rows is None:
                return None
            continue
        k = _pick_var(rows, allowed)
        if k is None:
            return rows, stages
        rows, involved = _fm_step(k, rows)
        stages.append(("fm", k, involved))
        rows = _simplify(rows)
        if rows is None:
            return None


def _choose(lo, lo_strict, hi, hi_strict):
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return Fraction(floor(lo) + 1) if lo_strict else Fraction(ceil(lo))
    if lo is None:
        return Fraction(ceil(hi) - 1) if hi_strict else Fraction(floor(hi))
    if lo == hi:
        return lo
    return (lo + hi) / 2


def project(rows, eliminate):
    """Project the solution set onto the variables not in ``eliminate``.

    Returns rows in the same ambient coordinates (with zero coefficients on
    the eliminated variables), or ``None`` if the system is infeasible.
    """
    res = _run(rows, eliminate)
    return None if res is None else res[0]


def solve(rows, n):
    """Return a rational point satisfying ``rows`` in n variables, or None."""
    res = _run(rows, range(n))
    if res is None:
        return None
    _, stages = res
    x = [Fraction(0)] * n
    for kind, k, data in reversed(stages):
        if kind == "eq":
            a, b, _ = data
            s = sum(a[j] * x[j] for j in range(n) if j != k)
            x[k] = (b - s) / a[k]
            continue
        lo = hi = None
        lo_s = hi_s = False
        for a, b, rk in data:
            c = a[k]
            s = sum(a[j] * x[j] for j in range(n) if j != k and a[j])
            bound = (b - s) / c
            strict = rk == GT
            if c > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_s = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_s = bound, strict
        x[k] = _choose(lo, lo_s, hi, hi_s)
    return tuple(x)


def feasible(rows, n):
    res = _run(rows, range(n))
    return res is not None


def satisfies(row, x):
    a, b, kind = row
    v = sum(Fraction(ai) * xi for ai, xi in zip(a, x))
    if kind == GE:
        return v >= b
    if kind == GT:
        return v > b
    return v == b
