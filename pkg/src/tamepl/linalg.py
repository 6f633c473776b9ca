"""Exact linear algebra over Q or F_p.

Matrices are numpy arrays: ``dtype=object`` holding :class:`Fraction` over
Q, ``int64`` with entries in ``[0, p)`` over F_p.  Shapes with a zero
dimension are legal everywhere and stand for maps into or out of the zero
space.
"""
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import InputError
from .rational import to_fraction, format_fraction, common_denominator


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """The ground field: ``Field()`` is Q, ``Field(p)`` is F_p."""

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise InputError(f"field characteristic {p} is not prime")
            if p >= 2 ** 31:
                raise InputError("F_p is supported for p < 2**31")
        self.p = p
        self.dtype = object if p is None else np.int64

    @classmethod
    def parse(cls, text):
        """``"q"`` or ``"fp:<p>"``."""
        s = str(text).strip().lower()
        if s in ("q", "qq", "rational"):
            return cls()
        if s.startswith("fp:"):
            try:
                return cls(int(s[3:]))
            except ValueError:
                raise InputError(f"bad field name {text!r}") from None
        raise InputError(f"bad field name {text!r}; expected 'q' or 'fp:<p>'")

    @property
    def name(self):
        return "q" if self.p is None else f"fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Field(Q)" if self.p is None else f"Field(F_{self.p})"

    # -- elements -----------------------------------------------------------

    def coerce(self, x, path=None):
        v = to_fraction(x, path)
        if self.p is None:
            return v
        return (v.numerator * pow(v.denominator, -1, self.p)) % self.p

    def format(self, x):
        return format_fraction(x) if self.p is None else str(int(x))

    def array(self, data, shape=None, path=None):
        if shape is not None and (shape[0] == 0 or shape[1] == 0):
            return self.zeros(*shape)
        rows = list(data)
        if not rows:
            return self.zeros(0, shape[1] if shape else 0)
        out = self.zeros(len(rows), len(rows[0]))
        for i, row in enumerate(rows):
            if len(row) != out.shape[1]:
                raise InputError("ragged matrix", path)
            for j, v in enumerate(row):
                out[i, j] = self.coerce(v, path)
        if shape is not None and out.shape != tuple(shape):
            raise InputError(f"matrix shape {out.shape} != expected {tuple(shape)}", path)
        return out

    def zeros(self, r, c):
        if self.p is None:
            out = np.empty((r, c), dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros((r, c), dtype=np.int64)

    def eye(self, n):
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = Fraction(1) if self.p is None else 1
        return out

    def one(self):
        return Fraction(1) if self.p is None else 1

    # -- arithmetic ---------------------------------------------------------

    def matmul(self, a, b):
        if a.shape[1] != b.shape[0]:
            raise InputError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        if self.p is None:
            return a @ b
        return _kernels.matmul_mod(a, b, self.p)

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def scale(self, c, a):
        c = self.coerce(c)
        return c * a if self.p is None else (c * a) % self.p

    def is_zero(self, a):
        return a.size == 0 or not np.any(a != 0)

    def equal(self, a, b):
        return a.shape == b.shape and (a.size == 0 or bool(np.all(a == b)))

    def hstack(self, mats, rows):
        mats = [m for m in mats if m.shape[1]]
        if not mats:
            return self.zeros(rows, 0)
        return np.hstack(mats)

    def vstack(self, mats, cols):
        mats = [m for m in mats if m.shape[0]]
        if not mats:
            return self.zeros(0, cols)
        return np.vstack(mats)

    def block_diag(self, a, b):
        out = self.zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0]:, a.shape[1]:] = b
        return out

    # -- elimination --------------------------------------------------------

    def rref(self, a):
        """Reduced row echelon form ``(R, pivots)``."""
        if self.p is not None:
            r, piv = _kernels.rref_mod(a, self.p)
            return r, tuple(int(c) for c in piv)
        rows = [list(r) for r in a]
        nr, nc = a.shape
        pivots = []
        rank = 0
        for c in range(nc):
            if rank == nr:
                break
            k = next((i for i in range(rank, nr) if rows[i][c] != 0), None)
            if k is None:
                continue
            rows[rank], rows[k] = rows[k], rows[rank]
            inv = 1 / Fraction(rows[rank][c])
            rows[rank] = [v * inv for v in rows[rank]]
            piv_row = rows[rank]
            for i in range(nr):
                f = rows[i][c]
                if i != rank and f != 0:
                    rows[i] = [x - f * y for x, y in zip(rows[i], piv_row)]
            pivots.append(c)
            rank += 1
        out = self.zeros(nr, nc)
        for i, r in enumerate(rows):
            out[i, :] = r
        return out, tuple(pivots)

    def rank(self, a):
        if a.size == 0:
            return 0
        if self.p is not None:
            return len(self.rref(a)[1])
        # fraction-free (Bareiss) elimination on an integer scaling of the rows
        rows = []
        for r in a:
            d = common_denominator(r)
            rows.append([int(Fraction(v) * d) for v in r])
        nr, nc = len(rows), len(rows[0])
        rank = 0
        prev = 1
        for c in range(nc):
            if rank == nr:
                break
            k = next((i for i in range(rank, nr) if rows[i][c] != 0), None)
            if k is None:
                continue
            rows[rank], rows[k] = rows[k], rows[rank]
            piv = rows[rank][c]
            for i in range(rank + 1, nr):
                f = rows[i][c]
                rows[i] = [(piv * x - f * y) // prev for x, y in zip(rows[i], rows[rank])]
            prev = piv
            rank += 1
        return rank

    def nullspace(self, a):
        """Columns spanning ``{x : a x = 0}``, in RREF-canonical form."""
        nr, nc = a.shape
        if nc == 0:
            return self.zeros(0, 0)
        if nr == 0:
            return self.eye(nc)
        r, piv = self.rref(a)
        free = [c for c in range(nc) if c not in piv]
        out = self.zeros(nc, len(free))
        one = self.one()
        for j, f in enumerate(free):
            out[f, j] = one
            for i, pc in enumerate(piv):
                out[pc, j] = -r[i, f] if self.p is None else (-int(r[i, f])) % self.p
        return out

    def solve(self, a, b):
        """Some ``X`` with ``a X = b``, or ``None`` when inconsistent."""
        nr, nc = a.shape
        k = b.shape[1]
        if nr == 0:
            return self.zeros(nc, k)
        aug = self.hstack([a, b], nr) if k else a
        if aug.shape[1] == 0:
            return self.zeros(nc, k)
        r, piv = self.rref(aug)
        if any(c >= nc for c in piv):
            return None
        x = self.zeros(nc, k)
        for i, pc in enumerate(piv):
            x[pc, :] = r[i, nc:]
        return x

    def independent_columns(self, a):
        """Indices of a greedy maximal independent subset of columns."""
        if a.size == 0:
            return ()
        return self.rref(a)[1]

    def extend_basis(self, span, dim):
        """Standard basis indices completing ``span`` (columns) to ``k^dim``.

        Greedy in index order, deterministic.
        """
        chosen = []
        cur = span if span.shape[1] else self.zeros(dim, 0)
        r = self.rank(cur) if cur.size else 0
        for i in range(dim):
            e = self.zeros(dim, 1)
            e[i, 0] = self.one()
            trial = self.hstack([cur, e], dim)
            rt = self.rank(trial)
            if rt > r:
                chosen.append(i)
                cur, r = trial, rt
            if r == dim:
                break
        return chosen
