"""Precision-aware complex scalars and small dense linear algebra.

All numeric kernels are generic over a :class:`Context`, which selects one of
two backends: Python's native ``complex`` when 53 bits suffice, and mpmath
``mpc`` above that.  A computation runs inside ``with ctx.active():`` so that
mpmath operations pick up the requested precision (plus guard bits); native
runs use a null context.  Values keep their precision once created, so results
may safely escape the block.
"""

from __future__ import annotations

import cmath
import math
from contextlib import nullcontext
from fractions import Fraction

import mpmath

GUARD_BITS = 16

Scalar = object  # complex | mpmath.mpc, duck-typed


class Context:
    """Working-precision context; ``bits`` is the mantissa size in bits."""

    __slots__ = ("bits", "native")

    def __init__(self, bits: int = 53):
        if bits < 53:
            raise ValueError("precision must be at least 53 bits")
        self.bits = int(bits)
        self.native = self.bits <= 53

    def __repr__(self):
        return f"Context(bits={self.bits})"

    def active(self):
        """Context manager that makes this precision current."""
        if self.native:
            return nullcontext()
        return mpmath.workprec(self.bits + GUARD_BITS)

    @property
    def eps(self) -> float:
        """Unit roundoff at this precision."""
        return 2.0 ** (1 - self.bits)

    def make(self, re=0.0, im=0.0):
        if self.native:
            return complex(re, im)
        return mpmath.mpc(re, im)

    def convert(self, value):
        """Coerce an int/Fraction/float/complex/mpf/mpc to a backend scalar."""
        if isinstance(value, Fraction):
            if self.native:
                return complex(value.numerator / value.denominator)
            return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
        if self.native:
            return complex(value)
        return mpmath.mpc(value)

    def to_complex(self, value) -> complex:
        """Round a backend scalar to a native complex (for reports/plots)."""
        if isinstance(value, complex):
            return value
        if isinstance(value, (int, float)):
            return complex(value)
        if isinstance(value, Fraction):
            return complex(value.numerator / value.denominator)
        return complex(float(value.real), float(value.imag))

    def sqrt(self, x):
        if self.native:
            return cmath.sqrt(x)
        return mpmath.sqrt(mpmath.mpc(x))

    def root_of_unity(self, k: int, n: int, radius=1.0):
        """radius * exp(2*pi*i*k/n)."""
        if self.native:
            ang = 2.0 * math.pi * k / n
            return radius * complex(math.cos(ang), math.sin(ang))
        ang = 2 * mpmath.pi * k / n
        return radius * mpmath.mpc(mpmath.cos(ang), mpmath.sin(ang))


def scalar_abs(x) -> float:
    """abs() that tolerates ints, Fractions and backend scalars, as float."""
    if isinstance(x, Fraction):
        return abs(x.numerator / x.denominator)
    return float(abs(x))


def lu_det(rows, ctx: Context):
    """Determinant of a small dense matrix by LU with partial pivoting.

    ``rows`` is a list of row lists of backend scalars; it is not modified.
    """
    n = len(rows)
    a = [list(r) for r in rows]
    det = ctx.make(1.0)
    for col in range(n):
        piv, pval = col, abs(a[col][col])
        for r in range(col + 1, n):
            v = abs(a[r][col])
            if v > pval:
                piv, pval = r, v
        if pval == 0:
            return ctx.make(0.0)
        if piv != col:
            a[piv], a[col] = a[col], a[piv]
            det = -det
        pivot = a[col][col]
        det = det * pivot
        inv = 1 / pivot
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f == 0:
                continue
            row_r, row_c = a[r], a[col]
            for c in range(col + 1, n):
                row_r[c] = row_r[c] - f * row_c[c]
    return det


def solve_linear(rows, rhs, ctx: Context):
    """Solve a small dense linear system by Gaussian elimination.

    Raises ZeroDivisionError on a (numerically exact) singular pivot; callers
    treat that as a degenerate configuration.
    """
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv, pval = col, abs(a[col][col])
        for r in range(col + 1, n):
            v = abs(a[r][col])
            if v > pval:
                piv, pval = r, v
        if pval == 0:
            raise ZeroDivisionError("singular linear system")
        if piv != col:
            a[piv], a[col] = a[col], a[piv]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f == 0:
                continue
            for c in range(col, n + 1):
                a[r][c] = a[r][c] - f * a[col][c]
    x = [ctx.make(0.0)] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n]
        for c in range(r + 1, n):
            acc = acc - a[r][c] * x[c]
        x[r] = acc / a[r][r]
    return x


def mat_mul(a, b):
    """Product of two small dense matrices (lists of rows)."""
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = ai[0] * b[0][j]
            for t in range(1, k):
                acc = acc + ai[t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_rank(rows, tol: float) -> int:
    """Numerical rank by row-reduction with partial pivoting."""
    if not rows:
        return 0
    a = [list(r) for r in rows]
    nrows, ncols = len(a), len(a[0])
    scale = max((abs(v) for r in a for v in r), default=0.0)
    if scale == 0:
        return 0
    thresh = tol * float(scale)
    rank = 0
    row = 0
    for col in range(ncols):
        piv, pval = None, thresh
        for r in range(row, nrows):
            v = abs(a[r][col])
            if v > pval:
                piv, pval = r, v
        if piv is None:
            continue
        a[piv], a[row] = a[row], a[piv]
        inv = 1 / a[row][col]
        for r in range(row + 1, nrows):
            f = a[r][col] * inv
            if f == 0:
                continue
            for c in range(col, ncols):
                a[r][c] = a[r][c] - f * a[row][c]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank
