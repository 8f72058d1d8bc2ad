"""Dense linear algebra in software floating point of user-chosen precision.

Values are mpmath numbers drawn from a private :class:`mpmath.MPContext`, so
different precisions never interfere through mpmath's global context.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from ..errors import InvalidParameter, Singular

MIN_DIGITS = 15


def context(digits):
    """A fresh mpmath context working at ``digits`` decimal digits."""
    if digits < MIN_DIGITS:
        raise InvalidParameter(f"precision_digits must be >= {MIN_DIGITS}, got {digits}")
    ctx = mpmath.MPContext()
    ctx.dps = int(digits)
    return ctx


def big(value, digits):
    """Convert ``value`` to a BigReal (an mpf carrying ``digits`` of precision)."""
    return context(digits).mpf(value)


def _convert(ctx, A, b):
    n = len(A)
    if any(len(row) != n for row in A):
        raise InvalidParameter("matrix must be square")
    if b is not None and len(b) != n:
        raise InvalidParameter(f"right-hand side has length {len(b)}, expected {n}")
    conv = ctx.convert
    A = [[conv(v) for v in row] for row in A]
    b = None if b is None else [conv(v) for v in b]
    return A, b


def lu_factor(A, ctx):
    """In-place Doolittle LU with partial pivoting.

    Returns ``(LU, perm)``.  Raises :class:`Singular` when a pivot is below
    the working precision relative to the largest matrix entry.
    """
    n = len(A)
    LU = [row[:] for row in A]
    perm = list(range(n))
    scale = max((abs(v) for row in LU for v in row), default=ctx.zero)
    floor = scale * ctx.mpf(10) ** (-ctx.dps)
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(LU[i][k]))
        pivot = abs(LU[p][k])
        if pivot == 0 or pivot <= floor:
            raise Singular(
                f"pivot {mpmath.nstr(pivot, 5)} at column {k} underflows the working "
                f"precision of {ctx.dps} digits",
                pivot=pivot,
            )
        if p != k:
            LU[k], LU[p] = LU[p], LU[k]
            perm[k], perm[p] = perm[p], perm[k]
        inv = 1 / LU[k][k]
        row_k = LU[k]
        for i in range(k + 1, n):
            row_i = LU[i]
            m = row_i[k] * inv
            row_i[k] = m
            if m:
                for j in range(k + 1, n):
                    row_i[j] -= m * row_k[j]
    return LU, perm


def lu_solve(LU, perm, b):
    n = len(LU)
    y = [b[perm[i]] for i in range(n)]
    for i in range(n):
        row = LU[i]
        s = y[i]
        for j in range(i):
            s -= row[j] * y[j]
        y[i] = s
    for i in range(n - 1, -1, -1):
        row = LU[i]
        s = y[i]
        for j in range(i + 1, n):
            s -= row[j] * y[j]
        y[i] = s / row[i]
    return y


def residual_inf_norm(A, x, b, digits):
    """``max_i |(A x - b)_i|`` evaluated at ``digits`` decimal digits."""
    ctx = context(digits)
    A, b = _convert(ctx, A, b)
    x = [ctx.convert(v) for v in x]
    return max(abs(ctx.fdot(row, x) - bi) for row, bi in zip(A, b))


def solve_dense(A, b, digits=50, refine_steps=8):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    The factorisation runs at ``digits`` decimal digits; a few steps of
    iterative refinement with residuals accumulated at twice that precision
    follow, and the solution is returned at the doubled precision.  The
    refinement only helps while ``cond(A) * 10**-digits < 1``.
    """
    lo = context(digits)
    hi = context(2 * digits)
    A_lo, b_lo = _convert(lo, A, b)
    if not A_lo:
        return []
    LU, perm = lu_factor(A_lo, lo)
    A_hi, b_hi = _convert(hi, A, b)
    x = [hi.convert(v) for v in lu_solve(LU, perm, b_lo)]
    b_scale = max(abs(v) for v in b_hi)
    if b_scale == 0:
        return [hi.zero for _ in x]
    target = b_scale * hi.mpf(10) ** (-2 * digits + 2)
    previous = None
    for _ in range(refine_steps):
        r = [bi - hi.fdot(row, x) for row, bi in zip(A_hi, b_hi)]
        size = max(abs(v) for v in r)
        if size <= target or (previous is not None and size >= previous):
            break
        previous = size
        d = lu_solve(LU, perm, [lo.convert(v) for v in r])
        x = [xi + hi.convert(di) for xi, di in zip(x, d)]
    return x


def inverse(A, digits=50):
    ctx = context(digits)
    A, _ = _convert(ctx, A, None)
    n = len(A)
    LU, perm = lu_factor(A, ctx)
    cols = []
    for j in range(n):
        e = [ctx.one if i == j else ctx.zero for i in range(n)]
        cols.append(lu_solve(LU, perm, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def condition_estimate(A, digits=50):
    """``||A||_inf * ||A^-1||_inf`` with the inverse formed explicitly.

    Returned as a float; the explicit inverse makes this exact up to working
    precision, which is well within the factor-of-ten contract.
    """
    ctx = context(digits)
    A_c, _ = _convert(ctx, A, None)
    inv = inverse(A_c, digits)
    norm_a = max(sum(abs(v) for v in row) for row in A_c)
    norm_inv = max(sum(abs(v) for v in row) for row in inv)
    return float(norm_a * norm_inv)


def solve_exact(A, b):
    """Gaussian elimination over exact field elements such as Fraction."""
    n = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k] != 0), None)
        if p is None:
            raise Singular(f"matrix is singular at column {k}", pivot=0)
        M[k], M[p] = M[p], M[k]
        piv = M[k][k]
        for i in range(k + 1, n):
            m = M[i][k] / piv
            if m:
                for j in range(k, n + 1):
                    M[i][j] -= m * M[k][j]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return x
