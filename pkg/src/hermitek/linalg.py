"""Dense LU with full pivoting over gmpy2 scalars, plus a 1-norm condition
estimate (Hager's method, as used by LAPACK's xGECON).

Matrices are lists of row lists.  Callers run these inside the arithmetic
context of their scalars.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .errors import IllConditionedError


@dataclass
class LU:
    lu: list
    row_perm: list
    col_perm: list
    n: int

    def solve(self, b):
        n, lu = self.n, self.lu
        y = [b[self.row_perm[i]] for i in range(n)]
        for i in range(n):
            row = lu[i]
            acc = y[i]
            for j in range(i):
                acc -= row[j] * y[j]
            y[i] = acc
        for i in range(n - 1, -1, -1):
            row = lu[i]
            acc = y[i]
            for j in range(i + 1, n):
                acc -= row[j] * y[j]
            y[i] = acc / row[i]
        x = [None] * n
        for i in range(n):
            x[self.col_perm[i]] = y[i]
        return x

    def solve_transpose(self, b):
        """Solve A^T x = b with A = P^T L U Q^T."""
        n, lu = self.n, self.lu
        z = [b[self.col_perm[i]] for i in range(n)]
        # U^T w = z
        for i in range(n):
            acc = z[i]
            for j in range(i):
                acc -= lu[j][i] * z[j]
            z[i] = acc / lu[i][i]
        # L^T v = w (unit diagonal)
        for i in range(n - 1, -1, -1):
            acc = z[i]
            for j in range(i + 1, n):
                acc -= lu[j][i] * z[j]
            z[i] = acc
        x = [None] * n
        for i in range(n):
            x[self.row_perm[i]] = z[i]
        return x


def norm1(a) -> object:
    n = len(a)
    return max(sum(abs(a[i][j]) for i in range(n)) for j in range(n))


def lu_factor(a, exact: bool, precision: int | None = None) -> LU:
    """Full-pivoting LU.  Raises IllConditionedError on a (numerically) zero pivot.

    In float mode a pivot is treated as zero when it falls below
    ``n * 2**-p * max|a_ij|``: at that point it is indistinguishable from
    rounding noise.
    """
    n = len(a)
    lu = [list(row) for row in a]
    rp = list(range(n))
    cp = list(range(n))
    amax = max(abs(x) for row in a for x in row)
    if exact:
        threshold = 0
    else:
        p = precision or gmpy2.get_context().precision
        threshold = amax * n * gmpy2.mpfr(2) ** (-p)
    for k in range(n):
        best, bi, bj = -1, k, k
        for i in range(k, n):
            row = lu[i]
            for j in range(k, n):
                v = abs(row[j])
                if v > best:
                    best, bi, bj = v, i, j
        if best <= threshold:
            raise IllConditionedError(
                f"singular collocation matrix at step {k} (pivot {float(best):.3g})",
                precision=precision,
            )
        if bi != k:
            lu[k], lu[bi] = lu[bi], lu[k]
            rp[k], rp[bi] = rp[bi], rp[k]
        if bj != k:
            for row in lu:
                row[k], row[bj] = row[bj], row[k]
            cp[k], cp[bj] = cp[bj], cp[k]
        pivrow = lu[k]
        piv = pivrow[k]
        for i in range(k + 1, n):
            row = lu[i]
            if row[k] == 0:
                continue
            m = row[k] / piv
            row[k] = m
            for j in range(k + 1, n):
                row[j] -= m * pivrow[j]
    return LU(lu, rp, cp, n)


def inverse_norm1_estimate(f: LU, one) -> object:
    """Lower bound on ||A^-1||_1 (Hager 1984, Higham 1988 refinement)."""
    n = f.n
    x = [one / n] * n
    est = None
    last_j = -1
    for _ in range(5):
        y = f.solve(x)
        new_est = sum(abs(v) for v in y)
        if est is not None and new_est <= est:
            break
        est = new_est
        xi = [one if v >= 0 else -one for v in y]
        z = f.solve_transpose(xi)
        j = max(range(n), key=lambda i: abs(z[i]))
        ztx = sum(zi * xi_ for zi, xi_ in zip(z, x))
        if abs(z[j]) <= ztx or j == last_j:
            break
        last_j = j
        x = [one * 0] * n
        x[j] = one
    # Higham's alternating-sign test vector guards against underestimates
    alt = [one * ((-1) ** i) * (1 + one * i / max(n - 1, 1)) for i in range(n)]
    y = f.solve(alt)
    alt_est = 2 * sum(abs(v) for v in y) / (3 * n)
    return max(est, alt_est)


def condition_estimate(a, f: LU, one) -> float:
    return float(norm1(a) * inverse_norm1_estimate(f, one))


def matvec(a, x):
    out = []
    for row in a:
        acc = row[0] * x[0]
        for j in range(1, len(x)):
            acc += row[j] * x[j]
        out.append(acc)
    return out
