"""Exact integer and rational linear algebra.

Vectors are plain tuples (``IntVec`` of ints, ``RatVec`` of ``Fraction``) and
matrices are sequences of row vectors.  Nothing in here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Optional, Sequence

IntVec = tuple[int, ...]
RatVec = tuple[Fraction, ...]
IntMat = Sequence[Sequence[int]]


class LinAlgError(ValueError):
    pass


class NotExtendableError(LinAlgError):
    """Raised when integer vectors cannot be completed to a lattice basis."""

    def __init__(self, divisors: Sequence[int]):
        self.divisors = list(divisors)
        bad = [d for d in self.divisors if d != 1]
        self.divisor = bad[0] if bad else None
        super().__init__(
            f"vectors do not extend to a Z-basis: elementary divisor {self.divisor} "
            f"(divisors {self.divisors})"
        )


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise LinAlgError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def identity(n: int) -> list[IntVec]:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[tuple]:
    return [tuple(col) for col in zip(*m)]


def _check_rectangular(m: Sequence[Sequence]) -> int:
    widths = {len(r) for r in m}
    if len(widths) > 1:
        raise LinAlgError("ragged matrix")
    return widths.pop() if widths else 0


def determinant(m: IntMat) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise LinAlgError("determinant needs a square matrix")
    if n == 0:
        return 1
    a = [[int(x) for x in r] for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_primitive(v: Sequence[int]) -> bool:
    if not any(v):
        raise LinAlgError("primitivity is undefined for the zero vector")
    return reduce(gcd, (abs(int(x)) for x in v)) == 1


def primitive_vector(v: Sequence) -> IntVec:
    """Positive rescaling of a nonzero rational vector to a primitive integer vector."""
    fr = [Fraction(x) for x in v]
    if not any(fr):
        raise LinAlgError("zero vector has no primitive representative")
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints))
    return tuple(x // g for x in ints)


def rank(m: Sequence[Sequence]) -> int:
    return len(_row_reduce([[Fraction(x) for x in r] for r in m])[1])


def _row_reduce(a: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (matrix, pivot columns)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def nullspace(m: Sequence[Sequence]) -> list[IntVec]:
    """Basis of {x : m x = 0}, each vector scaled to a primitive integer vector."""
    cols = _check_rectangular(m)
    if not m:
        return identity(cols)
    a, pivots = _row_reduce([[Fraction(x) for x in r] for r in m])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -a[r][f]
        basis.append(primitive_vector(x))
    return basis


def inverse(m: Sequence[Sequence]) -> list[RatVec]:
    n = len(m)
    if any(len(r) != n for r in m):
        raise LinAlgError("inverse needs a square matrix")
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    aug, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise LinAlgError("matrix is singular")
    return [tuple(r[n:]) for r in aug]


def solve_rational(m: Sequence[Sequence], rhs: Sequence) -> RatVec:
    """Solve m x = rhs exactly (rows of m are the equations)."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise LinAlgError("solve_rational needs a square matrix")
    if len(rhs) != n:
        raise LinAlgError("right-hand side has the wrong length")
    aug = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(m, rhs)]
    aug, pivots = _row_reduce(aug)
    if pivots != list(range(n)):
        raise LinAlgError("matrix is singular")
    return tuple(r[n] for r in aug)


def solve_in_span(vectors: Sequence[Sequence], x: Sequence) -> Optional[RatVec]:
    """Coefficients c with sum c_i vectors_i == x, or None if x is not in the span.

    The vectors must be linearly independent.
    """
    if not vectors:
        return () if not any(x) else None
    cols = transpose(vectors)
    aug = [[Fraction(a) for a in row] + [Fraction(b)] for row, b in zip(cols, x)]
    aug, pivots = _row_reduce(aug)
    k = len(vectors)
    if k in pivots:
        return None
    if pivots != list(range(k)):
        raise LinAlgError("vectors are linearly dependent")
    return tuple(aug[i][k] for i in range(k))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(m: IntMat) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ m == H``; ``H`` is in row
    echelon form with positive pivots and entries above each pivot reduced into
    ``[0, pivot)``.
    """
    cols = _check_rectangular(m)
    h = [[int(x) for x in r] for r in m]
    rows = len(h)
    u = [list(r) for r in identity(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            for mat in (h, u):
                top, bot = mat[r], mat[i]
                mat[r] = [x * p + y * q for p, q in zip(top, bot)]
                mat[i] = [(-b // g) * p + (a // g) * q for p, q in zip(top, bot)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [p - q * s for p, s in zip(h[i], h[r])]
                u[i] = [p - q * s for p, s in zip(u[i], u[r])]
        r += 1
    return h, u


def smith_divisors(m: IntMat) -> list[int]:
    """Elementary divisors d_1 | d_2 | ... of an integer matrix (min(rows, cols) of them)."""
    cols = _check_rectangular(m)
    a = [[int(x) for x in r] for r in m]
    rows = len(a)
    size = min(rows, cols)
    divisors: list[int] = []
    for t in range(size):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    changed = True
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    changed = True
            if changed:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        divisors.append(abs(a[t][t]))
    return divisors + [0] * (size - len(divisors))


def complete_to_unimodular(vs: Sequence[Sequence[int]], dim: Optional[int] = None) -> list[IntVec]:
    """Complete k integer vectors in Z^N to a basis of determinant +1.

    The returned N-k vectors, placed *before* ``vs``, give ``det == +1``.  The
    choice is canonical: HNF of the transposed system, complementary rows of the
    inverse transform, sign of the last returned vector fixed.
    """
    if dim is None:
        if not vs:
            raise LinAlgError("dimension needed for an empty vector list")
        dim = len(vs[0])
    if any(len(v) != dim for v in vs):
        raise LinAlgError("vectors have inconsistent dimension")
    k = len(vs)
    if k == 0:
        return identity(dim)
    divisors = smith_divisors(vs)
    if len(divisors) != k or any(d != 1 for d in divisors):
        raise NotExtendableError(divisors)
    _, u = hermite_normal_form(transpose(vs))
    u_inv = inverse(u)
    # rows of (U^-1)^T are the columns of U^-1
    v_rows = [tuple(int(u_inv[i][j]) for i in range(dim)) for j in range(dim)]
    extra = [list(r) for r in v_rows[k:]]
    if not extra:
        return []
    if determinant([*extra, *vs]) < 0:
        extra[-1] = [-x for x in extra[-1]]
    return [tuple(r) for r in extra]


def dual_basis(b: Sequence[Sequence[int]]) -> list[IntVec]:
    """Integer dual basis d of a unimodular basis b: <d_i, b_j> = delta_ij."""
    d = determinant(b)
    if abs(d) != 1:
        raise LinAlgError(f"basis is not unimodular (det {d})")
    inv = inverse(b)
    return [tuple(int(inv[i][j]) for i in range(len(b))) for j in range(len(b))]


def rational_dual_basis(b: Sequence[Sequence]) -> list[RatVec]:
    """Dual basis of any nonsingular rational basis (inverse transpose)."""
    inv = inverse(b)
    return [tuple(inv[i][j] for i in range(len(b))) for j in range(len(b))]


def nonnegative_combination(generators: Sequence[Sequence], target: Sequence) -> Optional[RatVec]:
    """Find a >= 0 with sum a_i * generators_i == target, or None if infeasible.

    Phase-one simplex over the rationals with Bland's rule.
    """
    rows = len(target)
    m = len(generators)
    if any(len(g) != rows for g in generators):
        raise LinAlgError("generator dimension mismatch")
    tab = []
    for i in range(rows):
        row = [Fraction(generators[j][i]) for j in range(m)]
        rhs = Fraction(target[i])
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        tab.append(row + [Fraction(int(i == k)) for k in range(rows)] + [rhs])
    basis = [m + i for i in range(rows)]
    ncols = m + rows
    cost = [0] * m + [1] * rows
    while True:
        entering = None
        for j in range(ncols):
            if j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(rows))
            if rc < 0:
                entering = j
                break
        if entering is None:
            break
        best = None
        for i in range(rows):
            if tab[i][entering] > 0:
                ratio = tab[i][-1] / tab[i][entering]
                if best is None or (ratio, basis[i]) < best[:2]:
                    best = (ratio, basis[i], i)
        if best is None:
            break  # unbounded direction; cannot happen for a phase-one objective
        i = best[2]
        piv = tab[i][entering]
        tab[i] = [x / piv for x in tab[i]]
        for r in range(rows):
            if r != i and tab[r][entering] != 0:
                f = tab[r][entering]
                tab[r] = [x - f * y for x, y in zip(tab[r], tab[i])]
        basis[i] = entering
    if any(basis[i] >= m and tab[i][-1] != 0 for i in range(rows)):
        return None
    a = [Fraction(0)] * m
    for i, bv in enumerate(basis):
        if bv < m:
            a[bv] = tab[i][-1]
    if any(sum(a[j] * generators[j][i] for j in range(m)) != target[i] for i in range(rows)):
        raise LinAlgError("internal error: simplex certificate does not verify")
    return tuple(a)
