"""Exact integer and rational matrix helpers.

Matrices are tuples of row tuples of Python ints (or Fractions where noted).
Vectors are plain tuples.  Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = tuple


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vecmat(v: Sequence, a: Matrix) -> Vector:
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def dot(u: Sequence, v: Sequence) -> int:
    return sum(x * y for x, y in zip(u, v))


def bilinear(u: Sequence, a: Matrix, v: Sequence):
    """u^T a v."""
    return sum(u[i] * sum(a[i][j] * v[j] for j in range(len(v)) if v[j]) for i in range(len(u)) if u[i])


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * x for x in v)


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Divide by the gcd and make the first nonzero entry positive."""
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    w = tuple(int(x) // g for x in v)
    return sign_canonical(w)


def sign_canonical(v: Sequence[int]) -> Vector:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def det(a: Matrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a: Matrix) -> Matrix:
    """Rational inverse (entries are Fractions)."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def to_int_matrix(a: Matrix) -> Matrix:
    out = []
    for row in a:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("matrix is not integral")
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


def to_int_vector(v: Sequence) -> Vector:
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"vector {tuple(v)} is not integral")
        out.append(int(x))
    return tuple(out)


def int_inverse(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    return to_int_matrix(inverse(a))


def solve(a: Matrix, b: Sequence) -> Vector:
    """Unique rational solution x of a x = b for square invertible a."""
    return matvec(inverse(a), b)


def rank(a: Matrix) -> int:
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def column_reduce_form(w: Sequence[int]) -> tuple[int, Matrix]:
    """Reduce the row vector w by unimodular column operations.

    Returns (g, V) with V unimodular and w V = (g, 0, ..., 0), g = gcd(w) >= 0.
    Column 0 of V is then a preimage of g and the remaining columns span the
    integer kernel of w.
    """
    n = len(w)
    row = list(w)
    cols = [[int(i == j) for i in range(n)] for j in range(n)]  # cols[j] = column j of V
    while True:
        nz = [j for j in range(n) if row[j] != 0]
        if len(nz) <= 1:
            break
        j0 = min(nz, key=lambda j: (abs(row[j]), j))
        for j in nz:
            if j != j0:
                q = row[j] // row[j0]
                row[j] -= q * row[j0]
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[j0])]
    nz = [j for j in range(n) if row[j] != 0]
    if nz:
        j0 = nz[0]
        if j0 != 0:
            row[0], row[j0] = row[j0], row[0]
            cols[0], cols[j0] = cols[j0], cols[0]
        if row[0] < 0:
            row[0] = -row[0]
            cols[0] = [-x for x in cols[0]]
    v = transpose(tuple(tuple(c) for c in cols))
    return row[0], v


def hermite_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style reduced Hermite normal form of the lattice spanned by `rows`.

    Zero rows are dropped.  The result is a canonical basis of the lattice:
    pivots positive, entries above each pivot reduced into [0, pivot).
    """
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(m[i][c]), i))
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
    out = [row for row in m[:r] if any(row)]
    return tuple(tuple(row) for row in out)


def integer_kernel(w: Sequence[int]) -> Matrix:
    """Canonical (Hermite-reduced) basis, as rows, of {x in Z^n : w . x = 0}."""
    _, v = column_reduce_form(w)
    basis = [tuple(v[i][j] for i in range(len(w))) for j in range(1, len(w))]
    return hermite_rows(basis)


def congruence_diagonal(a: Matrix) -> list[Fraction]:
    """Diagonal of a symmetric rational matrix after congruence diagonalisation.

    Symmetric Gaussian elimination; a zero pivot with a nonzero off-diagonal
    partner is fixed by the substitution e_i -> e_i + e_j.
    """
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise ValueError("matrix is not symmetric")
    diag: list[Fraction] = []
    active = list(range(n))
    while active:
        i = next((k for k in active if m[k][k] != 0), None)
        if i is None:
            pair = next(((k, l) for k in active for l in active if k != l and m[k][l] != 0), None)
            if pair is None:
                diag.extend(Fraction(0) for _ in active)
                break
            k, l = pair
            # e_k <- e_k + e_l
            for t in range(n):
                m[k][t] += m[l][t]
            for t in range(n):
                m[t][k] += m[t][l]
            i = k
        piv = m[i][i]
        diag.append(piv)
        active.remove(i)
        for k in active:
            if m[k][i] != 0:
                f = m[k][i] / piv
                for t in range(n):
                    m[k][t] -= f * m[i][t]
                for t in range(n):
                    m[t][k] -= f * m[t][i]
    return diag


def signature(a: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric matrix, computed exactly."""
    d = congruence_diagonal(a)
    return (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0))


def solve_least(a: Matrix, b: Sequence) -> Vector:
    """Exact solution x of a x = b for a full-column-rank (possibly tall) matrix.

    Raises ValueError when the system is inconsistent.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix does not have full column rank")
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        raise ValueError("inconsistent system")
    return tuple(m[i][cols] for i in range(cols))
