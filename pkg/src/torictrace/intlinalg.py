"""Exact integer and rational linear algebra helpers.

Everything here works over Python ints and fractions.Fraction; no floating
point is used anywhere in the package.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .errors import InputError

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, abs(int(x)))
    return g


def primitivize(v) -> Vector:
    """Divide an integer vector by the gcd of its entries (orientation kept)."""
    g = vec_gcd(v)
    if g == 0:
        raise InputError("cannot primitivize the zero vector")
    return tuple(int(x) // g for x in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v, strict=True))


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def bezout_for_vector(v) -> Vector:
    """An integer vector c with <c, v> = gcd(v), built by iterated extended gcd."""
    g = 0
    coeffs: list[int] = []
    for x in v:
        g2, s, t = extended_gcd(g, int(x))
        coeffs = [c * s for c in coeffs] + [t]
        g = g2
    if g == 0:
        raise InputError("bezout_for_vector needs a nonzero vector")
    return tuple(coeffs)


def det(matrix) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination over Fraction."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise InputError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in matrix]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        result *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return sign * result


def det_int(matrix) -> int:
    d = det(matrix)
    if d.denominator != 1:
        raise InputError("det_int called on a non-integer matrix")
    return int(d)


def minor_det(matrix, rows, cols) -> Fraction:
    sub = tuple(tuple(matrix[r][c] for c in cols) for r in rows)
    return det(sub)


def inverse(matrix) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse via Gauss-Jordan elimination; raises on singular input."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise InputError("inverse needs a square matrix")
    m = [[Fraction(x) for x in row] for row in matrix]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise InputError("matrix is singular")
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
                inv[r] = [a - factor * b for a, b in zip(inv[r], inv[col])]
    return tuple(tuple(row) for row in inv)


def adjugate(matrix) -> Matrix:
    """Adjugate det(M) * M^-1 of an integer matrix, as exact integers."""
    n = len(matrix)
    d = det_int(matrix)
    if d == 0:
        raise InputError("adjugate of a singular matrix is not supported here")
    inv = inverse(matrix)
    adj = []
    for row in inv:
        out = []
        for x in row:
            y = x * d
            if y.denominator != 1:
                raise InputError("adjugate entries came out non-integral")
            out.append(int(y))
        adj.append(tuple(out))
    return tuple(adj)


def matvec(matrix, v):
    return tuple(dot(row, v) for row in matrix)


def solve(matrix, rhs) -> tuple[Fraction, ...]:
    return matvec(inverse(matrix), tuple(Fraction(x) for x in rhs))


def size_k_subsets(n: int, k: int):
    return combinations(range(n), k)
