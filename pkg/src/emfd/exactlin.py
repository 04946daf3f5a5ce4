"""Exact linear algebra over the rationals.

Everything here works with fractions.Fraction entries; no floating point is
used anywhere.  Signatures are computed by symmetric congruence reduction,
which is exact and needs no eigenvalues.
"""

from __future__ import annotations

import math
from fractions import Fraction

Rational = Fraction

__all__ = [
    "Rational",
    "rat",
    "rat_from_str",
    "rat_to_str",
    "matrix_from_strs",
    "matrix_to_strs",
    "vector_from_strs",
    "vector_to_strs",
    "SymmetricForm",
    "signature",
    "rank",
    "solve_affine",
    "lcm_denominators",
    "mod_z",
]


def rat(value) -> Fraction:
    """Coerce ints, Fractions, or 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return rat_from_str(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_from_str(text: str) -> Fraction:
    """Parse 'p/q' or 'p' (q > 0 after reduction is automatic)."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def rat_to_str(value: Fraction) -> str:
    """Serialize as 'p/q', or 'p' when the denominator is 1."""
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def matrix_from_strs(rows) -> list[list[Fraction]]:
    return [[rat(x) for x in row] for row in rows]


def matrix_to_strs(rows) -> list[list[str]]:
    return [[rat_to_str(x) for x in row] for row in rows]


def vector_from_strs(entries) -> list[Fraction]:
    return [rat(x) for x in entries]


def vector_to_strs(entries) -> list[str]:
    return [rat_to_str(x) for x in entries]


class SymmetricForm:
    """A symmetric bilinear form on Q^n, stored as an n x n rational matrix."""

    def __init__(self, entries):
        rows = [[rat(x) for x in row] for row in entries]
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ValueError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric at ({i},{j}): "
                        f"{rows[i][j]} != {rows[j][i]}"
                    )
        self.n = n
        self.entries = rows

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def signature(self) -> int:
        return signature(self.entries)

    def to_json(self):
        return matrix_to_strs(self.entries)

    @classmethod
    def from_json(cls, rows):
        return cls(matrix_from_strs(rows))


def _swap_symmetric(m, i, j):
    m[i], m[j] = m[j], m[i]
    for row in m:
        row[i], row[j] = row[j], row[i]


def _clear_with_pivot(m, s, k, n):
    # Congruence row+column elimination below the diagonal pivot at (k,k).
    piv = m[k][k]
    for i in range(s, n):
        if i == k or m[i][k] == 0:
            continue
        f = m[i][k] / piv
        for j in range(n):
            m[i][j] -= f * m[k][j]
        for j in range(n):
            m[j][i] -= f * m[j][k]


def signature(entries) -> int:
    """Signature (#positive - #negative) of a symmetric rational matrix.

    Symmetric congruence diagonalization: repeatedly pivot on the nonzero
    diagonal entry of smallest index in the active block; if the active block
    has an all-zero diagonal but a nonzero off-diagonal entry b, the 2x2 block
    [[0,b],[b,0]] is hyperbolic and contributes one positive and one negative
    unit.  Deterministic, exact, and overflow-free.
    """
    form = SymmetricForm(entries)
    m = [row[:] for row in form.entries]
    n = form.n
    pos = neg = 0
    s = 0
    while s < n:
        k = next((i for i in range(s, n) if m[i][i] != 0), None)
        if k is not None:
            if k != s:
                _swap_symmetric(m, s, k)
            _clear_with_pivot(m, s, s, n)
            if m[s][s] > 0:
                pos += 1
            else:
                neg += 1
            s += 1
            continue
        hyp = next(
            ((i, j) for i in range(s, n) for j in range(i + 1, n) if m[i][j] != 0),
            None,
        )
        if hyp is None:
            break  # active block is zero; remaining vectors are radical
        i, j = hyp
        if i != s:
            _swap_symmetric(m, s, i)
        if j != s + 1:
            _swap_symmetric(m, s + 1, j)
        b = m[s][s + 1]
        assert b != 0 and m[s][s] == 0 and m[s + 1][s + 1] == 0
        for k2 in range(s + 2, n):
            f1 = m[k2][s + 1] / b
            for j2 in range(n):
                m[k2][j2] -= f1 * m[s][j2]
            for j2 in range(n):
                m[j2][k2] -= f1 * m[j2][s]
            f2 = m[k2][s] / b
            for j2 in range(n):
                m[k2][j2] -= f2 * m[s + 1][j2]
            for j2 in range(n):
                m[j2][k2] -= f2 * m[j2][s + 1]
            assert m[k2][s] == 0 and m[k2][s + 1] == 0
        pos += 1
        neg += 1
        s += 2
    return pos - neg


def rank(entries) -> int:
    """Rank of an arbitrary rational matrix (Gaussian elimination)."""
    m = [[rat(x) for x in row] for row in entries]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def solve_affine(matrix, target):
    """Solve R x = t exactly.

    Returns (point, kernel_basis) where point is one solution and
    kernel_basis spans the null space of R, or None when inconsistent.
    """
    m = [[rat(x) for x in row] for row in matrix]
    t = [rat(x) for x in target]
    rows = len(m)
    if rows != len(t):
        raise ValueError("matrix and target sizes differ")
    cols = len(m[0]) if rows else 0
    for row in m:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    aug = [m[i][:] + [t[i]] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None  # 0 = nonzero row: inconsistent
    point = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        point[c] = aug[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -aug[i][fc]
        kernel.append(vec)
    return point, kernel


def lcm_denominators(values) -> int:
    """Least common multiple of the denominators; 1 for an empty list."""
    out = 1
    for v in values:
        out = math.lcm(out, rat(v).denominator)
    return out


def mod_z(value) -> Fraction:
    """Representative of value + Z in [0, 1)."""
    return rat(value) % 1
