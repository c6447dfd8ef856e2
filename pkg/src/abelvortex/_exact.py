"""Small exact linear algebra over ``fractions.Fraction`` and the integers.

Matrices are lists of rows. Everything here is written for the tiny
dimensions that show up in moment polytopes (n <= 4, d <= 24), so plain
Gaussian elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions, floats (exactly) and ``"p/q"`` strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    # numpy scalars
    if hasattr(x, "item"):
        return to_fraction(x.item())
    raise TypeError(f"cannot convert {x!r} to a rational")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[to_fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = as_matrix(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [v / piv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of the right null space, one vector per basis element."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            vec[pc] = -row[f]
        basis.append(vec)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve a square system exactly; ``None`` when singular."""
    n = len(a)
    aug = [list(row) + [bi] for row, bi in zip(as_matrix(a), (to_fraction(v) for v in b))]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [m[i][n] for i in range(n)]


def det(a: Sequence[Sequence]) -> Fraction:
    m = as_matrix(a)
    n = len(m)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        result *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * result


def inverse(a: Sequence[Sequence]) -> Matrix | None:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(as_matrix(a))]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in m]


def int_det(a: Sequence[Sequence[int]]) -> int:
    d = det(a)
    assert d.denominator == 1
    return int(d)


def primitive_int(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [to_fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive direction")
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def matvec(a: Sequence[Sequence], x: Sequence):
    return [sum(aij * xj for aij, xj in zip(row, x)) for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]
