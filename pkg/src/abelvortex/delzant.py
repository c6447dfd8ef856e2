"""Integer linear algebra behind the Delzant construction.

The facet matrix ``beta`` has the primitive outward facet normals as columns,
in facet order. Its integer kernel describes how divisor degrees can be
traded against each other without changing the bundle, and lattice
surjectivity is what lets every bundle be lifted to divisor degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Sequence

from . import _exact as ex
from .errors import NoLiftError, NotDelzantError
from .polytope import LatticePolytope, is_delzant, nonempty_facet_intersections


def column_hnf(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Column-style Hermite normal form ``A U = [H | 0]``.

    Returns ``(H_full, U, r)`` where ``H_full = A U`` (n x d) has its first
    ``r`` columns in lower-echelon form with positive pivots, entries left of
    each pivot reduced into ``[0, pivot)``, and its remaining columns zero.
    ``U`` is unimodular (d x d).
    """
    n = len(A)
    d = len(A[0]) if n else 0
    H = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(d)] for i in range(d)]

    def col_op(dst, src, k):
        # column dst += k * column src
        for M in (H, U):
            for row in M:
                row[dst] += k * row[src]

    def swap(i, j):
        for M in (H, U):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def negate(i):
        for M in (H, U):
            for row in M:
                row[i] = -row[i]

    r = 0
    for i in range(n):
        if r == d:
            break
        # Euclid on row i across columns r..d-1
        while True:
            nz = [j for j in range(r, d) if H[i][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: (abs(H[i][j]), j))
            if jmin != r:
                swap(r, jmin)
            done = True
            for j in range(r + 1, d):
                if H[i][j] != 0:
                    col_op(j, r, -(H[i][j] // H[i][r]))
                    if H[i][j] != 0:
                        done = False
            if done:
                break
        if H[i][r] == 0:
            continue
        if H[i][r] < 0:
            negate(r)
        p = H[i][r]
        for j in range(r):
            col_op(j, r, -(H[i][j] // p))
        r += 1
    return H, U, r


def row_hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF, used to put lattice bases into a canonical form."""
    if not rows:
        return []
    H, _, r = column_hnf([list(col) for col in zip(*rows)])
    return [[H[i][j] for i in range(len(H))] for j in range(r)]


def smith_invariants(A: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    Computed as ratios of determinantal divisors (gcds of k x k minors) of the
    column HNF, which has the same invariants as ``A`` but only ``rank``
    columns.
    """
    H, _, r = column_hnf(A)
    M = [row[:r] for row in H]
    out = []
    prev = 1
    for k in range(1, r + 1):
        g = 0
        for rows in combinations(range(len(M)), k):
            for cols in combinations(range(r), k):
                g = gcd(g, abs(ex.int_det([[M[i][j] for j in cols] for i in rows])))
        out.append(g // prev)
        prev = g
    return out


@dataclass(frozen=True)
class DelzantData:
    beta: tuple[tuple[int, ...], ...]
    surjective_on_lattice: bool
    kernel_basis: tuple[tuple[int, ...], ...]
    admissible_patterns: frozenset
    # cached HNF pieces for lifting
    _hnf: tuple = ()
    _U: tuple = ()
    _rank: int = 0

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def d(self) -> int:
        return len(self.beta[0])

    def forbidden_patterns(self) -> list[tuple[int, ...]]:
        """Minimal facet subsets with empty common intersection."""
        out = []
        for k in range(1, self.d + 1):
            for s in combinations(range(self.d), k):
                fs = frozenset(s)
                if fs in self.admissible_patterns:
                    continue
                if any(set(m) <= fs for m in out):
                    continue
                out.append(s)
        return out

    def to_json(self) -> dict:
        return {
            "beta": [list(r) for r in self.beta],
            "kernel": [list(k) for k in self.kernel_basis],
            "surjective": self.surjective_on_lattice,
            "patterns": sorted_patterns(self.admissible_patterns),
        }


def sorted_patterns(patterns) -> list[list[int]]:
    return sorted((sorted(p) for p in patterns), key=lambda p: (len(p), p))


def from_beta(beta: Sequence[Sequence[int]], patterns=None) -> DelzantData:
    """Lattice data for an arbitrary integer n x d matrix.

    ``patterns`` defaults to every subset of facets (no disjointness
    constraints), which is what the C^n-type coordinate picture gives.
    """
    beta = tuple(tuple(int(x) for x in row) for row in beta)
    n, d = len(beta), len(beta[0])
    H, U, r = column_hnf(beta)
    kernel = [[U[i][j] for i in range(d)] for j in range(r, d)]
    kernel = row_hnf(kernel) if kernel else []
    surjective = r == n and all(f == 1 for f in smith_invariants(beta))
    if patterns is None:
        patterns = frozenset(frozenset(s) for k in range(d + 1)
                             for s in combinations(range(d), k))
    return DelzantData(beta, surjective, tuple(tuple(k) for k in kernel),
                       frozenset(patterns), tuple(map(tuple, H)),
                       tuple(map(tuple, U)), r)


def build(delta: LatticePolytope) -> DelzantData:
    cert = is_delzant(delta)
    if not cert.is_delzant:
        raise NotDelzantError(
            f"polytope fails the Delzant condition at vertices {cert.failing_vertices()}",
            certificate=cert)
    beta = [[u[a] for u in delta.normals] for a in range(delta.dim)]
    return from_beta(beta, nonempty_facet_intersections(delta))


def pushforward_degrees(data: DelzantData, alphaP: Sequence[int]) -> tuple[int, ...]:
    if len(alphaP) != data.d:
        raise ValueError(f"expected {data.d} degrees, got {len(alphaP)}")
    return tuple(sum(b * x for b, x in zip(row, alphaP)) for row in data.beta)


@dataclass(frozen=True)
class Lift:
    """One integer preimage plus the kernel lattice parametrising all others."""

    particular: tuple[int, ...]
    kernel_basis: tuple[tuple[int, ...], ...]

    def point(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        x = list(self.particular)
        for c, k in zip(coeffs, self.kernel_basis):
            x = [a + c * b for a, b in zip(x, k)]
        return tuple(x)


def lift_degrees(data: DelzantData, alphaPrime: Sequence[int]) -> Lift:
    """Solve ``beta x = alphaPrime`` over the integers.

    Forward substitution through the column HNF gives a deterministic
    particular solution; all solutions are that plus the kernel lattice.
    """
    if len(alphaPrime) != data.n:
        raise ValueError(f"expected {data.n} degrees, got {len(alphaPrime)}")
    if not data.surjective_on_lattice:
        raise NoLiftError("facet matrix is not surjective onto the integer lattice")
    lift = try_lift(data, alphaPrime)
    if lift is None:
        raise AssertionError("surjective facet matrix failed to lift")
    return lift


def try_lift(data: DelzantData, alphaPrime: Sequence[int]) -> Lift | None:
    """Like :func:`lift_degrees` but returns ``None`` when no integer preimage exists."""
    H, U, r = data._hnf, data._U, data._rank
    pivot_row = {}
    for j in range(r):
        pivot_row[next(i for i in range(data.n) if H[i][j] != 0)] = j
    y = [0] * r
    for i in range(data.n):
        rest = int(alphaPrime[i]) - sum(H[i][j] * y[j] for j in range(r) if j != pivot_row.get(i))
        if i in pivot_row:
            j = pivot_row[i]
            if rest % H[i][j]:
                return None
            y[j] = rest // H[i][j]
        elif rest != 0:
            return None
    x = tuple(sum(U[i][j] * y[j] for j in range(r)) for i in range(data.d))
    return Lift(x, data.kernel_basis)
