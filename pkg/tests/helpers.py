"""Shared generators and brute-force oracles for the test suite."""

from fractions import Fraction
from itertools import combinations, product

import numpy as np
from hypothesis import strategies as st

from abelvortex.polytope import from_halfspaces


def random_polytope(rng, n, extra=3, box=3):
    """Box ``[-box, box]^n`` cut by a few random integer half-spaces through a
    neighbourhood of the origin, so the result is always a full-dimensional
    bounded region containing 0."""
    normals, offsets = [], []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        normals += [e, [-x for x in e]]
        offsets += [box, box]
    for _ in range(extra):
        u = [0] * n
        while not any(u):
            u = [int(x) for x in rng.integers(-3, 4, size=n)]
        normals.append(u)
        offsets.append(Fraction(int(rng.integers(1, 12)), int(rng.integers(1, 4))))
    return from_halfspaces(normals, offsets)


@st.composite
def polytopes(draw, max_dim=3):
    n = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    extra = draw(st.integers(0, 4))
    return random_polytope(np.random.default_rng(seed), n, extra)


def brute_delzant(P):
    """Delzant test from the vertex graph: vertices sharing n-1 facets are
    adjacent, and the primitive edge vectors at each vertex must form a
    lattice basis."""
    n = P.dim
    for i, v in enumerate(P.vertices):
        if len(P.vertex_facets[i]) != n:
            return False
        edges = []
        for j, w in enumerate(P.vertices):
            if j != i and len(P.vertex_facets[i] & P.vertex_facets[j]) == n - 1:
                d = [b - a for a, b in zip(v, w)]
                den = np.lcm.reduce([x.denominator for x in d])
                ints = [int(x * den) for x in d]
                g = np.gcd.reduce([abs(x) for x in ints])
                edges.append([x // g for x in ints])
        if len(edges) != n:
            return False
        if abs(round(np.linalg.det(np.array(edges, dtype=float)))) != 1:
            return False
    return True


def brute_lattice_solutions(beta, alpha, cap):
    """Every ``N >= 0`` with ``sum N <= cap`` and ``beta N = alpha``."""
    d = len(beta[0])
    out = []
    for N in product(range(cap + 1), repeat=d):
        if sum(N) > cap:
            continue
        if all(sum(b * x for b, x in zip(row, N)) == a for row, a in zip(beta, alpha)):
            out.append(N)
    return sorted(out)


def subsets(d):
    for k in range(d + 1):
        yield from combinations(range(d), k)
