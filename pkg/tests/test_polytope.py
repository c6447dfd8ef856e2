import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from abelvortex.errors import DegenerateError, InvalidInputError, UnboundedError
from abelvortex.polytope import (barycentre, from_halfspaces, is_delzant, locate,
                                 nonempty_facet_intersections, primitive_vector,
                                 support_value, translate, triangulate,
                                 unimodular_image, volume)

from helpers import brute_delzant, polytopes, random_polytope, subsets


def simplex(n):
    normals = [[int(i == k) for i in range(n)] for k in range(n)] + [[-1] * n]
    return from_halfspaces(normals, [0] * n + [1])


def square():
    return from_halfspaces([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 1, 1, 1])


# ------------------------------------------------------------ construction

def test_simplex_volume_and_barycentre():
    P = simplex(3)
    assert volume(P) == Fraction(1, 6)
    assert barycentre(P) == (Fraction(-1, 4),) * 3
    assert is_delzant(P).is_delzant


def test_square_patterns():
    pats = nonempty_facet_intersections(square())
    expected = {frozenset()} | {frozenset({j}) for j in range(4)} | {
        frozenset(s) for s in [(0, 2), (0, 3), (1, 2), (1, 3)]}
    assert pats == expected


def test_non_primitive_normals_are_rescaled():
    P = from_halfspaces([[2, 0], [-1, 0], [0, 3], [0, -1]], [2, 0, 3, 0])
    assert P.normals == ((1, 0), (-1, 0), (0, 1), (0, -1))
    assert P.offsets == (1, 0, 1, 0)


def test_redundant_and_duplicate_facets_dropped():
    P = from_halfspaces([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [1, 0]],
                        [1, 1, 1, 1, 5, 1])
    assert P.n_facets == 4
    assert P.normals == ((1, 0), (-1, 0), (0, 1), (0, -1))


def test_non_delzant_triangle_certificate():
    P = from_halfspaces([[-1, 0], [0, -1], [1, 2]], [0, 0, 2])
    cert = is_delzant(P)
    assert not cert.is_delzant
    assert cert.failing_vertices()
    # vertex (0, 1) has edges (0, -1) and (2, -1)
    assert sorted(abs(d) for d in cert.determinants) == [1, 1, 2]
    assert cert.failing_vertices() == [P.vertices.index((0, 1))]


@pytest.mark.parametrize("normals, offsets, err", [
    ([[1, 0], [0, 1]], [1, 1], UnboundedError),
    ([[1, 0], [-1, 0]], [1, 1], UnboundedError),
    ([[1], [-1]], [0, -1], DegenerateError),
    ([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, 0, 1, 1], DegenerateError),
    ([[0, 0], [1, 0]], [1, 1], InvalidInputError),
    ([[1, 0]], [1, 2], InvalidInputError),
])
def test_bad_halfspaces(normals, offsets, err):
    with pytest.raises(err):
        from_halfspaces(normals, offsets)


def test_primitive_vector():
    assert primitive_vector((2, 4, -6)) == (1, 2, -3)
    with pytest.raises(InvalidInputError):
        primitive_vector((0, 0))


# ---------------------------------------------------------------- locate

def test_locate_square():
    P = square()
    assert locate(P, [0, 0]).status == "interior"
    b = locate(P, [1, 0])
    assert (b.status, b.tight_set, b.face_dim) == ("boundary", (0,), 1)
    v = locate(P, [1, 1])
    assert (v.status, v.tight_set, v.face_dim) == ("boundary", (0, 2), 0)
    e = locate(P, [2, 0])
    assert (e.status, e.tight_set, e.face_dim) == ("exterior", (0,), -1)


def test_locate_exact_ignores_eps_scale():
    P = square()
    c = [Fraction(1) - Fraction(1, 10 ** 12), 0]
    assert locate(P, c, eps=0).status == "interior"
    assert locate(P, c).status == "boundary"


def test_locate_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        locate(square(), [0, 0, 0])


# -------------------------------------------------------- oracle checks

@settings(max_examples=60, deadline=None)
@given(polytopes())
def test_volume_matches_convex_hull(P):
    V = P.vertices_array()
    if P.dim == 1:
        ref = V.max() - V.min()
    else:
        ref = ConvexHull(V).volume
    assert math.isclose(float(volume(P)), ref, rel_tol=1e-9)


@settings(max_examples=40, deadline=None)
@given(polytopes(max_dim=3).filter(lambda P: P.dim >= 2))
def test_vertices_match_halfspace_intersection(P):
    A = P.normals_array()
    hs = np.hstack([A, -P.offsets_array()[:, None]])
    ref = HalfspaceIntersection(hs, np.zeros(P.dim)).intersections
    ours = P.vertices_array()
    # every scipy point is (close to) one of ours and vice versa
    dist = np.linalg.norm(ref[:, None, :] - ours[None, :, :], axis=2)
    assert dist.min(axis=1).max() < 1e-8
    assert dist.min(axis=0).max() < 1e-8


@settings(max_examples=25, deadline=None)
@given(polytopes())
def test_barycentre_monte_carlo(P):
    rng = np.random.default_rng(0)
    V = P.vertices_array()
    lo, hi = V.min(axis=0), V.max(axis=0)
    x = rng.uniform(lo, hi, size=(200_000, P.dim))
    inside = np.all(x @ P.normals_array().T <= P.offsets_array(), axis=1)
    ref = x[inside].mean(axis=0)
    scale = np.max(hi - lo)
    assert np.max(np.abs(np.array([float(b) for b in barycentre(P)]) - ref)) < 0.02 * scale


@settings(max_examples=60, deadline=None)
@given(polytopes())
def test_delzant_matches_vertex_graph_oracle(P):
    assert is_delzant(P).is_delzant == brute_delzant(P)


@settings(max_examples=30, deadline=None)
@given(polytopes(max_dim=3))
def test_patterns_match_lp_oracle(P):
    pats = nonempty_facet_intersections(P)
    A, b = P.normals_array(), P.offsets_array()
    for s in subsets(P.n_facets):
        if len(s) > P.dim + 1:
            continue
        s = list(s)
        res = linprog(np.zeros(P.dim), A_ub=A, b_ub=b,
                      A_eq=A[s] if s else None, b_eq=b[s] if s else None,
                      bounds=[(None, None)] * P.dim, method="highs")
        assert (res.status == 0) == (frozenset(s) in pats), s


@settings(max_examples=60, deadline=None)
@given(polytopes(), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_support_value_matches_lp(P, v):
    v = v[:P.dim]
    res = linprog(-np.array(v, dtype=float), A_ub=P.normals_array(), b_ub=P.offsets_array(),
                  bounds=[(None, None)] * P.dim, method="highs")
    exact = support_value(P, v)
    assert isinstance(exact, Fraction)
    assert math.isclose(float(exact), -res.fun, rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(support_value(P, [float(x) for x in v]), float(exact), abs_tol=1e-12)


@settings(max_examples=40, deadline=None)
@given(polytopes(), st.data())
def test_translation_covariance(P, data):
    s = [Fraction(data.draw(st.integers(-9, 9)), data.draw(st.integers(1, 5)))
         for _ in range(P.dim)]
    Q = translate(P, s)
    assert volume(Q) == volume(P)
    assert barycentre(Q) == tuple(b + x for b, x in zip(barycentre(P), s))
    assert is_delzant(Q).is_delzant == is_delzant(P).is_delzant
    # the translated description matches a fresh construction
    R = from_halfspaces(Q.normals, Q.offsets)
    assert R.vertices == Q.vertices


@settings(max_examples=40, deadline=None)
@given(polytopes(max_dim=3), st.integers(0, 2 ** 32 - 1))
def test_unimodular_invariance(P, seed):
    from abelvortex.targets import random_sl_matrix
    U = random_sl_matrix(P.dim, np.random.default_rng(seed), steps=6, max_entry=1)
    Q = unimodular_image(P, U)
    assert volume(Q) == volume(P)
    assert is_delzant(Q).is_delzant == is_delzant(P).is_delzant
    mapped = sorted(tuple(sum(U[i][k] * v[k] for k in range(P.dim)) for i in range(P.dim))
                    for v in P.vertices)
    assert list(Q.vertices) == mapped


@settings(max_examples=40, deadline=None)
@given(polytopes())
def test_triangulation_covers_volume(P):
    simplices = triangulate(P)
    assert all(len(s) == P.dim + 1 for s in simplices)
    assert volume(P) > 0


@settings(max_examples=60, deadline=None)
@given(polytopes(), st.data())
def test_locate_agrees_with_contains(P, data):
    c = [Fraction(data.draw(st.integers(-16, 16)), 4) for _ in range(P.dim)]
    loc = locate(P, c, eps=0)
    assert (loc.status != "exterior") == P.contains(c)
    assert (loc.status == "interior") == P.contains(c, strict=True)


def test_random_polytope_helper_is_reproducible():
    a = random_polytope(np.random.default_rng(3), 2)
    b = random_polytope(np.random.default_rng(3), 2)
    assert a == b
