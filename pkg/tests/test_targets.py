import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abelvortex import _exact as ex
from abelvortex.errors import InvalidInputError
from abelvortex.polytope import barycentre, is_delzant, locate, support_value, volume
from abelvortex.targets import (CnModel, CPnModel, ToricModel, facet_normals_cpn,
                                image_cn, image_polytope, isotropy_algebra, lambda_limit,
                                model_from_json, model_to_json, moment_cn, moment_cpn,
                                random_sl_matrix, t_from_real, t_real)

sl_seeds = st.integers(0, 2 ** 32 - 1)


def cpn(n, seed, t=None):
    rng = np.random.default_rng(seed)
    C = random_sl_matrix(n, rng)
    if t is None:
        t = [Fraction(int(x), 5) for x in rng.integers(-10, 10, size=n)]
    return CPnModel(C, t)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), sl_seeds)
def test_random_sl_has_det_one(n, seed):
    C = random_sl_matrix(n, np.random.default_rng(seed))
    assert ex.int_det(C) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), sl_seeds)
def test_cpn_image_facts(n, seed):
    m = cpn(n, seed)
    P = image_polytope(m)
    assert volume(P) == Fraction(1, math.factorial(n))
    assert is_delzant(P).is_delzant
    assert list(P.normals) == facet_normals_cpn(m)
    # C maps the normals back to -(1, ..., 1), e_1, ..., e_n
    images = [tuple(ex.matvec(m.C, u)) for u in P.normals]
    assert images[0] == tuple([-1] * n)
    assert images[1:] == [tuple(int(i == k) for i in range(n)) for k in range(n)]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), sl_seeds)
def test_cpn_moment_lands_in_image(n, seed):
    m = cpn(n, seed)
    P = image_polytope(m)
    rng = np.random.default_rng(seed)
    for _ in range(50):
        z = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        mu = moment_cpn(m, z)
        assert np.all(P.normals_array() @ mu <= P.offsets_array() + 1e-12)
    # coordinate points go to the vertices
    verts = set(P.vertices)
    for a in range(n + 1):
        e = np.zeros(n + 1)
        e[a] = 1.0
        mu = moment_cpn(m, e)
        assert any(np.allclose(mu, [float(x) for x in v]) for v in verts)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), sl_seeds)
def test_cn_cone_coordinates_are_norms(n, seed):
    rng = np.random.default_rng(seed)
    m = CnModel(random_sl_matrix(n, rng), [Fraction(int(x)) for x in rng.integers(-5, 5, size=n)])
    cone = image_cn(m)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    s = cone.coordinates(list(moment_cn(m, z)))
    assert np.allclose(s, np.abs(z) ** 2)
    assert cone.locate(list(moment_cn(m, z))).status == "interior"
    z[0] = 0
    loc = cone.locate(list(moment_cn(m, z)))
    assert loc.status == "boundary" and loc.tight_set == (0,)


def test_cn_locate_exterior_exact():
    m = CnModel([[1]], [Fraction(1)])
    cone = image_cn(m)
    assert cone.locate([Fraction(2)]).status == "exterior"
    assert cone.locate([Fraction(1)], eps=0).status == "boundary"
    assert cone.locate([Fraction(-7)]).status == "interior"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), sl_seeds, st.data())
def test_lambda_limit_is_gradient_flow_limit(n, seed, data):
    """Flowing along the complexified action of v pushes v.mu to the support value."""
    m = cpn(n, seed)
    P = image_polytope(m)
    v = [data.draw(st.integers(-3, 3)) for _ in range(n)]
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    Cv = np.array([0.0] + list(np.array(m.C, dtype=float) @ np.array(v, dtype=float)))
    s = 60.0
    zs = z * np.exp(-s * (Cv - Cv.min()))
    flowed = float(np.dot(v, moment_cpn(m, zs)))
    assert math.isclose(flowed, float(lambda_limit(P, v)), abs_tol=1e-9)


def test_isotropy_algebra():
    m = CnModel([[1, 1], [0, 1]], [0, 0])
    assert isotropy_algebra(m, [1, 1]) == []
    basis = isotropy_algebra(m, [1, 0])
    assert len(basis) == 1
    # the generator kills row 0 of C
    assert sum(a * b for a, b in zip(m.C[0], basis[0])) == 0
    assert len(isotropy_algebra(m, [0, 0])) == 2


@pytest.mark.parametrize("C", [[[2]], [[1, 0], [0, 2]], [[1, 2]], [[1.5]], []])
def test_bad_matrix_rejected(C):
    with pytest.raises(InvalidInputError):
        CnModel(C, [0] * max(1, len(C)))


def test_t_length_checked():
    with pytest.raises(InvalidInputError):
        CPnModel([[1, 0], [0, 1]], [0])


def test_toric_requires_delzant():
    from abelvortex.polytope import from_halfspaces
    with pytest.raises(InvalidInputError):
        ToricModel(from_halfspaces([[-1, 0], [0, -1], [1, 2]], [0, 0, 2]))


def test_model_json_roundtrip_and_variants():
    m = model_from_json({"kind": "CPn", "C": [[1]], "t_pi": ["1/2"]})
    assert m.t == (Fraction(1, 2),)
    assert model_from_json(model_to_json(m)) == m
    r = model_from_json({"kind": "Cn", "C": [[1]], "t_real": [math.pi]})
    assert math.isclose(float(r.t[0]), 1.0)
    assert t_real(r)[0] == pytest.approx(math.pi)
    assert t_from_real([math.pi / 2])[0] == Fraction(math.pi / 2 / math.pi)
    with pytest.raises(InvalidInputError):
        model_from_json({"kind": "Foo"})
    with pytest.raises(InvalidInputError):
        model_from_json({"kind": "Cn", "C": [[1]], "t": ["x"]})


def test_moment_input_checks():
    m = CPnModel([[1]], [0])
    with pytest.raises(InvalidInputError):
        moment_cpn(m, [0, 0])
    with pytest.raises(InvalidInputError):
        moment_cpn(m, [1])


def test_cp1_image_and_barycentre():
    m = CPnModel([[1]], [Fraction(1, 2)])
    P = image_polytope(m)
    assert sorted(P.vertices) == [(Fraction(-1, 2),), (Fraction(1, 2),)]
    assert barycentre(P) == (0,)
    assert locate(P, [0]).status == "interior"
    assert support_value(P, [1]) == Fraction(1, 2)
