"""Toric target models: C^n, CP^n and Delzant toric manifolds.

All moment values are in pi-units, like the polytopes. For C^n and CP^n the
torus acts through an integer matrix ``C`` of determinant one, and ``t`` is
the additive constant of the moment map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import _exact as ex
from .errors import InvalidInputError
from .polytope import (DEFAULT_EPS, FaceLocation, LatticePolytope, is_delzant,
                       support_value)


def _check_sl(C) -> tuple[tuple[int, ...], ...]:
    try:
        rows = tuple(tuple(int(x) for x in row) for row in C)
        exact = all(x == y for r, row in zip(rows, C) for x, y in zip(r, row))
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"C must be an integer matrix: {exc}") from exc
    if not exact:
        raise InvalidInputError("C must have integer entries")
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise InvalidInputError("C must be a nonempty square matrix")
    if ex.int_det(rows) != 1:
        raise InvalidInputError("C must have determinant 1")
    return rows


def _check_t(t, n) -> tuple[Fraction, ...]:
    ts = tuple(ex.to_fraction(x) for x in t)
    if len(ts) != n:
        raise InvalidInputError(f"t has length {len(ts)}, expected {n}")
    return ts


@dataclass(frozen=True)
class CnModel:
    C: tuple[tuple[int, ...], ...]
    t: tuple[Fraction, ...]

    def __post_init__(self):
        rows = _check_sl(self.C)
        object.__setattr__(self, "C", rows)
        object.__setattr__(self, "t", _check_t(self.t, len(rows)))

    kind = "Cn"

    @property
    def n(self) -> int:
        return len(self.C)


@dataclass(frozen=True)
class CPnModel:
    C: tuple[tuple[int, ...], ...]
    t: tuple[Fraction, ...]

    def __post_init__(self):
        rows = _check_sl(self.C)
        object.__setattr__(self, "C", rows)
        object.__setattr__(self, "t", _check_t(self.t, len(rows)))

    kind = "CPn"

    @property
    def n(self) -> int:
        return len(self.C)


@dataclass(frozen=True)
class ToricModel:
    delta: LatticePolytope

    def __post_init__(self):
        cert = is_delzant(self.delta)
        if not cert.is_delzant:
            raise InvalidInputError(
                f"polytope is not Delzant (vertices {cert.failing_vertices()})")

    kind = "toric"

    @property
    def n(self) -> int:
        return self.delta.dim


TargetModel = Union[CnModel, CPnModel, ToricModel]


@dataclass(frozen=True)
class ConeImage:
    """``apex + cone(generators)``, the moment image of C^n."""

    apex: tuple[Fraction, ...]
    generators: tuple[tuple[int, ...], ...]

    def coordinates(self, c: Sequence):
        """Coefficients ``s`` with ``c = apex + sum_k s_k generators[k]``."""
        G = ex.transpose(self.generators)
        if all(isinstance(x, (int, Fraction)) for x in c):
            return ex.solve(G, [ex.to_fraction(x) - a for x, a in zip(c, self.apex)])
        Gf = np.array(G, dtype=float)
        rhs = np.asarray(c, dtype=float) - np.array([float(a) for a in self.apex])
        return list(np.linalg.solve(Gf, rhs))

    def locate(self, c: Sequence, eps: float = DEFAULT_EPS) -> FaceLocation:
        """Tri-state membership; the cone facets are ``s_k = 0`` (``z_k = 0``)."""
        n = len(self.apex)
        if len(c) != n:
            raise InvalidInputError("point has the wrong dimension")
        s = self.coordinates(c)
        tol = ex.to_fraction(eps) if isinstance(s[0], Fraction) else eps
        violated = tuple(k for k in range(n) if s[k] < -tol)
        if violated:
            return FaceLocation("exterior", violated, -1)
        tight = tuple(k for k in range(n) if abs(s[k]) <= tol)
        if not tight:
            return FaceLocation("interior", (), n)
        return FaceLocation("boundary", tight, n - len(tight))

    def contains_interior(self, c: Sequence, eps: float = DEFAULT_EPS) -> bool:
        return self.locate(c, eps).is_interior


# ------------------------------------------------------------ moment maps

def moment_cn(model: CnModel, z: Sequence[complex]) -> np.ndarray:
    """``t_k - sum_j C[j][k] |z_j|^2`` in pi-units."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (model.n,):
        raise InvalidInputError("z has the wrong length")
    C = np.array(model.C, dtype=float)
    t = np.array([float(x) for x in model.t])
    return t - C.T @ np.abs(z) ** 2


def image_cn(model: CnModel) -> ConeImage:
    return ConeImage(model.t, tuple(tuple(-x for x in row) for row in model.C))


def moment_cpn(model: CPnModel, z: Sequence[complex]) -> np.ndarray:
    """Moment map on homogeneous coordinates ``[z_0 : ... : z_n]``."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (model.n + 1,):
        raise InvalidInputError("z must have n+1 homogeneous coordinates")
    norm2 = np.abs(z) ** 2
    total = norm2.sum()
    if total == 0:
        raise InvalidInputError("homogeneous coordinates cannot all vanish")
    C = np.array(model.C, dtype=float)
    t = np.array([float(x) for x in model.t])
    return t - (C.T @ norm2[1:]) / total


def facet_normals_cpn(model: CPnModel) -> list[tuple[int, ...]]:
    """Primitive outward normals ``C^{-1} e_a`` for ``a = 0..n``, ``e_0 = -sum e_k``."""
    n = model.n
    cinv = ex.inverse(model.C)
    e0 = [Fraction(-1)] * n
    out = [ex.primitive_int(ex.matvec(cinv, e0))]
    for k in range(n):
        ek = [Fraction(int(i == k)) for i in range(n)]
        out.append(ex.primitive_int(ex.matvec(cinv, ek)))
    return out


def image_polytope(model: TargetModel) -> LatticePolytope:
    """Moment polytope; facets of CP^n ordered ``a = 0, 1, ..., n``."""
    if isinstance(model, ToricModel):
        return model.delta
    if not isinstance(model, CPnModel):
        raise TypeError("C^n has an unbounded image; use image_cn")
    n = model.n
    normals = facet_normals_cpn(model)
    # facet a contains t and t - row_k(C) for k != a (facet 0 contains all t - row_k)
    vertices = [list(model.t)] + [[ti - c for ti, c in zip(model.t, row)] for row in model.C]
    offsets = []
    for a, u in enumerate(normals):
        on = vertices[1] if a == 0 else vertices[0]
        offsets.append(sum(ui * xi for ui, xi in zip(u, on)))
    P = LatticePolytope.from_halfspaces(normals, offsets)
    if P.n_facets != n + 1:
        raise AssertionError("CP^n image lost a facet")
    return P


def lambda_limit(Q: LatticePolytope, v: Sequence):
    """Limit of ``v . mu`` along the gradient flow of ``v . mu`` on an orbit.

    For an orbit whose moment image is the open polytope ``Q`` this limit is
    the support function of ``Q``.
    """
    return support_value(Q, v)


def isotropy_algebra(model: CnModel, z: Sequence[complex]) -> list[tuple[int, ...]]:
    """Integer basis of the Lie algebra of the stabiliser of ``z`` in T^n.

    ``v`` fixes ``z`` iff ``(C v)_k = 0`` on the support of ``z``; equivalently
    ``v`` is orthogonal to the rows of ``C`` that span the moment image of the
    complexified orbit.
    """
    support = [k for k, zk in enumerate(z) if zk != 0]
    rows = [model.C[k] for k in support]
    return [ex.primitive_int(b) for b in ex.nullspace(rows, model.n)]


# ------------------------------------------------------------- utilities

def random_sl_matrix(n: int, rng: np.random.Generator, steps: int = 12,
                     max_entry: int = 2) -> tuple[tuple[int, ...], ...]:
    """Random element of SL(n, Z) as a product of elementary matrices."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return ((1,),)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        k = int(rng.integers(-max_entry, max_entry + 1))
        # row_i += k row_j
        M[i] = [a + k * b for a, b in zip(M[i], M[j])]
    return tuple(tuple(r) for r in M)


def t_from_real(values: Sequence[float]) -> tuple[Fraction, ...]:
    """Convert physical moment constants to (exact binary) pi-unit rationals."""
    return tuple(Fraction(float(v) / math.pi) for v in values)


def t_real(model: TargetModel) -> np.ndarray:
    return math.pi * np.array([float(x) for x in model.t])


def model_from_json(obj: dict) -> TargetModel:
    """Parse ``{"kind": "Cn"|"CPn"|"toric", ...}``.

    ``t`` may be given as pi-unit strings under ``"t"`` or ``"t_pi"``, or as
    physical floats under ``"t_real"``.
    """
    kind = obj.get("kind")
    if kind == "toric":
        if "polytope" not in obj:
            raise InvalidInputError("toric target needs a polytope")
        return ToricModel(LatticePolytope.from_json(obj["polytope"]))
    if kind not in ("Cn", "CPn"):
        raise InvalidInputError(f"unknown target kind {kind!r}")
    if "C" not in obj:
        raise InvalidInputError("target needs a matrix C")
    if "t_real" in obj:
        t = t_from_real(obj["t_real"])
    else:
        try:
            t = [ex.to_fraction(x) for x in obj.get("t", obj.get("t_pi"))]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"bad t: {exc}") from exc
    cls = CnModel if kind == "Cn" else CPnModel
    return cls(obj["C"], t)


def model_to_json(model: TargetModel) -> dict:
    if isinstance(model, ToricModel):
        return {"kind": "toric", "polytope": model.delta.to_json()}
    return {"kind": model.kind, "C": [list(r) for r in model.C],
            "t": [ex.fraction_str(x) for x in model.t]}
