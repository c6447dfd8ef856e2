"""Existence verdicts and moduli classification for toric vortices.

Over a Riemann surface, vortex solutions with target C^n, CP^n or a Delzant
toric manifold are classified by effective divisors, one per facet of the
moment polytope. This module turns the bundle data into the constant ``c``
that decides existence, enumerates the divisor degrees compatible with the
bundle, and evaluates the topological (Bogomolny) energy of each component.

Membership logic runs in pi-units; energies are reported in real units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from . import delzant as dz
from .errors import InvalidInputError, PreconditionError
from .polytope import (DEFAULT_EPS, FaceLocation, LatticePolytope, barycentre,
                       locate, support_value, volume)
from .targets import (CnModel, CPnModel, TargetModel, ToricModel, image_cn,
                      image_polytope)

DEFAULT_CAP = 20

COMPLETE = "complete"
COMPLETE_CPN = "complete for CP^n, conjecturally complete otherwise"


@dataclass(frozen=True)
class BaseBundleData:
    """Pairings of the bundle's Chern classes with the Kahler class of the base.

    On a Riemann surface ``pairing_deg`` is the integer degree vector and
    ``pairing_self`` vanishes; use :meth:`surface` for that case.
    """

    n: int
    base_volume: float
    pairing_deg: tuple
    pairing_self: tuple
    coupling_a: float
    genus: int | None = None

    def __post_init__(self):
        if not self.base_volume > 0:
            raise InvalidInputError("base volume must be positive")
        if not self.coupling_a > 0:
            raise InvalidInputError("coupling constant must be positive")
        if len(self.pairing_deg) != self.n or len(self.pairing_self) != self.n:
            raise InvalidInputError(f"pairings must have length {self.n}")
        if self.genus is not None and self.genus < 0:
            raise InvalidInputError("genus must be non-negative")
        object.__setattr__(self, "pairing_deg", tuple(self.pairing_deg))
        object.__setattr__(self, "pairing_self", tuple(self.pairing_self))

    @classmethod
    def surface(cls, alpha: Sequence[int], base_volume: float, coupling_a: float,
                genus: int | None = None) -> "BaseBundleData":
        try:
            alpha = tuple(_as_int(x) for x in alpha)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"surface degrees must be integers: {exc}") from exc
        return cls(len(alpha), float(base_volume), alpha, (0,) * len(alpha),
                   float(coupling_a), genus)

    @property
    def is_surface(self) -> bool:
        return (all(x == 0 for x in self.pairing_self)
                and all(isinstance(x, int) for x in self.pairing_deg))

    @property
    def alpha(self) -> tuple[int, ...]:
        if not self.is_surface:
            raise PreconditionError("degree vector is only defined for a surface base")
        return self.pairing_deg

    @property
    def c_real(self) -> np.ndarray:
        return np.array(self.pairing_deg, dtype=float) / (self.coupling_a ** 2 * self.base_volume)

    @property
    def c_pi(self) -> np.ndarray:
        return self.c_real / math.pi


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not degrees")
    if isinstance(x, int):
        return x
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"{x!r} is not an integer")
    return int(f)


@dataclass(frozen=True)
class ExistenceVerdict:
    c: tuple[float, ...]        # pi-units
    location: FaceLocation
    message: str
    caveat: bool = False

    @property
    def status(self) -> str:
        return self.location.status

    @property
    def c_real(self) -> tuple[float, ...]:
        return tuple(math.pi * x for x in self.c)


def existence_verdict(target: TargetModel, data: BaseBundleData,
                      eps: float = DEFAULT_EPS) -> ExistenceVerdict:
    """Locate ``c = deg P / (a^2 Vol M)`` in the moment image of the target."""
    if target.n != data.n:
        raise InvalidInputError(f"target has rank {target.n} but bundle data has rank {data.n}")
    c = tuple(float(x) for x in data.c_pi)
    if isinstance(target, CnModel):
        loc = image_cn(target).locate(c, eps)
    else:
        loc = locate(image_polytope(target), c, eps)
    if loc.status == "exterior":
        msg = "c lies outside the moment image: no solutions"
        return ExistenceVerdict(c, loc, msg)
    if loc.status == "interior":
        return ExistenceVerdict(c, loc, "c is interior: solutions exist")
    facets = ",".join(map(str, loc.tight_set))
    msg = (f"c lies on the face cut out by facets {{{facets}}} (dimension {loc.face_dim}); "
           "any solution has sections confined to the preimage of the closed face and "
           "meets its relative interior")
    # the boundary statement is only established when the face is top-dimensional
    return ExistenceVerdict(c, loc, msg, caveat=loc.face_dim != target.n)


# ------------------------------------------------------------- components

@dataclass(frozen=True)
class ModuliComponent:
    degrees: tuple[int, ...]
    factors: tuple[str, ...]
    complex_dim: int
    energy: float | None
    constraints: tuple[tuple[int, ...], ...] = ()

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees), "dim": self.complex_dim,
                "energy": self.energy,
                "constraints": [list(s) for s in self.constraints]}


@dataclass(frozen=True)
class ModuliDescription:
    components: tuple[ModuliComponent, ...]
    diagnostic: str = ""
    completeness: str = COMPLETE
    truncated: bool = False

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    @property
    def degrees(self) -> list[tuple[int, ...]]:
        return [c.degrees for c in self.components]


def _component(degrees, energy, constraints=()) -> ModuliComponent:
    degrees = tuple(int(x) for x in degrees)
    return ModuliComponent(degrees, tuple(f"S^{k}M" for k in degrees), sum(degrees),
                           energy, tuple(tuple(s) for s in constraints))


def _require_interior(target, data, eps):
    if not data.is_surface:
        raise PreconditionError("classification needs a Riemann-surface base")
    v = existence_verdict(target, data, eps)
    if v.status != "interior":
        raise PreconditionError(f"existence verdict is {v.status}, not interior")
    return v


def classify_cn(target: CnModel, data: BaseBundleData,
                eps: float = DEFAULT_EPS) -> ModuliDescription:
    """Single product of symmetric powers with ``N = C alpha``, or empty."""
    _require_interior(target, data, eps)
    N = [sum(c * a for c, a in zip(row, data.alpha)) for row in target.C]
    if any(x < 0 for x in N):
        return ModuliDescription((), f"divisor degrees {N} include a negative entry")
    T = energy_topological(target, data)
    return ModuliDescription((_component(N, T),))


def classify_cpn(target: CPnModel, data: BaseBundleData, cap: int = DEFAULT_CAP,
                 eps: float = DEFAULT_EPS) -> ModuliDescription:
    """Degrees ``(N_0, ..., N_n)`` with ``N_l - N_0 = (C alpha)_l``, total at most ``cap``."""
    if cap < 0:
        raise InvalidInputError("cap must be non-negative")
    _require_interior(target, data, eps)
    n = target.n
    shift = [sum(c * a for c, a in zip(row, data.alpha)) for row in target.C]
    n0 = max(0, -min(shift))
    everything = (tuple(range(n + 1)),)
    comps = []
    while (n + 1) * n0 + sum(shift) <= cap:
        N = (n0,) + tuple(n0 + s for s in shift)
        comps.append(_component(N, energy_topological(target, data, N), everything))
        n0 += 1
    return ModuliDescription(tuple(comps), truncated=True)


def _kernel_box(x0, K, cap):
    """Integer box for ``m`` containing every ``x0 + K^T m`` in the capped orthant."""
    k, d = len(K), len(x0)
    A = np.array(K, dtype=float).T            # d x k
    # -(x0 + A m) <= 0  and  sum(x0 + A m) <= cap
    A_ub = np.vstack([-A, A.sum(axis=0, keepdims=True)])
    b_ub = np.concatenate([np.array(x0, dtype=float), [cap - sum(x0)]])
    box = []
    for i in range(k):
        lo_hi = []
        for sign in (1, -1):
            cost = np.zeros(k)
            cost[i] = sign
            res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * k,
                          method="highs")
            if res.status == 2:
                return None
            if res.status != 0:
                raise RuntimeError(f"kernel bound LP failed: {res.message}")
            lo_hi.append(sign * res.fun)
        box.append(range(math.floor(lo_hi[0] - 1e-7), math.ceil(lo_hi[1] + 1e-7) + 1))
    return box


def enumerate_degrees(data: dz.DelzantData, alpha: Sequence[int], cap: int):
    """All ``N >= 0`` with ``beta N = alpha`` and ``sum N <= cap``, sorted.

    Returns ``None`` when ``alpha`` is not in the integer image of ``beta``.
    """
    lift = dz.try_lift(data, alpha)
    if lift is None:
        return None
    K = lift.kernel_basis
    if not K:
        x = lift.particular
        return [x] if min(x, default=0) >= 0 and sum(x) <= cap else []
    box = _kernel_box(lift.particular, K, cap)
    if box is None:
        return []
    out = []
    for m in product(*box):
        x = lift.point(m)
        if min(x) >= 0 and sum(x) <= cap:
            out.append(x)
    return sorted(out)


def _is_unit_simplex(P: LatticePolytope) -> bool:
    return P.n_facets == P.dim + 1 and volume(P) == Fraction(1, math.factorial(P.dim))


def classify_toric(target: ToricModel, data: BaseBundleData, cap: int = DEFAULT_CAP,
                   eps: float = DEFAULT_EPS,
                   delzant: dz.DelzantData | None = None) -> ModuliDescription:
    """Facet-indexed divisor degrees for a Delzant toric target.

    ``delzant`` overrides the lattice data built from the polytope; it exists
    so that degenerate facet matrices can be exercised directly.
    """
    if cap < 0:
        raise InvalidInputError("cap must be non-negative")
    _require_interior(target, data, eps)
    D = delzant if delzant is not None else dz.build(target.delta)
    degrees = enumerate_degrees(D, data.alpha, cap)
    simplex = _is_unit_simplex(target.delta)
    label = COMPLETE if simplex else COMPLETE_CPN
    if degrees is None:
        return ModuliDescription(
            (), f"degree vector {list(data.alpha)} is not in the integer image of the facet matrix",
            label)
    constraints = D.forbidden_patterns()
    comps = []
    for N in degrees:
        if dz.pushforward_degrees(D, N) != tuple(data.alpha):
            raise AssertionError("enumerated degrees do not push forward to alpha")
        T = energy_topological(target, data, N) if simplex else None
        comps.append(_component(N, T, constraints))
    diag = "" if simplex else "energy: not derived in source"
    return ModuliDescription(tuple(comps), diag, label, truncated=True)


def classify(target: TargetModel, data: BaseBundleData, cap: int = DEFAULT_CAP,
             eps: float = DEFAULT_EPS) -> ModuliDescription:
    if isinstance(target, CnModel):
        return classify_cn(target, data, eps)
    if isinstance(target, CPnModel):
        return classify_cpn(target, data, cap, eps)
    return classify_toric(target, data, cap, eps)


# ----------------------------------------------------------------- energy

def energy_topological(target: TargetModel, data: BaseBundleData,
                       degrees: Sequence[int] | None = None) -> float | None:
    """Bogomolny energy of a solution, in real units.

    ``None`` for toric targets other than unit simplices, where no closed
    formula is available.
    """
    a2 = data.coupling_a ** 2
    self_term = sum(float(s) for s in data.pairing_self) / a2
    if isinstance(target, CnModel):
        t = [math.pi * float(x) for x in target.t]
        return sum(tk * float(dk) for tk, dk in zip(t, data.pairing_deg)) - self_term
    if isinstance(target, ToricModel) and not _is_unit_simplex(target.delta):
        return None
    if degrees is None:
        raise InvalidInputError("CP^n energy needs the divisor degrees")
    n = target.n
    if len(degrees) != n + 1:
        raise InvalidInputError(f"expected {n + 1} divisor degrees")
    b = [math.pi * float(x) for x in barycentre(image_polytope(target))]
    return (sum(bk * float(dk) for bk, dk in zip(b, data.pairing_deg)) - self_term
            + math.pi / (n + 1) * sum(degrees))


def stability_inequality(Q: LatticePolytope, data: BaseBundleData, v: Sequence) -> float:
    """``-v . deg P + a^2 Vol M * pi * h_Q(v)`` in real units.

    Positive for every nonzero ``v`` exactly when ``c`` is interior to ``Q``.
    """
    v = [float(x) for x in v]
    deg = sum(vk * float(dk) for vk, dk in zip(v, data.pairing_deg))
    return -deg + data.coupling_a ** 2 * data.base_volume * math.pi * float(support_value(Q, v))


# --------------------------------------------------------------- ord/mult

def ord_mult_convert(values: Sequence[int], direction: str) -> tuple[int, ...]:
    """Switch between vanishing orders and boundary multiplicities.

    ``"ord->mult"`` takes the n orders of a section relative to the zeroth
    coordinate and returns n+1 non-negative multiplicities with minimum 0;
    ``"mult->ord"`` inverts it.
    """
    vals = [_as_int(x) for x in values]
    if direction == "ord->mult":
        ords = [0] + vals
        m = min(ords)
        return tuple(o - m for o in ords)
    if direction == "mult->ord":
        if not vals or min(vals) != 0:
            raise InvalidInputError("multiplicities must be non-negative with at least one zero")
        return tuple(x - vals[0] for x in vals[1:])
    raise InvalidInputError(f"unknown direction {direction!r}")
