"""Newton solvers for the scalar vortex equations on a flat torus.

C target, with ``pi |phi|^2 = t e^w``::

    Lap w = 4 pi a^2 t (e^w - 1) + 4 pi sum n_i delta_{p_i}

CP^1 target, with ``u`` the log of the fibre coordinate norm and moment
``t - pi sigma(u)``, ``sigma`` the logistic function::

    Lap u = 4 pi a^2 (pi sigma(u) - t) + 4 pi (sum n_i delta_{p_i} - sum m_j delta_{q_j})

Both are solved for the smooth part ``v`` of ``w = S + v`` where ``S`` carries
the point sources through the discrete Green's function. The nonlinearity is
increasing in both cases, so the Newton Jacobian ``Lap - diag(D)`` is
negative definite and the discrete solution is unique.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from ..errors import ConstraintError, ConvergenceError, InfeasibleError, InvalidInputError
from . import backend
from .grid import PointSource, TorusGrid, greens_function, singular_part

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100
MAX_HALVINGS = 30
CG_RTOL = 1e-12


@dataclass
class FieldSolution:
    grid: TorusGrid
    model: str                          # "C" or "CP1"
    smooth: np.ndarray
    singular: np.ndarray
    a: float
    t: float
    vortices: tuple[PointSource, ...]
    antivortices: tuple[PointSource, ...]
    residual_norm: float
    iterations: int
    converged: bool
    tol: float
    residual_history: list[float] = field(default_factory=list)
    backend: str = "numpy"

    @property
    def field(self) -> np.ndarray:
        return self.singular + self.smooth

    @property
    def n_vortices(self) -> int:
        return sum(s.multiplicity for s in self.vortices)

    @property
    def n_antivortices(self) -> int:
        return sum(s.multiplicity for s in self.antivortices)

    @property
    def c(self) -> float:
        """``(N_1 - N_0) / (a^2 Vol M)`` in real units."""
        return (self.n_vortices - self.n_antivortices) / (self.a ** 2 * self.grid.volume)

    def moment(self) -> np.ndarray:
        """Nodal values of the moment map composed with the section."""
        if self.model == "C":
            return self.t * (1.0 - np.exp(self.field))
        K = backend.kernels(self.backend)
        return self.t - math.pi * K.logistic(self.field)

    def energy_density(self) -> np.ndarray:
        K = backend.kernels(self.backend)
        ihx, ihy = 1.0 / self.grid.hx, 1.0 / self.grid.hy
        fn = K.energy_density_taubes if self.model == "C" else K.energy_density_cp1
        return fn(self.field, ihx, ihy, self.a, self.t)


def _check_common(grid, a, tol, max_iter):
    if not isinstance(grid, TorusGrid):
        raise InvalidInputError("grid must be a TorusGrid")
    if not a > 0:
        raise InvalidInputError("coupling a must be positive")
    if not tol > 0 or int(max_iter) != max_iter or max_iter < 0:
        raise InvalidInputError("need tol > 0 and a non-negative integer max_iter")


def _newton(grid, K, residual, v0, tol, max_iter):
    """Damped Newton on ``R(v) = 0`` with ``R' = Lap - diag(D)``.

    Each step solves ``(diag(D) - Lap) dv = R`` by preconditioned conjugate
    gradients; the preconditioner replaces ``D`` by its mean, which is
    diagonal in Fourier space.
    """
    shape = grid.shape
    ihx2, ihy2 = grid.hx ** -2, grid.hy ** -2
    lam = grid.symbol()
    v = v0.copy()
    R, D = residual(v)
    history = [float(np.max(np.abs(R)))]
    its = 0
    while history[-1] > tol and its < max_iter:
        Dm = float(np.mean(D))
        Dc = D
        op = LinearOperator((v.size, v.size), dtype=float,
                            matvec=lambda x: K.helmholtz_apply(x.reshape(shape), Dc, ihx2, ihy2).ravel())
        pre_sym = Dm - lam

        def precond(x):
            return np.fft.irfft2(np.fft.rfft2(x.reshape(shape)) / pre_sym, s=shape).ravel()

        dv, info = cg(op, R.ravel(), rtol=CG_RTOL, atol=0.0, maxiter=10 * v.size,
                      M=LinearOperator(op.shape, matvec=precond, dtype=float))
        if info < 0:
            raise RuntimeError("conjugate gradient breakdown")
        dv = dv.reshape(shape)
        step = 1.0
        for _ in range(MAX_HALVINGS + 1):
            v_new = v + step * dv
            R_new, D_new = residual(v_new)
            r_new = float(np.max(np.abs(R_new)))
            if np.isfinite(r_new) and r_new < history[-1]:
                break
            step *= 0.5
        else:
            break
        v, R, D = v_new, R_new, D_new
        history.append(r_new)
        its += 1
    return v, history, its


def _finish(sol: FieldSolution, strict: bool) -> FieldSolution:
    if strict and not sol.converged:
        err = ConvergenceError(
            f"Newton stalled at residual {sol.residual_norm:.3e} after {sol.iterations} iterations",
            sol.residual_history)
        err.solution = sol
        raise err
    return sol


def solve_taubes(grid: TorusGrid, a: float, t: float, vortices: Sequence[PointSource],
                 tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                 v0: np.ndarray | None = None, strict: bool = True,
                 backend_name: str | None = None) -> FieldSolution:
    """C target: ``w`` with ``|phi|^2 = t e^w / pi``. ``t`` in real units."""
    _check_common(grid, a, tol, max_iter)
    if not t > 0:
        raise InvalidInputError("t must be positive for the C target")
    vortices = tuple(vortices)
    N = sum(s.multiplicity for s in vortices)
    if not N < a * a * t * grid.volume:
        raise InfeasibleError(
            f"N = {N} violates N < a^2 t Vol = {a * a * t * grid.volume:.6g}",
            reason="bradlow_infeasible")
    name = backend.resolve(backend_name)
    K = backend.kernels(name)
    S = singular_part(grid, greens_function(grid), vortices)
    ihx2, ihy2 = grid.hx ** -2, grid.hy ** -2
    coef = 4 * math.pi * a * a * t
    src = 4 * math.pi * N / grid.volume

    def residual(v):
        return K.residual_taubes(v, S, ihx2, ihy2, coef, src)

    v0 = np.zeros(grid.shape) if v0 is None else np.asarray(v0, dtype=float)
    v, hist, its = _newton(grid, K, residual, v0, tol, max_iter)
    sol = FieldSolution(grid, "C", v, S, a, t, vortices, (), hist[-1], its,
                        hist[-1] <= tol, tol, hist, name)
    return _finish(sol, strict)


def solve_cp1(grid: TorusGrid, a: float, t: float, vortices: Sequence[PointSource],
              antivortices: Sequence[PointSource] = (), tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER, v0: np.ndarray | None = None,
              strict: bool = True, backend_name: str | None = None) -> FieldSolution:
    """CP^1 target with moment image ``[t - pi, t]``; ``t`` in real units."""
    _check_common(grid, a, tol, max_iter)
    if not 0 < t < math.pi:
        raise InvalidInputError("t must lie in (0, pi) for the CP^1 target")
    vortices, antivortices = tuple(vortices), tuple(antivortices)
    clash = {s.position for s in vortices} & {s.position for s in antivortices}
    if clash:
        raise ConstraintError(
            f"vortex and antivortex share node(s) {sorted(clash)}: the divisors may not meet")
    Q = sum(s.multiplicity for s in vortices) - sum(s.multiplicity for s in antivortices)
    c = Q / (a * a * grid.volume)
    if not t - math.pi < c < t:
        raise InfeasibleError(
            f"c = {c:.6g} is not inside the moment interval ({t - math.pi:.6g}, {t:.6g})",
            reason="polytope_infeasible")
    name = backend.resolve(backend_name)
    K = backend.kernels(name)
    S = singular_part(grid, greens_function(grid), vortices, antivortices)
    ihx2, ihy2 = grid.hx ** -2, grid.hy ** -2
    coef = 4 * math.pi * a * a
    src = 4 * math.pi * Q / grid.volume

    def residual(v):
        return K.residual_cp1(v, S, ihx2, ihy2, coef, t, src)

    if v0 is None:
        # constant solution of the source-free equation
        v0 = np.full(grid.shape, math.log(t / (math.pi - t)))
    v, hist, its = _newton(grid, K, residual, np.asarray(v0, dtype=float), tol, max_iter)
    sol = FieldSolution(grid, "CP1", v, S, a, t, vortices, antivortices, hist[-1], its,
                        hist[-1] <= tol, tol, hist, name)
    return _finish(sol, strict)


# ------------------------------------------------------------ diagnostics

def _require_converged(sol: FieldSolution):
    if not sol.converged:
        raise InvalidInputError("diagnostics need a converged solution")


def moment_mean(sol: FieldSolution) -> float:
    """Average of the moment map over the torus; equals ``c`` at a solution."""
    _require_converged(sol)
    return float(np.sum(sol.moment()) * sol.grid.cell / sol.grid.volume)


def total_energy(sol: FieldSolution) -> float:
    """Riemann sum of the energy density, normalised so the minimum is ``T``."""
    _require_converged(sol)
    return float(np.sum(sol.energy_density()) * sol.grid.cell)


def flux_fraction(sol: FieldSolution, radius: float) -> float:
    """Share of the total ``|F_A|`` carried within ``radius`` of the sources."""
    _require_converged(sol)
    if not radius > 0:
        raise InvalidInputError("radius must be positive")
    density = sol.a ** 2 * np.abs(sol.moment())
    total = float(np.sum(density))
    if total == 0.0:
        return 0.0
    nodes = np.array([s.position for s in sol.vortices + sol.antivortices],
                     dtype=np.int64).reshape(-1, 2)
    K = backend.kernels(sol.backend)
    mask = K.source_mask(sol.grid.nx, sol.grid.ny, sol.grid.hx, sol.grid.hy, nodes, float(radius))
    return float(np.sum(density[mask]) / total)


def write_field_csv(sol: FieldSolution, path) -> None:
    """One row per node: ``i,j,x,y,field,moment_density,energy_density``."""
    x, y = sol.grid.coords()
    w, mu, e = sol.field, sol.moment(), sol.energy_density()
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["i", "j", "x", "y", "field", "moment_density", "energy_density"])
        for i in range(sol.grid.nx):
            for j in range(sol.grid.ny):
                out.writerow([i, j, f"{x[i]:.17g}", f"{y[j]:.17g}", f"{w[i, j]:.17g}",
                              f"{mu[i, j]:.17g}", f"{e[i, j]:.17g}"])
