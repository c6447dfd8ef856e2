"""Periodic grids, point sources and the discrete Green's function."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True)
class TorusGrid:
    Lx: float
    Ly: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.Lx > 0 and self.Ly > 0):
            raise InvalidInputError("torus side lengths must be positive")
        for m in (self.nx, self.ny):
            if int(m) != m or m < 16 or m % 2:
                raise InvalidInputError("node counts must be even integers >= 16")

    @property
    def hx(self) -> float:
        return self.Lx / self.nx

    @property
    def hy(self) -> float:
        return self.Ly / self.ny

    @property
    def cell(self) -> float:
        return self.hx * self.hy

    @property
    def volume(self) -> float:
        return self.Lx * self.Ly

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        return np.arange(self.nx) * self.hx, np.arange(self.ny) * self.hy

    def snap(self, x: float, y: float) -> tuple[int, int]:
        """Nearest node to ``(x, y)``, wrapped into the fundamental domain."""
        return (int(round(x / self.hx)) % self.nx, int(round(y / self.hy)) % self.ny)

    def symbol(self) -> np.ndarray:
        """Eigenvalues of the 5-point Laplacian on the ``rfft2`` frequency grid."""
        kx = np.arange(self.nx)[:, None]
        ky = np.arange(self.ny // 2 + 1)[None, :]
        return ((2 * np.cos(2 * np.pi * kx / self.nx) - 2) / self.hx ** 2
                + (2 * np.cos(2 * np.pi * ky / self.ny) - 2) / self.hy ** 2)


@dataclass(frozen=True)
class PointSource:
    position: tuple[int, int]
    multiplicity: int = 1

    def __post_init__(self):
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise InvalidInputError("multiplicity must be a positive integer")


def sources_from_points(grid: TorusGrid, points: Sequence[Sequence[float]]) -> list[PointSource]:
    """``[[x, y, mult], ...]`` in physical coordinates to snapped sources."""
    out = []
    for p in points:
        if len(p) not in (2, 3):
            raise InvalidInputError("a source is [x, y] or [x, y, multiplicity]")
        mult = p[2] if len(p) == 3 else 1
        out.append(PointSource(grid.snap(p[0], p[1]), mult))
    return out


def greens_function(grid: TorusGrid) -> np.ndarray:
    """Zero-mean ``G`` with ``Lap_h G = (delta_0 - 1/(nx ny)) / cell``."""
    rhs = np.full(grid.shape, -1.0 / (grid.nx * grid.ny))
    rhs[0, 0] += 1.0
    rhs /= grid.cell
    lam = grid.symbol()
    fh = np.fft.rfft2(rhs)
    lam[0, 0] = 1.0
    fh /= lam
    fh[0, 0] = 0.0
    return np.fft.irfft2(fh, s=grid.shape)


def singular_part(grid: TorusGrid, G: np.ndarray, vortices, antivortices=()) -> np.ndarray:
    """``4 pi (sum n_i G(. - p_i) - sum m_j G(. - q_j))``."""
    S = np.zeros(grid.shape)
    for sign, group in ((1.0, vortices), (-1.0, antivortices)):
        for s in group:
            S += sign * s.multiplicity * np.roll(G, s.position, axis=(0, 1))
    return 4 * np.pi * S
