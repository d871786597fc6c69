"""Plane-wave eigensystem of the field-free 1D Dirac Hamiltonian.

H0(p) = c*sigma_x*p + sigma_z*c^2 has eigenvalues +-E(p) with
E(p) = sqrt(c^2 p^2 + c^4). The spinors are real in this representation:
u = N*(1, g), v = N*(-g, 1) with g = c*p/(E + c^2), N = 1/sqrt(1 + g^2),
so u(0) = (1, 0) and v(0) = (0, 1) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MOMENTUM, SPEED_OF_LIGHT, Grid, SpinorField


def free_energy(p, c: float = SPEED_OF_LIGHT):
    """Positive branch E(p) = sqrt(c^2 p^2 + c^4); accepts scalars or arrays."""
    return c * np.hypot(p, c)


@dataclass(frozen=True, eq=False)
class FreeBasis:
    """Eigenvectors and energies for every grid mode, in storage order.

    u[:, j] spans the positive branch (+energies[j]), v[:, j] the negative
    branch (-energies[j]). Both are real unit vectors.
    """

    grid: Grid
    c: float
    energies: np.ndarray
    u: np.ndarray
    v: np.ndarray


def build_free_basis(grid: Grid, c: float = SPEED_OF_LIGHT) -> FreeBasis:
    energies = free_energy(grid.p, c)
    g = c * grid.p / (energies + c * c)
    nrm = 1.0 / np.hypot(1.0, g)
    u = np.stack([nrm, nrm * g])
    v = np.stack([-nrm * g, nrm])
    return FreeBasis(grid=grid, c=float(c), energies=energies, u=u, v=v)


def plane_wave_state(basis: FreeBasis, mode: int, branch: str = "positive") -> SpinorField:
    """Momentum-representation eigenstate concentrated on one box mode."""
    if branch not in ("positive", "negative"):
        raise ValueError(f"branch must be 'positive' or 'negative', got {branch!r}")
    idx = basis.grid.mode_index(mode)
    values = np.zeros((2, basis.grid.Nz), dtype=np.complex128)
    spinors = basis.u if branch == "positive" else basis.v
    values[:, idx] = spinors[:, idx]
    return SpinorField(values=values, rep=MOMENTUM, grid=basis.grid)
