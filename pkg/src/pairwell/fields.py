"""Well geometry and the time dependence of the applied potential.

The potential separates as V(z, t) = g(t) * S(z). S is a smoothed
rectangular well (or a single smoothed step); g combines a ramped static
depth V1 with an oscillation V2*sin(omega*t) gated to the plateau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Grid, SimulationConfig


def shape_two_sided(z, D: float, W1: float, W2: float):
    """Well profile in [-1, 0]: edge at +D/2 has width W1, at -D/2 width W2."""
    z = np.asarray(z, dtype=float)
    return 0.5 * (np.tanh((z - 0.5 * D) / W1) - np.tanh((z + 0.5 * D) / W2))


def shape_one_sided(z, W: float, L: float = 2.0):
    """Single full-swing field edge of width W rising through z = 0.

    A monotone step cannot live on a periodic box, so the far side is
    brought back to zero by a companion edge parked at -L/4 with width
    L/16: wide enough to add no sharp field structure of its own, yet
    narrow enough that the profile saturates to -1 between the edges
    and stays below 4e-4 in magnitude at the wrap seam z = +-L/2. The
    companion's unsaturated tail also leaves a positive skirt of at
    most 4e-4 right of the surviving edge; the well convention (-1
    inside, 0 outside) otherwise matches shape_two_sided.
    """
    z = np.asarray(z, dtype=float)
    return 0.5 * (np.tanh(z / W) - np.tanh((z + 0.25 * L) / (L / 16.0)))


def theta(t: float, a: float, b: float) -> float:
    """Window indicator for the half-open interval [a, b)."""
    if a > b:
        raise ValueError(f"empty window: a = {a} > b = {b}")
    return 1.0 if a <= t < b else 0.0


def envelope(t: float, t0: float, t1: float) -> float:
    """Ramp/plateau/ramp window: sin rise on [0, t0), 1 on [t0, t0+t1),
    cos fall on [t0+t1, 2*t0+t1], exactly 0 at both ends."""
    total = 2.0 * t0 + t1
    if t < 0.0 or t > total:
        raise ValueError(f"t = {t} outside the pulse window [0, {total}]")
    return (
        math.sin(math.pi * t / (2.0 * t0)) * theta(t, 0.0, t0)
        + theta(t, t0, t0 + t1)
        + math.cos(math.pi * (t - t0 - t1) / (2.0 * t0)) * theta(t, t0 + t1, total)
    )


@dataclass(frozen=True, eq=False)
class FieldSampler:
    """Separable potential sampled on a grid: V(z_j, t) = time_factor(t) * shape[j]."""

    config: SimulationConfig
    shape: np.ndarray

    def time_factor(self, t: float) -> float:
        cfg = self.config
        return cfg.V1 * envelope(t, cfg.t0, cfg.t1) + cfg.V2 * math.sin(
            cfg.omega * t
        ) * theta(t, cfg.t0, cfg.t0 + cfg.t1)

    def profile(self, t: float) -> np.ndarray:
        return self.time_factor(t) * self.shape

    def potential(self, j: int, t: float) -> float:
        return self.time_factor(t) * float(self.shape[j])


def build_sampler(config: SimulationConfig, grid: Grid) -> FieldSampler:
    if config.well_shape == "one_sided":
        shape = shape_one_sided(grid.z, config.W1, config.L)
    else:
        shape = shape_two_sided(grid.z, config.D, config.W1, config.W2)
    return FieldSampler(config=config, shape=shape)
