"""Run configuration, conjugate grids, and two-component fields.

Atomic units throughout (hbar = m = e = 1, c = 137.036). Lengths in a.u.,
the well geometry is usually quoted in Compton wavelengths lambda_e = 1/c.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields as _dataclass_fields

import numpy as np
import scipy.fft as sfft

SPEED_OF_LIGHT = 137.036

POSITION = "position"
MOMENTUM = "momentum"

WELL_SHAPES = ("two_sided", "one_sided")


class ConfigError(ValueError):
    """A run configuration is inconsistent or cannot be parsed."""


@dataclass(frozen=True)
class SimulationConfig:
    """Physical and numerical parameters of one evolution run.

    V1 scales the binding well, V2 the oscillating part; both share the
    spatial profile. t0 is the ramp time, t1 the plateau, so the total
    duration is 2*t0 + t1.
    """

    c: float
    L: float
    Nz: int
    Nt: int
    V1: float
    V2: float
    omega: float
    D: float
    W1: float
    W2: float
    t0: float
    t1: float
    well_shape: str
    sample_stride: int

    @property
    def c2(self) -> float:
        return self.c * self.c

    @property
    def lambda_e(self) -> float:
        return 1.0 / self.c

    @property
    def total_time(self) -> float:
        return 2.0 * self.t0 + self.t1

    @property
    def dz(self) -> float:
        return self.L / self.Nz

    @property
    def dt(self) -> float:
        return self.total_time / self.Nt


def make_config(**overrides) -> SimulationConfig:
    """Build a validated config; unset fields take the reference defaults.

    Defaults that depend on c (well depth, geometry, times) are derived from
    the resolved c, so overriding c rescales the rest consistently.
    """
    known = {f.name for f in _dataclass_fields(SimulationConfig)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ConfigError("unknown config key(s): " + ", ".join(unknown))
    c = float(overrides.get("c", SPEED_OF_LIGHT))
    if not (c > 0.0) or not math.isfinite(c):
        raise ConfigError(f"c must be positive and finite, got {c}")
    c2 = c * c
    lam = 1.0 / c
    Nt = int(overrides.get("Nt", 10000))
    config = SimulationConfig(
        c=c,
        L=float(overrides.get("L", 2.0)),
        Nz=int(overrides.get("Nz", 2048)),
        Nt=Nt,
        V1=float(overrides.get("V1", 2.0 * c2 - 10000.0)),
        V2=float(overrides.get("V2", 2.0 * c2 - 10000.0)),
        omega=float(overrides.get("omega", 2.1 * c2)),
        D=float(overrides.get("D", 10.0 * lam)),
        W1=float(overrides.get("W1", 0.3 * lam)),
        W2=float(overrides.get("W2", 0.3 * lam)),
        t0=float(overrides.get("t0", 5.0 / c2)),
        t1=float(overrides.get("t1", 20.0 * math.pi / c2)),
        well_shape=str(overrides.get("well_shape", "two_sided")),
        sample_stride=int(overrides.get("sample_stride", max(Nt // 50, 1))),
    )
    validate_config(config)
    return config


def validate_config(config: SimulationConfig) -> None:
    """Raise ConfigError naming the offending field; warn on light-cone wrap."""
    if not (config.L > 0.0):
        raise ConfigError(f"L must be positive, got {config.L}")
    Nz = config.Nz
    if Nz < 2 or (Nz & (Nz - 1)) != 0:
        raise ConfigError(f"Nz must be a power of two >= 2, got {Nz}")
    if config.Nt < 1:
        raise ConfigError(f"Nt must be >= 1, got {config.Nt}")
    if config.sample_stride < 1:
        raise ConfigError(f"sample_stride must be >= 1, got {config.sample_stride}")
    if config.well_shape not in WELL_SHAPES:
        raise ConfigError(
            f"well_shape must be one of {WELL_SHAPES}, got {config.well_shape!r}"
        )
    for key in ("W1", "W2", "D", "t0"):
        value = getattr(config, key)
        if not (value > 0.0):
            raise ConfigError(f"{key} must be positive, got {value}")
    if config.t1 < 0.0:
        raise ConfigError(f"t1 must be >= 0, got {config.t1}")
    if config.omega < 0.0:
        raise ConfigError(f"omega must be >= 0, got {config.omega}")
    for key in ("c", "L", "V1", "V2", "omega", "D", "W1", "W2", "t0", "t1"):
        if not math.isfinite(getattr(config, key)):
            raise ConfigError(f"{key} must be finite")
    # Wavefronts travel at most at c; beyond L/2 they wrap around the box.
    if config.c * config.total_time >= 0.5 * config.L:
        warnings.warn(
            "c * total_time = %.3g >= L/2 = %.3g: outgoing wavefronts can wrap "
            "around the periodic box" % (config.c * config.total_time, 0.5 * config.L),
            RuntimeWarning,
            stacklevel=2,
        )


@dataclass(frozen=True, eq=False)
class Grid:
    """Conjugate position/momentum lattices in DFT storage order.

    z is ascending; mode_numbers and p follow FFT layout
    [0, 1, ..., Nz/2-1, -Nz/2, ..., -1] so index j of an ortho FFT output
    belongs to mode_numbers[j]. The unpaired mode k = -Nz/2 carries p = 0:
    its momentum sign is not representable on the grid, and an odd symbol
    there would break the mirror symmetry z -> -z of the evolution.
    """

    L: float
    Nz: int
    dz: float
    dp: float
    z: np.ndarray
    mode_numbers: np.ndarray
    p: np.ndarray

    def mode_index(self, mode: int) -> int:
        """Storage index of signed mode number."""
        half = self.Nz // 2
        if not (-half <= mode <= half - 1):
            raise ValueError(
                f"mode {mode} outside representable range [{-half}, {half - 1}]"
            )
        return int(mode) % self.Nz

    def ascending_order(self) -> np.ndarray:
        """Permutation putting mode_numbers (and p) in ascending order."""
        return np.argsort(self.mode_numbers, kind="stable")


def build_grid(config: SimulationConfig) -> Grid:
    L = float(config.L)
    Nz = int(config.Nz)
    dz = L / Nz
    z = -0.5 * L + dz * np.arange(Nz)
    modes = np.rint(np.fft.fftfreq(Nz) * Nz).astype(np.int64)
    dp = 2.0 * math.pi / L
    p = dp * modes
    # k = -Nz/2 has no +Nz/2 partner; give the odd symbol p the even choice 0.
    p[Nz // 2] = 0.0
    return Grid(L=L, Nz=Nz, dz=dz, dp=dp, z=z, mode_numbers=modes, p=p)


@dataclass(eq=False)
class SpinorField:
    """Two-component field on the grid; values has shape (2, Nz).

    Position representation: values[c, j] = psi_c(z_j), normalized by
    sum |psi|^2 dz. Momentum representation: values[c, k] is the amplitude
    on the k-th box mode, normalized by a plain sum of squares.
    """

    values: np.ndarray
    rep: str
    grid: Grid


def norm_squared(field: SpinorField) -> float:
    total = float(np.sum(field.values.real**2 + field.values.imag**2))
    if field.rep == POSITION:
        return total * field.grid.dz
    return total


def to_momentum(field: SpinorField) -> SpinorField:
    if field.rep != POSITION:
        raise ValueError(f"expected a position-representation field, got {field.rep!r}")
    values = sfft.fft(field.values, axis=-1, norm="ortho") * math.sqrt(field.grid.dz)
    return SpinorField(values=values, rep=MOMENTUM, grid=field.grid)


def to_position(field: SpinorField) -> SpinorField:
    if field.rep != MOMENTUM:
        raise ValueError(f"expected a momentum-representation field, got {field.rep!r}")
    values = sfft.ifft(field.values, axis=-1, norm="ortho") / math.sqrt(field.grid.dz)
    return SpinorField(values=values, rep=POSITION, grid=field.grid)
