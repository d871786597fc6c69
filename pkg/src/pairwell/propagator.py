"""Strang split-operator evolution of the negative-energy continuum.

Every negative-branch box mode is propagated through the time-dependent
well in one batched tensor; samples along the way carry the transition
matrix U[p, n] = <u_p | psi_n(t)> whose squared magnitudes are the created
pair densities. A dense matrix-exponential propagator on tiny grids serves
as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
import scipy.fft as sfft

from .basis import FreeBasis, build_free_basis
from .core import Grid, SimulationConfig, SpinorField, build_grid, to_momentum, to_position
from .fields import FieldSampler, build_sampler

NORM_ABORT = 1e-6
DENSE_MAX_NZ = 64


class PropagationError(RuntimeError):
    """Unitarity lost beyond recovery (or non-finite values appeared)."""

    def __init__(self, step: int, mode: int, drift: float):
        super().__init__(
            f"norm drift {drift:.3e} on mode {mode} at step {step} "
            f"exceeds {NORM_ABORT:g}"
        )
        self.step = step
        self.mode = mode
        self.drift = drift


def kinetic_phase(basis: FreeBasis, mode: int, dt: float) -> np.ndarray:
    """Exact one-mode kinetic propagator exp(-i H0(p) dt) as a 2x2 matrix.

    exp(-i H0 dt) = cos(E dt) I - i sin(E dt) H0/E, evaluated in closed form.
    """
    idx = basis.grid.mode_index(mode)
    E = float(basis.energies[idx])
    p = float(basis.grid.p[idx])
    c = basis.c
    cos = math.cos(E * dt)
    sin_over_E = math.sin(E * dt) / E
    a00 = cos - 1j * (c * c) * sin_over_E
    a01 = -1j * (c * p) * sin_over_E
    return np.array([[a00, a01], [a01, np.conj(a00)]])


def _kinetic_factors(basis: FreeBasis, dt: float):
    """Diagonal (a00) and off-diagonal (a01) kick factors for all modes."""
    E = basis.energies
    sin_over_E = np.sin(E * dt) / E
    a00 = np.cos(E * dt) - 1j * (basis.c * basis.c) * sin_over_E
    a01 = -1j * (basis.c * basis.grid.p) * sin_over_E
    return a00, a01


def split_step(
    field: SpinorField,
    t: float,
    dt: float,
    sampler: FieldSampler,
    basis: FreeBasis,
) -> SpinorField:
    """One Strang step V/2 -> kinetic -> V/2 with V sampled at t + dt/2."""
    if field.rep != "position":
        raise ValueError(f"expected a position-representation field, got {field.rep!r}")
    phase = np.exp(-0.5j * dt * sampler.profile(t + 0.5 * dt))
    kicked = SpinorField(values=field.values * phase, rep="position", grid=field.grid)
    mom = to_momentum(kicked)
    a00, a01 = _kinetic_factors(basis, dt)
    s0, s1 = mom.values
    mom.values = np.stack([a00 * s0 + a01 * s1, np.conj(a00) * s1 + a01 * s0])
    out = to_position(mom)
    out.values *= phase
    return out


@dataclass(frozen=True)
class EvolutionSchedule:
    """Step size plus the strictly increasing steps at which to sample."""

    Nt: int
    dt: float
    sample_steps: tuple


def build_schedule(config: SimulationConfig) -> EvolutionSchedule:
    stride = max(int(config.sample_stride), 1)
    steps = tuple(range(0, config.Nt, stride)) + (config.Nt,)
    return EvolutionSchedule(
        Nt=config.Nt, dt=config.total_time / config.Nt, sample_steps=steps
    )


@dataclass(eq=False)
class TransitionMatrix:
    """U[p, n]: amplitude of positive mode p in the evolved negative mode n.

    Rows and columns are in DFT storage order; mode_numbers maps either
    index to its signed mode number.
    """

    step: int
    t: float
    mode_numbers: np.ndarray
    U: np.ndarray


@dataclass(eq=False)
class EvolutionSample:
    """Per-sample bundle: matrix plus unitarity diagnostics.

    norms[n] is the position-space norm of evolved column n; completeness[n]
    its total weight in the positive plus negative free branches (both equal
    1 for exact evolution). max_step_drift is the running max of |norm - 1|
    over every checked step so far. states holds the (2, n_states, Nz)
    momentum tensor when this step was requested via keep_states_steps.
    """

    step: int
    t: float
    matrix: TransitionMatrix
    norms: np.ndarray
    completeness: np.ndarray
    max_step_drift: float
    states: Optional[np.ndarray] = None


def _column_norms(state: np.ndarray) -> np.ndarray:
    re = state.real
    im = state.imag
    return np.einsum("cnj,cnj->n", re, re) + np.einsum("cnj,cnj->n", im, im)


def iter_evolution(
    config: SimulationConfig,
    *,
    keep_states_steps=(),
    norm_watch: str = "sample",
    sampler: Optional[FieldSampler] = None,
    workers: Optional[int] = None,
    progress=None,
) -> Iterator[EvolutionSample]:
    """Propagate all negative-branch modes, yielding one sample per scheduled step.

    norm_watch: "sample" checks unitarity at sampled steps only, "step" at
    every step. Aborts with PropagationError when any column norm leaves
    1 +- NORM_ABORT or turns non-finite.
    """
    if norm_watch not in ("sample", "step"):
        raise ValueError(f"norm_watch must be 'sample' or 'step', got {norm_watch!r}")
    grid = build_grid(config)
    basis = build_free_basis(grid, config.c)
    if sampler is None:
        sampler = build_sampler(config, grid)
    schedule = build_schedule(config)
    Nz = grid.Nz
    dt = schedule.dt
    sample_set = frozenset(schedule.sample_steps)
    keep = frozenset(int(s) for s in keep_states_steps)
    fft_workers = {"workers": int(workers)} if workers else {}
    fft_kw = {"axis": -1, "norm": "ortho", "overwrite_x": True, **fft_workers}

    # Rows of state[c] are the evolving columns: state[c, n, j] starts as
    # v_c(p_n) * W_n(z_j) with W_n the unit-norm discrete plane wave.
    W = sfft.ifft(np.eye(Nz, dtype=np.complex128), axis=-1, norm="ortho")
    state = np.empty((2, Nz, Nz), dtype=np.complex128)
    state[0] = basis.v[0][:, None] * W
    state[1] = basis.v[1][:, None] * W
    del W
    a00, a01 = _kinetic_factors(basis, dt)
    a11 = np.conj(a00)
    buf0 = np.empty((Nz, Nz), dtype=np.complex128)
    buf1 = np.empty((Nz, Nz), dtype=np.complex128)
    u0, u1 = basis.u
    max_drift = 0.0

    def check_norms(step: int) -> np.ndarray:
        nonlocal max_drift
        norms = _column_norms(state)
        finite = np.isfinite(norms)
        if not finite.all():
            bad = int(np.argmin(finite))
            raise PropagationError(step, int(grid.mode_numbers[bad]), float("nan"))
        drift = np.abs(norms - 1.0)
        worst = int(np.argmax(drift))
        worst_drift = float(drift[worst])
        if worst_drift > NORM_ABORT:
            raise PropagationError(step, int(grid.mode_numbers[worst]), worst_drift)
        if worst_drift > max_drift:
            max_drift = worst_drift
        return norms

    def emit(step: int, norms: np.ndarray) -> EvolutionSample:
        t_now = step * dt
        if step == 0:
            U = np.zeros((Nz, Nz), dtype=np.complex128)
            completeness = np.ones(Nz)
        else:
            mom = sfft.fft(state, axis=-1, norm="ortho", **fft_workers)
            pos = u0 * mom[0] + u1 * mom[1]
            neg = u0 * mom[1] - u1 * mom[0]
            completeness = (
                np.einsum("nk,nk->n", pos.real, pos.real)
                + np.einsum("nk,nk->n", pos.imag, pos.imag)
                + np.einsum("nk,nk->n", neg.real, neg.real)
                + np.einsum("nk,nk->n", neg.imag, neg.imag)
            )
            U = pos.T.copy()
        states = None
        if step in keep:
            if step == 0:
                states = sfft.fft(state, axis=-1, norm="ortho", **fft_workers)
            else:
                states = mom
        matrix = TransitionMatrix(
            step=step, t=t_now, mode_numbers=grid.mode_numbers, U=U
        )
        return EvolutionSample(
            step=step,
            t=t_now,
            matrix=matrix,
            norms=norms,
            completeness=completeness,
            max_step_drift=max_drift,
            states=states,
        )

    yield emit(0, np.ones(Nz))
    shape = sampler.shape
    report_every = max(config.Nt // 20, 1)
    for m in range(config.Nt):
        g = sampler.time_factor((m + 0.5) * dt)
        phase = np.exp((-0.5j * dt * g) * shape)
        state *= phase
        state = sfft.fft(state, **fft_kw)
        s0, s1 = state[0], state[1]
        np.multiply(s1, a01, out=buf1)
        np.multiply(s0, a01, out=buf0)
        np.multiply(s0, a00, out=s0)
        s0 += buf1
        np.multiply(s1, a11, out=s1)
        s1 += buf0
        state = sfft.ifft(state, **fft_kw)
        state *= phase
        step = m + 1
        sampled = step in sample_set
        if sampled or norm_watch == "step":
            norms = check_norms(step)
            if sampled:
                yield emit(step, norms)
        if progress is not None and (step % report_every == 0 or step == config.Nt):
            progress(step, config.Nt)


def evolve_all(config: SimulationConfig, **kwargs) -> list:
    """Materialized sampled transition matrices (keeps all of them in memory)."""
    return [sample.matrix for sample in iter_evolution(config, **kwargs)]


def dense_oracle(
    config: SimulationConfig, *, sampler: Optional[FieldSampler] = None
) -> list:
    """Reference evolution via exact matrix exponentials on a small grid.

    Builds the full 2*Nz Hamiltonian in position space and applies
    exp(-i H(t_mid) dt) per step through an eigendecomposition (cached on
    the sampled time factor, so a static well costs one decomposition).
    Shares the sampling schedule and projections with the split path.
    """
    if config.Nz > DENSE_MAX_NZ:
        raise ValueError(f"dense oracle supports Nz <= {DENSE_MAX_NZ}, got {config.Nz}")
    grid = build_grid(config)
    basis = build_free_basis(grid, config.c)
    if sampler is None:
        sampler = build_sampler(config, grid)
    schedule = build_schedule(config)
    Nz = grid.Nz
    dt = schedule.dt
    c = config.c
    idx = np.arange(Nz)

    F = sfft.fft(np.eye(Nz, dtype=np.complex128), axis=0, norm="ortho")
    Hmom = np.zeros((2 * Nz, 2 * Nz), dtype=np.complex128)
    Hmom[idx, idx] = c * c
    Hmom[Nz + idx, Nz + idx] = -c * c
    Hmom[idx, Nz + idx] = c * grid.p
    Hmom[Nz + idx, idx] = c * grid.p
    Fblock = np.zeros_like(Hmom)
    Fblock[:Nz, :Nz] = F
    Fblock[Nz:, Nz:] = F
    Hkin = Fblock.conj().T @ Hmom @ Fblock
    Hkin = 0.5 * (Hkin + Hkin.conj().T)

    Fh = F.conj().T
    psi = np.zeros((2 * Nz, Nz), dtype=np.complex128)
    psi[:Nz] = Fh * basis.v[0]
    psi[Nz:] = Fh * basis.v[1]

    u0 = basis.u[0][:, None]
    u1 = basis.u[1][:, None]

    def snapshot(step: int) -> TransitionMatrix:
        if step == 0:
            U = np.zeros((Nz, Nz), dtype=np.complex128)
        else:
            m0 = F @ psi[:Nz]
            m1 = F @ psi[Nz:]
            U = u0 * m0 + u1 * m1
        return TransitionMatrix(
            step=step, t=step * dt, mode_numbers=grid.mode_numbers, U=U
        )

    sample_set = frozenset(schedule.sample_steps)
    samples = []
    if 0 in sample_set:
        samples.append(snapshot(0))
    step_cache: dict = {}
    for m in range(config.Nt):
        g = sampler.time_factor((m + 0.5) * dt)
        Ustep = step_cache.get(g)
        if Ustep is None:
            H = Hkin.copy()
            V = g * sampler.shape
            H[idx, idx] += V
            H[Nz + idx, Nz + idx] += V
            w, Q = np.linalg.eigh(H)
            Ustep = (Q * np.exp(-1j * dt * w)) @ Q.conj().T
            step_cache[g] = Ustep
        psi = Ustep @ psi
        if (m + 1) in sample_set:
            samples.append(snapshot(m + 1))
    return samples
