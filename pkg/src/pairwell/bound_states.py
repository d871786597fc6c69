"""Bound levels of the static well and the multi-photon peak bookkeeping.

The square-well levels solve c*p2*cot(p2*D) = E*V1/(c*p1) - c*p1 with
p1 = sqrt(c^2 - E^2/c^2), p2 = sqrt((E + V1)^2/c^2 - c^2), E inside the
gap window (max(-c^2, c^2 - V1), c^2). Absorbing n quanta of the drive
lifts level E_i to E_i + n*omega; levels pushed past +c^2 appear as
spectrum peaks at the matching momentum mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SPEED_OF_LIGHT
from .basis import free_energy

SIN_POLE_GUARD = 1e-12
BISECT_REL_TOL = 1e-10
DEFAULT_SCAN_STEP = math.pi / 256.0
RESIDUAL_REL_TOL = 1e-6


class BoundStateError(RuntimeError):
    """The scan produced no usable roots for these well parameters."""


def _default_well(c: float, V1, D):
    if V1 is None:
        V1 = 2.0 * c * c - 10000.0
    if D is None:
        D = 10.0 / c
    return float(V1), float(D)


def _wavenumbers(E, c: float, V1: float):
    p1 = np.sqrt(c * c - E * E / (c * c))
    p2 = np.sqrt((E + V1) ** 2 / (c * c) - c * c)
    return p1, p2


def _residual_parts(E, c: float, V1: float, D: float):
    p1, p2 = _wavenumbers(E, c, V1)
    lhs = c * p2 / np.tan(p2 * D)
    rhs = E * V1 / (c * p1) - c * p1
    return lhs, rhs


def eigen_residual(E: float, c: float = SPEED_OF_LIGHT, V1=None, D=None) -> float:
    """Mismatch of the quantization condition; zero exactly at a bound level."""
    V1, D = _default_well(c, V1, D)
    c2 = c * c
    lo = max(-c2, c2 - V1)
    if not (lo < E < c2):
        raise ValueError(
            f"E = {E} outside the bound window ({lo}, {c2}); no real edge momenta"
        )
    _, p2 = _wavenumbers(E, c, V1)
    if abs(math.sin(p2 * D)) < SIN_POLE_GUARD:
        raise ValueError(f"E = {E} sits on a cotangent pole (p2*D = {p2 * D})")
    lhs, rhs = _residual_parts(E, c, V1, D)
    return float(lhs - rhs)


@dataclass(eq=False)
class BoundStateSet:
    """Ascending bound levels with the residuals they were accepted at."""

    c: float
    V1: float
    D: float
    energies: np.ndarray
    residuals: np.ndarray
    bracket_count: int = field(default=0)

    @property
    def energies_over_c2(self) -> np.ndarray:
        return self.energies / (self.c * self.c)


def solve_bound_states(
    c: float = SPEED_OF_LIGHT,
    V1=None,
    D=None,
    *,
    scan_step: float = DEFAULT_SCAN_STEP,
) -> BoundStateSet:
    """Find every root of the quantization condition inside the gap window.

    Scans uniformly in phi = p2*D (the cotangent's natural variable),
    discards brackets that straddle a pole, and bisects the rest down to
    |dE| < 1e-10 * c^2. The root count always equals the number of clean
    sign changes.
    """
    V1, D = _default_well(c, V1, D)
    c2 = c * c
    if not (scan_step > 0.0):
        raise ValueError(f"scan_step must be positive, got {scan_step}")
    E_lo = max(-c2, c2 - V1)
    E_hi = c2
    if E_lo >= E_hi:
        raise BoundStateError(
            f"empty bound window: V1 = {V1} leaves no gap below the continuum"
        )

    def phi_of(E):
        return _wavenumbers(E, c, V1)[1] * D

    def E_of_phi(phi):
        p2 = phi / D
        return np.sqrt(c2 * p2 * p2 + c2 * c2) - V1

    edge = 1e-9 * c2
    phi_lo = max(phi_of(max(E_lo + edge, E_lo * (1.0 - 1e-12))), 1e-8)
    phi_hi = phi_of(E_hi - edge)
    if not (phi_hi > phi_lo):
        raise BoundStateError("bound window too thin to scan")
    n_points = int(math.ceil((phi_hi - phi_lo) / scan_step)) + 1
    phi = np.linspace(phi_lo, phi_hi, max(n_points, 2))
    E_grid = E_of_phi(phi)
    lhs, rhs = _residual_parts(E_grid, c, V1, D)
    R = lhs - rhs
    sin_ok = np.abs(np.sin(phi)) >= SIN_POLE_GUARD
    branch = np.floor(phi / math.pi).astype(np.int64)

    roots = []
    residuals = []
    brackets = 0
    tol_E = BISECT_REL_TOL * c2
    for i in range(len(phi) - 1):
        if not (sin_ok[i] and sin_ok[i + 1]):
            continue
        if branch[i] != branch[i + 1]:
            continue  # cotangent pole inside: sign change is not a root
        Ra, Rb = R[i], R[i + 1]
        if not (np.isfinite(Ra) and np.isfinite(Rb)):
            continue
        if Ra == 0.0:
            roots.append(float(E_grid[i]))
            residuals.append(0.0)
            brackets += 1
            continue
        if Ra * Rb >= 0.0:
            continue
        brackets += 1
        a, b = float(E_grid[i]), float(E_grid[i + 1])
        fa = Ra
        while b - a > tol_E:
            mid = 0.5 * (a + b)
            lhs_m, rhs_m = _residual_parts(mid, c, V1, D)
            fm = float(lhs_m - rhs_m)
            if fa * fm <= 0.0:
                b = mid
            else:
                a, fa = mid, fm
        root = 0.5 * (a + b)
        lhs_r, rhs_r = _residual_parts(root, c, V1, D)
        res = float(lhs_r - rhs_r)
        scale = max(abs(float(lhs_r)), abs(float(rhs_r)), 1.0)
        if abs(res) > RESIDUAL_REL_TOL * scale:
            raise BoundStateError(
                f"bisection landed at E = {root} with residual {res:.3e} "
                f"above {RESIDUAL_REL_TOL:g} of scale {scale:.3e}"
            )
        roots.append(root)
        residuals.append(res)
    if not roots:
        raise BoundStateError(
            f"no bound levels found for c = {c}, V1 = {V1}, D = {D}"
        )
    order = np.argsort(roots)
    return BoundStateSet(
        c=c,
        V1=V1,
        D=D,
        energies=np.asarray(roots)[order],
        residuals=np.asarray(residuals)[order],
        bracket_count=brackets,
    )


def energy_to_mode(E: float, c: float = SPEED_OF_LIGHT, L: float = 2.0) -> float:
    """Continuous box-mode index N_p with free energy E; inverse of free_energy."""
    c2 = c * c
    if E < c2:
        raise ValueError(f"E = {E} below the positive continuum edge {c2}")
    p = math.sqrt(max(E * E / c2 - c2, 0.0))
    return L * p / (2.0 * math.pi)


@dataclass(frozen=True)
class PredictedPeak:
    """One ladder level lifted by n photons into the continuum."""

    i: int
    n_photons: int
    E_bound: float
    energy: float
    mode: float


@dataclass(eq=False)
class PeakPredictionSet:
    omega: float
    n_photons: int
    peaks: list
    omitted: list  # 1-based ladder indices still below the continuum edge


def predict_peaks(
    bound: BoundStateSet, omega: float, n_photons: int, L: float = 2.0
) -> PeakPredictionSet:
    """Spectrum peak positions for levels absorbing n_photons quanta."""
    if n_photons < 0:
        raise ValueError(f"n_photons must be >= 0, got {n_photons}")
    c2 = bound.c * bound.c
    peaks = []
    omitted = []
    for i, E_bound in enumerate(bound.energies, start=1):
        E = float(E_bound) + n_photons * omega
        if E <= c2:
            omitted.append(i)
            continue
        peaks.append(
            PredictedPeak(
                i=i,
                n_photons=n_photons,
                E_bound=float(E_bound),
                energy=E,
                mode=energy_to_mode(E, bound.c, L),
            )
        )
    return PeakPredictionSet(
        omega=omega, n_photons=n_photons, peaks=peaks, omitted=omitted
    )


def detect_peaks(spectrum, mode_range=None, window: int = 2, min_height=None):
    """Local maxima of a spectrum, scanned over an inclusive mode range.

    A peak must be the unique maximum within +-window modes and reach
    min_height. The default floor is 5x the spectrum median over the
    half-axis (sign of N_p) being scanned, not over the scanned range:
    a narrow range centered on structure would put the median at peak
    scale and reject everything. Returns (mode, height) pairs, modes
    ascending.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    modes = np.asarray(spectrum.mode_numbers)
    values = np.asarray(spectrum.values)
    if mode_range is None:
        mask = np.ones(len(modes), dtype=bool)
    else:
        a, b = mode_range
        if a > b:
            raise ValueError(f"empty mode range {a}:{b}")
        mask = (modes >= a) & (modes <= b)
    if not mask.any():
        return []
    if min_height is None:
        sides = np.unique(np.sign(modes[mask & (modes != 0)]))
        half = np.isin(np.sign(modes), sides) if sides.size else mask
        min_height = 5.0 * float(np.median(values[half]))
    peaks = []
    for ii in np.nonzero(mask)[0]:
        v = values[ii]
        if v < min_height:
            continue
        lo = max(ii - window, 0)
        hi = min(ii + window, len(values) - 1)
        neighborhood = values[lo : hi + 1]
        if v >= neighborhood.max() and np.count_nonzero(neighborhood == v) == 1:
            peaks.append((int(modes[ii]), float(v)))
    return peaks


@dataclass(frozen=True)
class PeakMatch:
    i: int
    n_photons: int
    E_bound: float
    E_pred: float
    mode_pred: float
    mode_det: int
    height: float
    E_det: float
    gap: float  # E_det - (E_bound + n_photons*omega)


@dataclass(eq=False)
class MatchReport:
    tol: float
    matches: list
    unmatched_predicted: list
    unmatched_detected: list


def match_peaks(
    predictions: PeakPredictionSet,
    detected,
    c: float = SPEED_OF_LIGHT,
    L: float = 2.0,
    tol=None,
) -> MatchReport:
    """Greedy closest-first pairing of predicted and detected peaks by energy."""
    if tol is None:
        tol = 0.06 * c * c
    det = [
        (int(mode), float(height), float(free_energy(2.0 * math.pi * mode / L, c)))
        for mode, height in detected
    ]
    candidates = []
    for pi, pred in enumerate(predictions.peaks):
        for di, (mode, height, E_det) in enumerate(det):
            dist = abs(E_det - pred.energy)
            if dist <= tol:
                candidates.append((dist, pi, di))
    candidates.sort()
    used_p = set()
    used_d = set()
    matches = []
    for dist, pi, di in candidates:
        if pi in used_p or di in used_d:
            continue
        used_p.add(pi)
        used_d.add(di)
        pred = predictions.peaks[pi]
        mode, height, E_det = det[di]
        matches.append(
            PeakMatch(
                i=pred.i,
                n_photons=pred.n_photons,
                E_bound=pred.E_bound,
                E_pred=pred.energy,
                mode_pred=pred.mode,
                mode_det=mode,
                height=height,
                E_det=E_det,
                gap=E_det - pred.energy,
            )
        )
    matches.sort(key=lambda m: m.i)
    unmatched_p = [p for i, p in enumerate(predictions.peaks) if i not in used_p]
    unmatched_d = [
        (mode, height) for i, (mode, height, _) in enumerate(det) if i not in used_d
    ]
    return MatchReport(
        tol=float(tol),
        matches=matches,
        unmatched_predicted=unmatched_p,
        unmatched_detected=unmatched_d,
    )
