"""Config files, CSV artifacts, run manifests, and the evolve/sweep drivers.

Config files are flat "key = value" text with # comments. Width and
separation keys (D, W1, W2) accept an `le` suffix meaning Compton
wavelengths (units of 1/c). The run manifest is itself a loadable config
file: every non-config line is written as a # comment, so pointing
--config at a manifest reproduces the run.
"""

from __future__ import annotations

import datetime
import hashlib
import math
import os
import tempfile
from dataclasses import dataclass, fields as _dataclass_fields, replace

import numpy as np

from . import observables
from .basis import build_free_basis
from .core import (
    SPEED_OF_LIGHT,
    ConfigError,
    SimulationConfig,
    build_grid,
    make_config,
    validate_config,
)
from .observables import DensityResult, SpectrumResult, TimeSeries
from .propagator import PropagationError, build_schedule, iter_evolution

INT_KEYS = {"Nz", "Nt", "sample_stride"}
COMPTON_KEYS = {"D", "W1", "W2"}
STR_KEYS = {"well_shape"}

SPECTRUM_HEADER = ("N_p", "N")
TIMESERIES_HEADER = ("t", "N")
DENSITY_HEADER = ("z", "rho")
SUMMARY_HEADER = ("W2_over_lambda_e", "N_final", "status")
MATCHES_HEADER = (
    "i",
    "n_photons",
    "E_i",
    "E_pred",
    "N_p_pred",
    "N_p_det",
    "E_det",
    "gap",
)

DEFAULT_SWEEP_FACTORS = (0.075, 0.15, 0.3, 0.6, 0.9, 1.2, 1.5)


def parse_config_text(text: str) -> dict:
    """Raw key -> string pairs from flat config text; later keys win."""
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        pairs[key] = value
    return pairs


def resolve_config(pairs: dict) -> SimulationConfig:
    """Typed SimulationConfig from raw pairs (strings or numbers)."""
    known = {f.name for f in _dataclass_fields(SimulationConfig)}
    unknown = sorted(set(pairs) - known)
    if unknown:
        raise ConfigError("unknown config key(s): " + ", ".join(unknown))
    try:
        c = float(pairs.get("c", SPEED_OF_LIGHT))
    except (TypeError, ValueError):
        raise ConfigError(f"c: cannot parse {pairs.get('c')!r} as a number") from None
    overrides = {}
    for key, value in pairs.items():
        try:
            if key in STR_KEYS:
                overrides[key] = str(value).strip().replace("-", "_")
            elif key in INT_KEYS:
                overrides[key] = int(str(value).strip())
            elif (
                key in COMPTON_KEYS
                and isinstance(value, str)
                and value.strip().endswith("le")
            ):
                overrides[key] = float(value.strip()[:-2]) / c
            else:
                overrides[key] = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key}: cannot parse {value!r}") from None
    return make_config(**overrides)


def load_config(path=None, overrides=None) -> SimulationConfig:
    """Config from an optional file plus optional override pairs (CLI wins)."""
    pairs = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                pairs = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    if overrides:
        pairs.update(overrides)
    return resolve_config(pairs)


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("no boolean columns in this format")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return repr(float(value))


def _atomic_write_bytes(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".partial-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header, rows) -> str:
    """Write rows atomically; floats as repr (exact round-trip). Returns sha256."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_value(x) for x in row))
    data = ("\n".join(lines) + "\n").encode("utf-8")
    _atomic_write_bytes(path, data)
    return hashlib.sha256(data).hexdigest()


def read_csv(path: str, expected_header) -> list:
    """Rows of floats; raises ConfigError naming any unexpected column."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if not lines:
        raise ConfigError(f"{path}: empty file")
    header = tuple(lines[0].split(","))
    if header != tuple(expected_header):
        for got, want in zip(header, expected_header):
            if got != want:
                raise ConfigError(
                    f"{path}: expected column {want!r}, found {got!r}"
                )
        raise ConfigError(
            f"{path}: expected header {','.join(expected_header)!r}, "
            f"found {lines[0]!r}"
        )
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise ConfigError(f"{path} line {lineno}: expected {len(header)} columns")
        try:
            rows.append(tuple(float(x) for x in parts))
        except ValueError:
            raise ConfigError(f"{path} line {lineno}: non-numeric value") from None
    return rows


def read_spectrum_csv(path: str) -> SpectrumResult:
    rows = read_csv(path, SPECTRUM_HEADER)
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    modes = np.array([int(r[0]) for r in rows], dtype=np.int64)
    values = np.array([r[1] for r in rows])
    order = np.argsort(modes, kind="stable")
    return SpectrumResult(t=float("nan"), mode_numbers=modes[order], values=values[order])


def config_lines(config: SimulationConfig) -> list:
    lines = []
    for f in _dataclass_fields(SimulationConfig):
        value = getattr(config, f.name)
        lines.append(f"{f.name} = {_format_value(value)}")
    return lines


def write_manifest(path: str, config: SimulationConfig, metadata, digests) -> str:
    """Manifest = loadable config plus commented metadata and output digests."""
    lines = ["# run manifest; reload with --config to reproduce"]
    for key, value in metadata:
        lines.append(f"# {key} = {value}")
    lines.extend(config_lines(config))
    for name in sorted(digests):
        lines.append(f"# sha256 {name} = {digests[name]}")
    data = ("\n".join(lines) + "\n").encode("utf-8")
    _atomic_write_bytes(path, data)
    return hashlib.sha256(data).hexdigest()


@dataclass(eq=False)
class RunResult:
    out_dir: str
    config: SimulationConfig
    N_final: float
    spectrum: SpectrumResult
    timeseries: TimeSeries
    densities: list
    max_step_drift: float
    paths: dict
    digests: dict


def _density_steps(config: SimulationConfig, density_times) -> dict:
    """Map each requested time to the nearest sampled step; final step always in."""
    schedule = build_schedule(config)
    steps = np.asarray(schedule.sample_steps)
    chosen = {int(config.Nt)}
    for t in density_times:
        t = float(t)
        if t < 0.0 or t > config.total_time:
            raise ConfigError(
                f"density time {t} outside the run window [0, {config.total_time}]"
            )
        nearest = int(steps[np.argmin(np.abs(steps * schedule.dt - t))])
        chosen.add(nearest)
    return {step: step * schedule.dt for step in sorted(chosen)}


def run_evolve(
    config: SimulationConfig,
    out_dir: str,
    *,
    density_times=(),
    norm_watch: str = "sample",
    workers=None,
    progress=None,
) -> RunResult:
    """Evolve, stream observables, and write spectrum/timeseries/density CSVs."""
    os.makedirs(out_dir, exist_ok=True)
    started = datetime.datetime.now(datetime.timezone.utc)
    grid = build_grid(config)
    basis = build_free_basis(grid, config.c)
    density_map = _density_steps(config, density_times)

    times = []
    totals = []
    spectrum = None
    densities = []
    max_drift = 0.0
    final_total = math.nan
    for sample in iter_evolution(
        config,
        keep_states_steps=tuple(density_map),
        norm_watch=norm_watch,
        workers=workers,
        progress=progress,
    ):
        times.append(sample.t)
        totals.append(observables.total_number(sample.matrix))
        max_drift = sample.max_step_drift
        if sample.states is not None:
            densities.append(
                observables.spatial_density(
                    sample.states, basis, t=sample.t, workers=workers
                )
            )
        if sample.step == config.Nt:
            spectrum = observables.momentum_spectrum(sample.matrix)
            final_total = totals[-1]

    timeseries = TimeSeries(times=np.asarray(times), values=np.asarray(totals))

    paths = {}
    digests = {}
    spectrum_path = os.path.join(out_dir, "spectrum.csv")
    digests["spectrum.csv"] = write_csv(
        spectrum_path,
        SPECTRUM_HEADER,
        zip(spectrum.mode_numbers, spectrum.values),
    )
    paths["spectrum.csv"] = spectrum_path
    ts_path = os.path.join(out_dir, "timeseries.csv")
    digests["timeseries.csv"] = write_csv(
        ts_path, TIMESERIES_HEADER, zip(timeseries.times, timeseries.values)
    )
    paths["timeseries.csv"] = ts_path
    density_names = {}
    for density in densities:
        step = round(density.t / (config.total_time / config.Nt))
        if step == config.Nt:
            name = "density.csv"
        else:
            name = f"density_step{step:07d}.csv"
        density_path = os.path.join(out_dir, name)
        digests[name] = write_csv(
            density_path, DENSITY_HEADER, zip(density.z, density.rho)
        )
        paths[name] = density_path
        density_names[name] = density.t

    finished = datetime.datetime.now(datetime.timezone.utc)
    metadata = [
        ("generator", "pairwell 0.1.0"),
        ("started_utc", started.isoformat()),
        ("finished_utc", finished.isoformat()),
        ("N_final", repr(float(final_total))),
        ("max_step_drift", repr(float(max_drift))),
        ("norm_watch", norm_watch),
    ]
    for name, t in sorted(density_names.items()):
        metadata.append((f"density_time {name}", repr(float(t))))
    manifest_path = os.path.join(out_dir, "manifest.txt")
    write_manifest(manifest_path, config, metadata, digests)
    paths["manifest.txt"] = manifest_path

    return RunResult(
        out_dir=out_dir,
        config=config,
        N_final=float(final_total),
        spectrum=spectrum,
        timeseries=timeseries,
        densities=densities,
        max_step_drift=float(max_drift),
        paths=paths,
        digests=digests,
    )


@dataclass(eq=False)
class SweepResult:
    out_dir: str
    rows: list  # (factor, N_final, status, subdir)
    ok: bool
    summary_path: str
    runs: dict


def format_factor(factor: float) -> str:
    return format(float(factor), "g")


def run_sweep(
    base_config: SimulationConfig,
    out_dir: str,
    factors=DEFAULT_SWEEP_FACTORS,
    *,
    workers=None,
    progress=None,
) -> SweepResult:
    """run_evolve once per left-edge width W2 = factor * lambda_e.

    A failed point is recorded in summary.csv with its error and does not
    stop the remaining points.
    """
    factors = [float(f) for f in factors]
    if not factors:
        raise ConfigError("sweep needs at least one W2 factor")
    if len(set(factors)) != len(factors):
        raise ConfigError("sweep factors must be distinct")
    if any(not (f > 0.0) for f in factors):
        raise ConfigError("sweep factors must be positive")
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    runs = {}
    ok = True
    for factor in factors:
        label = format_factor(factor)
        subdir = os.path.join(out_dir, f"W2_{label}le")
        config = replace(base_config, W2=factor * base_config.lambda_e)
        validate_config(config)
        try:
            result = run_evolve(config, subdir, workers=workers, progress=progress)
        except (PropagationError, OSError) as exc:
            ok = False
            # keep the status cell one CSV field
            message = f"failed: {exc}".replace(",", ";").replace("\n", " ")
            rows.append((factor, math.nan, message, subdir))
            continue
        runs[factor] = result
        rows.append((factor, result.N_final, "ok", subdir))
    summary_path = os.path.join(out_dir, "summary.csv")
    write_csv(
        summary_path,
        SUMMARY_HEADER,
        [(f, n, status) for f, n, status, _ in rows],
    )
    return SweepResult(
        out_dir=out_dir, rows=rows, ok=ok, summary_path=summary_path, runs=runs
    )


def write_matches_csv(path: str, report) -> str:
    rows = [
        (
            m.i,
            m.n_photons,
            m.E_bound,
            m.E_pred,
            m.mode_pred,
            m.mode_det,
            m.E_det,
            m.gap,
        )
        for m in report.matches
    ]
    return write_csv(path, MATCHES_HEADER, rows)
