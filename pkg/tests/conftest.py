"""Session fixtures: disk-cached evolution runs shared across test sessions.

Expensive runs land in runs/ at the repository root. A run is reused only
when its manifest parses back to the requested configuration and every
output file still matches its recorded sha256; anything else regenerates it.
"""

import datetime
import hashlib
from dataclasses import dataclass
from pathlib import Path

import pytest

from pairwell import runio
from pairwell.core import ConfigError, SimulationConfig
from pairwell.observables import SpectrumResult

RUNS_DIR = Path(__file__).resolve().parents[1] / "runs"

SWEEP_FACTORS = (0.075, 0.15, 0.3, 0.6, 1.5)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _manifest_comments(path: Path):
    """Digests and key/value metadata from the commented manifest lines."""
    digests = {}
    meta = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.startswith("# "):
            continue
        body = line[2:]
        if body.startswith("sha256 "):
            name, sep, value = body[len("sha256 ") :].rpartition(" = ")
            if sep:
                digests[name] = value.strip()
        else:
            key, sep, value = body.partition(" = ")
            if sep:
                meta[key.strip()] = value.strip()
    return digests, meta


@dataclass(frozen=True)
class DiskRun:
    """A verified on-disk run; heavyweight arrays stay in the CSV files."""

    out_dir: Path
    config: SimulationConfig
    N_final: float
    max_step_drift: float
    elapsed_s: float
    spectrum: SpectrumResult

    def timeseries_rows(self):
        return runio.read_csv(
            str(self.out_dir / "timeseries.csv"), runio.TIMESERIES_HEADER
        )

    def density_rows(self):
        return runio.read_csv(str(self.out_dir / "density.csv"), runio.DENSITY_HEADER)


def _load_verified(out_dir: Path, want: SimulationConfig, norm_watch: str):
    manifest = out_dir / "manifest.txt"
    if not manifest.is_file():
        return None
    try:
        got = runio.load_config(str(manifest))
    except ConfigError:
        return None
    if got != want:
        return None
    digests, meta = _manifest_comments(manifest)
    needed = ("N_final", "max_step_drift", "started_utc", "finished_utc")
    if meta.get("norm_watch") != norm_watch or not digests:
        return None
    if any(key not in meta for key in needed):
        return None
    for name, digest in digests.items():
        target = out_dir / name
        if not target.is_file() or _sha256(target) != digest:
            return None
    started = datetime.datetime.fromisoformat(meta["started_utc"])
    finished = datetime.datetime.fromisoformat(meta["finished_utc"])
    return DiskRun(
        out_dir=out_dir,
        config=got,
        N_final=float(meta["N_final"]),
        max_step_drift=float(meta["max_step_drift"]),
        elapsed_s=(finished - started).total_seconds(),
        spectrum=runio.read_spectrum_csv(str(out_dir / "spectrum.csv")),
    )


def ensure_run(
    name: str,
    overrides=None,
    *,
    density_times=(),
    norm_watch: str = "sample",
    workers=None,
) -> DiskRun:
    """Return a verified cached run, regenerating it when the cache misses."""
    out_dir = RUNS_DIR / name
    want = runio.load_config(overrides=dict(overrides or {}))
    cached = _load_verified(out_dir, want, norm_watch)
    if cached is None:
        runio.run_evolve(
            want,
            str(out_dir),
            density_times=density_times,
            norm_watch=norm_watch,
            workers=workers,
        )
        cached = _load_verified(out_dir, want, norm_watch)
        assert cached is not None, f"run {name} failed to verify after writing"
    return cached


REDUCED = {"Nz": 512, "Nt": 2000}


@pytest.fixture(scope="session")
def full_run() -> DiskRun:
    """Full-resolution run with the narrowed left edge the peak tables use."""
    return ensure_run("full_scale", {"W2": "0.15le"})


@pytest.fixture(scope="session")
def reduced_run() -> DiskRun:
    return ensure_run("reduced_256", {"Nz": 256, "Nt": 1000}, workers=8)


@pytest.fixture(scope="session")
def null_run() -> DiskRun:
    return ensure_run("null_256", {"Nz": 256, "Nt": 1000, "V1": 0.0, "V2": 0.0})


@pytest.fixture(scope="session")
def sym_run() -> DiskRun:
    """Reduced-scale run with both well edges at their identical defaults."""
    return ensure_run("sym_512", dict(REDUCED))


@pytest.fixture(scope="session")
def swap_run() -> DiskRun:
    """Reduced-scale run with the edge widths of the 0.6 sweep point swapped."""
    return ensure_run("swap_512", dict(REDUCED, W1="0.6le"))


@pytest.fixture(scope="session")
def one_sided_run() -> DiskRun:
    return ensure_run("one_sided_512", dict(REDUCED, well_shape="one_sided"))


@pytest.fixture(scope="session")
def sweep_runs() -> dict:
    """One reduced-scale run per left-edge width, laid out like a sweep dir."""
    runs = {}
    for factor in SWEEP_FACTORS:
        label = runio.format_factor(factor)
        runs[factor] = ensure_run(
            f"sweep_512/W2_{label}le", dict(REDUCED, W2=f"{label}le")
        )
    rows = [(factor, runs[factor].N_final, "ok") for factor in SWEEP_FACTORS]
    runio.write_csv(
        str(RUNS_DIR / "sweep_512" / "summary.csv"), runio.SUMMARY_HEADER, rows
    )
    return runs
