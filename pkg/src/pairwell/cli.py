"""Command-line front end: bound-states, evolve, sweep, peaks.

Exit codes: 0 success, 2 bad configuration or arguments, 3 propagation
aborted on a unitarity failure, 4 sweep finished with failed points.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bound_states import (
    BoundStateError,
    detect_peaks,
    match_peaks,
    predict_peaks,
    solve_bound_states,
)
from .core import ConfigError
from .propagator import PropagationError
from . import runio

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_PARTIAL = 4


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="flat key = value config file")
    parser.add_argument("--Nz", type=int, help="grid points (power of two)")
    parser.add_argument("--Nt", type=int, help="time steps")
    parser.add_argument(
        "--well",
        choices=("two-sided", "one-sided"),
        help="well profile (default two-sided)",
    )
    parser.add_argument(
        "--W2",
        metavar="VALUE[le]",
        help="left-edge width, a.u. or Compton wavelengths with 'le' suffix",
    )
    parser.add_argument("--sample-stride", type=int, help="steps between samples")
    parser.add_argument(
        "--threads", type=int, default=None, help="FFT worker threads"
    )


def _collect_overrides(args: argparse.Namespace) -> dict:
    overrides = {}
    if getattr(args, "Nz", None) is not None:
        overrides["Nz"] = args.Nz
    if getattr(args, "Nt", None) is not None:
        overrides["Nt"] = args.Nt
    if getattr(args, "well", None) is not None:
        overrides["well_shape"] = args.well
    if getattr(args, "W2", None) is not None:
        overrides["W2"] = args.W2
    if getattr(args, "sample_stride", None) is not None:
        overrides["sample_stride"] = args.sample_stride
    return overrides


def _progress_printer(enabled: bool):
    if not enabled:
        return None

    def report(step: int, total: int) -> None:
        print(f"step {step}/{total}", file=sys.stderr, flush=True)

    return report


def _parse_range(text: str):
    try:
        a, _, b = text.partition(":")
        return int(a), int(b)
    except ValueError:
        raise ConfigError(f"--range expects A:B with integers, got {text!r}") from None


def _parse_floats(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_bound_states(args: argparse.Namespace) -> int:
    config = runio.load_config(args.config, _collect_overrides(args))
    bound = solve_bound_states(config.c, config.V1, config.D)
    c2 = config.c2
    print(f"{'i':>2}  {'E/c^2':>12}  {'E (a.u.)':>16}  {'residual':>10}")
    for i, (E, res) in enumerate(zip(bound.energies, bound.residuals), start=1):
        print(f"{i:>2}  {E / c2:>12.6f}  {E:>16.6f}  {res:>10.2e}")
    return EXIT_OK


def cmd_evolve(args: argparse.Namespace) -> int:
    config = runio.load_config(args.config, _collect_overrides(args))
    density_times = _parse_floats(args.density_times) if args.density_times else ()
    result = runio.run_evolve(
        config,
        args.out,
        density_times=density_times,
        workers=args.threads,
        progress=_progress_printer(args.progress),
    )
    written = ", ".join(sorted(result.paths))
    print(f"N(T) = {result.N_final:.6e}; wrote {written} in {args.out}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = runio.load_config(args.config, _collect_overrides(args))
    factors = (
        _parse_floats(args.W2_values) if args.W2_values else runio.DEFAULT_SWEEP_FACTORS
    )
    result = runio.run_sweep(
        config,
        args.out,
        factors,
        workers=args.threads,
        progress=_progress_printer(args.progress),
    )
    for factor, n_final, status, subdir in result.rows:
        print(f"W2 = {runio.format_factor(factor)} lambda_e: N = {n_final:.6e} [{status}]")
    print(f"wrote {result.summary_path}")
    return EXIT_OK if result.ok else EXIT_PARTIAL


def cmd_peaks(args: argparse.Namespace) -> int:
    config = runio.load_config(args.config, _collect_overrides(args))
    spectrum_path = os.path.join(args.out, "spectrum.csv")
    spectrum = runio.read_spectrum_csv(spectrum_path)
    bound = solve_bound_states(config.c, config.V1, config.D)
    predictions = predict_peaks(bound, config.omega, args.n_photons, config.L)
    mode_range = _parse_range(args.range) if args.range else None
    detected = detect_peaks(spectrum, mode_range=mode_range)
    report = match_peaks(predictions, detected, config.c, config.L)
    matches_path = os.path.join(args.out, "matches.csv")
    runio.write_matches_csv(matches_path, report)
    c2 = config.c2
    for m in report.matches:
        print(
            f"i={m.i} +{m.n_photons} photons: predicted N_p = {m.mode_pred:.1f}, "
            f"detected N_p = {m.mode_det}, gap = {m.gap / c2:+.4f} c^2"
        )
    for p in report.unmatched_predicted:
        print(f"i={p.i} +{p.n_photons} photons: predicted N_p = {p.mode:.1f}, no match")
    print(
        f"{len(report.matches)} matched, {len(report.unmatched_predicted)} unmatched "
        f"predictions, {len(report.unmatched_detected)} unmatched detections; "
        f"wrote {matches_path}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairwell",
        description="Pair creation in smoothed potential wells (1D Dirac, split-operator).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound-states", help="print the bound-level ladder")
    _add_config_args(p_bound)
    p_bound.set_defaults(func=cmd_bound_states)

    p_evolve = sub.add_parser("evolve", help="run one evolution, write CSVs")
    _add_config_args(p_evolve)
    p_evolve.add_argument("--out", required=True, metavar="DIR")
    p_evolve.add_argument(
        "--density-times",
        metavar="T1,T2,...",
        help="extra density snapshot times (final time always written)",
    )
    p_evolve.add_argument("--progress", action="store_true")
    p_evolve.set_defaults(func=cmd_evolve)

    p_sweep = sub.add_parser("sweep", help="evolve across left-edge widths W2")
    _add_config_args(p_sweep)
    p_sweep.add_argument("--out", required=True, metavar="DIR")
    p_sweep.add_argument(
        "--W2-values",
        dest="W2_values",
        metavar="F1,F2,...",
        help="W2 values in Compton wavelengths (default 0.075..1.5)",
    )
    p_sweep.add_argument("--progress", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_peaks = sub.add_parser(
        "peaks", help="predict, detect, and match multi-photon spectrum peaks"
    )
    _add_config_args(p_peaks)
    p_peaks.add_argument("--out", required=True, metavar="DIR", help="run directory with spectrum.csv")
    p_peaks.add_argument("--n-photons", type=int, default=3, dest="n_photons")
    p_peaks.add_argument("--range", metavar="A:B", help="inclusive mode range to scan")
    p_peaks.set_defaults(func=cmd_peaks)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BoundStateError as exc:
        print(f"bound-state solve failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PropagationError as exc:
        print(f"propagation aborted: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
