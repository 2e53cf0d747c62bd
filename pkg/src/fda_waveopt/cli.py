"""Command-line front end: validate scenarios, design waveforms, analyze.

Verbs
-----
validate   parse a scenario, echo geometry, frequencies, gates, and the
           reference waveform's feasibility report
optimize   run a waveform design (one or more similarity levels) and
           write trace.csv, waveform.json, weights.json, manifest.json
spectrum   write the scene power map of the reference (no waveform given)
           or the receive-filter output map (waveform given) plus cuts
pulse      write the pulse-compression profile of one antenna's waveform

Exit codes: 0 success, 2 scenario/config error, 3 solver non-convergence,
4 I/O error.  The environment variable ``FDA_WAVEOPT_LOG`` sets the log
level.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import datetime as _dt
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .analysis import (
    default_grid,
    output_spectrum_map,
    pulse_compression,
    scene_power_map,
    spectrum_cut,
)
from .config_io import ConfigError, Scenario, config_digest, load_scenario
from .constraints import build_constraints, feasibility_report
from .mmadmm import mmadmm_run
from .mvdr import SinrModel
from .padmm import padmm_run
from .signal_model import (
    WaveformMatrix,
    range_gate,
    reference_olfm,
    spatial_frequencies,
)
from .trace import SolverResult, StopRule

log = logging.getLogger("fda_waveopt.cli")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


# -- serialization helpers ---------------------------------------------

def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _complex_payload(arr: np.ndarray) -> dict:
    arr = np.asarray(arr, dtype=complex)
    return {"re": arr.real.tolist(), "im": arr.imag.tolist()}


def _complex_from_payload(payload: dict) -> np.ndarray:
    return np.asarray(payload["re"], dtype=float) + 1j * np.asarray(
        payload["im"], dtype=float)


def write_waveform(path: Path, waveform: WaveformMatrix) -> None:
    payload = {"n_tx": waveform.n_tx, "n_samples": waveform.n_samples}
    payload.update(_complex_payload(waveform.entries))
    _write_json(path, payload)


def read_waveform(path: Path) -> WaveformMatrix:
    with open(path) as fh:
        payload = json.load(fh)
    entries = _complex_from_payload(payload)
    if entries.ndim != 2:
        raise ValueError("waveform entries must be a matrix")
    return WaveformMatrix(entries)


def write_weights(path: Path, weights: np.ndarray) -> None:
    _write_json(path, _complex_payload(np.asarray(weights)))


def read_weights(path: Path) -> np.ndarray:
    with open(path) as fh:
        return _complex_from_payload(json.load(fh))


def write_trace(path: Path, result: SolverResult) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "sinr_db", "primal_residual",
                         "energy_residual"])
        for rec in result.trace:
            writer.writerow([rec.iteration, repr(float(rec.sinr_db)),
                             repr(float(rec.primal_residual)),
                             repr(float(rec.energy_residual))])


def _file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _source_echo(scenario: Scenario) -> List[dict]:
    cfg = scenario.cfg
    echo = []
    for src in scenario.sources:
        freqs = spatial_frequencies(cfg, src)
        gate = range_gate(cfg, src)
        echo.append({
            "kind": src.kind,
            "range_m": src.range_m,
            "angle_deg": float(np.rad2deg(src.angle_rad)),
            "power_db": src.power_db,
            "f_tx": freqs.f_tx,
            "f_rx": freqs.f_rx,
            "gate": gate.gate,
            "gate_case": gate.case,
        })
    return echo


def write_manifest(out_dir: Path, scenario: Scenario, command: str,
                   extra: dict, files: Sequence[str]) -> None:
    manifest = {
        "tool": "fda-waveopt",
        "version": __version__,
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "command": command,
        "config_digest": config_digest(scenario.raw),
        "sources": _source_echo(scenario),
        "files": {name: _file_digest(out_dir / name) for name in files},
    }
    manifest.update(extra)
    _write_json(out_dir / "manifest.json", manifest)


# -- verbs -------------------------------------------------------------

def _scenario_or_exit(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = _scenario_or_exit(args.config)
    cfg = scenario.cfg
    print(f"system: n_tx={cfg.n_tx} n_rx={cfg.n_rx} "
          f"carrier_hz={cfg.carrier_hz:g} freq_step_hz={cfg.freq_step_hz:g}")
    print(f"        pulse_s={cfg.pulse_s:g} sample_hz={cfg.sample_hz:g} "
          f"n_samples={cfg.n_samples} n_window={cfg.n_window}")
    print(f"        window_start_m={cfg.window_start_m:g} "
          f"range_cell_m={cfg.range_cell_m:g}")
    print("sources:")
    for entry in _source_echo(scenario):
        print(f"  {entry['kind']:<13s} range={entry['range_m']:>9.1f} m "
              f"angle={entry['angle_deg']:>6.1f} deg "
              f"power={entry['power_db']:>5.1f} dB  "
              f"f_tx={entry['f_tx']:+.6f} f_rx={entry['f_rx']:+.6f} "
              f"gate={entry['gate']} ({entry['gate_case']})")
    ref = reference_olfm(cfg, scenario.reference_bandwidth_hz)
    cs = build_constraints(cfg, ref, 1.0)
    report = feasibility_report(ref.antenna_vec, cs)
    print("reference feasibility (positive residual = violated):")
    print(f"  similarity max {report.similarity.max():+.3e}")
    print(f"  energy     max {np.abs(report.energy).max():+.3e}")
    print(f"  band       max {report.band.max():+.3e}")
    return EXIT_OK


def _single_design(scenario: Scenario, algo: str, eps: float,
                   rho: Dict[str, float], stop: StopRule,
                   out_dir: Path, seed: Optional[int]) -> str:
    """Run one design and write its artifact set; returns the status."""
    cfg = scenario.cfg
    ref = reference_olfm(cfg, scenario.reference_bandwidth_hz)
    cs = build_constraints(cfg, ref, eps)
    start = time.perf_counter()
    if algo == "mmadmm":
        result = mmadmm_run(cfg, scenario.sources, cs, rho1=rho["rho1"],
                            rho2=rho["rho2"], rho3=rho["rho3"], stop=stop)
    else:
        result = padmm_run(cfg, scenario.sources, cs, rho1=rho["rho1"],
                           rho2=rho["rho2"], stop=stop)
    wall_ms = 1000.0 * (time.perf_counter() - start)
    if not np.isfinite(result.sinr_db):
        raise ArithmeticError("solver produced a non-finite output")

    model = SinrModel(cfg, scenario.sources)
    weights = model.mvdr_weights(result.waveform)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trace(out_dir / "trace.csv", result)
    write_waveform(out_dir / "waveform.json",
                   WaveformMatrix.from_antenna_vec(result.waveform, cfg.n_tx))
    write_weights(out_dir / "weights.json", weights)
    write_manifest(
        out_dir, scenario, "optimize",
        {
            "algorithm": algo,
            "similarity_level": eps,
            "rho": rho,
            "seed": seed,
            "status": result.status,
            "iterations": result.iterations,
            "final_sinr_db": result.sinr_db,
            "wall_ms": wall_ms,
            "stop_rule": {
                "max_iter": stop.max_iter,
                "primal_tol": stop.primal_tol,
                "plateau_tol_db": stop.plateau_tol_db,
                "plateau_window": stop.plateau_window,
            },
        },
        ["trace.csv", "waveform.json", "weights.json"])
    log.info("%s eps=%g: %s after %d iterations, SINR %.3f dB",
             algo, eps, result.status, result.iterations, result.sinr_db)
    return result.status


def cmd_optimize(args: argparse.Namespace) -> int:
    scenario = _scenario_or_exit(args.config)
    rho = {"rho1": args.rho1, "rho2": args.rho2, "rho3": args.rho3}
    stop = StopRule(max_iter=args.max_iter)
    out_root = Path(args.out)
    eps_list = args.eps
    runs = []
    for eps in eps_list:
        sub = out_root if len(eps_list) == 1 else out_root / f"eps_{eps:g}"
        runs.append((eps, sub))
    try:
        if args.jobs > 1 and len(runs) > 1:
            with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
                futures = [
                    pool.submit(_single_design, scenario, args.algo, eps, rho,
                                stop, sub, args.seed)
                    for eps, sub in runs
                ]
                statuses = [f.result() for f in futures]
        else:
            statuses = [
                _single_design(scenario, args.algo, eps, rho, stop, sub,
                               args.seed)
                for eps, sub in runs
            ]
    except ArithmeticError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    for (eps, sub), status in zip(runs, statuses):
        print(f"{args.algo} eps={eps:g}: {status} -> {sub}")
    if any(status == "max_iter" for status in statuses):
        print("warning: iteration budget exhausted before convergence",
              file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _write_spectrum_csv(path: Path, grid) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["f_tx", "f_rx", "power_db"])
        for i, ft in enumerate(grid.f_tx):
            for j, fr in enumerate(grid.f_rx):
                writer.writerow([repr(float(ft)), repr(float(fr)),
                                 repr(float(grid.values_db[i, j]))])


def _write_cuts_csv(path: Path, cuts) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cut_id", "fixed_axis", "fixed_value", "axis_value",
                         "power_db"])
        for cut_id, cut in cuts:
            for x, v in zip(cut.axis, cut.values_db):
                writer.writerow([cut_id, cut.fixed_axis,
                                 repr(float(cut.fixed_value)),
                                 repr(float(x)), repr(float(v))])


def cmd_spectrum(args: argparse.Namespace) -> int:
    scenario = _scenario_or_exit(args.config)
    cfg = scenario.cfg
    axis = default_grid(args.grid)
    try:
        if args.waveform is None:
            ref = reference_olfm(cfg, scenario.reference_bandwidth_hz)
            grid = scene_power_map(cfg, scenario.sources, ref.antenna_vec,
                                   axis, axis)
            mode = "scene"
        else:
            waveform = read_waveform(Path(args.waveform))
            if waveform.n_tx != cfg.n_tx or waveform.n_samples != cfg.n_samples:
                print("config error: waveform shape does not match scenario",
                      file=sys.stderr)
                return EXIT_CONFIG
            s_t = waveform.antenna_vec
            if args.weights is not None:
                weights = read_weights(Path(args.weights))
                if weights.size != cfg.snapshot_dim:
                    print("config error: weights length does not match "
                          "scenario", file=sys.stderr)
                    return EXIT_CONFIG
            else:
                weights = SinrModel(cfg, scenario.sources).mvdr_weights(s_t)
            grid = output_spectrum_map(cfg, scenario.sources, s_t, weights,
                                       axis, axis)
            mode = "output"
        target_freqs = spatial_frequencies(cfg, scenario.sources.target)
        cuts = [
            (f"fix_frx_{target_freqs.f_rx:+.3f}",
             spectrum_cut(grid, "f_rx", target_freqs.f_rx)),
        ]
        for src in scenario.sources.interferences:
            freqs = spatial_frequencies(cfg, src)
            cuts.append((f"fix_ftx_{freqs.f_tx:+.3f}",
                         spectrum_cut(grid, "f_tx", freqs.f_tx)))
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_spectrum_csv(out_dir / "spectrum.csv", grid)
        _write_cuts_csv(out_dir / "cuts.csv", cuts)
        write_manifest(out_dir, scenario, "spectrum",
                       {"mode": mode, "grid_points": int(axis.size)},
                       ["spectrum.csv", "cuts.csv"])
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{mode} map ({axis.size}x{axis.size}) -> {args.out}")
    return EXIT_OK


def cmd_pulse(args: argparse.Namespace) -> int:
    scenario = _scenario_or_exit(args.config)
    cfg = scenario.cfg
    try:
        if args.waveform is None:
            waveform = reference_olfm(cfg, scenario.reference_bandwidth_hz)
        else:
            waveform = read_waveform(Path(args.waveform))
        if not 1 <= args.antenna <= waveform.n_tx:
            print(f"config error: antenna must lie in [1, {waveform.n_tx}]",
                  file=sys.stderr)
            return EXIT_CONFIG
        row = waveform.entries[args.antenna - 1]
        profile = pulse_compression(row, upsample_to=args.upsample,
                                    window=args.window)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "profile.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["lag_samples", "magnitude_db"])
            for lag, val in zip(profile.lag, profile.values_db):
                writer.writerow([repr(float(lag)), repr(float(val))])
        write_manifest(out_dir, scenario, "pulse",
                       {
                           "antenna": args.antenna,
                           "window": args.window,
                           "upsample_to": args.upsample,
                           "width_3db_samples": profile.width_3db,
                           "peak_sidelobe_db": profile.peak_sidelobe_db,
                       },
                       ["profile.csv"])
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"pulse profile (antenna {args.antenna}, width "
          f"{profile.width_3db:.4f} samples) -> {args.out}")
    return EXIT_OK


# -- entry point -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fda-waveopt",
        description="Range-dependent array waveform design and analysis")
    sub = parser.add_subparsers(dest="verb", required=True)

    p_val = sub.add_parser("validate", help="parse and echo a scenario")
    p_val.add_argument("config", help="scenario file or preset name")
    p_val.set_defaults(func=cmd_validate)

    p_opt = sub.add_parser("optimize", help="design a transmit waveform")
    p_opt.add_argument("config")
    p_opt.add_argument("--algo", choices=("padmm", "mmadmm"),
                       default="mmadmm")
    p_opt.add_argument("--eps", type=float, nargs="+", default=[1.0],
                       help="similarity level(s); several values run a sweep")
    p_opt.add_argument("--rho1", type=float, default=10.0)
    p_opt.add_argument("--rho2", type=float, default=10.0)
    p_opt.add_argument("--rho3", type=float, default=10.0,
                       help="ignored by padmm")
    p_opt.add_argument("--max-iter", type=int, default=500)
    p_opt.add_argument("--seed", type=int, default=None,
                       help="recorded in the manifest; the design itself "
                            "is deterministic")
    p_opt.add_argument("--jobs", type=int, default=1,
                       help="parallel workers for similarity sweeps")
    p_opt.add_argument("--out", required=True)
    p_opt.set_defaults(func=cmd_optimize)

    p_spec = sub.add_parser("spectrum", help="frequency-domain power maps")
    p_spec.add_argument("config")
    p_spec.add_argument("--waveform", default=None,
                        help="waveform.json; omitted = reference scene map")
    p_spec.add_argument("--weights", default=None,
                        help="weights.json; omitted = recompute from the "
                             "waveform")
    p_spec.add_argument("--grid", type=int, default=201)
    p_spec.add_argument("--out", required=True)
    p_spec.set_defaults(func=cmd_spectrum)

    p_pul = sub.add_parser("pulse", help="pulse-compression profile")
    p_pul.add_argument("config")
    p_pul.add_argument("--waveform", default=None,
                       help="waveform.json; omitted = reference")
    p_pul.add_argument("--antenna", type=int, default=1,
                       help="1-based antenna index")
    p_pul.add_argument("--upsample", type=int, default=1000)
    p_pul.add_argument("--window", choices=("hamming", "none"),
                       default="hamming")
    p_pul.add_argument("--out", required=True)
    p_pul.set_defaults(func=cmd_pulse)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("FDA_WAVEOPT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
