"""Command-line interface: budget, sweep, track, run, calibrate.

Exit codes are a stable contract:
  0 success, 1 validation/parse error, 2 nonconvergence, 3 I/O error.

All emitted artifacts are deterministic functions of (scenario, seed,
flags); rerunning a command reproduces byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import io as fsio
from .apt import TrackingSeries, run_apt, tracking_stats
from .calibrate import DEFAULT_TOLERANCE_DB, calibrate_coupling, parse_anchor_file
from .link import (
    LossSeries,
    loss_statistics,
    loss_timeseries,
    summarize,
    throughput_timeseries,
)
from .optics import link_budget
from .scenario import Scenario, ScenarioError, default_scenario, load_scenario
from .states import STATE_NAMES

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NONCONVERGENCE = 2
EXIT_IO = 3

SCHEMA_VERSION = 1

# Default calibration targets: mean-loss anchors for low/high jitter at 1 km
# and the static total at 10 km (see README for the file format).
DEFAULT_ANCHORS = {
    "mean_loss_anchors": [
        {"sigma_urad": 3.0, "distance_m": 1000.0, "mean_loss_db": 13.7},
        {"sigma_urad": 24.0, "distance_m": 1000.0, "mean_loss_db": 29.3},
    ],
    "static_total_db": 12.7,
    "static_distance_m": 10000.0,
}

_STAGE_CHOICES = {
    "coarse": (False, False),
    "fine1": (True, False),
    "full": (True, True),
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which collides with the
    # nonconvergence code; route usage errors to the validation code instead
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="fsosim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: _Parser, seed: bool = True, duration: float | None = None):
        p.add_argument("--scenario", type=str, default=None,
                       help="scenario JSON path (built-in defaults when omitted)")
        p.add_argument("--out", type=str, default=None,
                       help="output directory (stdout-only when omitted)")
        if seed:
            p.add_argument("--seed", type=int, default=1, help="64-bit run seed")
        if duration is not None:
            p.add_argument("--duration", type=float, default=duration,
                           help="simulated seconds")

    p = sub.add_parser("budget", help="print the link budget at one distance")
    add_common(p, seed=False)
    p.add_argument("--distance-m", type=float, default=None,
                   help="override the scenario node separation")
    p.add_argument("--error-urad", type=float, default=0.0,
                   help="radial pointing error for the jitter term")

    p = sub.add_parser("sweep", help="distance sweep of the static budget (CSV)")
    add_common(p, seed=False)
    p.add_argument("--min-km", type=float, default=0.1)
    p.add_argument("--max-km", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=100)

    p = sub.add_parser("track", help="simulate tracking; CSV + stats JSON")
    add_common(p, duration=120.0)
    p.add_argument("--fine-after", type=float, default=0.0,
                   help="keep fine stages disabled until this time (s)")
    p.add_argument("--stages", choices=sorted(_STAGE_CHOICES), default=None,
                   help="which tracking stages may engage (default: scenario)")

    p = sub.add_parser("run", help="tracking + loss + throughput; CSVs + report JSON")
    add_common(p, duration=120.0)
    p.add_argument("--seeds", type=str, default=None,
                   help="inclusive seed range a..b (overrides --seed)")

    p = sub.add_parser("calibrate", help="fit coupling/insertion to loss anchors")
    add_common(p, seed=True)
    p.add_argument("--anchors", type=str, default=None,
                   help="anchor JSON path (built-in defaults when omitted)")
    p.add_argument("--samples", type=int, default=200_000,
                   help="Monte Carlo samples per mean-loss evaluation")
    p.add_argument("--tolerance-db", type=float, default=DEFAULT_TOLERANCE_DB)
    return parser


# ---------------------------------------------------------------------------
# helpers

def _load(args) -> Scenario:
    if args.scenario is None:
        return default_scenario()
    return load_scenario(args.scenario)


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit_json(payload: dict, out: Path | None, filename: str) -> None:
    text = fsio.canonical_json(payload)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out / filename, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _scenario_header(scenario: Scenario) -> dict:
    return {
        "name": scenario.name,
        "digest": scenario.digest,
        "distance_m": scenario.distance_m,
    }


def _check_seed(seed: int) -> int:
    if not (0 <= seed < 2**64):
        raise ValueError("seed must fit in 64 bits")
    return seed


def _parse_seed_range(text: str) -> list[int]:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text.strip())
    if not m:
        raise ValueError("--seeds expects an inclusive range a..b")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise ValueError("--seeds range must have a <= b")
    if b - a + 1 > 10_000:
        raise ValueError("--seeds range too large")
    return [_check_seed(s) for s in range(a, b + 1)]


def _stats_dict(series: TrackingSeries, t0: float, t1: float) -> dict:
    s = tracking_stats(series, t0, t1)
    return {
        "window_t0_s": t0,
        "window_t1_s": t1,
        "radial_mean_urad": s.radial_mean_rad * 1e6,
        "radial_std_urad": s.radial_std_rad * 1e6,
        "pitch_mean_urad": s.pitch_mean_rad * 1e6,
        "pitch_std_urad": s.pitch_std_rad * 1e6,
        "azimuth_mean_urad": s.azimuth_mean_rad * 1e6,
        "azimuth_std_urad": s.azimuth_std_rad * 1e6,
        "count": s.count,
    }


def _time_in_state(series: TrackingSeries) -> dict:
    counts = np.bincount(series.state, minlength=len(STATE_NAMES))
    return {
        STATE_NAMES[i]: counts[i] / 1000.0
        for i in range(len(STATE_NAMES))
        if counts[i]
    }


def _summary_dict(stats) -> dict:
    return {
        "mean": stats.mean,
        "std": stats.std,
        "min": stats.minimum,
        "max": stats.maximum,
        "count": stats.count,
    }


def _roundtrip(values: np.ndarray) -> np.ndarray:
    # pass values through the CSV number format so reported statistics equal
    # statistics of the emitted file exactly
    return np.array([float(fsio.format_sig(v)) for v in values])


# ---------------------------------------------------------------------------
# verbs

def cmd_budget(args) -> int:
    scenario = _load(args)
    distance = args.distance_m if args.distance_m is not None else scenario.distance_m
    if distance < 0.0:
        raise ValueError("--distance-m must be >= 0")
    error_rad = args.error_urad * 1e-6
    if error_rad < 0.0:
        raise ValueError("--error-urad must be >= 0")
    budget = link_budget(
        scenario.beam, scenario.antenna, scenario.antenna,
        scenario.atmosphere, scenario.coupling, distance, error_rad,
    )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "scenario": _scenario_header(scenario),
        "distance_m": distance,
        "radial_error_urad": args.error_urad,
        "budget": {
            "diffraction_db": budget.diffraction_db,
            "optics_db": budget.optics_db,
            "atmosphere_db": budget.atmosphere_db,
            "coupling_base_db": budget.coupling_base_db,
            "jitter_excess_db": budget.jitter_excess_db,
            "total_db": budget.total_db,
        },
    }
    _emit_json(payload, _out_dir(args), "budget.json")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _load(args)
    from .optics import distance_sweep

    rows = distance_sweep(
        scenario.beam, scenario.antenna, scenario.antenna,
        scenario.atmosphere, scenario.coupling,
        args.min_km * 1000.0, args.max_km * 1000.0, args.steps,
    )
    out = _out_dir(args)
    if out is None:
        sys.stdout.write(fsio.SWEEP_HEADER + "\n")
        for d, diff, total in rows:
            sys.stdout.write(
                f"{fsio.format_sig(d)},{fsio.format_sig(diff)},{fsio.format_sig(total)}\n"
            )
    else:
        fsio.write_sweep_csv(out / "sweep.csv", rows)
    return EXIT_OK


def cmd_track(args) -> int:
    scenario = _load(args)
    _check_seed(args.seed)
    if args.duration <= 0.0:
        raise ValueError("--duration must be positive")
    if args.fine_after < 0.0:
        raise ValueError("--fine-after must be >= 0")
    if args.stages is None:
        fine1, fine2 = scenario.apt.fine1_enabled, scenario.apt.fine2_enabled
    else:
        fine1, fine2 = _STAGE_CHOICES[args.stages]
    series = run_apt(
        scenario, args.duration, args.seed,
        enable_fine1=fine1, enable_fine2=fine2, fine_after_s=args.fine_after,
    )
    out = _out_dir(args)
    warmup = min(scenario.apt.stats_warmup_s, 0.5 * args.duration)
    stage_name = {(False, False): "coarse", (True, False): "fine1",
                  (True, True): "full"}[(fine1, fine2)]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "scenario": _scenario_header(scenario),
        "seed": args.seed,
        "duration_s": args.duration,
        "stages": stage_name,
        "fine_after_s": args.fine_after,
        "stats": _stats_dict(series, warmup, args.duration),
        "time_in_state_s": _time_in_state(series),
        "files": {"tracking_csv": "tracking.csv"} if out is not None else None,
    }
    if args.fine_after > 0.0:
        payload["stats_after_fine"] = _stats_dict(series, args.fine_after, args.duration)
    if out is not None:
        fsio.write_tracking_csv(out / "tracking.csv", series)
    _emit_json(payload, out, "tracking_stats.json")
    return EXIT_OK


def _run_one_seed(scenario: Scenario, duration: float, seed: int,
                  out: Path | None, multi: bool) -> dict:
    series = run_apt(scenario, duration, seed)
    warmup = scenario.apt.stats_warmup_s
    windowed = series.window(warmup, duration)
    loss = loss_timeseries(
        windowed, scenario.beam, scenario.antenna, scenario.antenna,
        scenario.atmosphere, scenario.coupling, scenario.distance_m,
        fixed_loss_db=scenario.fixed_loss_db,
    )
    # statistics are taken over CSV-precision values (see module docstring)
    loss = LossSeries(
        t_s=loss.t_s, loss_db=_roundtrip(loss.loss_db), link_up=loss.link_up
    )
    throughput = throughput_timeseries(loss, scenario.transceiver)

    loss_name = f"loss_{seed}.csv" if multi else "loss.csv"
    thr_name = f"throughput_{seed}.csv" if multi else "throughput.csv"
    if out is not None:
        fsio.write_loss_csv(out / loss_name, loss)
        fsio.write_throughput_csv(out / thr_name, throughput)

    finite = loss.loss_db[np.isfinite(loss.loss_db)]
    down = np.count_nonzero(
        ~(loss.loss_db <= scenario.transceiver.max_tolerable_loss_db)
    ) / loss.loss_db.size
    return {
        "seed": seed,
        "files": (
            {"loss_csv": loss_name, "throughput_csv": thr_name}
            if out is not None else None
        ),
        "tracking": _stats_dict(series, warmup, duration),
        "loss_db": (
            dict(_summary_dict(loss_statistics(loss)), downtime_fraction=down)
            if finite.size
            else {"mean": None, "std": None, "min": None, "max": None,
                  "count": 0, "downtime_fraction": down}
        ),
        "throughput_gbps": _summary_dict(summarize(throughput.rate_gbps)),
        "time_in_state_s": _time_in_state(series),
    }


def cmd_run(args) -> int:
    scenario = _load(args)
    if args.duration <= scenario.apt.stats_warmup_s:
        raise ValueError(
            f"--duration must exceed the stats warmup ({scenario.apt.stats_warmup_s} s)"
        )
    seeds = _parse_seed_range(args.seeds) if args.seeds else [_check_seed(args.seed)]
    seeds = sorted(set(seeds))
    out = _out_dir(args)
    multi = args.seeds is not None
    per_seed = [_run_one_seed(scenario, args.duration, s, out, multi) for s in seeds]

    loss_means = [r["loss_db"]["mean"] for r in per_seed if r["loss_db"]["mean"] is not None]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "scenario": _scenario_header(scenario),
        "duration_s": args.duration,
        "window_t0_s": scenario.apt.stats_warmup_s,
        "window_t1_s": args.duration,
        "seeds": seeds,
        "per_seed": per_seed,
        "aggregate": {
            "loss_db_mean": (
                float(np.mean(loss_means)) if loss_means else None
            ),
            "throughput_gbps_mean": float(
                np.mean([r["throughput_gbps"]["mean"] for r in per_seed])
            ),
            "downtime_fraction_mean": float(
                np.mean([r["loss_db"]["downtime_fraction"] for r in per_seed])
            ),
        },
    }
    _emit_json(payload, out, "report.json")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    scenario = _load(args)
    _check_seed(args.seed)
    if args.anchors is None:
        payload = DEFAULT_ANCHORS
    else:
        with open(args.anchors, "r", encoding="utf-8") as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"anchors file: {exc}") from exc
    anchors, static_total, static_distance = parse_anchor_file(payload)
    result = calibrate_coupling(
        scenario, anchors,
        static_total_db=static_total, static_distance_m=static_distance,
        samples=args.samples, seed=args.seed, tolerance_db=args.tolerance_db,
    )
    report = {
        "schema_version": SCHEMA_VERSION,
        "scenario": _scenario_header(scenario),
        "samples": result.samples,
        "seed": args.seed,
        "result": result.as_dict(),
    }
    _emit_json(report, _out_dir(args), "calibration.json")
    return EXIT_OK if result.converged else EXIT_NONCONVERGENCE


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "budget": cmd_budget,
        "sweep": cmd_sweep,
        "track": cmd_track,
        "run": cmd_run,
        "calibrate": cmd_calibrate,
    }
    try:
        return handlers[args.command](args)
    except ScenarioError as exc:
        print(f"fsosim: scenario error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"fsosim: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"fsosim: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
