"""CSV and JSON serialization for series and run reports.

All CSVs use 6 significant digits, '.' as the decimal separator and plain
'\\n' line endings.  A written file re-parses to values that format back to
the identical text, so emitted artifacts are stable round-trip.  Infinite
loss samples are written as 'inf'.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .apt import TrackingSeries
from .link import LossSeries, ThroughputSeries
from .states import NAME_TO_STATE, STATE_NAMES

SWEEP_HEADER = "distance_m,diffraction_db,total_static_db"
TRACKING_HEADER = (
    "t_s,state,err_pitch_urad,err_az_urad,"
    "fsm1_p_urad,fsm1_a_urad,fsm2_p_urad,fsm2_a_urad,lock0,lock1,lock2"
)
LOSS_HEADER = "t_s,loss_db,link_up"
THROUGHPUT_HEADER = "t_s,rate_gbps"


def format_sig(value: float) -> str:
    """One CSV number: 6 significant digits ('%.6g'), infinities as 'inf'."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return "%.6g" % value


def _write_lines(path: str | Path, header: str, rows: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _read_rows(path: str | Path, expected_header: str) -> list[list[str]]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != expected_header:
            raise ValueError(f"unexpected CSV header {header!r}")
        return [line.rstrip("\n").split(",") for line in fh if line.strip()]


# ---------------------------------------------------------------------------
# distance sweep

def write_sweep_csv(path: str | Path, rows: Iterable[tuple[float, float, float]]) -> None:
    _write_lines(
        path,
        SWEEP_HEADER,
        (
            f"{format_sig(d)},{format_sig(diff)},{format_sig(total)}"
            for d, diff, total in rows
        ),
    )


def read_sweep_csv(path: str | Path) -> list[tuple[float, float, float]]:
    return [
        (float(r[0]), float(r[1]), float(r[2]))
        for r in _read_rows(path, SWEEP_HEADER)
    ]


# ---------------------------------------------------------------------------
# tracking

def write_tracking_csv(path: str | Path, series: TrackingSeries) -> None:
    f = format_sig
    rows = (
        f"{f(t)},{STATE_NAMES[int(s)]},{f(ep * 1e6)},{f(ea * 1e6)},"
        f"{f(f1p * 1e6)},{f(f1a * 1e6)},{f(f2p * 1e6)},{f(f2a * 1e6)},"
        f"{int(l0)},{int(l1)},{int(l2)}"
        for t, s, ep, ea, f1p, f1a, f2p, f2a, l0, l1, l2 in zip(
            series.t_s,
            series.state,
            series.error_pitch_rad,
            series.error_azimuth_rad,
            series.fsm1_pitch_rad,
            series.fsm1_azimuth_rad,
            series.fsm2_pitch_rad,
            series.fsm2_azimuth_rad,
            series.lock0,
            series.lock1,
            series.lock2,
        )
    )
    _write_lines(path, TRACKING_HEADER, rows)


def read_tracking_csv(path: str | Path) -> TrackingSeries:
    """Parse a tracking CSV.  Gimbal angles and run metadata are not stored
    in the CSV; they come back zeroed/empty."""
    raw = _read_rows(path, TRACKING_HEADER)
    n = len(raw)
    t = np.empty(n)
    state = np.empty(n, dtype=np.int8)
    cols = [np.empty(n) for _ in range(6)]
    locks = [np.empty(n, dtype=bool) for _ in range(3)]
    for i, r in enumerate(raw):
        t[i] = float(r[0])
        state[i] = int(NAME_TO_STATE[r[1]])
        for j in range(6):
            cols[j][i] = float(r[2 + j]) * 1e-6
        for j in range(3):
            locks[j][i] = r[8 + j] == "1"
    return TrackingSeries(
        t_s=t,
        state=state,
        error_pitch_rad=cols[0],
        error_azimuth_rad=cols[1],
        gimbal_azimuth_rad=np.zeros(n),
        gimbal_pitch_rad=np.zeros(n),
        fsm1_pitch_rad=cols[2],
        fsm1_azimuth_rad=cols[3],
        fsm2_pitch_rad=cols[4],
        fsm2_azimuth_rad=cols[5],
        lock0=locks[0],
        lock1=locks[1],
        lock2=locks[2],
        scenario_name="",
        scenario_digest="",
        seed=0,
    )


# ---------------------------------------------------------------------------
# loss / throughput

def write_loss_csv(path: str | Path, series: LossSeries) -> None:
    f = format_sig
    rows = (
        f"{f(t)},{f(loss)},{int(up)}"
        for t, loss, up in zip(series.t_s, series.loss_db, series.link_up)
    )
    _write_lines(path, LOSS_HEADER, rows)


def read_loss_csv(path: str | Path) -> LossSeries:
    raw = _read_rows(path, LOSS_HEADER)
    n = len(raw)
    t = np.empty(n)
    loss = np.empty(n)
    up = np.empty(n, dtype=bool)
    for i, r in enumerate(raw):
        t[i] = float(r[0])
        loss[i] = float(r[1])
        up[i] = r[2] == "1"
    return LossSeries(t_s=t, loss_db=loss, link_up=up)


def write_throughput_csv(path: str | Path, series: ThroughputSeries) -> None:
    f = format_sig
    rows = (f"{f(t)},{f(r)}" for t, r in zip(series.t_s, series.rate_gbps))
    _write_lines(path, THROUGHPUT_HEADER, rows)


def read_throughput_csv(path: str | Path) -> ThroughputSeries:
    raw = _read_rows(path, THROUGHPUT_HEADER)
    t = np.array([float(r[0]) for r in raw])
    rate = np.array([float(r[1]) for r in raw])
    return ThroughputSeries(t_s=t, rate_gbps=rate)


# ---------------------------------------------------------------------------
# reports

def canonical_json(payload: dict) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_json(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(canonical_json(payload))
