"""Fit coupling and insertion parameters so mean link budgets hit anchors.

The coupling rolloff halfwidth and base loss are two free parameters of the
fiber-coupling model.  Given target mean total losses for known per-axis
jitter levels at known distances, plus a target static total at a reference
distance, this module solves:

  1. per-terminal insertion loss from the static anchor (closed form),
  2. the rolloff halfwidth by bisection on the mean-loss difference between
     the smallest-jitter and largest-jitter anchors (Monte Carlo mean over a
     two-axis Gaussian jitter distribution),
  3. the base loss from the smallest-jitter anchor (one fixed-point pass;
     the model is additive in base).

A solution counts as converged when every anchor is reproduced within the
tolerance.  An over-determined or contradictory anchor set simply leaves
residuals above tolerance; that is reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import optics
from .scenario import Scenario

DEFAULT_TOLERANCE_DB = 0.2
_BISECT_LO_RAD = 1e-7
_BISECT_HI_RAD = 1e-2
_BISECT_ITERATIONS = 200


@dataclass(frozen=True)
class MeanLossAnchor:
    """Target mean total loss for Gaussian per-axis jitter at one distance."""

    sigma_rad: float
    distance_m: float
    mean_loss_db: float

    def __post_init__(self) -> None:
        if self.sigma_rad < 0.0:
            raise ValueError("sigma_rad must be >= 0")
        if self.distance_m <= 0.0:
            raise ValueError("distance_m must be positive")


@dataclass(frozen=True)
class CalibrationResult:
    converged: bool
    rolloff_halfwidth_rad: float
    base_coupling_loss_db: float
    insertion_loss_db_per_terminal: float
    residuals_db: dict[str, float]
    samples: int

    def as_dict(self) -> dict:
        return {
            "converged": self.converged,
            "rolloff_halfwidth_urad": self.rolloff_halfwidth_rad * 1e6,
            "base_coupling_loss_db": self.base_coupling_loss_db,
            "insertion_loss_db_per_terminal": self.insertion_loss_db_per_terminal,
            "residuals_db": dict(self.residuals_db),
            "samples": self.samples,
        }


def _static_total_db(scenario: Scenario, insertion_db: float, distance_m: float) -> float:
    """Diffraction + insertion (both terminals) + atmosphere at one distance."""
    antenna = replace(scenario.antenna, insertion_loss_db=insertion_db)
    diffraction = optics.diffraction_loss_db(scenario.beam, antenna, antenna, distance_m)
    return diffraction + 2.0 * insertion_db + optics.atmospheric_loss_db(
        scenario.atmosphere, distance_m
    )


def calibrate_coupling(
    scenario: Scenario,
    anchors: list[MeanLossAnchor],
    static_total_db: float | None = None,
    static_distance_m: float | None = None,
    samples: int = 200_000,
    seed: int = 0,
    tolerance_db: float = DEFAULT_TOLERANCE_DB,
) -> CalibrationResult:
    """Solve (rolloff halfwidth, base loss, insertion loss) against anchors.

    Parameters without an anchor to determine them keep the scenario values;
    residuals are evaluated for every anchor provided.
    """
    if samples < 1000:
        raise ValueError("samples must be >= 1000")
    if (static_total_db is None) != (static_distance_m is None):
        raise ValueError("static_total_db and static_distance_m go together")

    residuals: dict[str, float] = {}
    converged = True

    # 1. insertion loss from the static anchor
    insertion = scenario.antenna.insertion_loss_db
    if static_total_db is not None:
        bare = _static_total_db(scenario, 0.0, static_distance_m)
        insertion = 0.5 * (static_total_db - bare)
        if insertion < 0.0:
            insertion = 0.0
            converged = False
        residuals["static_total_db"] = (
            _static_total_db(scenario, insertion, static_distance_m) - static_total_db
        )

    # fixed Monte Carlo unit draws, shared by every anchor evaluation so the
    # bisection objective is smooth and the result is seed-deterministic
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    unit_r2 = rng.standard_normal(samples) ** 2 + rng.standard_normal(samples) ** 2
    mean_unit_r2 = float(unit_r2.mean())

    def mean_excess_db(sigma_rad: float, halfwidth_rad: float) -> float:
        return optics.DB_PER_NEPER * sigma_rad**2 * mean_unit_r2 / halfwidth_rad**2

    # 2. rolloff halfwidth by bisection on the widest jitter spread
    halfwidth = scenario.coupling.rolloff_halfwidth_rad
    base = scenario.coupling.base_coupling_loss_db
    if anchors:
        lo_anchor = min(anchors, key=lambda a: a.sigma_rad)
        hi_anchor = max(anchors, key=lambda a: a.sigma_rad)
        if hi_anchor.sigma_rad > lo_anchor.sigma_rad:
            target_gap = (
                (hi_anchor.mean_loss_db - lo_anchor.mean_loss_db)
                - (
                    _static_total_db(scenario, insertion, hi_anchor.distance_m)
                    - _static_total_db(scenario, insertion, lo_anchor.distance_m)
                )
            )
            if target_gap > 0.0:
                lo, hi = _BISECT_LO_RAD, _BISECT_HI_RAD
                for _ in range(_BISECT_ITERATIONS):
                    mid = 0.5 * (lo + hi)
                    gap = mean_excess_db(hi_anchor.sigma_rad, mid) - mean_excess_db(
                        lo_anchor.sigma_rad, mid
                    )
                    if gap > target_gap:
                        lo = mid  # too much rolloff; widen
                    else:
                        hi = mid
                halfwidth = 0.5 * (lo + hi)
            else:
                converged = False  # larger jitter cannot mean lower loss

        # 3. base loss from the smallest-jitter anchor
        base = (
            lo_anchor.mean_loss_db
            - _static_total_db(scenario, insertion, lo_anchor.distance_m)
            - mean_excess_db(lo_anchor.sigma_rad, halfwidth)
        )
        if base <= 0.0:
            base = 1e-6
            converged = False

    for i, anchor in enumerate(anchors):
        achieved = (
            _static_total_db(scenario, insertion, anchor.distance_m)
            + base
            + mean_excess_db(anchor.sigma_rad, halfwidth)
        )
        residuals[f"anchor_{i}_sigma_{anchor.sigma_rad * 1e6:g}_urad"] = (
            achieved - anchor.mean_loss_db
        )

    if any(abs(r) > tolerance_db for r in residuals.values()):
        converged = False

    return CalibrationResult(
        converged=converged,
        rolloff_halfwidth_rad=halfwidth,
        base_coupling_loss_db=base,
        insertion_loss_db_per_terminal=insertion,
        residuals_db=residuals,
        samples=samples,
    )


def parse_anchor_file(payload: dict) -> tuple[list[MeanLossAnchor], float | None, float | None]:
    """Decode the anchors JSON document.

    Schema: {"mean_loss_anchors": [{"sigma_urad", "distance_m", "mean_loss_db"}...],
             "static_total_db": number | absent,
             "static_distance_m": number | absent}
    """
    known = {"mean_loss_anchors", "static_total_db", "static_distance_m"}
    unknown = set(payload) - known
    if unknown:
        raise ValueError(f"unknown anchor keys: {sorted(unknown)}")
    anchors = []
    for i, entry in enumerate(payload.get("mean_loss_anchors", [])):
        extra = set(entry) - {"sigma_urad", "distance_m", "mean_loss_db"}
        if extra:
            raise ValueError(f"anchor {i}: unknown keys {sorted(extra)}")
        try:
            anchors.append(
                MeanLossAnchor(
                    sigma_rad=float(entry["sigma_urad"]) * 1e-6,
                    distance_m=float(entry["distance_m"]),
                    mean_loss_db=float(entry["mean_loss_db"]),
                )
            )
        except KeyError as exc:
            raise ValueError(f"anchor {i}: missing key {exc}") from exc
    static_total = payload.get("static_total_db")
    static_distance = payload.get("static_distance_m")
    return (
        anchors,
        None if static_total is None else float(static_total),
        None if static_distance is None else float(static_distance),
    )
