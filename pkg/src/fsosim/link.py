"""Link-level series: per-sample loss, achievable throughput, summary statistics.

Loss samples are positive dB.  Ticks where no beacon is being tracked carry
math.inf as a "no link" sentinel; such samples are excluded from loss
statistics and counted into the downtime fraction instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from . import optics
from .states import LOCK_STATES

if TYPE_CHECKING:  # avoid a runtime import cycle; apt provides the series type
    from .apt import TrackingSeries

NO_LINK_LOSS_DB = math.inf


@dataclass(frozen=True)
class TransceiverSpec:
    """Fixed-rate transceiver with a hard sensitivity threshold."""

    rated_gbps: float = 10.0
    effective_tcp_gbps: float = 9.27
    tcp_efficiency: float = 0.988
    max_tolerable_loss_db: float = 24.1

    def __post_init__(self) -> None:
        if self.rated_gbps <= 0.0 or self.effective_tcp_gbps <= 0.0:
            raise ValueError("rates must be positive")
        if not 0.0 < self.tcp_efficiency <= 1.0:
            raise ValueError("tcp_efficiency must be in (0, 1]")
        if self.effective_tcp_gbps > self.rated_gbps:
            raise ValueError("effective_tcp_gbps exceeds rated_gbps")
        if self.max_tolerable_loss_db <= 0.0:
            raise ValueError("max_tolerable_loss_db must be positive")

    @property
    def link_rate_gbps(self) -> float:
        """Delivered TCP rate while the loss is within tolerance."""
        return self.effective_tcp_gbps * self.tcp_efficiency


@dataclass(frozen=True)
class LossSeries:
    """Per-tick total link loss; same length and timestamps as its source."""

    t_s: np.ndarray
    loss_db: np.ndarray
    link_up: np.ndarray  # bool; False where loss is the no-link sentinel


@dataclass(frozen=True)
class ThroughputSeries:
    t_s: np.ndarray
    rate_gbps: np.ndarray


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float
    minimum: float
    maximum: float
    count: int


def loss_timeseries(
    tracking: "TrackingSeries",
    beam: optics.BeamModel,
    tx: optics.AntennaSpec,
    rx: optics.AntennaSpec,
    atm: optics.AtmosphereModel,
    cm: optics.CouplingModel,
    distance_m: float,
    fixed_loss_db: float | None = None,
) -> LossSeries:
    """Total loss per tracking sample.

    Static terms come from the budget at the scenario distance; the jitter
    excess follows the instantaneous radial pointing error.  When
    fixed_loss_db is set (bench configurations with an inline attenuator)
    it replaces the modeled loss while in lock.  Out-of-lock ticks get the
    no-link sentinel.
    """
    in_lock = np.isin(tracking.state, [int(s) for s in LOCK_STATES])
    radial = np.hypot(tracking.error_pitch_rad, tracking.error_azimuth_rad)
    if fixed_loss_db is None:
        static = optics.link_budget(beam, tx, rx, atm, cm, distance_m, 0.0).total_db
        scale = optics.DB_PER_NEPER / cm.rolloff_halfwidth_rad**2
        loss = static + scale * radial * radial
    else:
        loss = np.full(radial.shape, float(fixed_loss_db))
    loss = np.where(in_lock, loss, NO_LINK_LOSS_DB)
    return LossSeries(t_s=tracking.t_s.copy(), loss_db=loss, link_up=in_lock.copy())


def throughput_timeseries(loss: LossSeries, transceiver: TransceiverSpec) -> ThroughputSeries:
    """Hard-threshold rate: full TCP rate at or below the tolerable loss, else zero."""
    rate = np.where(
        loss.loss_db <= transceiver.max_tolerable_loss_db,
        transceiver.link_rate_gbps,
        0.0,
    )
    return ThroughputSeries(t_s=loss.t_s.copy(), rate_gbps=rate)


def summarize(values: Iterable[float]) -> SummaryStats:
    """Mean/population-std/min/max with compensated summation in index order.

    Sums use math.fsum (exactly rounded, order independent up to rounding),
    so repeated runs over the same samples give identical statistics.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise ValueError("summarize requires at least one value")
    n = data.size
    mean = math.fsum(data) / n
    var = math.fsum((data - mean) ** 2) / n
    return SummaryStats(
        mean=mean,
        std=math.sqrt(var),
        minimum=float(data.min()),
        maximum=float(data.max()),
        count=int(n),
    )


def loss_statistics(loss: LossSeries) -> SummaryStats:
    """Summary of the finite (in-lock) loss samples."""
    finite = loss.loss_db[np.isfinite(loss.loss_db)]
    return summarize(finite)


def downtime_fraction(loss: LossSeries, transceiver: TransceiverSpec) -> float:
    """Share of samples whose loss exceeds the tolerable maximum (sentinel included)."""
    if loss.loss_db.size == 0:
        raise ValueError("empty loss series")
    down = np.count_nonzero(~(loss.loss_db <= transceiver.max_tolerable_loss_db))
    return down / loss.loss_db.size
