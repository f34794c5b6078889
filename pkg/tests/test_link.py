import math

import numpy as np
import pytest

from fsosim import (
    AptState,
    TrackingSeries,
    TransceiverSpec,
    downtime_fraction,
    loss_statistics,
    loss_timeseries,
    summarize,
    throughput_timeseries,
)
from fsosim.link import NO_LINK_LOSS_DB, LossSeries
from fsosim.optics import DB_PER_NEPER

TRX = TransceiverSpec(rated_gbps=10.0, effective_tcp_gbps=9.27,
                      tcp_efficiency=0.988, max_tolerable_loss_db=24.1)


def series_with(states, pitch_urad):
    n = len(states)
    z = np.zeros(n)
    return TrackingSeries(
        t_s=np.arange(n) / 1000.0,
        state=np.array([int(s) for s in states], dtype=np.int8),
        error_pitch_rad=np.asarray(pitch_urad, dtype=float) * 1e-6,
        error_azimuth_rad=z.copy(),
        gimbal_azimuth_rad=z.copy(),
        gimbal_pitch_rad=z.copy(),
        fsm1_pitch_rad=z.copy(),
        fsm1_azimuth_rad=z.copy(),
        fsm2_pitch_rad=z.copy(),
        fsm2_azimuth_rad=z.copy(),
        lock0=np.ones(n, dtype=bool),
        lock1=np.ones(n, dtype=bool),
        lock2=np.ones(n, dtype=bool),
        scenario_name="t",
        scenario_digest="d",
        seed=0,
    )


class TestLossTimeseries:
    def test_lock_states_get_budget_others_get_sentinel(self, scenario):
        states = [AptState.STABILIZE, AptState.ACQUIRE, AptState.COARSE_TRACK,
                  AptState.FINE_TRACK1, AptState.FINE_TRACK2, AptState.LINKED,
                  AptState.REACQUIRE]
        tracked = series_with(states, [0.0] * len(states))
        loss = loss_timeseries(
            tracked, scenario.beam, scenario.antenna, scenario.antenna,
            scenario.atmosphere, scenario.coupling, 1000.0,
        )
        finite = np.isfinite(loss.loss_db)
        assert finite.tolist() == [False, False, True, True, True, True, False]
        assert loss.link_up.tolist() == finite.tolist()
        assert np.all(loss.loss_db[~finite] == NO_LINK_LOSS_DB)

    def test_loss_is_static_plus_quadratic_jitter(self, scenario):
        err = 10.0  # urad
        tracked = series_with([AptState.LINKED], [err])
        loss = loss_timeseries(
            tracked, scenario.beam, scenario.antenna, scenario.antenna,
            scenario.atmosphere, scenario.coupling, 1000.0,
        )
        zero = loss_timeseries(
            series_with([AptState.LINKED], [0.0]),
            scenario.beam, scenario.antenna, scenario.antenna,
            scenario.atmosphere, scenario.coupling, 1000.0,
        )
        expected_excess = DB_PER_NEPER * (err * 1e-6 / scenario.coupling.rolloff_halfwidth_rad) ** 2
        assert loss.loss_db[0] - zero.loss_db[0] == pytest.approx(expected_excess, rel=1e-12)

    def test_fixed_loss_overrides_model_while_in_lock(self, scenario):
        tracked = series_with(
            [AptState.LINKED, AptState.ACQUIRE, AptState.COARSE_TRACK],
            [100.0, 100.0, 3000.0],
        )
        loss = loss_timeseries(
            tracked, scenario.beam, scenario.antenna, scenario.antenna,
            scenario.atmosphere, scenario.coupling, 1000.0, fixed_loss_db=24.0,
        )
        assert loss.loss_db.tolist() == [24.0, math.inf, 24.0]

    def test_same_length_and_timestamps_as_source(self, scenario):
        tracked = series_with([AptState.LINKED] * 5, [1.0] * 5)
        loss = loss_timeseries(
            tracked, scenario.beam, scenario.antenna, scenario.antenna,
            scenario.atmosphere, scenario.coupling, 1000.0,
        )
        assert loss.t_s.tolist() == tracked.t_s.tolist()
        assert loss.loss_db.size == len(tracked)


class TestThroughput:
    def test_threshold_boundary_inclusive(self):
        loss = LossSeries(
            t_s=np.arange(3) / 1e3,
            loss_db=np.array([24.1, 24.1 + 1e-9, math.inf]),
            link_up=np.array([True, True, False]),
        )
        thr = throughput_timeseries(loss, TRX)
        assert thr.rate_gbps[0] == pytest.approx(TRX.link_rate_gbps)
        assert thr.rate_gbps[1] == 0.0
        assert thr.rate_gbps[2] == 0.0

    def test_rate_value(self):
        assert TRX.link_rate_gbps == pytest.approx(9.27 * 0.988, rel=1e-12)
        assert TRX.link_rate_gbps == pytest.approx(9.15876, abs=1e-9)

    def test_rates_are_zero_or_full(self):
        rng = np.random.default_rng(0)
        loss = LossSeries(
            t_s=np.arange(100) / 1e3,
            loss_db=rng.uniform(10.0, 40.0, 100),
            link_up=np.ones(100, dtype=bool),
        )
        thr = throughput_timeseries(loss, TRX)
        assert set(np.unique(thr.rate_gbps)) <= {0.0, TRX.link_rate_gbps}

    def test_transceiver_validation(self):
        with pytest.raises(ValueError):
            TransceiverSpec(tcp_efficiency=1.5)
        with pytest.raises(ValueError):
            TransceiverSpec(rated_gbps=5.0, effective_tcp_gbps=9.0)
        with pytest.raises(ValueError):
            TransceiverSpec(max_tolerable_loss_db=0.0)


class TestSummarize:
    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(17)
        data = rng.normal(13.7, 1.4, 10_000)
        s = summarize(data)
        assert s.mean == pytest.approx(float(np.mean(data)), abs=1e-12)
        assert s.std == pytest.approx(float(np.std(data)), abs=1e-12)
        assert s.minimum == data.min()
        assert s.maximum == data.max()
        assert s.count == data.size

    def test_deterministic_across_calls(self):
        data = np.random.default_rng(3).normal(size=1000) * 1e6
        a = summarize(data)
        b = summarize(data.copy())
        assert (a.mean, a.std) == (b.mean, b.std)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])

    def test_single_value(self):
        s = summarize([4.2])
        assert s.mean == 4.2
        assert s.std == 0.0
        assert s.count == 1


class TestLossStatisticsAndDowntime:
    def _loss(self, values):
        arr = np.asarray(values, dtype=float)
        return LossSeries(
            t_s=np.arange(arr.size) / 1e3,
            loss_db=arr,
            link_up=np.isfinite(arr),
        )

    def test_sentinel_excluded_from_statistics(self):
        loss = self._loss([10.0, math.inf, 14.0, math.inf])
        s = loss_statistics(loss)
        assert s.count == 2
        assert s.mean == pytest.approx(12.0)
        assert s.maximum == 14.0

    def test_downtime_counts_sentinel_and_excess(self):
        loss = self._loss([10.0, math.inf, 25.0, 24.1])
        # inf and 25.0 exceed tolerance; 24.1 is exactly tolerable
        assert downtime_fraction(loss, TRX) == pytest.approx(0.5)

    def test_downtime_zero_when_all_within(self):
        loss = self._loss([10.0, 20.0, 24.1])
        assert downtime_fraction(loss, TRX) == 0.0

    def test_empty_downtime_rejected(self):
        with pytest.raises(ValueError):
            downtime_fraction(self._loss([]), TRX)
