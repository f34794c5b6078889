import json
import math

import numpy as np
import pytest

from fsosim import downtime_fraction, loss_statistics, summarize
from fsosim.cli import main
from fsosim.io import read_loss_csv, read_sweep_csv, read_throughput_csv


def run_cli(*argv):
    return main(list(argv))


def read_json(path):
    return json.loads(path.read_text())


class TestBudget:
    def test_stdout_payload(self, capsys):
        assert run_cli("budget") == 0
        payload = json.loads(capsys.readouterr().out)
        b = payload["budget"]
        parts = (b["diffraction_db"] + b["optics_db"] + b["atmosphere_db"]
                 + b["coupling_base_db"] + b["jitter_excess_db"])
        assert b["total_db"] == pytest.approx(parts, abs=1e-12)
        assert payload["scenario"]["distance_m"] == pytest.approx(1000.0, abs=0.5)

    def test_error_term_adds_loss(self, capsys):
        run_cli("budget")
        base = json.loads(capsys.readouterr().out)["budget"]["total_db"]
        run_cli("budget", "--error-urad", "10")
        bumped = json.loads(capsys.readouterr().out)["budget"]["total_db"]
        assert bumped > base

    def test_writes_file(self, tmp_path, capsys):
        assert run_cli("budget", "--out", str(tmp_path)) == 0
        assert capsys.readouterr().out == ""
        payload = read_json(tmp_path / "budget.json")
        assert payload["schema_version"] == 1

    def test_negative_distance_rejected(self, capsys):
        assert run_cli("budget", "--distance-m", "-5") == 1


class TestSweep:
    def test_stdout_rows(self, capsys):
        assert run_cli("sweep", "--steps", "7") == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "distance_m,diffraction_db,total_static_db"
        assert len(lines) == 1 + 7

    def test_csv_artifact(self, tmp_path):
        assert run_cli("sweep", "--steps", "12", "--min-km", "0.5",
                       "--max-km", "4.0", "--out", str(tmp_path)) == 0
        rows = read_sweep_csv(tmp_path / "sweep.csv")
        assert len(rows) == 12
        assert rows[0][0] == pytest.approx(500.0)
        assert rows[-1][0] == pytest.approx(4000.0)
        totals = [r[2] for r in rows]
        assert totals == sorted(totals)

    def test_bad_step_count(self, capsys):
        assert run_cli("sweep", "--steps", "0") == 1


class TestTrack:
    def test_artifacts_and_stats(self, tmp_path, capsys):
        assert run_cli("track", "--duration", "2", "--seed", "3",
                       "--out", str(tmp_path)) == 0
        stats = read_json(tmp_path / "tracking_stats.json")
        assert (tmp_path / "tracking.csv").exists()
        assert stats["stages"] == "full"
        assert stats["seed"] == 3
        assert stats["stats"]["count"] > 0
        assert "stats_after_fine" not in stats
        assert abs(sum(stats["time_in_state_s"].values()) - 2.0) < 1e-9

    def test_fine_after_adds_second_window(self, tmp_path):
        assert run_cli("track", "--duration", "2", "--fine-after", "1",
                       "--seed", "3", "--out", str(tmp_path)) == 0
        stats = read_json(tmp_path / "tracking_stats.json")
        assert stats["stats_after_fine"]["window_t0_s"] == 1.0

    def test_stage_flag_overrides_scenario(self, tmp_path):
        assert run_cli("track", "--duration", "1", "--stages", "coarse",
                       "--seed", "3", "--out", str(tmp_path)) == 0
        assert read_json(tmp_path / "tracking_stats.json")["stages"] == "coarse"

    def test_scenario_stage_flags_apply_when_unset(self, tmp_path):
        assert run_cli("track", "--scenario", "scenarios/1km_coarse_only.json",
                       "--duration", "1", "--seed", "3", "--out", str(tmp_path)) == 0
        assert read_json(tmp_path / "tracking_stats.json")["stages"] == "coarse"

    def test_zero_duration_rejected(self, capsys):
        assert run_cli("track", "--duration", "0") == 1


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    code = run_cli("run", "--duration", "12", "--seed", "7", "--out", str(out))
    assert code == 0
    return out


class TestRun:
    def test_artifacts(self, run_dir):
        for name in ("loss.csv", "throughput.csv", "report.json"):
            assert (run_dir / name).exists()

    def test_report_matches_artifacts_exactly(self, run_dir):
        report = read_json(run_dir / "report.json")
        entry = report["per_seed"][0]
        loss = read_loss_csv(run_dir / "loss.csv")
        thr = read_throughput_csv(run_dir / "throughput.csv")

        s = loss_statistics(loss)
        assert entry["loss_db"]["mean"] == s.mean
        assert entry["loss_db"]["std"] == s.std
        assert entry["loss_db"]["min"] == s.minimum
        assert entry["loss_db"]["max"] == s.maximum
        assert entry["loss_db"]["count"] == s.count

        t = summarize(thr.rate_gbps)
        assert entry["throughput_gbps"]["mean"] == t.mean
        assert entry["throughput_gbps"]["std"] == t.std

        from fsosim import TransceiverSpec
        trx = TransceiverSpec()
        assert entry["loss_db"]["downtime_fraction"] == downtime_fraction(loss, trx)

    def test_window_bounds(self, run_dir):
        report = read_json(run_dir / "report.json")
        assert report["window_t0_s"] == 10.0
        assert report["window_t1_s"] == 12.0
        loss = read_loss_csv(run_dir / "loss.csv")
        assert loss.t_s[0] >= 10.0
        assert loss.t_s[-1] < 12.0

    def test_rerun_is_byte_identical(self, run_dir, tmp_path):
        assert run_cli("run", "--duration", "12", "--seed", "7",
                       "--out", str(tmp_path)) == 0
        for name in ("loss.csv", "throughput.csv", "report.json"):
            assert (tmp_path / name).read_bytes() == (run_dir / name).read_bytes()

    def test_seed_range(self, tmp_path):
        assert run_cli("run", "--duration", "11", "--seeds", "3..5",
                       "--out", str(tmp_path)) == 0
        report = read_json(tmp_path / "report.json")
        assert report["seeds"] == [3, 4, 5]
        for s in (3, 4, 5):
            assert (tmp_path / f"loss_{s}.csv").exists()
            assert (tmp_path / f"throughput_{s}.csv").exists()
        means = [r["loss_db"]["mean"] for r in report["per_seed"]]
        assert report["aggregate"]["loss_db_mean"] == pytest.approx(
            float(np.mean(means)))
        assert [r["seed"] for r in report["per_seed"]] == [3, 4, 5]

    def test_duration_must_exceed_warmup(self, capsys):
        assert run_cli("run", "--duration", "10") == 1
        assert "warmup" in capsys.readouterr().err

    @pytest.mark.parametrize("bad", ["x..y", "5..3", "0..20000", "3..", "..5"])
    def test_bad_seed_ranges(self, bad, capsys):
        assert run_cli("run", "--duration", "11", "--seeds", bad) == 1


class TestCalibrate:
    def test_default_anchors_converge(self, tmp_path):
        assert run_cli("calibrate", "--out", str(tmp_path)) == 0
        payload = read_json(tmp_path / "calibration.json")
        assert payload["result"]["converged"] is True
        assert 10.0 <= payload["result"]["rolloff_halfwidth_urad"] <= 30.0

    def test_contradictory_anchors_exit_2(self, tmp_path, capsys):
        anchors = tmp_path / "anchors.json"
        anchors.write_text(json.dumps({
            "mean_loss_anchors": [
                {"sigma_urad": 3.0, "distance_m": 1000.0, "mean_loss_db": 29.3},
                {"sigma_urad": 24.0, "distance_m": 1000.0, "mean_loss_db": 13.7},
            ],
        }))
        assert run_cli("calibrate", "--anchors", str(anchors)) == 2
        payload = json.loads(capsys.readouterr().out)
        assert payload["result"]["converged"] is False

    def test_unknown_anchor_key_exit_1(self, tmp_path):
        anchors = tmp_path / "anchors.json"
        anchors.write_text(json.dumps({"anchor_list": []}))
        assert run_cli("calibrate", "--anchors", str(anchors)) == 1

    def test_missing_anchor_file_exit_3(self, tmp_path):
        assert run_cli("calibrate", "--anchors", str(tmp_path / "nope.json")) == 3

    def test_invalid_anchor_json_exit_1(self, tmp_path):
        anchors = tmp_path / "anchors.json"
        anchors.write_text("{not json")
        assert run_cli("calibrate", "--anchors", str(anchors)) == 1


class TestExitCodes:
    def test_missing_scenario_file_exit_3(self):
        assert run_cli("budget", "--scenario", "/nonexistent/sc.json") == 3

    def test_invalid_scenario_json_exit_1(self, tmp_path):
        p = tmp_path / "sc.json"
        p.write_text("{broken")
        assert run_cli("budget", "--scenario", str(p)) == 1

    def test_unknown_scenario_key_exit_1(self, tmp_path, capsys):
        p = tmp_path / "sc.json"
        p.write_text(json.dumps({"schema_version": 1, "bogus": 1}))
        assert run_cli("budget", "--scenario", str(p)) == 1
        assert "bogus" in capsys.readouterr().err

    def test_usage_error_exits_1(self, capsys):
        with pytest.raises(SystemExit) as err:
            run_cli("no-such-verb")
        assert err.value.code == 1

    def test_missing_command_exits_1(self, capsys):
        with pytest.raises(SystemExit) as err:
            run_cli()
        assert err.value.code == 1

    def test_seed_must_fit_64_bits(self, capsys):
        assert run_cli("track", "--duration", "1", "--seed", str(2**64)) == 1
        assert run_cli("track", "--duration", "1", "--seed", "-1") == 1
