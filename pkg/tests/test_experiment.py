"""Campaign driver: config validation, record coherence, CSV determinism."""

import json
import math

import numpy as np
import pytest

from kspacings import regimes
from kspacings.errors import ConfigError, ResourceLimitError
from kspacings.experiment import (
    CONDITION_COLUMNS,
    RECORD_COLUMNS,
    SUMMARY_COLUMNS,
    ExperimentConfig,
    load_config,
    load_records_csv,
    persist,
    run_experiment,
    summarize,
    write_records_csv,
)


def make_config(**overrides):
    raw = {
        "regime": "I",
        "a_rule": "pow:-0.5",
        "k": 2,
        "n_grid": [100, 200],
        "replicates": 3,
        "base_seed": 42,
    }
    raw.update(overrides)
    return ExperimentConfig.from_dict(raw)


class TestConfig:
    def test_unknown_keys_listed(self):
        with pytest.raises(ConfigError, match="unknown config keys: alpha, zeta"):
            ExperimentConfig.from_dict(
                {"regime": "I", "a_rule": "pow:-0.5", "k": 2, "n_grid": [100],
                 "zeta": 1, "alpha": 2}
            )

    def test_required_keys(self):
        with pytest.raises(ConfigError, match="regime"):
            ExperimentConfig.from_dict({"n_grid": [100]})
        with pytest.raises(ConfigError, match="n_grid"):
            ExperimentConfig.from_dict({"regime": "IV", "k": 2})

    def test_grid_validation(self):
        with pytest.raises(ConfigError):
            make_config(n_grid=[])
        with pytest.raises(ConfigError):
            make_config(n_grid=[8])
        with pytest.raises(ConfigError):
            make_config(n_grid=[200, 100])
        with pytest.raises(ConfigError):
            make_config(n_grid=[100, 100])
        with pytest.raises(ConfigError):
            make_config(n_grid="100")

    def test_replicates_validation(self):
        with pytest.raises(ConfigError):
            make_config(replicates=0)

    def test_emit_validation_and_order(self):
        with pytest.raises(ConfigError, match="emit"):
            make_config(emit=["records", "plots"])
        with pytest.raises(ConfigError):
            make_config(emit=[])
        cfg = make_config(emit=["summary", "records"])
        assert cfg.emit == ("records", "summary")
        assert make_config().emit == ("records", "summary", "conditions")

    def test_non_object(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict([1, 2])

    def test_out_dir_type(self):
        with pytest.raises(ConfigError):
            make_config(out_dir=7)

    def test_load_config_missing_file(self, tmp_path):
        missing = tmp_path / "nope.json"
        with pytest.raises(ConfigError, match=str(missing)):
            load_config(missing)

    def test_load_config_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config(p)

    def test_load_config_round_trip(self, tmp_path):
        p = tmp_path / "ok.json"
        p.write_text(
            json.dumps(
                {"regime": "II", "c": 1.0, "k": 2, "n_grid": [100], "base_seed": 5}
            )
        )
        cfg = load_config(p)
        assert cfg.spec.variant == "II" and cfg.base_seed == 5


class TestRunExperiment:
    def test_budget_cap(self):
        cfg = make_config(n_grid=[6 * 10**8])
        with pytest.raises(ResourceLimitError, match="cap"):
            run_experiment(cfg)

    def test_thread_argument(self):
        with pytest.raises(ConfigError):
            run_experiment(make_config(), threads=-1)

    def test_record_coherence(self):
        cfg = make_config()
        result = run_experiment(cfg, threads=1)
        assert len(result.records) == 6
        assert [(r.N, r.replicate) for r in result.records] == [
            (100, 0), (100, 1), (100, 2), (200, 0), (200, 1), (200, 2),
        ]
        for r in result.records:
            assert r.regime == "I"
            assert r.k == 2 and r.n == 2 * r.N - 1
            assert r.a_N == regimes.bandwidth(cfg.spec, r.N)
            assert r.seed == 42
            b = regimes.limit_normalizer(cfg.spec, r.N, r.a_N)
            assert r.k_n == r.lam / b
            assert r.d_scaled is None
            assert (r.target_kind, r.target_lo, r.target_hi) == ("point", 1.0, 1.0)
            assert 0.5 < r.mu < 1.5
            assert math.isfinite(r.theta)
            assert r.lam > 0.0

    def test_upper_bound_records(self):
        cfg = make_config(regime="IV", a_rule=None)
        result = run_experiment(cfg, threads=1)
        for r in result.records:
            assert r.k_n is None
            d = regimes.d_scaling(r.N, 1.0 / math.log(math.log(r.N)))
            assert r.d_scaled == d * r.lam
            assert r.target_kind == "upper-bound" and r.target_hi == 2.0

    def test_conditions_need_two_points(self):
        result = run_experiment(make_config(n_grid=[100]), threads=1)
        assert result.conditions == ()
        result2 = run_experiment(make_config(), threads=1)
        assert {c.condition for c in result2.conditions} >= {"S1", "S2", "Q2"}


class TestSummarize:
    def test_point_gap(self):
        result = run_experiment(make_config(), threads=1)
        rows = result.summary
        assert [r.N for r in rows] == [100, 200]
        for row in rows:
            group = [r.k_n for r in result.records if r.N == row.N]
            assert row.count == 3 and row.undefined_count == 0
            assert row.median == pytest.approx(float(np.median(group)), rel=1e-15)
            assert row.gap_or_coverage == pytest.approx(
                abs(row.median - 1.0), rel=1e-15
            )
            assert row.sd == pytest.approx(float(np.std(group, ddof=1)), rel=1e-12)

    def test_single_replicate_sd(self):
        result = run_experiment(make_config(replicates=1), threads=1)
        for row in result.summary:
            assert row.count == 1 and row.sd == 0.0

    def test_interval_coverage(self):
        cfg = make_config(regime="III", c=2.0, a_rule=None, n_grid=[100], replicates=8)
        result = run_experiment(cfg, threads=1)
        row = result.summary[0]
        vals = np.array([r.k_n for r in result.records])
        lo, hi = math.sqrt(2.0), math.sqrt(3.0)
        want = float(np.mean((vals >= lo - 0.25) & (vals <= hi + 0.25)))
        assert row.gap_or_coverage == pytest.approx(want, rel=1e-15)

    def test_upper_bound_fraction(self):
        cfg = make_config(regime="IV", a_rule=None, n_grid=[100], replicates=8)
        result = run_experiment(cfg, threads=1)
        row = result.summary[0]
        vals = np.array([r.d_scaled for r in result.records])
        assert row.gap_or_coverage == pytest.approx(float(np.mean(vals <= 2.0)))

    def test_undefined_normalizer_rows(self):
        # (log N)^{-1/2} >= 1/e at N = 20 and 40: no defined statistic at all
        cfg = make_config(regime="III", c=0.5, a_rule=None, n_grid=[20, 40],
                          replicates=2)
        result = run_experiment(cfg, threads=1)
        for r in result.records:
            assert r.k_n is None
        for row in result.summary:
            assert row.count == 0 and row.undefined_count == 2
            assert math.isnan(row.mean) and math.isnan(row.gap_or_coverage)

    def test_quantiles_hazen(self):
        rows = summarize(run_experiment(make_config(replicates=9), threads=1).records)
        group = run_experiment(make_config(replicates=9), threads=1).records
        vals = [r.k_n for r in group if r.N == 100]
        assert rows[0].q05 == pytest.approx(
            float(np.quantile(vals, 0.05, method="hazen"))
        )


class TestPersistence:
    def test_csv_round_trip(self, tmp_path):
        result = run_experiment(make_config(), threads=1)
        p = tmp_path / "records.csv"
        write_records_csv(p, result.records)
        back = load_records_csv(p)
        assert back == list(result.records)

    def test_wrong_columns_rejected(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("a,b\n1,2\n")
        with pytest.raises(ConfigError, match="records table"):
            load_records_csv(p)

    def test_persist_writes_emitted_tables(self, tmp_path):
        cfg = make_config(out_dir=str(tmp_path / "out"), emit=["records", "summary"])
        result = run_experiment(cfg, threads=1)
        paths = persist(result)
        assert [p.name for p in paths] == ["records.csv", "summary.csv"]
        header = paths[0].read_text().splitlines()[0]
        assert header.split(",") == RECORD_COLUMNS
        header2 = paths[1].read_text().splitlines()[0]
        assert header2.split(",") == SUMMARY_COLUMNS

    def test_persist_conditions_header(self, tmp_path):
        cfg = make_config(n_grid=[100], emit=["conditions"])
        result = run_experiment(cfg, threads=1)
        paths = persist(result, tmp_path / "c")
        text = paths[0].read_text().splitlines()
        assert text == [",".join(CONDITION_COLUMNS)]

    def test_persist_needs_out_dir(self):
        result = run_experiment(make_config(n_grid=[100], replicates=1), threads=1)
        with pytest.raises(ConfigError, match="out_dir"):
            persist(result)

    def test_na_fields_in_csv(self, tmp_path):
        cfg = make_config(regime="IV", a_rule=None, n_grid=[100], replicates=1)
        result = run_experiment(cfg, threads=1)
        p = tmp_path / "records.csv"
        write_records_csv(p, result.records)
        row = p.read_text().splitlines()[1].split(",")
        cols = dict(zip(RECORD_COLUMNS, row))
        assert cols["k_n"] == "NA" and cols["target_lo"] == "NA"
        assert cols["d_scaled"] != "NA"


class TestDeterminism:
    def test_serial_equals_parallel(self, tmp_path):
        cfg = make_config(n_grid=[64, 128], replicates=6)
        serial = run_experiment(cfg, threads=1)
        parallel = run_experiment(cfg, threads=4)
        assert serial.records == parallel.records
        assert serial.summary == parallel.summary
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_records_csv(a, serial.records)
        write_records_csv(b, parallel.records)
        assert a.read_bytes() == b.read_bytes()

    def test_rerun_identical(self):
        cfg = ExperimentConfig.from_dict(
            {"regime": "II", "c": 1.0, "k": 2, "n_grid": [2000],
             "replicates": 1, "base_seed": 1}
        )
        first = run_experiment(cfg, threads=1)
        second = run_experiment(cfg, threads=1)
        assert first.records == second.records
