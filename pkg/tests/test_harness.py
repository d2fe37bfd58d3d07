import csv
import io
import json

import pytest

from gnpsquare.coloring import ListPolicy
from gnpsquare.harness import (
    TRIAL_COLUMNS, WORKERS_ENV, TrialConfig, TrialError, default_workers, derive_seed, load_config,
    revalidate, run_sweep, run_trial, summarize, summary_csv, summary_from_jsonl, sweep_configs,
    trials_csv,
)


def test_k4_trial():
    cfg = TrialConfig(n=4, c=4.0, seed=1, epsilon=1.0, theta=0.001)
    rep = run_trial(cfg)
    assert rep["graph"] == {"n": 4, "m1": 6, "m2": 6, "delta": 3, "delta_g2": 3}
    assert rep["metrics"]["q_min"] == 4 and rep["metrics"]["colors_used"] == 4
    assert rep.ok and rep["validation"]["proper"]
    assert all(rep["invariants"].values())


def test_trial_is_byte_identical_and_timings_stay_outside():
    cfg = TrialConfig(n=3000, c=2.0, seed=5, checks=("lemma1", "cor1", "sparse-bounds"),
                      sampler_trials=30)
    a, b = run_trial(cfg), run_trial(cfg)
    assert a.to_json() == b.to_json()
    assert "total" in a.timings and "total" not in a.to_json()
    assert json.loads(a.to_json())["generator"].startswith("numpy.random.")


def test_seed_streams_are_distinct():
    assert len({derive_seed(7, 1), derive_seed(7, 2), derive_seed(8, 1)}) == 3
    cfg = TrialConfig(n=10, c=1.0, seed=7)
    assert cfg.list_seed == derive_seed(7, 1) and cfg.subset_seed == derive_seed(7, 2)
    assert TrialConfig(n=10, c=1.0, seed=7, sampler_seed=3).subset_seed == 3


def test_config_validation_and_round_trip(tmp_path):
    with pytest.raises(ValueError):
        TrialConfig(n=10, c=1.0, seed=0, checks=("lemma9",))
    with pytest.raises(ValueError):
        TrialConfig(n=3, c=5.0, seed=0)
    with pytest.raises(ValueError):
        TrialConfig.from_dict({"n": 10, "c": 1.0, "seed": 0, "colour": 1})
    cfg = TrialConfig(n=10, c=1.0, seed=0, checks=("cor2", "lemma1"),
                      policy=ListPolicy(mode="explicit-k", k=3))
    assert cfg.checks == ("lemma1", "cor2")
    data = json.loads(json.dumps(cfg.to_dict()))
    assert TrialConfig.from_dict(data) == cfg
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    assert load_config(path, seed=9, epsilon=None).seed == 9
    assert load_config(path).policy.k == 3
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load_config(path)


def test_phase_tagged_errors():
    with pytest.raises(TrialError) as err:
        run_trial(TrialConfig(n=10, c=1.0, seed=0))  # theta needs n >= 17
    assert err.value.phase == "params"


def test_revalidate_with_and_without_embedded_coloring():
    for embed in (False, True):
        cfg = TrialConfig(n=2000, c=2.0, seed=3, checks=(), embed_coloring=embed,
                          policy=ListPolicy(mode="formula-q", source="random-lists"))
        rec = json.loads(run_trial(cfg).to_json())
        assert revalidate(rec)
        rec["coloring"]["digest"] = "0" * 64
        assert not revalidate(rec)


def test_timeout_marks_trial_and_skips_checks():
    cfg = TrialConfig(n=20000, c=2.0, seed=1, timeout=1e-9)
    rep = run_trial(cfg)
    assert rep["status"] == "timeout" and rep["checks"] == []
    assert rep["timed_out_after"] == "sample"


def test_one_cell_sweep_matches_its_trial(tmp_path):
    base = {"checks": ["lemma1", "lemma3"]}
    res = run_sweep([2000], [2.0], [4], base=base, workers=1, out_dir=str(tmp_path))
    rec = res.records[0]
    solo = run_trial(TrialConfig.from_dict({**base, "n": 2000, "c": 2.0, "seed": 4}))
    assert res.lines[0] == solo.to_json()
    row = res.summary[0]
    assert row["trials"] == 1 and row["proper_rate"] == 1.0
    h = rec["headline"]
    for key in ("q_min_over_delta", "colors_over_delta"):
        assert row[f"{key}_mean"] == row[f"{key}_min"] == row[f"{key}_max"] == h[key]
    assert row["q_min_mean"] == rec["metrics"]["q_min"]
    for v in rec["checks"]:
        assert row[f"violation_rate:{v['claim']}"] == (0.0 if v["holds"] else 1.0)


def test_outputs_are_recomputable_from_jsonl(tmp_path):
    res = run_sweep([1000, 2000], [1.0, 2.0], [0, 1], epsilons=[0.3, 0.5], workers=1,
                    base={"sampler_trials": 20}, out_dir=str(tmp_path))
    jsonl = tmp_path / "trials.jsonl"
    assert summary_from_jsonl(jsonl) == res.summary
    assert (tmp_path / "summary.csv").read_text() == summary_csv(summary_from_jsonl(jsonl))
    records = [json.loads(x) for x in jsonl.read_text().splitlines()]
    assert (tmp_path / "trials.csv").read_text() == trials_csv(records)
    rows = list(csv.DictReader(io.StringIO((tmp_path / "trials.csv").read_text())))
    assert list(rows[0])[:len(TRIAL_COLUMNS)] == list(TRIAL_COLUMNS)
    assert len(rows) == 16
    # grid order: n, c, epsilon, seed
    keys = [(r["config"]["n"], r["config"]["c"], r["config"]["epsilon"], r["config"]["seed"]) for r in records]
    assert keys == sorted(keys)
    assert len((tmp_path / "timings.jsonl").read_text().splitlines()) == 16


def test_parallel_sweep_is_schedule_independent():
    kw = dict(base={"checks": ["cor1", "lemma3"]})
    a = run_sweep([1500], [2.0], list(range(4)), workers=1, **kw)
    b = run_sweep([1500], [2.0], list(range(4)), workers=3, **kw)
    assert a.lines == b.lines


def test_errors_are_recorded_and_the_sweep_continues():
    res = run_sweep([10, 1000], [1.0], [0], workers=1)
    first, second = res.records
    assert first["status"] == "error" and first["phase"] == "params"
    assert second["status"] == "ok"
    assert res.summary[0]["errors"] == 1 and res.summary[0]["proper_rate"] == ""
    assert "error" in trials_csv(res.records)


def test_sweep_usage_errors():
    with pytest.raises(ValueError):
        sweep_configs([100], [1.0], [])
    with pytest.raises(ValueError):
        sweep_configs([], [1.0], [0])
    with pytest.raises(ValueError):
        run_sweep([100], [1.0], [0], workers=0)


def test_workers_env(monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert default_workers() == 3
    monkeypatch.setenv(WORKERS_ENV, "zero")
    with pytest.raises(ValueError):
        default_workers()
    monkeypatch.setenv(WORKERS_ENV, "0")
    with pytest.raises(ValueError):
        default_workers()
    monkeypatch.delenv(WORKERS_ENV)
    assert default_workers() >= 1


def test_violation_rate_ignores_refused_checks():
    recs = []
    for holds in (True, False, None):
        recs.append({
            "config": {"n": 5, "c": 1.0, "epsilon": None}, "status": "ok",
            "validation": {"proper": True}, "headline": {"q_min_over_delta": 1.0, "colors_over_delta": 1.0},
            "graph": {"delta": 2}, "metrics": {"q_min": 2},
            "checks": [{"claim": "lemma1", "holds": holds}],
        })
    assert summarize(recs)[0]["violation_rate:lemma1"] == 0.5
