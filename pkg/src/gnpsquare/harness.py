"""Trial configuration, orchestration, parallel sweeps and reporting.

A trial is sample -> square -> params -> partition -> three-stage coloring ->
validate -> checks. Everything a trial writes to the canonical report is a
function of its config, so reruns are byte-identical. Wall-clock timings are
kept beside the report rather than inside it.

Seed streams derived from the trial seed:

    graph      seed
    lists      SeedSequence([seed, 1])
    subsets    SeedSequence([seed, 2])
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .asymptotics import compute_params
from .coloring import Coloring, ListPolicy, three_stage_color, validate
from .graph import GENERATOR_NAME, GnpParams, sample_gnp, square
from .verifier import CLAIMS, LEMMA2_CAP, run_checks

WORKERS_ENV = "GNPSQUARE_WORKERS"
LIST_STREAM, SUBSET_STREAM = 1, 2
DEFAULT_CHECKS = ("lemma1", "cor1", "cor2", "lemma3", "sparse-bounds")
PHASES = ("sample", "square", "params", "color", "validate", "checks")

TRIAL_COLUMNS = (
    "n", "c", "seed", "delta1", "delta", "delta_g2", "epsilon", "theta", "q", "mode",
    "m1", "m2", "v_eps", "w_eps", "q_min", "colors_used", "q_min_over_delta",
    "colors_over_delta", "proper", "status",
)


def derive_seed(seed, stream):
    """A 63-bit seed for ``stream``, mixed from the trial seed."""
    state = np.random.SeedSequence([seed, stream]).generate_state(2, np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


class TrialError(RuntimeError):
    """A trial phase failed; ``phase`` names it."""

    def __init__(self, phase, cause):
        super().__init__(f"{phase}: {type(cause).__name__}: {cause}")
        self.phase = phase
        self.cause = cause


@dataclass(frozen=True)
class TrialConfig:
    n: int
    c: float
    seed: int
    theta: float | None = None
    epsilon: float | None = None
    eps_cap: float | None = None
    q: int | None = None
    delta1: int | None = None
    policy: ListPolicy = field(default_factory=ListPolicy)
    checks: tuple = DEFAULT_CHECKS
    sampler_trials: int = 100
    sampler_seed: int | None = None
    lemma2_m_max: int = 4
    lemma2_cap: int = LEMMA2_CAP
    timeout: float | None = None
    embed_coloring: bool = False

    def __post_init__(self):
        GnpParams(self.n, self.c, self.seed)  # raises on bad n, c or seed
        if isinstance(self.policy, dict):
            object.__setattr__(self, "policy", ListPolicy(**self.policy))
        checks = tuple(self.checks)
        unknown = set(checks) - set(CLAIMS)
        if unknown:
            raise ValueError(f"unknown claims {sorted(unknown)}; registry is {list(CLAIMS)}")
        object.__setattr__(self, "checks", tuple(x for x in CLAIMS if x in checks))
        if self.sampler_trials < 1:
            raise ValueError("sampler_trials must be >= 1")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")

    @property
    def overrides(self):
        return {k: getattr(self, k) for k in ("theta", "epsilon", "eps_cap", "q", "delta1")}

    @property
    def list_seed(self):
        return derive_seed(self.seed, LIST_STREAM)

    @property
    def subset_seed(self):
        return self.sampler_seed if self.sampler_seed is not None else derive_seed(self.seed, SUBSET_STREAM)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["checks"] = list(self.checks)
        return d

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config fields {sorted(unknown)}")
        return cls(**data)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def load_config(path, **flags):
    """Read a JSON config; non-None ``flags`` override file values."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    data.update({k: v for k, v in flags.items() if v is not None})
    return TrialConfig.from_dict(data)


def _clean(obj):
    # JSON-safe: numpy scalars become Python numbers, non-finite floats strings
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return obj


def coloring_digest(colors):
    return hashlib.sha256(np.ascontiguousarray(colors, dtype="<i8").tobytes()).hexdigest()


@dataclass
class TrialReport:
    """Everything one trial measured. ``to_json`` is the canonical record."""

    data: dict
    timings: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(_clean(self.data), sort_keys=True, separators=(",", ":"))

    def __getitem__(self, key):
        return self.data[key]

    @property
    def ok(self):
        return self.data["status"] == "ok"


def run_trial(config, graph=None):
    """Run one trial; ``graph`` replaces the sampled G1 when given.

    Raises TrialError tagged with the failing phase.
    """
    timings = {}
    start = time.perf_counter()
    timed_out = None

    def phase(name, fn):
        nonlocal timed_out
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as exc:
            raise TrialError(name, exc) from exc
        timings[name] = time.perf_counter() - t0
        if config.timeout is not None and timed_out is None and time.perf_counter() - start > config.timeout:
            timed_out = name
        return out

    if graph is None:
        g1 = phase("sample", lambda: sample_gnp(GnpParams(config.n, config.c, config.seed)))
    else:
        if graph.n != config.n:
            raise TrialError("sample", ValueError(f"graph has {graph.n} vertices, config says {config.n}"))
        g1 = graph
    g2 = phase("square", lambda: square(g1))
    params = phase("params", lambda: compute_params(g1, config.c, config.overrides))
    policy = dataclasses.replace(config.policy, list_seed=config.list_seed)
    coloring, metrics, part = phase("color", lambda: three_stage_color(g1, g2, params, policy))
    lists = policy.make_lists(g2.n, params)
    report = phase("validate", lambda: validate(coloring, g2, lists))

    verdicts = []
    if config.checks and timed_out is None:
        verdicts = phase("checks", lambda: run_checks(
            g1, g2, params, config.c, config.checks, config.sampler_trials, config.subset_seed,
            config.lemma2_m_max, config.lemma2_cap))

    delta, delta_g2 = g1.max_degree, g2.max_degree
    succeeded = coloring.complete and report.proper
    invariants = {
        "colors_at_least_delta_plus_1": (metrics.colors_used >= delta + 1) if succeeded else None,
        "q_min_at_most_delta_g2_plus_1": metrics.q_min <= delta_g2 + 1,
    }
    by_claim = {v.claim: v for v in verdicts}
    sampled, exact = by_claim.get("sparse-bounds:combined"), by_claim.get("all-subsets-density")
    if sampled is not None and exact is not None and sampled.status == "checked" and exact.status == "checked":
        # no sampled subset can be denser in g2 than the exact maximum
        invariants["sampled_density_within_exact"] = (
            sampled.statistic["max_g2_density_sampled"] <= exact.statistic["density"] + 1e-12)
    data = {
        "config": config.to_dict(),
        "generator": GENERATOR_NAME,
        "graph": {"n": g1.n, "m1": g1.m, "m2": g2.m, "delta": delta, "delta_g2": delta_g2},
        "params": params.to_dict(),
        "policy": policy.to_dict(),
        "partition": {"v_eps": int(part.v_eps.size), "w_eps": int(part.w_eps.size),
                      "rest": int(part.rest.size)},
        "metrics": metrics.to_dict(),
        "coloring": {
            "complete": coloring.complete,
            "failure": None if coloring.failure is None else coloring.failure.to_dict(),
            "digest": coloring_digest(coloring.colors),
        },
        "validation": {
            "proper": report.proper,
            "monochromatic_edges": len(report.monochromatic_edges),
            "out_of_list": len(report.out_of_list),
            "uncolored": report.uncolored,
            "examples": (report.monochromatic_edges + report.out_of_list)[:10],
        },
        "headline": {
            "q_min_over_delta": metrics.q_min / delta if delta else None,
            "colors_over_delta": metrics.colors_used / delta if delta else None,
        },
        "invariants": invariants,
        "checks": [v.to_dict() for v in verdicts],
        "status": "ok" if timed_out is None else "timeout",
        "timed_out_after": timed_out,
    }
    if config.embed_coloring:
        data["coloring"]["colors"] = coloring.colors.tolist()
    timings["total"] = time.perf_counter() - start
    timings["backend"] = _backend.BACKEND
    return TrialReport(data, timings)


def revalidate(record):
    """Re-derive a serialized trial from its config and confirm the verdict.

    Returns True when the re-sampled graph, the re-run coloring digest and
    (if embedded) the stored coloring all reproduce the recorded outcome.
    """
    config = TrialConfig.from_dict(record["config"])
    g1 = sample_gnp(GnpParams(config.n, config.c, config.seed))
    g2 = square(g1)
    if (g1.m, g2.m) != (record["graph"]["m1"], record["graph"]["m2"]):
        return False
    params = compute_params(g1, config.c, config.overrides)
    policy = ListPolicy(**record["policy"])
    lists = policy.make_lists(g2.n, params)
    stored = record["coloring"].get("colors")
    if stored is not None:
        colors = np.asarray(stored, dtype=np.int64)
        if coloring_digest(colors) != record["coloring"]["digest"]:
            return False
    else:
        colors = three_stage_color(g1, g2, params, policy)[0].colors
        if coloring_digest(colors) != record["coloring"]["digest"]:
            return False
    verdict = validate(Coloring(g2, colors), g2, lists)
    return verdict.proper == record["validation"]["proper"]


def error_record(config, exc):
    phase = exc.phase if isinstance(exc, TrialError) else "unknown"
    return {"config": config.to_dict(), "generator": GENERATOR_NAME, "status": "error",
            "phase": phase, "error": str(exc)}


def _run_one(config):
    try:
        rep = run_trial(config)
        return rep.to_json(), rep.timings
    except Exception as exc:  # recorded per cell, the sweep continues
        return json.dumps(_clean(error_record(config, exc)), sort_keys=True, separators=(",", ":")), {}


def default_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            w = int(raw)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer (got {raw!r})") from None
        if w < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return w
    return os.cpu_count() or 1


def sweep_configs(ns, cs, seeds, base=None, epsilons=None):
    """Grid configs in fixed order: n, then c, then epsilon, then seed."""
    if not ns or not cs:
        raise ValueError("sweep needs at least one n and one c")
    if not seeds:
        raise ValueError("sweep needs at least one seed")
    base = base or {}
    eps_list = list(epsilons) if epsilons else [base.get("epsilon")]
    return [TrialConfig.from_dict({**base, "n": int(n), "c": float(c), "seed": int(s), "epsilon": e})
            for n in ns for c in cs for e in eps_list for s in seeds]


@dataclass
class SweepResult:
    lines: list  # canonical JSONL lines in grid order
    timings: list
    summary: list

    @property
    def records(self):
        return [json.loads(line) for line in self.lines]


def run_sweep(ns, cs, seeds, base=None, epsilons=None, workers=None, out_dir=None):
    """Run the grid, trials in parallel, and aggregate per (n, c, epsilon).

    Outputs are assembled in grid order, so the JSONL does not depend on the
    schedule. With ``out_dir`` writes trials.jsonl, trials.csv, summary.csv
    and timings.jsonl there.
    """
    configs = sweep_configs(ns, cs, seeds, base, epsilons)
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(configs) == 1:
        results = [_run_one(cfg) for cfg in configs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, configs))
    lines = [r[0] for r in results]
    timings = [r[1] for r in results]
    summary = summarize([json.loads(line) for line in lines])
    result = SweepResult(lines, timings, summary)
    if out_dir is not None:
        write_outputs(result, out_dir)
    return result


def _eps_of(record):
    return record["config"]["epsilon"]


def trial_row(record):
    cfg = record["config"]
    row = dict.fromkeys(TRIAL_COLUMNS, "")
    row.update(n=cfg["n"], c=cfg["c"], seed=cfg["seed"], status=record["status"],
               epsilon=cfg["epsilon"] if cfg["epsilon"] is not None else "")
    if record["status"] == "error":
        return row
    p, g, m = record["params"], record["graph"], record["metrics"]
    row.update(
        delta1=p["delta1"], delta=g["delta"], delta_g2=g["delta_g2"], epsilon=p["epsilon"],
        theta=p["theta"], q=p["q"], mode=p["mode"], m1=g["m1"], m2=g["m2"],
        v_eps=record["partition"]["v_eps"], w_eps=record["partition"]["w_eps"],
        q_min=m["q_min"], colors_used=m["colors_used"],
        q_min_over_delta=record["headline"]["q_min_over_delta"],
        colors_over_delta=record["headline"]["colors_over_delta"],
        proper=record["validation"]["proper"],
    )
    for v in record["checks"]:
        row[f"holds:{v['claim']}"] = "" if v["holds"] is None else v["holds"]
    return row


def _stats(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return "", "", ""
    return sum(vals) / len(vals), min(vals), max(vals)


def summarize(records):
    """Aggregate trial records per (n, c, epsilon override), in first-seen order.

    Violation rate of a claim = trials where it failed / trials where it was
    decided (refused checks are excluded). Pure function of the records.
    """
    cells = {}
    for rec in records:
        cfg = rec["config"]
        cells.setdefault((cfg["n"], cfg["c"], _eps_of(rec)), []).append(rec)
    rows = []
    for (n, c, eps), recs in cells.items():
        ok = [r for r in recs if r["status"] != "error"]
        row = {"n": n, "c": c, "epsilon": "" if eps is None else eps, "trials": len(recs),
               "errors": len(recs) - len(ok),
               "proper_rate": (sum(r["validation"]["proper"] for r in ok) / len(ok)) if ok else ""}
        for key in ("q_min_over_delta", "colors_over_delta"):
            mean, lo, hi = _stats([r["headline"][key] for r in ok])
            row.update({f"{key}_mean": mean, f"{key}_min": lo, f"{key}_max": hi})
        row["delta_mean"] = _stats([r["graph"]["delta"] for r in ok])[0]
        row["q_min_mean"] = _stats([r["metrics"]["q_min"] for r in ok])[0]
        decided, failed = {}, {}
        for r in ok:
            for v in r["checks"]:
                if v["holds"] is None:
                    continue
                decided[v["claim"]] = decided.get(v["claim"], 0) + 1
                failed[v["claim"]] = failed.get(v["claim"], 0) + (not v["holds"])
        for claim in sorted(decided):
            row[f"violation_rate:{claim}"] = failed[claim] / decided[claim]
        rows.append(row)
    return rows


def _csv_text(rows, fixed):
    extra = sorted({k for r in rows for k in r} - set(fixed))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fixed) + extra, lineterminator="\n", restval="")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


SUMMARY_COLUMNS = (
    "n", "c", "epsilon", "trials", "errors", "proper_rate",
    "q_min_over_delta_mean", "q_min_over_delta_min", "q_min_over_delta_max",
    "colors_over_delta_mean", "colors_over_delta_min", "colors_over_delta_max",
    "delta_mean", "q_min_mean",
)


def trials_csv(records):
    return _csv_text([trial_row(r) for r in records], TRIAL_COLUMNS)


def summary_csv(rows):
    return _csv_text(rows, SUMMARY_COLUMNS)


def _write_atomic(path, text):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_outputs(result, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    records = result.records
    _write_atomic(os.path.join(out_dir, "trials.jsonl"), "".join(line + "\n" for line in result.lines))
    _write_atomic(os.path.join(out_dir, "trials.csv"), trials_csv(records))
    _write_atomic(os.path.join(out_dir, "summary.csv"), summary_csv(result.summary))
    _write_atomic(os.path.join(out_dir, "timings.jsonl"),
                  "".join(json.dumps(_clean(t), sort_keys=True) + "\n" for t in result.timings))


def summary_from_jsonl(path):
    """Recompute the summary rows from a trials.jsonl file."""
    with open(path) as fh:
        return summarize([json.loads(line) for line in fh if line.strip()])
