"""Command-line interface: sample, square, color, verify, oracle, sweep.

Exit status: 0 success, 1 validation failure (improper coloring, failed
check under --strict, non-choosable input), 2 usage error.

Settings precedence for color/verify: built-in defaults, then the JSON
``--config`` file, then explicit flags.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .coloring import LIST_SOURCES, POLICY_MODES, Coloring
from .graph import GnpParams, GraphFormatError, dumps_edge_list, load_edge_list, sample_gnp, square, store_edge_list
from .harness import DEFAULT_CHECKS, TrialConfig, TrialError, _clean, run_sweep, run_trial
from .oracles import OracleCapError, exact_chromatic_number, is_k_choosable, list_chromatic_number
from .verifier import CLAIMS

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit_graph(g, out):
    if out:
        store_edge_list(g, out)
    else:
        sys.stdout.write(dumps_edge_list(g))


def _read_graph(path):
    try:
        return load_edge_list(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _seeds(text):
    """'5' -> [5]; '0-19' -> 0..19; '1,4,9' -> [1, 4, 9]."""
    out = []
    for part in filter(None, (x.strip() for x in text.split(","))):
        lo, _, hi = part.partition("-")
        try:
            out.extend(range(int(lo), int(hi or lo) + 1))
        except ValueError:
            raise UsageError(f"bad seed list {text!r}") from None
    return out


def _load_json(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path} must hold a JSON object")
    return data


def _add_trial_flags(p):
    src = p.add_argument_group("graph source")
    src.add_argument("--in", dest="inp", help="edge-list file instead of a fresh sample")
    src.add_argument("--n", type=int)
    src.add_argument("--c", type=float, help="edge parameter, p = c/n")
    src.add_argument("--seed", type=int)
    p.add_argument("--config", help="JSON file with TrialConfig fields")
    ov = p.add_argument_group("overrides")
    for name in ("theta", "epsilon", "eps_cap"):
        ov.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    ov.add_argument("--q", type=int)
    ov.add_argument("--delta1", type=int)
    pol = p.add_argument_group("list policy")
    pol.add_argument("--policy", choices=POLICY_MODES)
    pol.add_argument("--k", type=int, help="list size for --policy explicit-k")
    pol.add_argument("--list-source", choices=LIST_SOURCES)
    pol.add_argument("--palette-size", type=int)
    p.add_argument("--sampler-trials", type=int)
    p.add_argument("--timeout", type=float, help="per-trial budget in seconds (marks, never kills)")
    p.add_argument("--report", help="write the JSON report here instead of stdout")


def _trial_config(args, checks):
    """Build a TrialConfig and the optional input graph from parsed flags."""
    graph = _read_graph(args.inp) if args.inp else None
    flags = {k: getattr(args, k) for k in ("n", "c", "seed", "theta", "epsilon", "eps_cap", "q", "delta1",
                                           "sampler_trials", "timeout")}
    if checks is not None:
        flags["checks"] = checks
    policy = {k: v for k, v in (("mode", args.policy), ("k", args.k), ("source", args.list_source),
                                ("palette_size", args.palette_size)) if v is not None}
    if graph is not None:
        if args.n is not None and args.n != graph.n:
            raise UsageError(f"--n {args.n} disagrees with the input graph ({graph.n} vertices)")
        flags["n"] = graph.n
        # c defaults to the observed mean degree; the seed still keys lists and subsets
        if flags["c"] is None:
            flags["c"] = 2.0 * graph.m / max(graph.n - 1, 1)
        if flags["seed"] is None:
            flags["seed"] = 0
    data = _load_json(args.config) if args.config else {}
    data.update({k: v for k, v in flags.items() if v is not None})
    if policy:
        data["policy"] = {**data.get("policy", {}), **policy}
    missing = [k for k in ("n", "c", "seed") if k not in data]
    if missing:
        raise UsageError("need --in or all of --n, --c, --seed (missing: "
                         + ", ".join("--" + m for m in missing) + ")")
    return TrialConfig.from_dict(data), graph


def _write_report(rep, path):
    text = json.dumps(_clean(rep.data), sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sample(args):
    g = sample_gnp(GnpParams(args.n, args.c, args.seed))
    _emit_graph(g, args.out)
    return OK


def cmd_square(args):
    _emit_graph(square(_read_graph(args.inp)), args.out)
    return OK


def cmd_color(args):
    config, graph = _trial_config(args, checks=[])
    if args.coloring_out:
        config = config.replace(embed_coloring=True)
    rep = run_trial(config, graph)
    _write_report(rep, args.report)
    if args.coloring_out:
        g2 = square(graph if graph is not None else sample_gnp(GnpParams(config.n, config.c, config.seed)))
        colors = np.asarray(rep.data["coloring"]["colors"], dtype=np.int64)
        with open(args.coloring_out, "w") as fh:
            fh.write(Coloring(g2, colors).to_text())
    d = rep.data
    print(f"q_min={d['metrics']['q_min']} colors={d['metrics']['colors_used']} "
          f"delta={d['graph']['delta']} proper={d['validation']['proper']}", file=sys.stderr)
    ok = d["validation"]["proper"] and d["coloring"]["complete"]
    ok = ok and all(v is not False for v in d["invariants"].values())
    return OK if ok else FAILED


def cmd_verify(args):
    checks = args.checks.split(",") if args.checks else None
    if checks is not None:
        unknown = set(checks) - set(CLAIMS)
        if unknown:
            raise UsageError(f"unknown claims {sorted(unknown)}; choose from {','.join(CLAIMS)}")
    config, graph = _trial_config(args, checks=checks)
    rep = run_trial(config, graph)
    _write_report(rep, args.report)
    failed = [v["claim"] for v in rep.data["checks"] if v["holds"] is False]
    for v in rep.data["checks"]:
        state = {True: "holds", False: "VIOLATED", None: v["status"]}[v["holds"]]
        print(f"{v['claim']}: {state}", file=sys.stderr)
    if not rep.data["validation"]["proper"]:
        return FAILED
    return FAILED if (args.strict and failed) else OK


def cmd_oracle(args):
    g = _read_graph(args.inp)
    if args.what == "chi":
        print(exact_chromatic_number(g, cap=args.cap or 16))
        return OK
    if args.what == "chi-l":
        print(list_chromatic_number(g, cap=args.cap or 8))
        return OK
    if args.k is None:
        raise UsageError("oracle choosable needs --k")
    res = is_k_choosable(g, args.k, cap=args.cap or 8)
    print("true" if res.choosable else "false")
    if not res.choosable:
        for v, lst in enumerate(res.witness):
            print(v, *lst)
        return FAILED
    return OK


def cmd_sweep(args):
    base = _load_json(args.config) if args.config else {}
    for key in ("theta", "eps_cap", "q", "delta1", "sampler_trials", "timeout"):
        if getattr(args, key) is not None:
            base[key] = getattr(args, key)
    if args.checks is not None:
        base["checks"] = [x for x in args.checks.split(",") if x]
    if args.policy:
        base["policy"] = {**base.get("policy", {}), "mode": args.policy}
    seeds = _seeds(args.seeds) if args.seeds else []
    if not seeds:
        raise UsageError("sweep needs a non-empty --seeds list")
    result = run_sweep(args.n, args.c, seeds, base, args.epsilon, args.workers, args.out_dir)
    if not args.out_dir:
        sys.stdout.write("".join(line + "\n" for line in result.lines))
    errors = sum(row["errors"] for row in result.summary)
    print(f"{len(result.lines)} trials, {errors} errors", file=sys.stderr)
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="gnpsquare", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="emit a G(n, c/n) edge list")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("square", help="read an edge list, emit its square")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_square)

    s = sub.add_parser("color", help="run the three-stage coloring and report")
    _add_trial_flags(s)
    s.add_argument("--coloring-out", help="write 'vertex color' lines here")
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("verify", help="run structural checks and report verdicts")
    _add_trial_flags(s)
    s.add_argument("--checks", help=f"comma list from {','.join(CLAIMS)} (default {','.join(DEFAULT_CHECKS)})")
    s.add_argument("--strict", action="store_true", help="exit 1 if any check is violated")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle", help="exact chromatic / choosability numbers of a small graph")
    s.add_argument("what", choices=("chi", "choosable", "chi-l"))
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--cap", type=int, help="vertex cap (defaults 16 for chi, 8 otherwise)")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("sweep", help="grid of trials; JSONL + CSV outputs")
    s.add_argument("--n", type=int, nargs="+", required=True)
    s.add_argument("--c", type=float, nargs="+", required=True)
    s.add_argument("--seeds", required=True, help="e.g. 0-19 or 1,2,5")
    s.add_argument("--epsilon", type=float, nargs="+", help="epsilon overrides, one grid axis")
    s.add_argument("--config", help="JSON base config (TrialConfig fields minus n, c, seed)")
    for name in ("theta", "eps_cap"):
        s.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    s.add_argument("--q", type=int)
    s.add_argument("--delta1", type=int)
    s.add_argument("--policy", choices=POLICY_MODES)
    s.add_argument("--checks")
    s.add_argument("--sampler-trials", type=int)
    s.add_argument("--timeout", type=float)
    s.add_argument("--workers", type=int, help="parallel trials (default $GNPSQUARE_WORKERS or CPU count)")
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, OracleCapError) as exc:
        print(f"gnpsquare {args.command}: error: {exc}", file=sys.stderr)
        return USAGE
    except TrialError as exc:
        if isinstance(exc.cause, (ValueError, GraphFormatError)):
            print(f"gnpsquare {args.command}: error: {exc}", file=sys.stderr)
            return USAGE
        raise
    except (ValueError, TypeError, OSError) as exc:
        print(f"gnpsquare {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
