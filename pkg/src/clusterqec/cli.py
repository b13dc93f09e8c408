"""Command-line front end.

Subcommands: construct, analyze, bounds, sim, percolate, decode.  Every
run prints its resolved configuration to stderr; data goes to stdout or
to --out.  All randomness flows from --seed, so any command that takes
one is bit-reproducible.  Exit codes: 0 success, 2 configuration error,
3 work-budget exhaustion.

The sweep commands accept a TOML config file via --config; explicit
flags override file values.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import bounds as bounds_mod
from . import codes, decoder, montecarlo
from .clusters import (
    build_connectivity_graph,
    build_spacetime_graph,
    histogram_to_csv,
    sample_cluster_histogram,
)
from .gf2 import PauliVector


class ConfigError(Exception):
    pass


def _echo_config(name: str, resolved: dict) -> None:
    print(f"config[{name}]: {json.dumps(resolved, sort_keys=True)}", file=sys.stderr)


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {path} not found")
    return tomllib.loads(p.read_text())


def _resolve(cli_value, file_config: dict, key: str, default):
    """Flag beats config file beats hard default."""
    if cli_value is not None:
        return cli_value
    if key in file_config:
        return file_config[key]
    return default


def _parse_p_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(t) for t in text.split(",") if t)
    except ValueError:
        raise ConfigError(f"bad probability list {text!r}") from None
    if not values:
        raise ConfigError("empty probability list")
    return values


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ── subcommand handlers ──────────────────────────────────────────────


def _cmd_construct(args) -> int:
    h1 = codes.parse_seed_spec(args.h1)
    h2 = codes.parse_seed_spec(args.h2) if args.h2 else h1
    meta = {"seed_h1": args.h1, "seed_h2": args.h2 or args.h1}
    code = codes.hypergraph_product(h1, h2, meta)
    _echo_config("construct", {"h1": args.h1, "h2": args.h2 or args.h1, "out": args.out})
    z = (code.ell - 1) * code.j
    print(f"[[{code.n},{code.k},?]] j={code.j} l={code.ell} z={z}")
    if args.out:
        codes.save_code(code, args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_analyze(args) -> int:
    code = codes.load_code(args.code)
    graph = build_connectivity_graph(code)
    _echo_config(
        "analyze",
        {
            "code": args.code,
            "distance_mode": args.distance_mode,
            "w_max": args.w_max,
            "iterations": args.iterations,
            "seed": args.seed,
        },
    )
    z = (code.ell - 1) * code.j
    print(f"[[{code.n},{code.k},?]] j={code.j} l={code.ell} z={z}")
    degs: dict[int, int] = {}
    for nbrs in graph.adjacency:
        degs[len(nbrs)] = degs.get(len(nbrs), 0) + 1
    print(f"degree bound {graph.z_bound}, max observed {graph.max_degree_observed}")
    for d in sorted(degs):
        print(f"degree {d}: {degs[d]} vertices")
    if args.distance_mode == "exhaustive":
        found = codes.distance_exhaustive(code, args.w_max)
        if found is None:
            print(f"distance: > {args.w_max} (certified)")
        else:
            print(f"distance: {found} (exact at this weight)")
    elif args.distance_mode == "random":
        best = codes.distance_upper_bound(code, args.iterations, args.seed)
        print(f"distance: <= {best} (randomized search)")
    return 0


def _cmd_bounds(args) -> int:
    report = bounds_mod.bounds_report(args.j, args.l)
    payload = bounds_mod.report_to_dict(report)
    resolved = {"j": args.j, "l": args.l, "h": args.h, "v": args.v}
    if (args.h is None) != (args.v is None):
        raise ConfigError("--h and --v must be given together")
    if args.h is not None:
        gv = bounds_mod.gv_distance(args.h, args.v, args.gv_exponent)
        payload["gv"] = {
            "h": gv.h,
            "v": gv.v,
            "rate_c": gv.rate_c,
            "delta_c": gv.delta_c,
            "y_root": gv.y_root,
        }
        p_assumed = (
            args.p
            if args.p is not None
            else bounds_mod.default_blocklength_error_rate(args.h, args.v)
        )
        resolved.update({"p": p_assumed, "pf_per_cycle": args.pf_per_cycle})
        print(
            f"blocklength estimate assumes single-(qu)bit error probability "
            f"p={p_assumed!r}"
            + ("" if args.p is not None else " (default: p1/10 for the family)"),
            file=sys.stderr,
        )
        payload["min_blocklength"] = bounds_mod.min_blocklength(
            args.h, args.v, p_assumed, args.pf_per_cycle, args.gv_exponent
        )
        payload["assumed_p"] = p_assumed
    _echo_config("bounds", resolved)
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_sim(args) -> int:
    file_cfg = _load_config_file(args.config)
    channel = _resolve(args.channel, file_cfg, "channel", None)
    code_path = _resolve(args.code, file_cfg, "code", None)
    if channel is None or code_path is None:
        raise ConfigError("sim needs --channel and --code (flags or config file)")
    p_text = _resolve(args.p, file_cfg, "p", None)
    if p_text is None:
        raise ConfigError("sim needs --p")
    p_values = (
        _parse_p_list(p_text) if isinstance(p_text, str) else tuple(float(x) for x in p_text)
    )
    trials = int(_resolve(args.trials, file_cfg, "trials", 1000))
    seed = int(_resolve(args.seed, file_cfg, "seed", 0))
    threads = int(_resolve(args.threads, file_cfg, "threads", 1))
    distance_hint = _resolve(args.distance_hint, file_cfg, "distance_hint", None)
    budget = None
    if args.max_cluster_size is not None or args.max_work is not None:
        budget = decoder.ClusterBudget(
            max_cluster_size=args.max_cluster_size or 24,
            max_work=args.max_work or 10**8,
        )
    code = codes.load_code(code_path)
    config = montecarlo.SweepConfig(
        code=code,
        channel=channel,
        p_values=p_values,
        trials=trials,
        seed=seed,
        budget=budget,
        distance_hint=None if distance_hint is None else int(distance_hint),
        count_budget_as_failure=not args.exclude_budget_exceeded,
        threads=threads,
    )
    _echo_config(
        "sim",
        {
            "channel": channel,
            "code": code_path,
            "p": list(p_values),
            "trials": trials,
            "seed": seed,
            "threads": threads,
        },
    )
    result = montecarlo.run_sweep(config)
    _write_or_print(result.to_csv(), args.out)
    if args.out:
        sidecar = args.sidecar or (args.out + ".json")
        Path(sidecar).write_text(result.to_json_sidecar())
    return 0


def _cmd_percolate(args) -> int:
    file_cfg = _load_config_file(args.config)
    code_path = _resolve(args.code, file_cfg, "code", None)
    if code_path is None:
        raise ConfigError("percolate needs --code")
    p = float(_resolve(args.p, file_cfg, "p", 0.05))
    trials = int(_resolve(args.trials, file_cfg, "trials", 1000))
    seed = int(_resolve(args.seed, file_cfg, "seed", 0))
    rounds = _resolve(args.spacetime_rounds, file_cfg, "spacetime_rounds", None)
    code = codes.load_code(code_path)
    if rounds is not None:
        graph = build_spacetime_graph(code, int(rounds))
    else:
        graph = build_connectivity_graph(code)
    _echo_config(
        "percolate",
        {
            "code": code_path,
            "p": p,
            "trials": trials,
            "seed": seed,
            "spacetime_rounds": rounds,
        },
    )
    hist = sample_cluster_histogram(graph, p, trials, seed)
    _write_or_print(histogram_to_csv(hist, graph.z_bound), args.out)
    return 0


def _cmd_decode(args) -> int:
    code = codes.load_code(args.code)
    graph = build_connectivity_graph(code)
    error = PauliVector.from_string(code.n, args.error)
    synd = decoder.syndrome(code, error)
    _echo_config(
        "decode",
        {
            "code": args.code,
            "channel": args.channel,
            "error": args.error,
            "erasure": args.erasure,
        },
    )
    if args.channel == "erasure":
        if args.erasure is None:
            raise ConfigError("erasure decoding needs --erasure with the mask")
        mask = tuple(int(t) for t in args.erasure.split(",") if t)
        if any(q not in set(mask) for q in error.support):
            raise ConfigError("error support must lie inside the erasure mask")
        outcome = decoder.decode_erasure(code, graph, mask, synd, true_error=error)
    else:
        budget = decoder.ClusterBudget(
            max_cluster_size=args.max_cluster_size or 24,
            max_work=args.max_work or 10**8,
        )
        outcome = decoder.decode_depolarizing(
            code, graph, synd, budget=budget, true_error=error
        )
    print(json.dumps(outcome.to_dict(), indent=2))
    return 3 if outcome.status == decoder.STATUS_BUDGET else 0


# ── parser wiring ────────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusterqec",
        description="Hypergraph-product LDPC codes: construction, bounds, "
        "cluster decoding, and percolation statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser("construct", help="build a code from seed matrices")
    p_con.add_argument(
        "--h1",
        required=True,
        help="seed spec: circulant:L:i,...  random:n:h:v:seed  or a file path",
    )
    p_con.add_argument("--h2", help="second seed spec (defaults to --h1)")
    p_con.add_argument("--out", help="write the code as JSON to this path")
    p_con.set_defaults(func=_cmd_construct)

    p_an = sub.add_parser("analyze", help="parameters, degrees, and distance")
    p_an.add_argument("--code", required=True, help="code JSON file")
    p_an.add_argument(
        "--distance-mode",
        choices=["none", "exhaustive", "random"],
        default="none",
        help="distance estimation strategy",
    )
    p_an.add_argument("--w-max", type=int, default=4, help="exhaustive weight cap")
    p_an.add_argument(
        "--iterations", type=int, default=1000, help="randomized search rounds"
    )
    p_an.add_argument("--seed", type=int, default=0, help="randomized search seed")
    p_an.set_defaults(func=_cmd_analyze)

    p_b = sub.add_parser("bounds", help="closed-form threshold and rate bounds")
    p_b.add_argument("--j", type=int, required=True, help="column weight limit")
    p_b.add_argument("--l", type=int, required=True, help="row weight limit")
    p_b.add_argument("--h", type=int, help="seed column weight (for ensemble bounds)")
    p_b.add_argument("--v", type=int, help="seed row weight (for ensemble bounds)")
    p_b.add_argument(
        "--p", type=float, help="error rate for the blocklength estimate"
    )
    p_b.add_argument(
        "--pf-per-cycle",
        type=float,
        default=1e-9,
        help="failure budget per correction cycle",
    )
    p_b.add_argument(
        "--gv-exponent",
        type=int,
        help="override the ensemble equation exponent (defaults to v)",
    )
    p_b.set_defaults(func=_cmd_bounds)

    p_sim = sub.add_parser("sim", help="Monte Carlo failure-rate sweep")
    p_sim.add_argument("--channel", choices=["erasure", "depolarizing"])
    p_sim.add_argument("--code", help="code JSON file")
    p_sim.add_argument("--p", help="comma-separated error rates")
    p_sim.add_argument("--trials", type=int, help="trials per point")
    p_sim.add_argument("--seed", type=int, help="master seed")
    p_sim.add_argument("--threads", type=int, help="worker process count")
    p_sim.add_argument("--max-cluster-size", type=int, help="per-cluster size cap")
    p_sim.add_argument("--max-work", type=int, help="pattern budget per decode")
    p_sim.add_argument(
        "--distance-hint", type=int, help="known distance, used to size budgets"
    )
    p_sim.add_argument(
        "--exclude-budget-exceeded",
        action="store_true",
        help="leave budget-exceeded trials out of the failure rate",
    )
    p_sim.add_argument("--out", help="CSV output path (stdout when absent)")
    p_sim.add_argument("--sidecar", help="JSON config-echo path (default: OUT.json)")
    p_sim.add_argument("--config", help="TOML config file; flags override it")
    p_sim.set_defaults(func=_cmd_sim)

    p_perc = sub.add_parser("percolate", help="cluster-size histogram sampling")
    p_perc.add_argument("--code", help="code JSON file")
    p_perc.add_argument("--p", type=float, help="site occupation probability")
    p_perc.add_argument("--trials", type=int, help="Monte Carlo trials")
    p_perc.add_argument("--seed", type=int, help="sampling seed")
    p_perc.add_argument(
        "--spacetime-rounds",
        type=int,
        help="sample on the repeated-measurement graph with this many rounds",
    )
    p_perc.add_argument("--out", help="CSV output path (stdout when absent)")
    p_perc.add_argument("--config", help="TOML config file; flags override it")
    p_perc.set_defaults(func=_cmd_percolate)

    p_dec = sub.add_parser("decode", help="decode one explicit error")
    p_dec.add_argument("--code", required=True, help="code JSON file")
    p_dec.add_argument(
        "--channel", choices=["erasure", "depolarizing"], required=True
    )
    p_dec.add_argument(
        "--error", required=True, help='Pauli string like "X0,Z5,Y17" ("" = identity)'
    )
    p_dec.add_argument("--erasure", help="comma-separated erased qubit indices")
    p_dec.add_argument("--max-cluster-size", type=int, help="per-cluster size cap")
    p_dec.add_argument("--max-work", type=int, help="pattern budget")
    p_dec.set_defaults(func=_cmd_decode)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except codes.BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
