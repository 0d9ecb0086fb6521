"""Command-line entry point.

Subcommands: generate-degrees, sample, triangles, ck, theory, oracle,
experiment. Exit codes: 0 success, 1 usage error, 2 runtime error.
Diagnostics go to stderr; data goes to stdout or to files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import exact_oracle, experiments, theory
from .degree_sequences import (
    DegreeSequence,
    generate_quantile,
    load_degree_file,
    parse_degrees_inline,
    sample_iid,
    save_degree_file,
    verify_tail_bound,
)
from .graph_core import (
    clustering_curve,
    count_triangles,
    read_edge_list,
    write_edge_list,
)
from .samplers import default_burn_in, uniform_sample_mcmc
from .experiments import MODELS


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise _UsageExit()


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _load_degrees(args) -> DegreeSequence:
    text = args.degrees
    if "," in text or text.strip().isdigit():
        return parse_degrees_inline(text)
    return load_degree_file(text)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tripower", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-degrees", help="construct or sample a power-law degree sequence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--c-const", type=float, default=1.0)
    p.add_argument("--source", choices=("quantile", "iid"), default="quantile")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None, help="degree file (default: stdout)")

    p = sub.add_parser("sample", help="sample a graph from a model")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--degrees", type=str, required=True, help="degree file or inline list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--switches", type=int, default=None,
                   help="switch count for the uniform model (default: burn-in heuristic)")
    p.add_argument("--kappa", type=float, default=10.0)
    p.add_argument("--out", type=str, required=True, help="edge-list output file")
    p.add_argument("--stats-out", type=str, default=None,
                   help="JSON sampler stats (default: <out>.stats.json)")

    p = sub.add_parser("triangles", help="count triangles in an edge-list file")
    p.add_argument("graph", type=str)

    p = sub.add_parser("ck", help="clustering curve c(k) of an edge-list file")
    p.add_argument("graph", type=str)
    p.add_argument("--out", type=str, default=None, help="CSV output (default: stdout)")

    p = sub.add_parser("theory", help="print limit constants as JSON")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--c-const", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--rel-tol", type=float, default=1e-6)

    p = sub.add_parser("oracle", help="exact small-ensemble queries")
    p.add_argument("--degrees", type=str, required=True)
    p.add_argument("--edge", type=str, default=None, help="u,v pair for an edge probability")
    p.add_argument("--given", type=str, default=None,
                   help="conditioning edges like '0,2;1,3'")
    p.add_argument("--dump", action="store_true", help="dump the ensemble edge lists")

    p = sub.add_parser("experiment", help="run a sweep from a config file and/or flags")
    p.add_argument("--config", type=str, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--c-const", type=float, default=None)
    p.add_argument("--n-grid", type=str, default=None, help="comma-separated sizes")
    p.add_argument("--models", type=str, default=None, help="comma-separated model names")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--degree-source", choices=("quantile", "iid"), default=None)
    p.add_argument("--k-list", type=str, default=None,
                   help="comma-separated degrees: also run the c(k) sweep")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--rel-tol", type=float, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", type=str, default=None, help="output directory")
    return parser


def _cmd_generate_degrees(args) -> int:
    if args.source == "quantile":
        ds = generate_quantile(args.n, args.tau, args.c_const)
    else:
        ds = sample_iid(args.n, args.tau, args.c_const, args.seed)
    report = verify_tail_bound(ds, args.tau)
    if args.out:
        save_degree_file(ds, args.out)
    else:
        for d in ds.degrees:
            print(int(d))
    print(
        f"n={ds.n} total={ds.total} d_max={ds.d_max} "
        f"K_fitted={report.K_fitted:.6g} C_fitted={report.C_fitted:.6g} "
        f"max_rel_dev={report.max_rel_dev:.6g}",
        file=sys.stderr,
    )
    return 0


def _cmd_sample(args) -> int:
    ds = _load_degrees(args)
    if args.switches is not None:
        if args.model != "uniform":
            print("error: --switches applies to the uniform model only", file=sys.stderr)
            return 1
        g, chain = uniform_sample_mcmc(ds, args.switches, args.seed)
        stats = chain.stats()
    else:
        g, stats = experiments.sample_model(args.model, ds, args.seed, args.kappa)
    write_edge_list(g, args.out)
    stats_path = args.stats_out or (args.out + ".stats.json")
    payload = {"model": args.model, "seed": args.seed, "n": g.n, "m": g.m,
               "switch_stats": stats}
    Path(stats_path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.out} ({g.n} vertices, {g.m} edges)", file=sys.stderr)
    return 0


def _cmd_triangles(args) -> int:
    g = read_edge_list(args.graph)
    print(count_triangles(g))
    return 0


def _cmd_ck(args) -> int:
    g = read_edge_list(args.graph)
    curve = clustering_curve(g)
    if args.out:
        curve.to_csv(args.out)
    else:
        print("k,N_k,triangles_k,c_k")
        for k in sorted(curve.entries):
            nk, tk, ck = curve.entries[k]
            print(f"{k},{nk},{tk},{_fmt(ck)}")
    return 0


def _cmd_theory(args) -> int:
    big_a, neg_gamma = theory.gamma_comparison(args.tau)
    i_unif = theory.integral_triangle_uniform(args.tau, args.rel_tol)
    i_ecm = theory.integral_triangle_ecm(args.tau, args.rel_tol)
    params = theory.ModelParams(n=1, tau=args.tau, c_const=args.c_const, mu=args.mu)
    payload = {
        "tau": args.tau,
        "A": big_a,
        "negGamma": neg_gamma,
        "I_unif": i_unif,
        "I_ecm": i_ecm,
        "limit_constant_uniform": theory.limit_triangle_constant(params, "uniform", args.rel_tol),
        "limit_constant_ecm": theory.limit_triangle_constant(params, "ecm", args.rel_tol),
        "rel_tol": args.rel_tol,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_oracle(args) -> int:
    ds = _load_degrees(args)
    ensemble = exact_oracle.enumerate_graphs(ds)
    print(f"ensemble size: {ensemble.size}")
    if args.dump:
        for i, edges in enumerate(ensemble.graphs):
            print(f"--- graph {i + 1}/{ensemble.size}")
            for u, v in edges:
                print(f"{u} {v}")
    if args.edge:
        u, v = (int(tok) for tok in args.edge.split(","))
        given = []
        if args.given:
            for chunk in args.given.split(";"):
                a, b = (int(tok) for tok in chunk.split(","))
                given.append((a, b))
        prob = exact_oracle.exact_edge_probability(ensemble, u, v, given)
        print(f"P({u}~{v}{' | ' + args.given if args.given else ''}) = "
              f"{prob} = {_fmt(float(prob))}")
    return 0


def _cmd_experiment(args) -> int:
    mapping = experiments.parse_config_file(args.config) if args.config else {}
    overrides = {
        "tau": args.tau,
        "c_const": args.c_const,
        "replicates": args.replicates,
        "master_seed": args.seed,
        "burn_in_kappa": args.kappa,
        "degree_source": args.degree_source,
        "rel_tol": args.rel_tol,
        "threads": args.threads,
        "output_dir": args.out,
    }
    if args.n_grid:
        overrides["n_grid"] = tuple(int(tok) for tok in args.n_grid.split(","))
    if args.models:
        overrides["models"] = tuple(tok.strip() for tok in args.models.split(","))
    config = experiments.config_from_mapping(mapping, **overrides)
    if args.k_list:
        k_list = [int(tok) for tok in args.k_list.split(",")]
        ck_rows, results = experiments.run_ck_sweep(config, k_list)
        summary = {"ck_rows": len(ck_rows)}
        files = experiments.write_outputs(results, summary, config, config.output_dir, ck_rows)
    else:
        results, summary = experiments.run_triangle_sweep(config)
        files = experiments.write_outputs(results, summary, config, config.output_dir)
    for name, path in sorted(files.items()):
        print(f"{name}: {path}", file=sys.stderr)
    return 0


_COMMANDS = {
    "generate-degrees": _cmd_generate_degrees,
    "sample": _cmd_sample,
    "triangles": _cmd_triangles,
    "ck": _cmd_ck,
    "theory": _cmd_theory,
    "oracle": _cmd_oracle,
    "experiment": _cmd_experiment,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit:
        return 1
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
