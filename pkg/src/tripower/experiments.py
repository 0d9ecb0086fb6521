"""Reproducible experiment harness: triangle sweeps, c(k) sweeps, diagnostics.

All randomness flows from a single master seed through a documented
SplitMix64 mixing function, replicates run in a thread pool (the heavy
kernels release the GIL), and results are sorted into a deterministic order
before serialization, so outputs are reproducible for any thread count.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from . import theory
from .degree_sequences import DegreeSequence, generate_quantile, sample_iid
from .graph_core import (
    Graph,
    ClusteringCurve,
    clustering_curve,
    count_triangles,
    _orientation_rank,
    _rank_orient,
)
from .rng import splitmix64_py
from .samplers import (
    default_burn_in,
    erased_configuration_model,
    generalized_random_graph,
    uniform_sample_mcmc,
)

MODELS = ("uniform", "ecm", "grg")
MODEL_IDS = {"degrees": 0, "uniform": 1, "ecm": 2, "grg": 3}

_MASK64 = 0xFFFFFFFFFFFFFFFF


class ExperimentError(ValueError):
    pass


def stable_hash(master_seed: int, model_id: int, n: int, replicate_index: int) -> int:
    """Derive a 64-bit seed by absorbing each field through SplitMix64.

    The mixing is h = mix(mix(mix(mix(master) ^ model_id) ^ n) ^ replicate),
    fixed forever so seeds are stable across platforms and releases.
    """
    h = splitmix64_py(master_seed & _MASK64)
    h = splitmix64_py(h ^ (model_id & _MASK64))
    h = splitmix64_py(h ^ (n & _MASK64))
    h = splitmix64_py(h ^ (replicate_index & _MASK64))
    return h


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep definition; field names double as config-file keys."""

    tau: float = 2.5
    c_const: float = 1.0
    n_grid: Tuple[int, ...] = (1000, 10000, 100000)
    models: Tuple[str, ...] = ("uniform", "ecm")
    replicates: int = 20
    master_seed: int = 0
    burn_in_kappa: float = 10.0
    thinning: int = 0
    degree_source: str = "quantile"
    output_dir: str = "out"
    rel_tol: float = 1e-6
    threads: int = 0  # 0 = machine parallelism

    def __post_init__(self):
        if self.replicates < 1:
            raise ExperimentError("replicates must be >= 1")
        if list(self.n_grid) != sorted(self.n_grid):
            raise ExperimentError("n_grid must be sorted ascending")
        for model in self.models:
            if model not in MODELS:
                raise ExperimentError(f"unknown model {model!r}")
        if self.degree_source not in ("quantile", "iid"):
            raise ExperimentError(f"degree_source must be quantile or iid")


@dataclass
class ExperimentResult:
    model: str
    n: int
    replicate_index: int
    seed: int
    triangles: int
    scaled_triangles: float
    predicted: float
    runtime_ms: float
    switch_stats: Optional[Dict[str, int]] = None
    ck_curve: Optional[ClusteringCurve] = None
    mu: float = 0.0


def _degree_sequence_for(config: ExperimentConfig, n: int, replicate: int) -> DegreeSequence:
    """Replicate's degree sequence, shared by every model (paired design)."""
    if config.degree_source == "quantile":
        return generate_quantile(n, config.tau, config.c_const)
    seed = stable_hash(config.master_seed, MODEL_IDS["degrees"], n, replicate)
    return sample_iid(n, config.tau, config.c_const, seed)


def sample_model(
    model: str, ds: DegreeSequence, seed: int, burn_in_kappa: float = 10.0
) -> Tuple[Graph, Optional[Dict[str, int]]]:
    """Draw one graph from a named model on the given degree sequence."""
    if model == "uniform":
        g, chain = uniform_sample_mcmc(ds, default_burn_in(ds, burn_in_kappa), seed)
        return g, chain.stats()
    if model == "ecm":
        return erased_configuration_model(ds, seed), None
    if model == "grg":
        return generalized_random_graph(ds.degrees.astype(np.float64), seed), None
    raise ExperimentError(f"unknown model {model!r}")


def _one_triangle_replicate(config: ExperimentConfig, model: str, n: int, replicate: int,
                            want_curve: bool = False) -> ExperimentResult:
    ds = _degree_sequence_for(config, n, replicate)
    seed = stable_hash(config.master_seed, MODEL_IDS[model], n, replicate)
    start = time.perf_counter()
    g, switch_stats = sample_model(model, ds, seed, config.burn_in_kappa)
    mu = ds.total / ds.n
    params = theory.ModelParams(n=n, tau=config.tau, c_const=config.c_const, mu=mu)
    predicted = theory.predict_triangles(params, model, config.rel_tol)
    t = count_triangles(g)
    curve = clustering_curve(g) if want_curve else None
    runtime_ms = (time.perf_counter() - start) * 1000.0
    scaled = t * float(n) ** (-1.5 * (3.0 - config.tau))
    return ExperimentResult(
        model=model, n=n, replicate_index=replicate, seed=seed, triangles=t,
        scaled_triangles=scaled, predicted=predicted, runtime_ms=runtime_ms,
        switch_stats=switch_stats, ck_curve=curve, mu=mu,
    )


def _run_replicates(config: ExperimentConfig, want_curve: bool = False,
                    n_grid: Optional[Sequence[int]] = None) -> List[ExperimentResult]:
    tasks = [
        (model, n, r)
        for n in (n_grid if n_grid is not None else config.n_grid)
        for model in config.models
        for r in range(config.replicates)
    ]
    # warm the integral caches serially so workers only read them
    for model in config.models:
        if model == "ecm":
            theory.integral_triangle_ecm(config.tau, config.rel_tol)
        else:
            theory.integral_triangle_uniform(config.tau, config.rel_tol)

    workers = config.threads if config.threads > 0 else (os.cpu_count() or 1)
    if workers <= 1:
        results = [_one_triangle_replicate(config, *t, want_curve) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda t: _one_triangle_replicate(config, *t, want_curve), tasks))
    results.sort(key=lambda r: (r.model, r.n, r.replicate_index))
    return results


def run_triangle_sweep(config: ExperimentConfig) -> Tuple[List[ExperimentResult], Dict]:
    """Seeded replicate sweep of triangle counts, with per-cell aggregates.

    Degree sequences are shared across models at fixed (n, replicate) so
    model comparisons are paired.
    """
    results = _run_replicates(config)
    summary: Dict = {"cells": []}
    for n in config.n_grid:
        for model in config.models:
            rows = [r for r in results if r.model == model and r.n == n]
            scaled = np.array([r.scaled_triangles for r in rows])
            predicted = float(np.mean([r.predicted for r in rows])) * float(n) ** (
                -1.5 * (3.0 - config.tau))
            summary["cells"].append({
                "model": model,
                "n": n,
                "replicates": len(rows),
                "mean_scaled_T": float(scaled.mean()),
                "median_scaled_T": float(np.median(scaled)),
                "stderr_scaled_T": float(scaled.std(ddof=1) / math.sqrt(len(rows))) if len(rows) > 1 else 0.0,
                "predicted_scaled_T": predicted,
                "median_ratio": float(np.median(scaled / predicted)),
                "mean_runtime_ms": float(np.mean([r.runtime_ms for r in rows])),
            })
    return results, summary


@dataclass(frozen=True)
class CkRow:
    model: str
    n: int
    k: int
    range_label: str
    replicates_used: int
    empirical_ck: float  # nan when N_k = 0 in every replicate
    predicted_ck: float


def run_ck_sweep(config: ExperimentConfig, k_list: Sequence[int]) -> Tuple[List[CkRow], List[ExperimentResult]]:
    """Empirical local clustering against predictions at the requested degrees.

    c(k) is averaged over the replicates where N_k >= 1; replicates with
    N_k = 0 leave c(k) undefined and are only reflected in replicates_used.
    """
    if not k_list:
        raise ExperimentError("no-k: k_list must not be empty")
    results = _run_replicates(config, want_curve=True)
    rows: List[CkRow] = []
    for n in config.n_grid:
        for model in config.models:
            cell = [r for r in results if r.model == model and r.n == n]
            mu = cell[0].mu
            params = theory.ModelParams(n=n, tau=config.tau, c_const=config.c_const, mu=mu)
            for k in sorted(set(int(k) for k in k_list)):
                if k < 2:
                    raise ExperimentError(f"no-k: k must be >= 2, got {k}")
                values = [r.ck_curve.entries[k][2] for r in cell
                          if r.ck_curve is not None and k in r.ck_curve.entries]
                pred = theory.predict_ck(params, k, rel_tol=config.rel_tol)
                rows.append(CkRow(
                    model=model, n=n, k=k, range_label=pred.range_label,
                    replicates_used=len(values),
                    empirical_ck=float(np.mean(values)) if values else float("nan"),
                    predicted_ck=pred.predicted_ck,
                ))
    return rows, results


# ---------------------------------------------------------------------------
# contribution-window diagnostics
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _triangle_shares(out_off, out_nbr, n, deg, b_lo, b_hi, k, rule, p_lo, p_hi, cap):
    total = 0
    in_window = 0
    delta_k = 0
    w_hits = 0
    mark = np.full(n, -1, dtype=np.int64)
    for u in range(n):
        for i in range(out_off[u], out_off[u + 1]):
            mark[out_nbr[i]] = u
        for i in range(out_off[u], out_off[u + 1]):
            v = out_nbr[i]
            for j in range(out_off[v], out_off[v + 1]):
                w = out_nbr[j]
                if mark[w] != u:
                    continue
                total += 1
                if (b_lo <= deg[u] <= b_hi and b_lo <= deg[v] <= b_hi
                        and b_lo <= deg[w] <= b_hi):
                    in_window += 1
                if k > 0:
                    for corner in range(3):
                        if corner == 0:
                            dk, d1, d2 = deg[u], deg[v], deg[w]
                        elif corner == 1:
                            dk, d1, d2 = deg[v], deg[u], deg[w]
                        else:
                            dk, d1, d2 = deg[w], deg[u], deg[v]
                        if dk != k:
                            continue
                        delta_k += 1
                        if rule == 3:
                            ok = p_lo <= d1 <= p_hi and p_lo <= d2 <= p_hi
                        else:
                            prod = float(d1) * float(d2)
                            ok = p_lo <= prod <= p_hi
                            if rule == 2:
                                ok = ok and d1 <= cap and d2 <= cap
                        if ok:
                            w_hits += 1
    return total, in_window, delta_k, w_hits


def contribution_diagnostics(
    g: Graph,
    epsilon: float,
    mu: Optional[float] = None,
    tau: Optional[float] = None,
    k: Optional[int] = None,
) -> Dict[str, float]:
    """Share of triangles supported on the dominant degree window.

    The window is [eps * sqrt(mu n), sqrt(mu n) / eps]; the returned
    triangle_share is the fraction of triangles with all three corner
    degrees inside it. With k (and tau) given, also reports the share of
    (triangle, degree-k corner) incidences whose other two corners satisfy
    the k-dependent pair constraint: degree product in [eps n, n/eps] for
    small k (plus both degrees <= n/k in the middle regime), or both degrees
    in [eps n/k, n/(eps k)] for k > sqrt(n).
    """
    if not (0.0 < epsilon < 1.0):
        raise ExperimentError(f"epsilon must be in (0, 1), got {epsilon}")
    deg = g.degrees()
    if mu is None:
        mu = 2.0 * g.m / g.n
    rank = _orientation_rank(g)
    out_off, out_nbr = _rank_orient(g.offsets, g.neighbors, rank)
    scale = math.sqrt(mu * g.n)
    b_lo = epsilon * scale
    b_hi = scale / epsilon
    if k is None:
        total, in_window, _, _ = _triangle_shares(
            out_off, out_nbr, g.n, deg, b_lo, b_hi, 0, 0, 0.0, 0.0, 0.0)
        return {
            "triangles": float(total),
            "triangle_share": in_window / total if total else float("nan"),
        }
    if tau is None:
        raise ExperimentError("per-k share needs tau to pick the pair constraint")
    n = g.n
    if k <= n ** ((tau - 2.0) / (tau - 1.0)):
        rule, p_lo, p_hi, cap = 1, epsilon * n, n / epsilon, 0.0
    elif k <= math.sqrt(n):
        rule, p_lo, p_hi, cap = 2, epsilon * n, n / epsilon, n / k
    else:
        rule, p_lo, p_hi, cap = 3, epsilon * n / k, n / (epsilon * k), 0.0
    total, in_window, delta_k, w_hits = _triangle_shares(
        out_off, out_nbr, g.n, deg, b_lo, b_hi, k, rule, p_lo, p_hi, cap)
    return {
        "triangles": float(total),
        "triangle_share": in_window / total if total else float("nan"),
        "delta_k": float(delta_k),
        "w_share": w_hits / delta_k if delta_k else float("nan"),
    }


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_triangle_csv(results: Sequence[ExperimentResult], path: "str | Path") -> None:
    """Columns: model,n,replicate,seed,T,scaled_T,predicted.

    Wall-clock runtimes are deliberately kept out of this file so that reruns
    of the same config are byte-identical; per-cell runtime aggregates live
    in the JSON summary instead.
    """
    rows = sorted(results, key=lambda r: (r.model, r.n, r.replicate_index))
    with open(path, "w", newline="") as fh:
        fh.write("model,n,replicate,seed,T,scaled_T,predicted\n")
        for r in rows:
            fh.write(
                f"{r.model},{r.n},{r.replicate_index},{r.seed},{r.triangles},"
                f"{_fmt(r.scaled_triangles)},{_fmt(r.predicted)}\n"
            )


def write_ck_csv(rows: Sequence[CkRow], path: "str | Path") -> None:
    """Columns: model,n,k,range,replicates_used,empirical_ck,predicted_ck."""
    ordered = sorted(rows, key=lambda r: (r.model, r.n, r.k))
    with open(path, "w", newline="") as fh:
        fh.write("model,n,k,range,replicates_used,empirical_ck,predicted_ck\n")
        for r in ordered:
            fh.write(
                f"{r.model},{r.n},{r.k},{r.range_label},{r.replicates_used},"
                f"{_fmt(r.empirical_ck)},{_fmt(r.predicted_ck)}\n"
            )


def write_outputs(
    results: Sequence[ExperimentResult],
    summary: Dict,
    config: ExperimentConfig,
    out_dir: "str | Path",
    ck_rows: Optional[Sequence[CkRow]] = None,
) -> Dict[str, Path]:
    """Write the sweep CSVs plus a JSON summary; returns the file map."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: Dict[str, Path] = {}
    triangle_csv = out / "triangles.csv"
    write_triangle_csv(results, triangle_csv)
    files["triangles_csv"] = triangle_csv
    if ck_rows is not None:
        ck_csv = out / "ck.csv"
        write_ck_csv(ck_rows, ck_csv)
        files["ck_csv"] = ck_csv
    theory_block = {
        "tau": config.tau,
        "A": theory.constant_A(config.tau),
        "negGamma": theory.gamma_comparison(config.tau)[1],
        "I_unif": theory.integral_triangle_uniform(config.tau, config.rel_tol),
        "I_ecm": theory.integral_triangle_ecm(config.tau, config.rel_tol),
        "rel_tol": config.rel_tol,
    }
    payload = {
        "config": asdict(config),
        "theory": theory_block,
        "summary": summary,
    }
    summary_json = out / "summary.json"
    summary_json.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    files["summary_json"] = summary_json
    return files


def parse_config_file(path: "str | Path") -> Dict[str, str]:
    """Parse "key = value" lines; '#' starts a comment."""
    out: Dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ExperimentError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def config_from_mapping(mapping: Dict[str, str], **overrides) -> ExperimentConfig:
    """Build an ExperimentConfig from config-file strings plus overrides."""
    kwargs: Dict = {}
    converters = {
        "tau": float, "c_const": float, "replicates": int, "master_seed": int,
        "burn_in_kappa": float, "thinning": int, "degree_source": str,
        "output_dir": str, "rel_tol": float, "threads": int,
    }
    for key, value in mapping.items():
        if key == "n_grid":
            kwargs["n_grid"] = tuple(int(tok) for tok in value.split(",") if tok.strip())
        elif key == "models":
            kwargs["models"] = tuple(tok.strip() for tok in value.split(",") if tok.strip())
        elif key in converters:
            kwargs[key] = converters[key](value)
        else:
            raise ExperimentError(f"unknown config key {key!r}")
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**kwargs)
