"""Exhaustive enumeration of small labeled graph ensembles.

For degree sequences within the size guard (n <= 10, degree total <= 24)
this enumerates every labeled simple graph with exactly that degree
sequence, which gives exact conditional edge probabilities and exact
expected triangle counts for validating the samplers and the asymptotic
edge-probability formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from .degree_sequences import DegreeSequence
from .graph_core import Graph, from_edge_list

MAX_ORACLE_N = 10
MAX_ORACLE_TOTAL = 24

Edge = Tuple[int, int]


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class GraphEnsemble:
    """All labeled simple graphs with a fixed degree sequence.

    graphs hold canonical edge tuples (sorted pairs, sorted lexicographically);
    the ensemble is over labeled graphs, so no isomorphism reduction happens.
    """

    ds: DegreeSequence
    graphs: Tuple[Tuple[Edge, ...], ...]

    @property
    def size(self) -> int:
        return len(self.graphs)

    def to_graphs(self) -> List[Graph]:
        return [from_edge_list(self.ds.n, list(edges)) for edges in self.graphs]


def _graphical_residual(residual: Sequence[int]) -> bool:
    """Erdos-Gallai feasibility of a residual degree multiset."""
    arr = sorted((d for d in residual), reverse=True)
    if not arr:
        return True
    if sum(arr) % 2 != 0:
        return False
    if arr[0] >= len(arr):
        return False
    prefix = 0
    for k in range(1, len(arr) + 1):
        prefix += arr[k - 1]
        rhs = k * (k - 1) + sum(min(d, k) for d in arr[k:])
        if prefix > rhs:
            return False
    return True


def enumerate_graphs(degrees: "DegreeSequence | Sequence[int]") -> GraphEnsemble:
    """Backtracking enumeration of the labeled ensemble.

    The pivot vertex (largest residual, lowest index among ties) is fully
    satisfied at each level by choosing its neighbor set among vertices with
    positive residual; every edge set is produced exactly once because each
    level fixes all edges at the pivot. Branches whose residual sequence
    fails the Erdos-Gallai feasibility test are pruned.
    """
    ds = degrees if isinstance(degrees, DegreeSequence) else DegreeSequence.from_degrees(degrees)
    if ds.n > MAX_ORACLE_N or ds.total > MAX_ORACLE_TOTAL:
        raise OracleError(
            f"oracle-size: n={ds.n}, total={ds.total} exceeds guard "
            f"(n <= {MAX_ORACLE_N}, total <= {MAX_ORACLE_TOTAL})"
        )
    # enumerate on the original (descending) labeling
    target = [int(d) for d in ds.degrees]
    results: List[Tuple[Edge, ...]] = []
    edges: List[Edge] = []

    def recurse(residual: List[int]) -> None:
        pivot = -1
        best = 0
        for v, r in enumerate(residual):
            if r > best:
                best = r
                pivot = v
        if pivot < 0:
            results.append(tuple(sorted(edges)))
            return
        candidates = [u for u in range(len(residual)) if u != pivot and residual[u] > 0]
        need = residual[pivot]
        if len(candidates) < need:
            return
        for chosen in combinations(candidates, need):
            residual[pivot] = 0
            for u in chosen:
                residual[u] -= 1
            if _graphical_residual(residual):
                for u in chosen:
                    edges.append((min(pivot, u), max(pivot, u)))
                recurse(residual)
                for _ in chosen:
                    edges.pop()
            for u in chosen:
                residual[u] += 1
            residual[pivot] = need

    recurse(target)
    return GraphEnsemble(ds=ds, graphs=tuple(sorted(results)))


def _contains_all(edge_tuple: Tuple[Edge, ...], required: Iterable[Edge]) -> bool:
    edge_set = set(edge_tuple)
    return all(e in edge_set for e in required)


def _canon_pairs(pairs: Iterable[Tuple[int, int]]) -> List[Edge]:
    out = []
    for u, v in pairs:
        if u == v:
            raise OracleError(f"self-loop: ({u}, {v})")
        out.append((min(u, v), max(u, v)))
    return out


def exact_edge_probability(
    ensemble: GraphEnsemble,
    u: int,
    v: int,
    conditioning: Iterable[Tuple[int, int]] = (),
) -> Fraction:
    """P(u ~ v | every pair in `conditioning` is an edge), exactly.

    Computed as a ratio of ensemble counts; returned as a Fraction (use
    float() for a decimal value).
    """
    pair = (min(u, v), max(u, v))
    required = _canon_pairs(conditioning)
    if pair in required:
        raise OracleError("bad-args: queried pair must not be in the conditioning set")
    base = [g for g in ensemble.graphs if _contains_all(g, required)]
    if not base:
        raise OracleError("empty-condition: no ensemble graph contains the conditioning edges")
    hits = sum(1 for g in base if pair in set(g))
    return Fraction(hits, len(base))


def exact_expected_triangles(ensemble: GraphEnsemble) -> float:
    """Mean triangle count over the ensemble."""
    if ensemble.size == 0:
        raise OracleError("empty-ensemble: degree sequence is not graphical")
    total = 0
    for edge_tuple in ensemble.graphs:
        edge_set = set(edge_tuple)
        vertices = ensemble.ds.n
        count = 0
        for a, b, c in combinations(range(vertices), 3):
            if (a, b) in edge_set and (a, c) in edge_set and (b, c) in edge_set:
                count += 1
        total += count
    return total / ensemble.size


def canonical_sample_key(g: Graph) -> Tuple[Edge, ...]:
    """Canonical encoding of a sampled graph for ensemble lookups."""
    return tuple((int(u), int(v)) for u, v in g.edges())


def sampler_tv_distance(ensemble: GraphEnsemble, samples: "Sequence[Graph] | Sequence[Tuple[Edge, ...]]") -> float:
    """Total variation distance between the empirical sample law and uniform.

    Raises if any sample is not a member of the ensemble, which doubles as a
    sampler-bug detector (wrong degrees, loops, multi-edges).
    """
    if ensemble.size == 0:
        raise OracleError("empty-ensemble: degree sequence is not graphical")
    index: Dict[Tuple[Edge, ...], int] = {g: i for i, g in enumerate(ensemble.graphs)}
    counts = np.zeros(ensemble.size, dtype=np.int64)
    n_samples = 0
    for sample in samples:
        key = canonical_sample_key(sample) if isinstance(sample, Graph) else tuple(sample)
        if key not in index:
            raise OracleError(f"not-in-ensemble: sampled graph {key!r} has wrong support")
        counts[index[key]] += 1
        n_samples += 1
    if n_samples == 0:
        raise OracleError("no samples")
    freq = counts / n_samples
    return float(0.5 * np.abs(freq - 1.0 / ensemble.size).sum())
