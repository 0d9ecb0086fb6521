"""Immutable simple graphs with fast triangle counting and clustering curves.

Graphs are stored in compressed sorted-adjacency form (CSR). The triangle
counter orients edges by (degree, vertex) order and intersects forward
neighborhoods, which is exact and runs in O(m^1.5). A brute-force counter
over all vertex triples serves as the small-instance oracle.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np
from numba import njit

from .degree_sequences import DegreeSequence

BRUTE_FORCE_LIMIT = 512


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph in CSR form.

    offsets has length n+1; neighbors holds each undirected edge twice,
    strictly increasing within every vertex slice (no loops, no multi-edges).
    """

    n: int
    offsets: np.ndarray
    neighbors: np.ndarray
    m: int

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets).astype(np.int64)

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors_of(u)
        i = np.searchsorted(row, v)
        return bool(i < row.size and row[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, lexicographically sorted."""
        u = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.offsets))
        v = self.neighbors.astype(np.int64)
        keep = u < v
        return np.column_stack([u[keep], v[keep]])

    def canonical_key(self) -> bytes:
        """Canonical encoding: the sorted edge list as raw bytes."""
        return self.edges().tobytes()


@dataclass(frozen=True)
class ClusteringCurve:
    """Per-degree clustering data.

    entries maps degree k (k >= 2, N_k >= 1) to (N_k, triangles_k, c_k) where
    triangles_k counts (triangle, degree-k corner) incidences: a triangle
    with j corners of degree k contributes j.
    """

    entries: Dict[int, Tuple[int, int, float]]

    def ck(self, k: int) -> float:
        return self.entries[k][2]

    def to_csv(self, path: "str | Path") -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "N_k", "triangles_k", "c_k"])
            for k in sorted(self.entries):
                nk, tk, ck = self.entries[k]
                writer.writerow([k, nk, tk, f"{ck:.17g}"])


def from_edge_list(n: int, edges: "Sequence[Tuple[int, int]] | np.ndarray") -> Graph:
    """Build a canonical Graph, rejecting loops, duplicates and bad vertices."""
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError("edge list must be pairs")
    if n < 1:
        raise GraphError("bad-vertex: n must be >= 1")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise GraphError(f"bad-vertex: vertex out of range [0, {n})")
    if np.any(arr[:, 0] == arr[:, 1]):
        bad = arr[arr[:, 0] == arr[:, 1]][0]
        raise GraphError(f"self-loop: ({bad[0]}, {bad[1]})")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    key = lo * np.int64(n) + hi
    if np.unique(key).size != key.size:
        raise GraphError("multi-edge: duplicate undirected pair")
    return _build_csr(n, lo, hi)


def _build_csr(n: int, lo: np.ndarray, hi: np.ndarray) -> Graph:
    """CSR from validated edge endpoint arrays (u < v)."""
    m = int(lo.size)
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.argsort(src * np.int64(n) + dst, kind="stable")
    dst = dst[order]
    counts = np.bincount(src, minlength=n)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return Graph(n=n, offsets=offsets, neighbors=dst.astype(np.int64), m=m)


def from_sorted_pairs(n: int, lo: np.ndarray, hi: np.ndarray) -> Graph:
    """Internal fast path for samplers: endpoints already deduplicated, u < v."""
    return _build_csr(n, np.asarray(lo, dtype=np.int64), np.asarray(hi, dtype=np.int64))


@njit(cache=True, nogil=True)
def _rank_orient(offsets, neighbors, rank):
    """CSR of forward edges u -> v with rank[u] < rank[v], sorted by rank."""
    n = offsets.size - 1
    out_deg = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for idx in range(offsets[u], offsets[u + 1]):
            v = neighbors[idx]
            if rank[u] < rank[v]:
                out_deg[u] += 1
    out_off = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        out_off[u + 1] = out_off[u] + out_deg[u]
    out_nbr = np.empty(out_off[n], dtype=np.int64)
    fill = out_off[:n].copy()
    # visit vertices in rank order so each forward list is sorted by rank
    by_rank = np.empty(n, dtype=np.int64)
    for v in range(n):
        by_rank[rank[v]] = v
    for r in range(n):
        v = by_rank[r]
        for u_idx in range(offsets[v], offsets[v + 1]):
            u = neighbors[u_idx]
            if rank[u] < rank[v]:
                out_nbr[fill[u]] = v
                fill[u] += 1
    return out_off, out_nbr


@njit(cache=True, nogil=True)
def _triangle_counts(out_off, out_nbr, n):
    """Per-vertex triangle counts via forward-neighborhood intersection."""
    per_vertex = np.zeros(n, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    for u in range(n):
        for i in range(out_off[u], out_off[u + 1]):
            mark[out_nbr[i]] = u
        for i in range(out_off[u], out_off[u + 1]):
            v = out_nbr[i]
            for j in range(out_off[v], out_off[v + 1]):
                w = out_nbr[j]
                if mark[w] == u:
                    per_vertex[u] += 1
                    per_vertex[v] += 1
                    per_vertex[w] += 1
    return per_vertex


def _orientation_rank(g: Graph) -> np.ndarray:
    deg = g.degrees()
    order = np.lexsort((np.arange(g.n), deg))
    rank = np.empty(g.n, dtype=np.int64)
    rank[order] = np.arange(g.n)
    return rank


def triangles_per_vertex(g: Graph) -> np.ndarray:
    """Number of triangles containing each vertex (exact)."""
    rank = _orientation_rank(g)
    out_off, out_nbr = _rank_orient(g.offsets, g.neighbors, rank)
    return _triangle_counts(out_off, out_nbr, g.n)


def count_triangles(g: Graph) -> int:
    """Exact triangle count in O(m^1.5) by degree-ordered forward counting."""
    per_vertex = triangles_per_vertex(g)
    total = int(per_vertex.sum(dtype=np.int64))
    return total // 3


def count_triangles_bruteforce(g: Graph) -> int:
    """Oracle: scan all C(n,3) vertex triples. Guarded to small n."""
    if g.n > BRUTE_FORCE_LIMIT:
        raise GraphError(f"oracle-size: n={g.n} exceeds brute-force limit {BRUTE_FORCE_LIMIT}")
    adj = np.zeros((g.n, g.n), dtype=np.bool_)
    for u in range(g.n):
        adj[u, g.neighbors_of(u)] = True
    count = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if adj[u, v]:
                count += int(np.count_nonzero(adj[u, v + 1:] & adj[v, v + 1:]))
    return count


def clustering_curve(g: Graph) -> ClusteringCurve:
    """Local clustering per degree: c_k = 2 * triangles_k / (N_k * k * (k-1)).

    Degrees 0 and 1 are omitted (the denominator vanishes), as are degrees
    with no vertices.
    """
    deg = g.degrees()
    per_vertex = triangles_per_vertex(g)
    entries: Dict[int, Tuple[int, int, float]] = {}
    if g.n == 0:
        return ClusteringCurve(entries)
    nk = np.bincount(deg)
    tk = np.bincount(deg, weights=per_vertex.astype(np.float64))
    for k in range(2, nk.size):
        if nk[k] < 1:
            continue
        triangles_k = int(round(tk[k]))
        ck = 2.0 * triangles_k / (int(nk[k]) * k * (k - 1))
        entries[k] = (int(nk[k]), triangles_k, ck)
    return ClusteringCurve(entries)


def two_paths_from(g: Graph, v: int) -> int:
    """Number of 2-paths v-u-w with w != v: sum over u in N(v) of (d_u - 1)."""
    if not (0 <= v < g.n):
        raise GraphError(f"bad-vertex: {v}")
    nbrs = g.neighbors_of(v)
    deg = np.diff(g.offsets)
    return int((deg[nbrs] - 1).sum())


def degree_sequence_of(g: Graph, require_positive: bool = False) -> DegreeSequence:
    """Degree sequence of a graph; optionally insist every degree is >= 1."""
    deg = g.degrees()
    if require_positive and deg.min() < 1:
        raise GraphError("zero-degree: graph has an isolated vertex")
    return DegreeSequence.from_degrees(deg, allow_zero=not require_positive)


def write_edge_list(g: Graph, path: "str | Path") -> None:
    """Text edge-list format: header "# n=<n> m=<m>", then "u v" per line, u < v."""
    edges = g.edges()
    with open(path, "w") as fh:
        fh.write(f"# n={g.n} m={g.m}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def read_edge_list(path: "str | Path") -> Graph:
    """Parse the text edge-list format written by write_edge_list."""
    n = None
    declared_m = None
    pairs: list[Tuple[int, int]] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("n="):
                    n = int(tok[2:])
                elif tok.startswith("m="):
                    declared_m = int(tok[2:])
            continue
        u, v = line.split()
        pairs.append((int(u), int(v)))
    if n is None:
        raise GraphError("edge-list file missing '# n=<n>' header")
    g = from_edge_list(n, pairs)
    if declared_m is not None and declared_m != g.m:
        raise GraphError(f"declared m={declared_m} but file contains {g.m} edges")
    return g
