"""Random graph samplers for a fixed degree sequence.

Four models:
  * configuration model: uniform pairing of half-edge stubs (multigraph);
  * erased configuration model: configuration model with loops removed and
    multi-edges collapsed;
  * generalized random graph: independent pairs with probability
    w_i w_j / (W + w_i w_j), sampled sparsely by geometric skipping;
  * uniform simple graph: double-edge-switch Markov chain started from a
    Havel-Hakimi realization, with rejected moves counted as lazy steps.

All kernels draw from the package SplitMix64 stream, so every sampler is
deterministic in (input, seed) and reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np
from numba import njit

from .degree_sequences import DegreeSequence, is_graphical
from .graph_core import Graph, from_sorted_pairs
from .rng import next_below, next_double, next_u64, splitmix64

_EMPTY = np.int64(-1)
_TOMB = np.int64(-2)


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    """Half-edge pairing output: loops and parallel edges allowed.

    Edges are stored with u <= v; per-vertex degrees count loops twice, so
    the degree total always equals the stub count of the input sequence.
    """

    n: int
    edges: np.ndarray  # (m, 2) with u <= v

    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.edges[:, 0], minlength=self.n)
        deg += np.bincount(self.edges[:, 1], minlength=self.n)
        return deg.astype(np.int64)

    def is_simple(self) -> bool:
        e = self.edges
        if np.any(e[:, 0] == e[:, 1]):
            return False
        key = e[:, 0] * np.int64(self.n) + e[:, 1]
        return np.unique(key).size == key.size


# ---------------------------------------------------------------------------
# configuration model / erased configuration model
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _shuffle(arr, state):
    for i in range(arr.size - 1, 0, -1):
        j, state = next_below(state, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp
    return state


def configuration_model(ds: DegreeSequence, seed: int) -> Multigraph:
    """Uniform random pairing of the L_n half-edge stubs."""
    stubs = np.repeat(np.arange(ds.n, dtype=np.int64), ds.degrees)
    _shuffle(stubs, np.uint64(seed))
    u = stubs[0::2]
    v = stubs[1::2]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    return Multigraph(n=ds.n, edges=np.column_stack([lo, hi]))


def erase(mg: Multigraph) -> Graph:
    """Remove loops and collapse parallel edges to single edges."""
    e = mg.edges
    keep = e[:, 0] != e[:, 1]
    e = e[keep]
    key = e[:, 0] * np.int64(mg.n) + e[:, 1]
    uniq = np.unique(key)
    lo = uniq // np.int64(mg.n)
    hi = uniq % np.int64(mg.n)
    return from_sorted_pairs(mg.n, lo, hi)


def erased_configuration_model(ds: DegreeSequence, seed: int) -> Graph:
    """Configuration model followed by erasure."""
    return erase(configuration_model(ds, seed))


# ---------------------------------------------------------------------------
# generalized random graph
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _grg_kernel(weights, total_weight, state):
    """Skip-sampling over pairs sorted by descending weight.

    For fixed i the connection probability is decreasing in j, so a geometric
    jump at the current upper bound followed by acceptance q/p reproduces the
    exact independent-pair law.
    """
    n = weights.size
    cap = 16
    src = np.empty(cap, dtype=np.int64)
    dst = np.empty(cap, dtype=np.int64)
    cnt = 0
    for i in range(n - 1):
        wi = weights[i]
        j = i + 1
        p = wi * weights[j] / (total_weight + wi * weights[j])
        while j < n and p > 0.0:
            r, state = next_double(state)
            if r <= 0.0:
                break
            j += int(math.floor(math.log(r) / math.log1p(-p)))
            if j >= n:
                break
            q = wi * weights[j] / (total_weight + wi * weights[j])
            r2, state = next_double(state)
            if r2 * p < q:
                if cnt == cap:
                    cap *= 2
                    new_src = np.empty(cap, dtype=np.int64)
                    new_dst = np.empty(cap, dtype=np.int64)
                    new_src[:cnt] = src
                    new_dst[:cnt] = dst
                    src = new_src
                    dst = new_dst
                src[cnt] = i
                dst[cnt] = j
                cnt += 1
            p = q
            j += 1
    return src[:cnt], dst[:cnt], state


def generalized_random_graph(weights: "Sequence[float] | np.ndarray", seed: int) -> Graph:
    """Independent-pair graph with p_ij = w_i w_j / (W + w_i w_j)."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size < 2:
        raise SamplerError("bad-weight: need at least two weights")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise SamplerError("bad-weight: weights must be positive and finite")
    order = np.argsort(-w, kind="stable")
    sorted_w = w[order]
    src, dst, _ = _grg_kernel(sorted_w, float(w.sum()), np.uint64(seed))
    u = order[src]
    v = order[dst]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    idx = np.argsort(lo * np.int64(w.size) + hi)
    return from_sorted_pairs(w.size, lo[idx], hi[idx])


def grg_expected_degrees(weights: "Sequence[float] | np.ndarray") -> np.ndarray:
    """Exact E[deg_i] = sum_{j != i} p_ij by direct summation (test oracle)."""
    w = np.asarray(weights, dtype=np.float64)
    total = w.sum()
    prod = np.outer(w, w)
    p = prod / (total + prod)
    np.fill_diagonal(p, 0.0)
    return p.sum(axis=1)


# ---------------------------------------------------------------------------
# Havel-Hakimi realization
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _hh_decrement(v, residual, vert, pos, block_start):
    """Drop residual[v] by one, keeping vert sorted descending via block swap."""
    rv = residual[v]
    last = block_start[rv - 1] - 1  # last index of the residual-rv block
    u_at_last = vert[last]
    pv = pos[v]
    vert[pv] = u_at_last
    pos[u_at_last] = pv
    vert[last] = v
    pos[v] = last
    block_start[rv - 1] = last
    residual[v] = rv - 1


@njit(cache=True, nogil=True)
def _havel_hakimi(deg_sorted):
    """Deterministic realization of a graphical sequence sorted descending.

    Vertices are kept bucketed by residual degree so each unit decrement is
    an O(1) block swap; total work is O(L_n + n + d_max). Returns edge
    endpoint arrays and a success flag.
    """
    n = deg_sorted.size
    residual = deg_sorted.copy()
    vert = np.arange(n, dtype=np.int64)   # vertices ordered by residual desc
    pos = np.arange(n, dtype=np.int64)    # pos[v] = index of v in vert
    d_max = residual[0]
    # block_start[r] = #{v: residual[v] > r} = first index of the residual-r
    # block (blocks of absent values are empty)
    block_start = np.zeros(d_max + 2, dtype=np.int64)
    idx = 0
    for r in range(d_max, -1, -1):
        while idx < n and deg_sorted[idx] > r:
            idx += 1
        block_start[r] = idx
    m = 0
    for v in range(n):
        m += residual[v]
    m //= 2
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    nbr = np.empty(max(d_max, 1), dtype=np.int64)
    edge_cnt = 0
    while residual[vert[0]] > 0:
        v = vert[0]
        r = residual[v]
        if r > n - 1:
            return eu[:0], ev[:0], False
        for t in range(r):
            nbr[t] = vert[1 + t]
        # zero out v first so the neighbor decrements see consistent blocks
        for _ in range(r):
            _hh_decrement(v, residual, vert, pos, block_start)
        for t in range(r):
            u = nbr[t]
            if residual[u] < 1:
                return eu[:0], ev[:0], False
            _hh_decrement(u, residual, vert, pos, block_start)
            eu[edge_cnt] = v if v < u else u
            ev[edge_cnt] = u if v < u else v
            edge_cnt += 1
    return eu[:edge_cnt], ev[:edge_cnt], True


def havel_hakimi_realization(ds: DegreeSequence) -> Graph:
    """Deterministic simple graph with exactly the given degree sequence."""
    if not is_graphical(ds):
        raise SamplerError("not-graphical: no simple graph realizes this sequence")
    eu, ev, ok = _havel_hakimi(ds.degrees)
    if not ok:
        raise SamplerError("not-graphical: realization failed unexpectedly")
    key = eu * np.int64(ds.n) + ev
    idx = np.argsort(key)
    return from_sorted_pairs(ds.n, eu[idx], ev[idx])


# ---------------------------------------------------------------------------
# edge-switch Markov chain
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _table_insert(table, key):
    mask = np.int64(table.size - 1)
    h = np.int64(splitmix64(np.uint64(key)) & np.uint64(mask))
    first_tomb = np.int64(-1)
    while True:
        cur = table[h]
        if cur == key:
            return False
        if cur == _EMPTY:
            if first_tomb >= 0:
                table[first_tomb] = key
            else:
                table[h] = key
            return True
        if cur == _TOMB and first_tomb < 0:
            first_tomb = h
        h = (h + 1) & mask


@njit(cache=True, nogil=True)
def _table_contains(table, key):
    mask = np.int64(table.size - 1)
    h = np.int64(splitmix64(np.uint64(key)) & np.uint64(mask))
    while True:
        cur = table[h]
        if cur == key:
            return True
        if cur == _EMPTY:
            return False
        h = (h + 1) & mask


@njit(cache=True, nogil=True)
def _table_remove(table, key):
    mask = np.int64(table.size - 1)
    h = np.int64(splitmix64(np.uint64(key)) & np.uint64(mask))
    while True:
        cur = table[h]
        if cur == key:
            table[h] = _TOMB
            return True
        if cur == _EMPTY:
            return False
        h = (h + 1) & mask


@njit(cache=True, nogil=True)
def _table_rebuild(table, eu, ev, n):
    table[:] = _EMPTY
    for i in range(eu.size):
        _table_insert(table, eu[i] * n + ev[i])


@njit(cache=True, nogil=True)
def _switch_kernel(eu, ev, table, n, n_switches, state, counters):
    """Run double-edge switches in place.

    counters: [attempted, accepted, rejected_overlap, rejected_exists].
    Rejected proposals are lazy steps (chain stays put), which keeps the
    transition kernel symmetric and the stationary law uniform.
    """
    m = eu.size
    tombs = 0
    rebuild_at = table.size // 4
    for _ in range(n_switches):
        counters[0] += 1
        i, state = next_below(state, m)
        j, state = next_below(state, m - 1)
        if j >= i:
            j += 1
        a = eu[i]
        b = ev[i]
        c = eu[j]
        d = ev[j]
        bit, state = next_below(state, 2)
        if bit == 1:
            tmp = c
            c = d
            d = tmp
        # proposed rewiring: {a,c} and {b,d}
        if a == c or a == d or b == c or b == d:
            counters[2] += 1
            continue
        p1 = a * n + c if a < c else c * n + a
        p2 = b * n + d if b < d else d * n + b
        if _table_contains(table, p1) or _table_contains(table, p2):
            counters[3] += 1
            continue
        counters[1] += 1
        k1 = eu[i] * n + ev[i]
        k2 = eu[j] * n + ev[j]
        _table_remove(table, k1)
        _table_remove(table, k2)
        tombs += 2
        _table_insert(table, p1)
        _table_insert(table, p2)
        eu[i] = a if a < c else c
        ev[i] = c if a < c else a
        eu[j] = b if b < d else d
        ev[j] = d if b < d else b
        if tombs >= rebuild_at:
            _table_rebuild(table, eu, ev, n)
            tombs = 0
    return state


@dataclass
class SwitchChainState:
    """Mutable edge-switch chain over simple graphs with fixed degrees."""

    n: int
    eu: np.ndarray
    ev: np.ndarray
    table: np.ndarray
    state: np.uint64
    attempted: int = 0
    accepted: int = 0
    rejected_overlap: int = 0
    rejected_exists: int = 0

    @classmethod
    def from_graph(cls, g: Graph, seed: int) -> "SwitchChainState":
        edges = g.edges()
        m = edges.shape[0]
        cap = 1 << max(4, int(math.ceil(math.log2(max(4 * m, 4)))))
        table = np.full(cap, _EMPTY, dtype=np.int64)
        eu = edges[:, 0].copy()
        ev = edges[:, 1].copy()
        _table_rebuild(table, eu, ev, np.int64(g.n))
        return cls(n=g.n, eu=eu, ev=ev, table=table, state=np.uint64(seed))

    def step(self, n_switches: int) -> None:
        if n_switches <= 0:
            return
        if self.eu.size < 2:
            # fewer than two edges: every proposal is ill-defined
            self.attempted += n_switches
            self.rejected_overlap += n_switches
            return
        counters = np.zeros(4, dtype=np.int64)
        self.state = np.uint64(_switch_kernel(
            self.eu, self.ev, self.table, np.int64(self.n),
            n_switches, np.uint64(self.state), counters,
        ))
        self.attempted += int(counters[0])
        self.accepted += int(counters[1])
        self.rejected_overlap += int(counters[2])
        self.rejected_exists += int(counters[3])

    def graph(self) -> Graph:
        idx = np.argsort(self.eu * np.int64(self.n) + self.ev)
        return from_sorted_pairs(self.n, self.eu[idx], self.ev[idx])

    def stats(self) -> Dict[str, int]:
        return {
            "attempted": self.attempted,
            "accepted": self.accepted,
            "rejected_overlap": self.rejected_overlap,
            "rejected_exists": self.rejected_exists,
        }


def default_burn_in(ds: DegreeSequence, kappa: float = 10.0) -> int:
    """Heuristic switch budget: ceil(kappa * m * ln(max(m, 2)))."""
    m = ds.total // 2
    if kappa <= 0:
        return 0
    return int(math.ceil(kappa * m * math.log(max(m, 2))))


def uniform_sample_mcmc(
    ds: DegreeSequence, n_switches: int, seed: int
) -> Tuple[Graph, SwitchChainState]:
    """Approximate uniform simple graph with the given degrees.

    Starts from the Havel-Hakimi realization and runs n_switches double-edge
    switches; returns the final graph along with the chain state (whose
    counters report accepted and rejected moves by reason).
    """
    if n_switches < 0:
        raise SamplerError("n_switches must be >= 0")
    start = havel_hakimi_realization(ds)
    chain = SwitchChainState.from_graph(start, seed)
    chain.step(n_switches)
    return chain.graph(), chain
