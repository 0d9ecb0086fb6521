"""Power-law degree sequences: construction, repair, validation, file I/O.

A degree sequence here is a list of positive integers with even sum whose
tail counts decay like C * j**(1 - tau) for a fixed exponent tau in (2, 3).
Two constructors are provided: a deterministic quantile construction and an
i.i.d. inverse-transform sampler. Both repair parity and check that the
result is realizable by a simple graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .rng import uniforms

TAU_MARGIN = 1e-6


class DegreeSequenceError(ValueError):
    pass


def _check_tau(tau: float) -> None:
    if not (2.0 + TAU_MARGIN <= tau <= 3.0 - TAU_MARGIN):
        raise DegreeSequenceError(f"tau-range: tau must be in (2, 3), got {tau}")


@dataclass(frozen=True)
class DegreeSequence:
    """Validated degree sequence, stored sorted descending.

    Attributes:
        degrees: numpy int64 array, sorted descending.
        n: number of vertices.
        total: sum of degrees (exact integer arithmetic).
        d_max: largest degree.
    """

    degrees: np.ndarray
    n: int
    total: int
    d_max: int

    @classmethod
    def from_degrees(
        cls,
        degrees: Iterable[int],
        *,
        allow_zero: bool = False,
        allow_odd: bool = False,
    ) -> "DegreeSequence":
        arr = np.asarray(list(degrees) if not isinstance(degrees, np.ndarray) else degrees,
                         dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise DegreeSequenceError("need at least one degree")
        if not allow_zero and arr.min() < 1:
            raise DegreeSequenceError("zero-degree: all degrees must be >= 1")
        if arr.min() < 0:
            raise DegreeSequenceError("negative degree")
        arr = np.sort(arr)[::-1].copy()
        total = int(arr.sum(dtype=np.int64))
        if not allow_odd and total % 2 != 0:
            raise DegreeSequenceError(f"parity: degree sum {total} is odd")
        return cls(degrees=arr, n=int(arr.size), total=total, d_max=int(arr[0]))

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.degrees.tolist())

    def digest(self) -> int:
        """Order-insensitive content hash, for paired-design assertions."""
        return hash(self.degrees.tobytes())

    def tail_counts(self) -> np.ndarray:
        """counts[j] = number of vertices with degree >= j, for j = 0..d_max."""
        hist = np.bincount(self.degrees, minlength=self.d_max + 1)
        return np.cumsum(hist[::-1])[::-1]


@dataclass(frozen=True)
class TailReport:
    """Measured power-law tail quality of a degree sequence.

    K_fitted is the smallest constant K making (1 - F_n(j)) <= K j**(1-tau)
    hold for every j >= 1; C_fitted is a least-squares fit of C on the window
    j <= ceil(sqrt(L_n)); max_rel_dev is the worst relative deviation from
    the fitted pure power law on that window.
    """

    K_fitted: float
    C_fitted: float
    max_rel_dev: float


def generate_quantile(n: int, tau: float, c_const: float = 1.0) -> DegreeSequence:
    """Deterministic power-law sequence: d_i = max(1, ceil((C*n/i)**(1/(tau-1)))).

    The rank-to-degree map is a quantile transform of the target tail
    C * j**(1-tau), so the constructed sequence meets the tail bound with a
    constant close to C. Parity is repaired afterwards and the result is
    checked to be graphical.
    """
    _check_tau(tau)
    if n < 2:
        raise DegreeSequenceError(f"n must be >= 2, got {n}")
    if c_const <= 0:
        raise DegreeSequenceError(f"c_const must be > 0, got {c_const}")
    ranks = np.arange(1, n + 1, dtype=np.float64)
    raw = np.ceil((c_const * n / ranks) ** (1.0 / (tau - 1.0)))
    degrees = np.maximum(raw, 1.0).astype(np.int64)
    ds = fix_parity(degrees)
    if not is_graphical(ds):
        raise DegreeSequenceError(
            f"not-graphical: quantile construction failed for n={n}, tau={tau}, C={c_const}"
        )
    return ds


def sample_iid(n: int, tau: float, c_const: float, seed: int) -> DegreeSequence:
    """I.i.d. power-law degrees via inverse transform on a SplitMix64 stream.

    Each degree is d = floor((u / C)**(-1/(tau-1))) clipped to >= 1, which
    realizes P(D >= j) = min(1, C * j**(1-tau)) for integer j >= 1: the event
    d >= j is exactly u <= C * j**(1-tau).
    """
    _check_tau(tau)
    if n < 2:
        raise DegreeSequenceError(f"n must be >= 2, got {n}")
    if c_const <= 0:
        raise DegreeSequenceError(f"c_const must be > 0, got {c_const}")
    u = uniforms(seed, n)
    # u is in [0, 1); shift away from 0 to keep the transform finite.
    u = np.maximum(u, 1e-300)
    degrees = np.floor((u / c_const) ** (-1.0 / (tau - 1.0)))
    degrees = np.maximum(degrees, 1.0)
    # Degrees above n-1 cannot be realized by a simple graph on n vertices.
    degrees = np.minimum(degrees, float(n - 1)).astype(np.int64)
    ds = fix_parity(degrees)
    if not is_graphical(ds):
        raise DegreeSequenceError(
            f"not-graphical: iid sample at n={n}, tau={tau}, C={c_const}, seed={seed}"
        )
    return ds


def fix_parity(ds: "DegreeSequence | Sequence[int] | np.ndarray") -> DegreeSequence:
    """Make the degree sum even by incrementing one minimum-degree vertex.

    If the total is already even this is the identity. Otherwise exactly one
    entry changes: the lowest-indexed vertex of minimum degree gains 1, which
    perturbs the tail function least.
    """
    arr = ds.degrees.copy() if isinstance(ds, DegreeSequence) else np.asarray(ds, dtype=np.int64).copy()
    if int(arr.sum(dtype=np.int64)) % 2 != 0:
        arr[int(np.argmin(arr))] += 1
    return DegreeSequence.from_degrees(arr)


def is_graphical(ds: "DegreeSequence | Sequence[int] | np.ndarray") -> bool:
    """Erdos-Gallai test: is the sequence realizable by a simple graph?"""
    arr = ds.degrees if isinstance(ds, DegreeSequence) else np.sort(np.asarray(ds, dtype=np.int64))[::-1]
    total = int(arr.sum(dtype=np.int64))
    if total % 2 != 0:
        raise DegreeSequenceError(f"parity: degree sum {total} is odd")
    return _erdos_gallai(arr)


def _erdos_gallai(sorted_desc: np.ndarray) -> bool:
    n = sorted_desc.size
    if n == 0:
        return True
    if sorted_desc[0] >= n:
        return False
    if sorted_desc[-1] < 0:
        return False
    prefix = np.cumsum(sorted_desc, dtype=np.int64)
    # m(k) = number of entries with degree >= k, used for the min(d_i, k) split
    counts = np.bincount(sorted_desc, minlength=int(sorted_desc[0]) + 2)
    ge = np.cumsum(counts[::-1])[::-1]  # ge[j] = #{i: d_i >= j}
    suffix = np.cumsum((sorted_desc * 1)[::-1], dtype=np.int64)[::-1]
    for k in range(1, n + 1):
        lhs = int(prefix[k - 1])
        # sum over i > k of min(d_i, k): entries beyond k with degree >= k give k,
        # smaller ones give their degree
        big = int(ge[k]) if k < ge.size else 0
        big_beyond = max(0, big - k)
        # sum of degrees beyond position k that are < k
        idx = k + big_beyond
        small_sum = int(suffix[idx]) if idx < n else 0
        rhs = k * (k - 1) + big_beyond * k + small_sum
        if lhs > rhs:
            return False
    return True


def verify_tail_bound(ds: DegreeSequence, tau: float) -> TailReport:
    """Measure the sequence's power-law tail against exponent tau.

    K_fitted maximizes (1 - F_n(j)) * j**(tau-1) over j in [1, d_max].
    C_fitted and max_rel_dev are computed on the window j in [1, ceil(sqrt(L_n))]
    by least squares on the same quantity.
    """
    _check_tau(tau)
    counts = ds.tail_counts()  # counts[j] = #{d_i >= j}
    j = np.arange(1, ds.d_max + 1, dtype=np.float64)
    # 1 - F_n(j) = #{d_i > j}/n = counts[j+1]/n for each j >= 1
    over = np.empty(ds.d_max, dtype=np.float64)
    over[: ds.d_max - 1] = counts[2:].astype(np.float64) / ds.n
    over[ds.d_max - 1] = 0.0
    ratio = over * j ** (tau - 1.0)
    k_fitted = float(ratio.max()) if ratio.size else 0.0

    window = int(math.ceil(math.sqrt(ds.total)))
    window = min(window, ds.d_max)
    w_ratio = ratio[:window]
    positive = w_ratio[w_ratio > 0]
    if positive.size == 0:
        return TailReport(K_fitted=k_fitted, C_fitted=0.0, max_rel_dev=0.0)
    c_fitted = float(positive.mean())
    max_rel_dev = float(np.abs(positive / c_fitted - 1.0).max())
    return TailReport(K_fitted=k_fitted, C_fitted=c_fitted, max_rel_dev=max_rel_dev)


def save_degree_file(ds: DegreeSequence, path: "str | Path") -> None:
    """Write the plain-text degree format: one integer per line, '#' comments."""
    path = Path(path)
    lines = ["# degree sequence", f"n={ds.n}"]
    lines.extend(str(int(d)) for d in ds.degrees)
    path.write_text("\n".join(lines) + "\n")


def load_degree_file(path: "str | Path") -> DegreeSequence:
    """Read the plain-text degree format.

    Lines starting with '#' are comments; an optional first data line
    "n=<count>" is validated against the number of entries.
    """
    path = Path(path)
    declared_n = None
    degrees: list[int] = []
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n=") and declared_n is None and not degrees:
            declared_n = int(line[2:])
            continue
        degrees.append(int(line))
    if declared_n is not None and declared_n != len(degrees):
        raise DegreeSequenceError(
            f"declared n={declared_n} but file contains {len(degrees)} degrees"
        )
    return DegreeSequence.from_degrees(degrees)


def parse_degrees_inline(text: str) -> DegreeSequence:
    """Parse an inline comma-separated degree list such as "1,1,1,1"."""
    return DegreeSequence.from_degrees(int(tok) for tok in text.split(",") if tok.strip())
