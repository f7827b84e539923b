"""Vector helpers, seeded randomness and run statistics shared by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .objectives import ObjectiveSense

__all__ = [
    "as_vector",
    "euclidean_distance",
    "mean_vector",
    "make_rng",
    "run_seed",
    "SummaryStats",
    "summarize",
]


def as_vector(values, name: str = "vector") -> np.ndarray:
    """Return ``values`` as a finite, non-empty 1-D float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def euclidean_distance(a, b) -> float:
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: len(a)={a.size}, len(b)={b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def mean_vector(vectors: Iterable) -> np.ndarray:
    rows = [as_vector(v) for v in vectors]
    if not rows:
        raise ValueError("mean_vector of an empty collection is undefined")
    lengths = {r.size for r in rows}
    if len(lengths) != 1:
        raise ValueError(f"vectors have differing lengths: {sorted(lengths)}")
    return np.mean(np.stack(rows), axis=0)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream; equal seeds give equal draws on every platform."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def run_seed(base_seed: int, run_index: int) -> int:
    return int(base_seed) + int(run_index)


@dataclass(frozen=True)
class SummaryStats:
    best: float
    mean: float
    std: float
    n: int

    def to_dict(self) -> dict:
        return {"best": self.best, "mean": self.mean, "std": self.std, "n": self.n}


def summarize(samples: Sequence[float], sense: ObjectiveSense = ObjectiveSense.MINIMIZE) -> SummaryStats:
    """Best (in ``sense``), mean and sample standard deviation (divisor n-1)."""
    xs = [float(s) for s in samples]
    if not xs:
        raise ValueError("cannot summarize an empty sample")
    if not all(math.isfinite(x) for x in xs):
        raise ValueError("samples must be finite")
    # sorting makes the floating-point sums independent of input order
    ordered = sorted(xs)
    n = len(ordered)
    mean = math.fsum(ordered) / n
    mean = min(max(mean, ordered[0]), ordered[-1])
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in ordered) / (n - 1)) if n > 1 else 0.0
    best = ordered[0] if sense is ObjectiveSense.MINIMIZE else ordered[-1]
    return SummaryStats(best=best, mean=mean, std=std, n=n)
