"""Sphere, Rosenbrock and Rastrigin benchmarks with their default search boxes.

Every function accepts a single point of shape ``(n,)`` or a batch of points of
shape ``(m, n)``; batches return one value per row.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ObjectiveSense",
    "BenchmarkFunction",
    "BenchmarkSpec",
    "eval_sphere",
    "eval_rosenbrock",
    "eval_rastrigin",
    "evaluate",
    "TABLE_ITERATIONS",
]


class ObjectiveSense(str, enum.Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"

    def is_better(self, candidate: float, incumbent: float) -> bool:
        """Strict improvement; ties keep the incumbent."""
        if self is ObjectiveSense.MINIMIZE:
            return candidate < incumbent
        return candidate > incumbent

    def argbest(self, values) -> int:
        """Index of the best value, ties resolved to the lowest index."""
        values = np.asarray(values)
        return int(np.argmin(values) if self is ObjectiveSense.MINIMIZE else np.argmax(values))

    @property
    def worst(self) -> float:
        return np.inf if self is ObjectiveSense.MINIMIZE else -np.inf


def _points(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (1, 2) or x.shape[-1] == 0:
        raise ValueError(f"expected a point or batch of points, got shape {x.shape}")
    return x


def eval_sphere(x):
    x = _points(x)
    return np.sum(x * x, axis=-1)


def eval_rosenbrock(x):
    x = _points(x)
    if x.shape[-1] < 2:
        raise ValueError("Rosenbrock needs at least 2 dimensions")
    head, tail = x[..., :-1], x[..., 1:]
    return np.sum(100.0 * (head * head - tail) ** 2 + (head - 1.0) ** 2, axis=-1)


def eval_rastrigin(x):
    x = _points(x)
    n = x.shape[-1]
    return 10.0 * n + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=-1)


class BenchmarkFunction(str, enum.Enum):
    SPHERE = "sphere"
    ROSENBROCK = "rosenbrock"
    RASTRIGIN = "rastrigin"

    @property
    def fn(self) -> Callable:
        return _FUNCTIONS[self]


_FUNCTIONS = {
    BenchmarkFunction.SPHERE: eval_sphere,
    BenchmarkFunction.ROSENBROCK: eval_rosenbrock,
    BenchmarkFunction.RASTRIGIN: eval_rastrigin,
}

# (lower, upper, max velocity)
_DEFAULT_BOX = {
    BenchmarkFunction.SPHERE: (-100.0, 100.0, 100.0),
    BenchmarkFunction.ROSENBROCK: (-100.0, 100.0, 100.0),
    BenchmarkFunction.RASTRIGIN: (-10.0, 10.0, 10.0),
}

# Iteration counts used for the benchmark tables, keyed by dimension.
TABLE_ITERATIONS = {10: 3000, 20: 4000, 30: 5000}


@dataclass(frozen=True)
class BenchmarkSpec:
    function: BenchmarkFunction
    dimension: int
    lower_bound: float
    upper_bound: float
    max_velocity: float

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.function is BenchmarkFunction.ROSENBROCK and self.dimension < 2:
            raise ValueError("Rosenbrock needs dimension >= 2")
        if not self.lower_bound < self.upper_bound:
            raise ValueError("lower_bound must be below upper_bound")
        if not self.max_velocity > 0:
            raise ValueError("max_velocity must be positive")

    @classmethod
    def default(cls, function, dimension: int) -> "BenchmarkSpec":
        function = BenchmarkFunction(function)
        lo, hi, vmax = _DEFAULT_BOX[function]
        return cls(function, dimension, lo, hi, vmax)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.full(self.dimension, self.lower_bound),
            np.full(self.dimension, self.upper_bound),
        )


def evaluate(spec: BenchmarkSpec, x):
    x = _points(x)
    if x.shape[-1] != spec.dimension:
        raise ValueError(f"point has dimension {x.shape[-1]}, spec expects {spec.dimension}")
    return spec.function.fn(x)
