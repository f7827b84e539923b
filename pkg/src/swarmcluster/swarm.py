"""Particle swarm engine: gbest, lbest ring and lbest von Neumann neighbourhoods.

The main loop is synchronous. Each iteration computes every particle's social
attractor from the personal bests as they stood at the start of the iteration,
moves the whole swarm, evaluates it, then refreshes the personal bests.

Random draws per iteration come from a single ``rng.random((S, 2, D))`` call,
which is the same stream as drawing, particle by particle in index order, the
``r1`` vector followed by the ``r2`` vector.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .numerics import make_rng
from .objectives import BenchmarkSpec, ObjectiveSense

__all__ = [
    "TopologyKind",
    "Topology",
    "Particle",
    "Swarm",
    "SwarmConfig",
    "OptimizationResult",
    "inertia_weight",
    "neighborhood_best",
    "update_velocity",
    "update_position",
    "update_personal_best",
    "optimize",
    "optimize_benchmark",
]


class TopologyKind(str, enum.Enum):
    GBEST = "gbest"
    RING = "ring"
    VON_NEUMANN = "vonneumann"


def _square_grid(size: int) -> tuple[int, int]:
    rows = int(math.isqrt(size))
    while size % rows:
        rows -= 1
    return rows, size // rows


@dataclass(frozen=True)
class Topology:
    kind: TopologyKind = TopologyKind.GBEST
    rows: Optional[int] = None
    cols: Optional[int] = None

    @classmethod
    def gbest(cls) -> "Topology":
        return cls(TopologyKind.GBEST)

    @classmethod
    def ring(cls) -> "Topology":
        return cls(TopologyKind.RING)

    @classmethod
    def von_neumann(cls, rows: Optional[int] = None, cols: Optional[int] = None) -> "Topology":
        return cls(TopologyKind.VON_NEUMANN, rows, cols)

    @classmethod
    def parse(cls, name: str) -> "Topology":
        aliases = {"gbest": "gbest", "ring": "ring", "lbest-ring": "ring",
                   "vonneumann": "vonneumann", "vn": "vonneumann", "lbest-vn": "vonneumann"}
        try:
            return cls(TopologyKind(aliases[name.lower()]))
        except KeyError:
            raise ValueError(f"unknown topology {name!r}") from None

    def grid_shape(self, size: int) -> tuple[int, int]:
        if self.rows is None and self.cols is None:
            return _square_grid(size)
        rows = self.rows if self.rows is not None else size // self.cols
        cols = self.cols if self.cols is not None else size // self.rows
        if rows < 1 or cols < 1 or rows * cols != size:
            raise ValueError(f"von Neumann grid {rows}x{cols} does not hold {size} particles")
        return rows, cols

    def neighbors(self, i: int, size: int) -> list[int]:
        """Sorted neighbourhood index set of particle ``i`` (always contains ``i``)."""
        if not 0 <= i < size:
            raise IndexError(f"particle index {i} out of range for swarm of {size}")
        if self.kind is TopologyKind.GBEST:
            return list(range(size))
        if self.kind is TopologyKind.RING:
            return sorted({(i - 1) % size, i, (i + 1) % size})
        rows, cols = self.grid_shape(size)
        r, c = divmod(i, cols)
        cells = {(r, c), ((r - 1) % rows, c), ((r + 1) % rows, c), (r, (c - 1) % cols), (r, (c + 1) % cols)}
        return sorted(rr * cols + cc for rr, cc in cells)

    def neighbor_table(self, size: int) -> np.ndarray:
        """``(size, k)`` index table; short rows are padded by repeating their last entry."""
        rows = [self.neighbors(i, size) for i in range(size)]
        width = max(len(r) for r in rows)
        return np.array([r + [r[-1]] * (width - len(r)) for r in rows], dtype=np.intp)


@dataclass(frozen=True, eq=False)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float


@dataclass(eq=False)
class Swarm:
    """Whole-swarm state as ``(S, D)`` arrays."""

    positions: np.ndarray
    velocities: np.ndarray
    pbest_positions: np.ndarray
    pbest_fitness: np.ndarray

    @classmethod
    def from_particles(cls, particles: Sequence[Particle]) -> "Swarm":
        return cls(
            np.array([p.position for p in particles], dtype=np.float64),
            np.array([p.velocity for p in particles], dtype=np.float64),
            np.array([p.pbest_position for p in particles], dtype=np.float64),
            np.array([p.pbest_fitness for p in particles], dtype=np.float64),
        )

    def __len__(self) -> int:
        return self.positions.shape[0]

    def particle(self, i: int) -> Particle:
        return Particle(self.positions[i].copy(), self.velocities[i].copy(),
                        self.pbest_positions[i].copy(), float(self.pbest_fitness[i]))


VelocityLimit = Union[float, Sequence[float]]


@dataclass(frozen=True)
class SwarmConfig:
    swarm_size: int
    iterations: int
    max_velocity: VelocityLimit
    sense: ObjectiveSense = ObjectiveSense.MINIMIZE
    topology: Topology = field(default_factory=Topology.gbest)
    w_start: float = 0.9
    w_end: float = 0.4
    c1: float = 1.042
    c2: float = 1.042
    # Keep positions inside the search box; the velocity clamp alone does not.
    confine_to_box: bool = False

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be at least 2")
        # 0 is accepted so a seeded hybrid run can be asked for no swarm steps
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if not self.w_start >= self.w_end >= 0:
            raise ValueError("inertia weights must satisfy w_start >= w_end >= 0")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("acceleration constants must be non-negative")
        if np.any(np.asarray(self.max_velocity) <= 0):
            raise ValueError("max_velocity must be positive")
        object.__setattr__(self, "sense", ObjectiveSense(self.sense))
        if self.topology.kind is TopologyKind.VON_NEUMANN:
            self.topology.grid_shape(self.swarm_size)

    def with_(self, **changes) -> "SwarmConfig":
        return replace(self, **changes)


@dataclass(eq=False)
class OptimizationResult:
    best_position: np.ndarray
    best_fitness: float
    fitness_trace: list[float]
    evaluations_used: int
    best_index: int = 0


def inertia_weight(t: int, t_max: int, w_start: float = 0.9, w_end: float = 0.4) -> float:
    """Linearly decreasing inertia from ``w_start`` at t=0 to ``w_end`` at t=t_max-1."""
    if t_max < 1 or not 0 <= t < t_max:
        raise ValueError(f"iteration {t} outside [0, {t_max})")
    if t_max == 1:
        return w_start
    return w_start + (w_end - w_start) * t / (t_max - 1)


def neighborhood_best(swarm: Union[Swarm, Sequence[Particle]], topology: Topology, i: int,
                      sense: ObjectiveSense) -> np.ndarray:
    """Personal-best position of the best particle in ``i``'s neighbourhood (lowest index on ties)."""
    if not isinstance(swarm, Swarm):
        swarm = Swarm.from_particles(swarm)
    idx = topology.neighbors(i, len(swarm))
    fit = swarm.pbest_fitness[idx]
    return swarm.pbest_positions[idx[ObjectiveSense(sense).argbest(fit)]]


def _social_indices(table: np.ndarray, pbest_fitness: np.ndarray, sense: ObjectiveSense) -> np.ndarray:
    fit = pbest_fitness[table]
    pick = np.argmin(fit, axis=1) if sense is ObjectiveSense.MINIMIZE else np.argmax(fit, axis=1)
    return table[np.arange(table.shape[0]), pick]


def update_velocity(position, velocity, pbest_position, social_best, w: float, c1: float, c2: float,
                    vmax: VelocityLimit, rng: np.random.Generator) -> np.ndarray:
    """Inertia + cognitive + social velocity, clamped to ``[-vmax, vmax]``.

    Works on one particle (``(D,)`` arrays) or a swarm (``(S, D)``); ``r1`` and
    ``r2`` are drawn per dimension.
    """
    x = np.asarray(position, dtype=np.float64)
    shapes = {x.shape, np.shape(velocity), np.shape(pbest_position), np.shape(social_best)}
    if len(shapes) != 1:
        raise ValueError(f"dimension mismatch among particle vectors: {sorted(shapes)}")
    r = rng.random(x.shape[:-1] + (2, x.shape[-1]))
    r1, r2 = r[..., 0, :], r[..., 1, :]
    v = w * np.asarray(velocity) + c1 * r1 * (pbest_position - x) + c2 * r2 * (social_best - x)
    vmax = np.asarray(vmax, dtype=np.float64)
    return np.clip(v, -vmax, vmax)


def update_position(position, v_new) -> np.ndarray:
    x = np.asarray(position, dtype=np.float64)
    v = np.asarray(v_new, dtype=np.float64)
    if x.shape != v.shape:
        raise ValueError(f"dimension mismatch: position {x.shape}, velocity {v.shape}")
    return x + v


def update_personal_best(p: Particle, new_fitness: float, sense: ObjectiveSense) -> Particle:
    if ObjectiveSense(sense).is_better(new_fitness, p.pbest_fitness):
        return replace(p, pbest_position=np.array(p.position, dtype=np.float64), pbest_fitness=float(new_fitness))
    return p


def _confine(swarm: Swarm, lower, upper, rng: np.random.Generator) -> None:
    """Clamp escaped coordinates onto the wall and send them back with a random fraction of their speed.

    One uniform draw per escaped coordinate, in row-major order, taken after the
    iteration's r1/r2 draws.
    """
    outside = (swarm.positions < lower) | (swarm.positions > upper)
    if not outside.any():
        return
    np.clip(swarm.positions, lower, upper, out=swarm.positions)
    swarm.velocities[outside] *= -rng.random(int(outside.sum()))


Objective = Callable[[np.ndarray], float]
Initializer = Callable[[np.random.Generator, int], np.ndarray]


def optimize(objective: Objective, lower, upper, config: SwarmConfig, seed: int, *,
             vectorized: bool = False, initializer: Optional[Initializer] = None,
             rng: Optional[np.random.Generator] = None,
             callback: Optional[Callable[[int, Swarm], None]] = None) -> OptimizationResult:
    """Run the swarm for ``config.iterations`` steps and return the best personal best.

    ``objective`` maps one position to a float, or, with ``vectorized=True``, an
    ``(S, D)`` batch to ``S`` floats. ``initializer(rng, S)`` overrides the
    default uniform start inside ``[lower, upper)``. The box bounds only the
    start unless ``config.confine_to_box`` is set. ``callback(t, swarm)`` sees
    the state after every iteration.
    """
    if config.iterations < 1:
        raise ValueError("optimize needs at least one iteration")
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    if lower.ndim != 1 or lower.shape != upper.shape or not np.all(np.isfinite(lower) & np.isfinite(upper)):
        raise ValueError("search box must be two finite 1-D bound vectors of equal length")
    if np.any(lower >= upper):
        raise ValueError("every lower bound must be below its upper bound")
    rng = rng if rng is not None else make_rng(seed)
    sense = config.sense
    S, D = config.swarm_size, lower.size

    def evaluate(points: np.ndarray) -> np.ndarray:
        if vectorized:
            return np.asarray(objective(points), dtype=np.float64).reshape(S)
        return np.array([objective(p) for p in points], dtype=np.float64)

    if initializer is None:
        positions = rng.uniform(lower, upper, size=(S, D))
    else:
        positions = np.array(initializer(rng, S), dtype=np.float64)
        if positions.shape != (S, D):
            raise ValueError(f"initializer returned shape {positions.shape}, expected {(S, D)}")
    fitness = evaluate(positions)
    swarm = Swarm(positions, np.zeros((S, D)), positions.copy(), fitness.copy())
    evaluations = S

    table = config.topology.neighbor_table(S)
    vmax = np.broadcast_to(np.asarray(config.max_velocity, dtype=np.float64), (D,))
    trace: list[float] = []
    for t in range(config.iterations):
        w = inertia_weight(t, config.iterations, config.w_start, config.w_end)
        social = swarm.pbest_positions[_social_indices(table, swarm.pbest_fitness, sense)]
        swarm.velocities = update_velocity(swarm.positions, swarm.velocities, swarm.pbest_positions,
                                           social, w, config.c1, config.c2, vmax, rng)
        swarm.positions = update_position(swarm.positions, swarm.velocities)
        if config.confine_to_box:
            _confine(swarm, lower, upper, rng)
        fitness = evaluate(swarm.positions)
        evaluations += S
        improved = fitness < swarm.pbest_fitness if sense is ObjectiveSense.MINIMIZE else fitness > swarm.pbest_fitness
        swarm.pbest_positions[improved] = swarm.positions[improved]
        swarm.pbest_fitness[improved] = fitness[improved]
        trace.append(float(swarm.pbest_fitness[sense.argbest(swarm.pbest_fitness)]))
        if callback is not None:
            callback(t, swarm)

    best = sense.argbest(swarm.pbest_fitness)
    return OptimizationResult(swarm.pbest_positions[best].copy(), float(swarm.pbest_fitness[best]),
                              trace, evaluations, best)


def optimize_benchmark(spec: BenchmarkSpec, config: SwarmConfig, seed: int, **kwargs) -> OptimizationResult:
    lower, upper = spec.bounds()
    fn = spec.function.fn
    return optimize(fn, lower, upper, config, seed, vectorized=True, **kwargs)
