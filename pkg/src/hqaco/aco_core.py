"""Classical ant-colony bookkeeping: transition probabilities and pheromone updates.

Edge *weight* is the inverse of edge cost.  From node ``a`` the next node
``b`` among the unvisited neighbours is chosen with probability proportional
to ``weight(a, b) ** alpha * pheromone(a, b) ** beta``.  After every ant all
pheromones evaporate by a factor ``1 - rho``; a successful ant then deposits
``1 / tour_cost`` on each edge of its cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graph_io import ProblemInstance

__all__ = [
    "Hyperparameters",
    "PheromoneState",
    "TourStatus",
    "TourState",
    "TransitionDistribution",
    "transition_distribution",
    "evaporate",
    "deposit",
    "tour_cost",
    "cycle_edges",
    "MIN_COST",
]

MIN_COST = 1e-9
_LOG_RANGE = (1e-300, 1e300)


@dataclass(frozen=True)
class Hyperparameters:
    alpha: float = 0.4
    beta: float = 0.6
    rho: float = 0.01
    initial_pheromone: float = 0.5
    ants: int = 1000
    shots: int = 10

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if not 0 <= self.rho < 1:
            raise ValueError(f"rho must be in [0, 1), got {self.rho}")
        if self.initial_pheromone <= 0:
            raise ValueError("initial_pheromone must be positive")
        if self.ants < 1 or self.shots < 1:
            raise ValueError("ants and shots must be >= 1")


@dataclass(frozen=True)
class PheromoneState:
    eta: np.ndarray

    @classmethod
    def initial(cls, instance: ProblemInstance, value: float) -> "PheromoneState":
        if value <= 0:
            raise ValueError("initial pheromone must be positive")
        return cls(np.full((instance.dimension, instance.dimension), float(value)))

    def __getitem__(self, edge) -> float:
        return float(self.eta[edge])


def evaporate(pheromone: PheromoneState, rho: float) -> PheromoneState:
    """Multiply every edge's pheromone by ``1 - rho``."""
    if not 0 <= rho < 1:
        raise ValueError(f"rho must be in [0, 1), got {rho}")
    return PheromoneState(pheromone.eta * (1.0 - rho))


def cycle_edges(cycle) -> list[tuple[int, int]]:
    """Edges of a cycle given either open ``[a, b, c]`` or closed ``[a, b, c, a]``."""
    nodes = list(cycle)
    if len(nodes) > 1 and nodes[0] == nodes[-1]:
        nodes = nodes[:-1]
    if len(nodes) < 2:
        return []
    return [(nodes[k], nodes[(k + 1) % len(nodes)]) for k in range(len(nodes))]


def deposit(pheromone: PheromoneState, path, total_cost: float) -> PheromoneState:
    """Add ``1 / total_cost`` to every edge of the cycle ``path`` (closing edge included)."""
    if total_cost <= 0:
        raise ValueError(f"total_cost must be positive, got {total_cost}")
    eta = pheromone.eta.copy()
    amount = 1.0 / total_cost
    for a, b in cycle_edges(path):
        eta[a, b] += amount
        eta[b, a] = eta[a, b]
    return PheromoneState(eta)


def tour_cost(instance: ProblemInstance, cycle) -> float:
    """Sum of edge costs around ``cycle`` including the edge back to the start."""
    total = 0.0
    for a, b in cycle_edges(cycle):
        if not instance.has_edge(a, b):
            raise ValueError(f"nodes {a} and {b} are not adjacent")
        total += instance.costs[a, b]
    return float(total)


class TourStatus(str, Enum):
    IN_PROGRESS = "in-progress"
    SUCCESS = "success"
    STUCK = "stuck"


@dataclass
class TourState:
    path: list[int]
    visited: set[int] = field(default_factory=set)
    accumulated_cost: float = 0.0
    status: TourStatus = TourStatus.IN_PROGRESS

    @classmethod
    def start(cls, node: int) -> "TourState":
        return cls([node], {node})

    @property
    def current(self) -> int:
        return self.path[-1]

    def advance(self, instance: ProblemInstance, node: int) -> None:
        if node in self.visited:
            raise ValueError(f"node {node} already visited")
        if not instance.has_edge(self.current, node):
            raise ValueError(f"no edge {self.current} -> {node}")
        self.accumulated_cost += float(instance.costs[self.current, node])
        self.path.append(node)
        self.visited.add(node)


@dataclass(frozen=True)
class TransitionDistribution:
    candidates: tuple[int, ...]
    probabilities: np.ndarray

    @property
    def stuck(self) -> bool:
        return not self.candidates

    def __len__(self) -> int:
        return len(self.candidates)


def _weights(costs: np.ndarray, eta: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    w = 1.0 / np.maximum(costs, MIN_COST)
    lo, hi = _LOG_RANGE
    if np.all((w >= lo) & (w <= hi) & (eta >= lo) & (eta <= hi)):
        terms = w ** alpha * eta ** beta
        if np.all(np.isfinite(terms)) and terms.max() > 0:
            return terms / terms.sum()
    logs = alpha * np.log(w) + beta * np.log(eta)
    terms = np.exp(logs - logs.max())
    return terms / terms.sum()


def transition_distribution(
    instance: ProblemInstance,
    pheromone: PheromoneState,
    params: Hyperparameters,
    current: int,
    visited,
) -> TransitionDistribution:
    """Next-node distribution over the unvisited neighbours of ``current``.

    Returns an empty distribution (``.stuck`` is True) when every neighbour
    has been visited.
    """
    cand = tuple(b for b in instance.adjacency[current] if b not in visited)
    if not cand:
        return TransitionDistribution((), np.empty(0))
    idx = np.fromiter(cand, dtype=int, count=len(cand))
    probs = _weights(
        instance.costs[current, idx], pheromone.eta[current, idx], params.alpha, params.beta
    )
    return TransitionDistribution(cand, probs)
