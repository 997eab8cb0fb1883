"""Hybrid quantum-classical ant colony optimisation for the TSP.

Each ant picks a start node uniformly and then repeatedly moves to an
unvisited neighbour.  Every random choice goes through a *sampler*: the
quantum sampler encodes the probabilities in a simulated generator circuit
and takes a majority vote over several measurements; the classical sampler
scans cumulative probabilities against one uniform draw.

Two circuit sizes are used: ``ceil(log2 v)`` qubits for the start node and
``ceil(log2 d)`` qubits for each step, ``d`` being the maximum degree.

Pheromones evaporate after every ant, successful or not, and a successful
ant deposits ``1 / cost`` on each edge of its cycle.  In parallel mode ants
run in batches against a frozen pheromone snapshot; the batch's updates are
then committed one ant at a time in ant order.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .aco_core import (
    Hyperparameters,
    PheromoneState,
    TourState,
    TourStatus,
    deposit,
    evaporate,
    tour_cost,
    transition_distribution,
)
from .graph_io import ProblemInstance
from .selector import get_selector, qubits_for, select

__all__ = [
    "SolverConfig",
    "RunResult",
    "Sampler",
    "QuantumSampler",
    "classical_select",
    "make_samplers",
    "qubit_requirements",
    "select_start_node",
    "construct_tour",
    "run",
    "error_in_estimation",
    "worker_streams",
    "SAMPLERS",
]

SAMPLERS = ("quantum", "classical")

Sampler = Callable[[np.ndarray, np.random.Generator], int]


@dataclass(frozen=True)
class SolverConfig:
    params: Hyperparameters = field(default_factory=Hyperparameters)
    sampler: str = "quantum"
    seed: int = 0
    parallel_workers: int = 1
    require_cycle: bool = True

    def __post_init__(self):
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if self.parallel_workers < 1:
            raise ValueError("parallel_workers must be >= 1")


@dataclass
class RunResult:
    instance: str
    best_cycle: list[int]
    best_cost: float
    error_percent: float | None
    successful_ants: int
    failed_ants: int
    per_ant_costs: list[float | None]
    elapsed: float
    qubits: tuple[int, int]
    pheromone: PheromoneState = field(repr=False)
    best_cost_history: list[float] = field(repr=False, default_factory=list)

    @property
    def status(self) -> str:
        return "ok" if self.best_cycle else "no-solution"


class QuantumSampler:
    """Selection by simulating a ``qubits``-wide selector and majority-voting ``shots`` measurements."""

    def __init__(self, qubits: int, shots: int):
        self.selector = get_selector(qubits)
        self.shots = shots

    def __call__(self, probabilities, rng) -> int:
        return select(probabilities, self.shots, rng, selector=self.selector)


def classical_select(probabilities, rng: np.random.Generator) -> int:
    """Roulette wheel: first index whose cumulative probability exceeds one uniform draw."""
    cum = np.cumsum(probabilities)
    u = rng.random() * cum[-1]
    return min(int(np.searchsorted(cum, u, side="right")), len(cum) - 1)


def qubit_requirements(instance: ProblemInstance) -> tuple[int, int]:
    """``(start_qubits, step_qubits)`` = ``(ceil(log2 v), ceil(log2 d))``, each at least 1."""
    return qubits_for(instance.dimension), qubits_for(max(instance.max_degree, 1))


def make_samplers(instance: ProblemInstance, kind: str, shots: int) -> tuple[Sampler, Sampler]:
    if kind == "classical":
        return classical_select, classical_select
    q_start, q_step = qubit_requirements(instance)
    return QuantumSampler(q_start, shots), QuantumSampler(q_step, shots)


def select_start_node(instance: ProblemInstance, selector: Sampler, rng) -> int:
    v = instance.dimension
    if v == 1:
        return 0
    return selector(np.full(v, 1.0 / v), rng)


def construct_tour(
    instance: ProblemInstance,
    pheromone: PheromoneState,
    params: Hyperparameters,
    selector: Sampler,
    rng,
    start: int,
    require_cycle: bool = True,
) -> TourState:
    """Walk one ant from ``start`` until it has nowhere left to go.

    The tour succeeds when every node is visited and, if ``require_cycle``,
    the last node is adjacent to ``start``.  ``accumulated_cost`` then
    includes the closing edge.
    """
    tour = TourState.start(start)
    while True:
        dist = transition_distribution(instance, pheromone, params, tour.current, tour.visited)
        if dist.stuck:
            break
        tour.advance(instance, dist.candidates[selector(dist.probabilities, rng)])

    v = instance.dimension
    if len(tour.visited) < v:
        tour.status = TourStatus.STUCK
    elif require_cycle and v > 1 and not instance.has_edge(tour.current, start):
        tour.status = TourStatus.STUCK
    else:
        tour.status = TourStatus.SUCCESS
        if require_cycle and v > 1:
            tour.accumulated_cost += float(instance.costs[tour.current, start])
    return tour


def error_in_estimation(found: float, reference: float) -> float:
    """Percentage by which ``found`` exceeds ``reference``."""
    if reference <= 0:
        raise ValueError(f"reference must be positive, got {reference}")
    return 100.0 * (found - reference) / reference


def worker_streams(seed: int, workers: int) -> list[np.random.Generator]:
    """Independent per-worker generators split from ``seed`` via ``SeedSequence.spawn``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(workers)]


def _closed(tour: TourState) -> list[int]:
    return [*tour.path, tour.path[0]]


def run(instance: ProblemInstance, config: SolverConfig | None = None) -> RunResult:
    config = config or SolverConfig()
    params = config.params
    t0 = time.perf_counter()
    start_sel, step_sel = make_samplers(instance, config.sampler, params.shots)
    pheromone = PheromoneState.initial(instance, params.initial_pheromone)

    def one_ant(snapshot: PheromoneState, rng) -> TourState:
        start = select_start_node(instance, start_sel, rng)
        return construct_tour(
            instance, snapshot, params, step_sel, rng, start, config.require_cycle
        )

    best_cycle: list[int] = []
    best_cost = math.inf
    per_ant: list[float | None] = []
    history: list[float] = []
    successes = 0

    def commit(tour: TourState) -> None:
        nonlocal pheromone, best_cycle, best_cost, successes
        pheromone = evaporate(pheromone, params.rho)
        if tour.status is TourStatus.SUCCESS:
            cycle = _closed(tour) if config.require_cycle else list(tour.path)
            if config.require_cycle:
                _assert_hamiltonian(instance, cycle, tour.accumulated_cost)
            successes += 1
            per_ant.append(tour.accumulated_cost)
            if tour.accumulated_cost > 0:
                pheromone = deposit(pheromone, cycle, tour.accumulated_cost)
            if tour.accumulated_cost < best_cost:
                best_cost, best_cycle = tour.accumulated_cost, cycle
        else:
            per_ant.append(None)
        history.append(best_cost)

    if config.parallel_workers == 1:
        rng = np.random.default_rng(config.seed)
        for _ in range(params.ants):
            commit(one_ant(pheromone, rng))
    else:
        streams = worker_streams(config.seed, config.parallel_workers)
        with ThreadPoolExecutor(max_workers=config.parallel_workers) as pool:
            for batch in range(0, params.ants, config.parallel_workers):
                k = min(config.parallel_workers, params.ants - batch)
                snapshot = pheromone
                tours = list(pool.map(lambda w: one_ant(snapshot, streams[w]), range(k)))
                for tour in tours:
                    commit(tour)

    error = None
    if best_cycle and instance.lower_bound:
        error = error_in_estimation(best_cost, instance.lower_bound)
    return RunResult(
        instance=instance.name,
        best_cycle=best_cycle,
        best_cost=best_cost,
        error_percent=error,
        successful_ants=successes,
        failed_ants=params.ants - successes,
        per_ant_costs=per_ant,
        elapsed=time.perf_counter() - t0,
        qubits=qubit_requirements(instance),
        pheromone=pheromone,
        best_cost_history=history,
    )


def _assert_hamiltonian(instance: ProblemInstance, cycle: list[int], cost: float) -> None:
    body = cycle[:-1]
    if sorted(body) != list(range(instance.dimension)) or cycle[0] != cycle[-1]:
        raise AssertionError(f"not a Hamiltonian cycle: {cycle}")
    if abs(tour_cost(instance, cycle) - cost) > 1e-9 * max(1.0, cost):
        raise AssertionError(f"cycle cost mismatch for {cycle}")
