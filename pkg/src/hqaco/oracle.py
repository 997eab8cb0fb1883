"""Independent reference computations used to check the solver and simulator.

Nothing here shares code paths with the engines it checks: the circuit
oracle builds dense ``2**q x 2**q`` matrices element by element, the
transition oracle evaluates the probability formula with plain Python floats,
and Held-Karp solves the TSP exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .graph_io import ProblemInstance
from .statevec import Circuit, GateKind, StateVector

__all__ = [
    "ExactResult",
    "SizeLimitError",
    "held_karp",
    "ChiSquareResult",
    "chi_square_uniformity",
    "gate_matrix",
    "matrix_simulate",
    "transition_bruteforce",
    "HELD_KARP_MAX_NODES",
    "MATRIX_MAX_QUBITS",
]

HELD_KARP_MAX_NODES = 20
MATRIX_MAX_QUBITS = 4
CHI_SQUARE_LEVEL = 0.99


class SizeLimitError(ValueError):
    """Input larger than an oracle is willing to handle."""


@dataclass(frozen=True)
class ExactResult:
    optimal_cost: float
    optimal_cycle: list[int]
    explored_states: int


def held_karp(instance: ProblemInstance) -> ExactResult:
    """Exact minimum Hamiltonian cycle by dynamic programming over subsets.

    Node ``n - 1`` is the fixed start.  ``dp[mask, j]`` is the cheapest path
    from the start through exactly the nodes in ``mask`` ending at ``j``.
    Absent edges cost infinity, so sparse instances are accepted too.

    Raises:
        SizeLimitError: more than ``HELD_KARP_MAX_NODES`` nodes.
        ValueError: the instance has no Hamiltonian cycle.
    """
    n = instance.dimension
    if n > HELD_KARP_MAX_NODES:
        raise SizeLimitError(f"held_karp refuses {n} nodes (limit {HELD_KARP_MAX_NODES})")
    d = np.where(instance.edge_mask, instance.costs, np.inf)
    if n == 1:
        return ExactResult(0.0, [0, 0], 1)

    m = n - 1
    start = n - 1
    full = 1 << m
    dp = np.full((full, m), np.inf)
    parent = np.full((full, m), -1, dtype=np.int8)
    for j in range(m):
        dp[1 << j, j] = d[start, j]

    popcount = np.array([bin(x).count("1") for x in range(full)])
    explored = m
    inner = d[:m, :m]
    for size in range(2, m + 1):
        layer = np.flatnonzero(popcount == size)
        for j in range(m):
            masks = layer[(layer >> j) & 1 == 1]
            prev = masks ^ (1 << j)
            # cand[x, k] = dp[prev_x, k] + d[k, j]; k outside prev_x has dp = inf.
            cand = dp[prev] + inner[:, j]
            best = np.argmin(cand, axis=1)
            dp[masks, j] = cand[np.arange(masks.size), best]
            parent[masks, j] = best
            explored += masks.size

    closing = dp[full - 1] + d[:m, start]
    last = int(np.argmin(closing))
    cost = float(closing[last])
    if not np.isfinite(cost):
        raise ValueError("instance has no Hamiltonian cycle")

    path = []
    mask, j = full - 1, last
    while j >= 0:
        path.append(j)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj if mask else -1
    cycle = [start, *reversed(path), start]
    return ExactResult(cost, cycle, explored)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    critical: float
    dof: int
    passed: bool


def chi_square_uniformity(observed, expected) -> ChiSquareResult:
    """Pearson goodness-of-fit of ``observed`` counts to ``expected`` probabilities at 99%.

    Categories with zero expected probability contribute no degrees of
    freedom; any count landing in one fails the test outright.
    """
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape or obs.ndim != 1:
        raise ValueError(f"observed {obs.shape} and expected {exp.shape} lengths differ")
    total = obs.sum()
    if total < 1000:
        raise ValueError(f"need at least 1000 observations, got {total:g}")
    if abs(exp.sum() - 1.0) > 1e-6:
        raise ValueError(f"expected probabilities sum to {exp.sum()!r}")
    live = exp > 0
    if np.any(obs[~live] > 0):
        return ChiSquareResult(math.inf, 0.0, int(live.sum()) - 1, False)
    e = exp[live] * total
    stat = float(np.sum((obs[live] - e) ** 2 / e))
    dof = int(live.sum()) - 1
    if dof == 0:
        return ChiSquareResult(stat, 0.0, 0, True)
    crit = float(stats.chi2.ppf(CHI_SQUARE_LEVEL, dof))
    return ChiSquareResult(stat, crit, dof, stat <= crit)


def gate_matrix(q: int, kind: GateKind, target: int, controls=(), theta: float = 0.0) -> np.ndarray:
    """Dense matrix of one gate, built column by column from basis states."""
    dim = 1 << q

    def bit(index: int, qubit: int) -> int:
        return (index >> (q - 1 - qubit)) & 1

    u = np.zeros((dim, dim))
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    for col in range(dim):
        if not all(bit(col, k) for k in controls):
            u[col, col] = 1.0
            continue
        flipped = col ^ (1 << (q - 1 - target))
        if kind is GateKind.CNOT:
            u[flipped, col] = 1.0
        elif bit(col, target) == 0:
            u[col, col] = c
            u[flipped, col] = s
        else:
            u[col, col] = c
            u[flipped, col] = -s
    return u


def matrix_simulate(circuit: Circuit) -> StateVector:
    """Multiply out the dense unitary of ``circuit`` and apply it to ``|0...0>``."""
    q = circuit.qubit_count
    if q > MATRIX_MAX_QUBITS:
        raise SizeLimitError(f"matrix_simulate refuses {q} qubits (limit {MATRIX_MAX_QUBITS})")
    u = np.eye(1 << q)
    for g in circuit.gates:
        u = gate_matrix(q, g.kind, g.target, g.controls, g.theta) @ u
    return StateVector(q, u[:, 0].copy())


def transition_bruteforce(instance: ProblemInstance, eta, alpha: float, beta: float, current: int, visited):
    """Direct per-neighbour evaluation of the transition probabilities.

    Returns ``{node: probability}``; the normaliser is summed in reverse
    neighbour order with ``math.fsum``.
    """
    nodes = [b for b in instance.adjacency[current] if b not in visited]
    terms = {}
    for b in nodes:
        w = 1.0 / max(float(instance.costs[current][b]), 1e-9)
        terms[b] = math.pow(w, alpha) * math.pow(float(eta[current][b]), beta)
    z = math.fsum(terms[b] for b in reversed(nodes))
    return {b: t / z for b, t in terms.items()}
