"""Real-amplitude statevector simulator for Ry / CNOT / multi-controlled Ry circuits.

Basis ordering: qubit 0 is the most significant bit of the basis index, so
for ``q = 2`` the amplitudes are ordered ``|00>, |01>, |10>, |11>`` with the
left digit belonging to qubit 0 (the top line of a circuit diagram).

Amplitudes are stored as ``float64``; no complex arithmetic is needed because
every gate in the family maps real vectors to real vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import cos, sin

import numpy as np

__all__ = [
    "GateKind",
    "GateOp",
    "Circuit",
    "StateVector",
    "zero_state",
    "apply_gate",
    "run_circuit",
    "sample",
    "probabilities",
    "format_circuit",
    "PROBABILITY_FLOOR",
]

# Squared amplitudes below this are float noise (e.g. cos(pi/2) ~ 6e-17) and
# are never sampled.
PROBABILITY_FLOOR = 1e-20


class GateKind(str, Enum):
    RY = "RY"
    CNOT = "CNOT"
    CRY = "CRY"


@dataclass(frozen=True)
class GateOp:
    kind: GateKind
    target: int
    controls: tuple[int, ...] = ()
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if self.target in self.controls:
            raise ValueError(f"target {self.target} is also a control")
        if len(set(self.controls)) != len(self.controls):
            raise ValueError(f"duplicate controls {self.controls}")
        if self.kind is GateKind.RY and self.controls:
            raise ValueError("RY takes no controls; use CRY")
        if self.kind is not GateKind.RY and not self.controls:
            raise ValueError(f"{self.kind.value} needs at least one control")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)

    @classmethod
    def ry(cls, target: int, theta: float) -> "GateOp":
        return cls(GateKind.RY, target, (), float(theta))

    @classmethod
    def cnot(cls, control, target: int) -> "GateOp":
        """CNOT; ``control`` may be an int or a sequence (multi-controlled X)."""
        controls = (control,) if isinstance(control, (int, np.integer)) else tuple(control)
        return cls(GateKind.CNOT, target, controls)

    @classmethod
    def cry(cls, controls, target: int, theta: float) -> "GateOp":
        return cls(GateKind.CRY, target, tuple(controls), float(theta))


@dataclass
class Circuit:
    qubit_count: int
    gates: list[GateOp] = field(default_factory=list)

    def __post_init__(self):
        if self.qubit_count < 1:
            raise ValueError(f"qubit_count must be >= 1, got {self.qubit_count}")
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate: GateOp) -> None:
        for i in gate.qubits:
            if not 0 <= i < self.qubit_count:
                raise ValueError(
                    f"gate {gate.kind.value} references qubit {i} "
                    f"outside 0..{self.qubit_count - 1}"
                )

    def append(self, gate: GateOp) -> None:
        self._check(gate)
        self.gates.append(gate)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass
class StateVector:
    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if self.amplitudes.shape != (1 << self.qubit_count,):
            raise ValueError(
                f"expected {1 << self.qubit_count} amplitudes for "
                f"{self.qubit_count} qubits, got shape {self.amplitudes.shape}"
            )

    def norm_squared(self) -> float:
        return float(np.dot(self.amplitudes, self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.qubit_count, self.amplitudes.copy())


def zero_state(q: int) -> StateVector:
    if q < 1:
        raise ValueError(f"qubit count must be >= 1, got {q}")
    amps = np.zeros(1 << q)
    amps[0] = 1.0
    return StateVector(q, amps)


def _slices(q: int, gate: GateOp) -> tuple[tuple, tuple]:
    idx = [slice(None)] * q
    for c in gate.controls:
        idx[c] = 1
    idx0, idx1 = list(idx), list(idx)
    idx0[gate.target] = 0
    idx1[gate.target] = 1
    return tuple(idx0), tuple(idx1)


def _apply_inplace(tensor: np.ndarray, q: int, gate: GateOp) -> None:
    # tensor is the amplitude array reshaped to (2,) * q; indexing below
    # yields views, so the update lands in the caller's buffer.
    idx0, idx1 = _slices(q, gate)
    if gate.kind is GateKind.CNOT:
        x0 = tensor[idx0].copy()
        tensor[idx0] = tensor[idx1]
        tensor[idx1] = x0
        return
    c, s = cos(gate.theta / 2), sin(gate.theta / 2)
    x0 = tensor[idx0].copy()
    x1 = tensor[idx1]
    tensor[idx0] = c * x0 - s * x1
    tensor[idx1] = s * x0 + c * tensor[idx1]


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Return a new state with ``gate`` applied; ``state`` is not modified.

    Ry(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
    CRY applies it only on basis states whose control bits are all 1.
    """
    q = state.qubit_count
    for i in gate.qubits:
        if not 0 <= i < q:
            raise ValueError(f"qubit index {i} out of range for {q} qubits")
    out = state.amplitudes.copy()
    _apply_inplace(out.reshape((2,) * q), q, gate)
    return StateVector(q, out)


def run_circuit(circuit: Circuit) -> StateVector:
    q = circuit.qubit_count
    state = zero_state(q)
    tensor = state.amplitudes.reshape((2,) * q)
    for gate in circuit.gates:
        _apply_inplace(tensor, q, gate)
    return state


def probabilities(state: StateVector) -> np.ndarray:
    """Measurement distribution of ``state`` with float noise floored to zero."""
    p = state.amplitudes ** 2
    p[p < PROBABILITY_FLOOR] = 0.0
    return p / p.sum()


def sample(state: StateVector, shots: int, rng: np.random.Generator) -> list[int]:
    """Measure all qubits ``shots`` times; returns basis indices."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = probabilities(state)
    return rng.choice(p.size, size=shots, p=p).tolist()


def format_circuit(circuit: Circuit) -> str:
    lines = []
    for g in circuit.gates:
        if g.kind is GateKind.RY:
            lines.append(f"RY t={g.target} theta={g.theta!r}")
        elif g.kind is GateKind.CNOT:
            ctl = ",".join(str(c) for c in g.controls)
            lines.append(f"CNOT c={ctl} t={g.target}")
        else:
            ctl = ",".join(str(c) for c in g.controls)
            lines.append(f"CRY c={ctl} t={g.target} theta={g.theta!r}")
    return "\n".join(lines)
