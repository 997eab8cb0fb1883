"""Quantum selector: amplitude encoding of a probability vector and sampling.

A probability vector ``p`` of length ``<= 2**q`` is zero-padded, square-rooted
and turned into ``2**q - 1`` spherical angles (:func:`get_parameters`).  The
angles parameterise a recursive generator circuit built only from Ry, CRY and
(multi-)controlled X gates (:func:`build_selector`).  Running and measuring that
circuit draws candidate ``i`` with probability ``p[i]``.

The generator delivers amplitudes in a permuted basis order; the permutation
is recovered once per qubit count by binding a probe vector with distinct
entries (see :attr:`SelectorCircuit.index_map`).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import acos, ceil, log2, pi, sin, cos

import numpy as np

from .statevec import (
    Circuit,
    GateKind,
    GateOp,
    StateVector,
    probabilities as _measure_probabilities,
)

__all__ = [
    "get_parameters",
    "reconstruct_amplitudes",
    "TemplateGate",
    "SelectorCircuit",
    "build_selector",
    "get_selector",
    "qubits_for",
    "select",
]

ZERO_TOL = 1e-12
SUM_TOL = 1e-6
# Accepts amplitudes rounded to ~5 significant digits; they are renormalised.
NORM_TOL = 1e-4


def _normalised(amps) -> np.ndarray:
    a = np.array(amps, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise ValueError("need a 1-D amplitude vector of length >= 2")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError("amplitudes must be finite and non-negative")
    norm = float(np.dot(a, a))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"amplitudes not normalised: sum of squares = {norm!r}")
    return a / np.sqrt(norm)


def get_parameters(amps) -> np.ndarray:
    """Spherical angles ``r`` with ``a_i = cos(r_i/2) * prod_{j<i} sin(r_j/2)``.

    The last amplitude is the full sine product.  Once the remaining tail of
    the vector is zero the loop stops and the leftover angles are set to 0;
    they only ever multiply a zero prefix, so their value is irrelevant.
    """
    a = _normalised(amps)
    n = a.size
    r = np.zeros(n - 1)
    # Dividing the remaining amplitudes by sin(r_i / 2) at every step is the
    # same as dividing a_i by the running product of sines.
    tail = np.sqrt(np.cumsum((a * a)[::-1])[::-1]).tolist()
    vals = a.tolist()
    scale = 1.0
    for i in range(n - 1):
        if tail[i + 1] < ZERO_TOL * scale:
            # a_i carries the whole remainder: angle 0 exactly.
            break
        angle = 2.0 * acos(min(max(vals[i] / scale, 0.0), 1.0))
        r[i] = angle
        s = sin(angle / 2.0)
        if s < ZERO_TOL:
            break
        scale *= s
    return r


def reconstruct_amplitudes(angles) -> np.ndarray:
    """Inverse of :func:`get_parameters` (prefix sine products times cosines)."""
    r = np.asarray(angles, dtype=float)
    half = r / 2.0
    prefix = np.concatenate(([1.0], np.cumprod(np.sin(half))))
    out = np.empty(r.size + 1)
    out[:-1] = prefix[:-1] * np.cos(half)
    out[-1] = prefix[-1]
    return out


@dataclass(frozen=True)
class TemplateGate:
    """One slot of a generator circuit.

    For rotations the bound angle is ``sign * angles[param] + offset``;
    ``param`` is None for the X gates of the CNOT fan.
    """

    kind: GateKind
    target: int
    controls: tuple[int, ...]
    param: int | None = None
    sign: float = 1.0
    offset: float = 0.0

    def bind(self, angles) -> GateOp:
        if self.param is None:
            return GateOp(self.kind, self.target, self.controls)
        theta = self.sign * float(angles[self.param]) + self.offset
        return GateOp(self.kind, self.target, self.controls, theta)


def _rotation(target, controls, param, sign=1.0, offset=0.0) -> TemplateGate:
    kind = GateKind.CRY if controls else GateKind.RY
    return TemplateGate(kind, target, tuple(controls), param, sign, offset)


def _generator(lines: list[int], base: int, extra: tuple[int, ...]) -> list[TemplateGate]:
    n = len(lines)
    if n == 1:
        return [_rotation(lines[0], extra, base)]
    if n == 2:
        top, bottom = lines
        return [
            _rotation(top, extra, base),
            _rotation(bottom, (top, *extra), base + 1, sign=-1.0),
            _rotation(top, (bottom, *extra), base + 2, offset=pi),
        ]
    upper, last = lines[:-1], lines[-1]
    half = (1 << (n - 1)) - 1
    gates = _generator(upper, base, extra)
    gates.append(_rotation(last, (*upper, *extra), base + half))
    for t in reversed(upper):
        gates.append(TemplateGate(GateKind.CNOT, t, (last, *extra)))
    gates.extend(_generator(upper, base + half + 1, (last, *extra)))
    return gates


class SelectorCircuit:
    """Parameterised ``q``-qubit arbitrary real state generator.

    ``index_map[i]`` is the basis index at which candidate ``i``'s amplitude
    appears; ``candidate_of[b]`` is its inverse.
    """

    def __init__(self, q: int):
        if q < 1:
            raise ValueError(f"qubit count must be >= 1, got {q}")
        self.qubit_count = q
        self.template: tuple[TemplateGate, ...] = tuple(_generator(list(range(q)), 0, ()))
        self._compiled = [self._compile(g) for g in self.template]
        self.index_map = self._probe_index_map()
        self.candidate_of = np.empty_like(self.index_map)
        self.candidate_of[self.index_map] = np.arange(self.index_map.size)

    @property
    def size(self) -> int:
        return 1 << self.qubit_count

    @property
    def parameter_count(self) -> int:
        return len({g.param for g in self.template if g.param is not None})

    def _compile(self, g: TemplateGate):
        idx = [slice(None)] * self.qubit_count
        for c in g.controls:
            idx[c] = 1
        idx0, idx1 = list(idx), list(idx)
        idx0[g.target] = 0
        idx1[g.target] = 1
        return tuple(idx0), tuple(idx1), g.param, g.sign, g.offset

    def bind(self, angles) -> Circuit:
        self._check_angles(angles)
        return Circuit(self.qubit_count, [g.bind(angles) for g in self.template])

    def _check_angles(self, angles) -> None:
        if len(angles) != self.size - 1:
            raise ValueError(f"expected {self.size - 1} angles, got {len(angles)}")

    def prepare(self, angles) -> StateVector:
        """Simulate the bound circuit; same result as ``run_circuit(self.bind(angles))``."""
        self._check_angles(angles)
        angles = [float(x) for x in angles]
        q = self.qubit_count
        amps = np.zeros(self.size)
        amps[0] = 1.0
        t = amps.reshape((2,) * q)
        for idx0, idx1, param, sign, offset in self._compiled:
            x0 = t[idx0].copy()
            if param is None:
                t[idx0] = t[idx1]
                t[idx1] = x0
                continue
            half = (sign * angles[param] + offset) / 2.0
            c, s = cos(half), sin(half)
            t[idx0] = c * x0 - s * t[idx1]
            t[idx1] = s * x0 + c * t[idx1]
        return StateVector(q, amps)

    def encode(self, probs) -> StateVector:
        """Prepare the state whose candidate-``i`` amplitude is ``sqrt(probs[i])``."""
        p = np.asarray(probs, dtype=float)
        if p.size > self.size:
            raise ValueError(f"{p.size} candidates do not fit in {self.qubit_count} qubits")
        amps = np.zeros(self.size)
        amps[: p.size] = np.sqrt(p / p.sum())
        return self.prepare(get_parameters(amps))

    def _probe_index_map(self) -> np.ndarray:
        n = self.size
        if n == 2:
            # Single Ry: identity mapping.
            return np.arange(2)
        probe = np.arange(n, 0, -1, dtype=float)
        probe /= probe.sum()
        state = self.prepare(get_parameters(np.sqrt(probe)))
        sq = state.amplitudes ** 2
        mapping = np.array([int(np.argmin(np.abs(sq - v))) for v in probe])
        if len(set(mapping.tolist())) != n or not np.allclose(sq[mapping], probe, atol=1e-12):
            raise RuntimeError(f"could not recover index map for q={self.qubit_count}")
        return mapping


def build_selector(q: int) -> SelectorCircuit:
    return SelectorCircuit(q)


@lru_cache(maxsize=None)
def get_selector(q: int) -> SelectorCircuit:
    """Cached :class:`SelectorCircuit`; templates are immutable and shareable."""
    return SelectorCircuit(q)


def qubits_for(count: int) -> int:
    """Smallest ``q >= 1`` with ``2**q >= count``."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return max(1, ceil(log2(count)))


def select(
    probabilities,
    shots: int,
    rng: np.random.Generator,
    selector: SelectorCircuit | None = None,
) -> int:
    """Pick a candidate index by simulated measurement and majority vote.

    The circuit is run ``shots`` times; the candidate observed most often wins,
    ties broken uniformly at random from ``rng``.
    """
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("need a non-empty 1-D probability vector")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and non-negative")
    total = p.sum()
    if total == 0:
        raise ValueError("all probabilities are zero")
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if selector is None:
        selector = get_selector(qubits_for(p.size))

    state = selector.encode(p)
    measured = rng.choice(selector.size, size=shots, p=_measure_probabilities(state))
    counts = np.bincount(selector.candidate_of[measured], minlength=selector.size)
    best = np.flatnonzero(counts == counts.max())
    if best.size == 1:
        return int(best[0])
    return int(rng.choice(best))
