# Loading a probability vector into a simulated register and sampling from it.
import numpy as np

from hqaco.selector import build_selector, get_parameters, reconstruct_amplitudes, select
from hqaco.statevec import format_circuit, run_circuit

# Four candidates with probabilities 0.3, 0.2, 0.4 and 0.1.  The register
# holds square roots of the probabilities.
p = np.array([0.3, 0.2, 0.4, 0.1])
amps = np.sqrt(p)

# Spherical angles: cos(r1/2) = a1, sin(r1/2) cos(r2/2) = a2, and so on.
angles = get_parameters(amps)
print("angles", np.round(angles, 6))
print("rebuilt", np.round(reconstruct_amplitudes(angles), 6))

# Two qubits: one RY and two controlled RY gates.
selector = build_selector(2)
circuit = selector.bind(angles)
print(format_circuit(circuit))

# The generator writes candidate i at basis index index_map[i].
state = run_circuit(circuit)
print("basis probabilities    ", np.round(state.amplitudes**2, 6))
print("candidate probabilities", np.round(state.amplitudes[selector.index_map] ** 2, 6))

# Three qubits need seven angles; padding entries stay at zero probability.
padded = np.zeros(8)
padded[:4] = amps
big = build_selector(3)
print(format_circuit(big.bind(get_parameters(padded))))
print("padding mass", big.encode(np.r_[p, 0, 0, 0, 0]).amplitudes[big.index_map[4:]] ** 2)

# A selection is a majority vote over several measurements.  With ten shots
# the most likely candidate wins far more often than its 40%.
rng = np.random.default_rng(0)
picks = [select(p, 10, rng) for _ in range(2000)]
print("10-shot selection frequencies", np.bincount(picks, minlength=4) / 2000)
picks = [select(p, 1, rng) for _ in range(2000)]
print("1-shot selection frequencies ", np.bincount(picks, minlength=4) / 2000)
