# Solve burma14 and gr17 with both samplers and compare against the optimum.
#
# Takes about 15 seconds: each quantum run of 1000 ants simulates roughly 15 000 circuits.
import time

from hqaco.graph_io import bundled_instance
from hqaco.oracle import held_karp
from hqaco.solver import SolverConfig, run

for name in ("burma14", "gr17"):
    inst = bundled_instance(name)
    optimum = held_karp(inst).optimal_cost
    print(f"{name}: {inst.dimension} nodes, optimum {optimum:g}")
    for sampler in ("quantum", "classical"):
        t0 = time.perf_counter()
        res = run(inst, SolverConfig(sampler=sampler, seed=0))
        print(
            f"  {sampler:9s} cost {res.best_cost:g}  error {res.error_percent:.2f}%  "
            f"qubits {res.qubits}  {time.perf_counter() - t0:.1f}s"
        )
        # How quickly did the colony get there?
        h = res.best_cost_history
        print("    best after 10/100/1000 ants:", h[9], h[99], h[-1])
    print("  cycle:", " ".join(map(str, res.best_cycle)))
