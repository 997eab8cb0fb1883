# Exact optima by Held-Karp, and why the GEO degree rule matters for burma14.
import time

from hqaco.aco_core import tour_cost
from hqaco.graph_io import bundled_instance
from hqaco.oracle import HELD_KARP_MAX_NODES, held_karp

for name in ("burma14", "gr17"):
    inst = bundled_instance(name)
    t0 = time.perf_counter()
    res = held_karp(inst)
    print(f"{name}: optimum {res.optimal_cost:g}, {res.explored_states} states, "
          f"{time.perf_counter() - t0:.2f}s")
    print("  ", res.optimal_cycle)

# TSPLIB's reference code truncates coordinates to whole degrees before
# adding minutes.  Rounding to the nearest degree instead moves some cities
# by almost a degree and shifts the optimum.
rounded = bundled_instance("burma14", geo_degrees="nearest")
print("nearest-degree optimum", held_karp(rounded).optimal_cost)

# A burma14 tour from the literature, costed under both rules.
tour = [12, 6, 11, 5, 4, 3, 2, 13, 1, 9, 10, 8, 7, 0, 12]
print("published tour:", tour_cost(bundled_instance("burma14"), tour), "truncated,",
      tour_cost(rounded, tour), "rounded")

print("size limit for the exact solver:", HELD_KARP_MAX_NODES, "nodes")
