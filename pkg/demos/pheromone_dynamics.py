# How transition probabilities and pheromones evolve on a small graph.

from hqaco.aco_core import Hyperparameters, PheromoneState, deposit, evaporate, transition_distribution
from hqaco.graph_io import bundled_instance

g = bundled_instance("example7_partial")
params = Hyperparameters()          # alpha 0.4, beta 0.6, rho 0.01
eta = PheromoneState.initial(g, params.initial_pheromone)

# From node 4 the neighbours 2, 3, 5, 6 cost 3, 11, 6 and 7.  Cheaper edges
# get more weight; with equal pheromone only the costs matter.
dist = transition_distribution(g, eta, params, current=4, visited={4})
for node, prob in zip(dist.candidates, dist.probabilities):
    print(f"4 -> {node}: {prob:.5f}")

# Every finished ant evaporates all pheromones by 1%.
eta = evaporate(eta, params.rho)
print("after one ant", eta[4, 2])

# A successful ant of total cost 63 then adds 1/63 to each edge on its cycle.
eta = deposit(eta, [6, 5, 3, 1, 0, 2, 4, 6], 63.0)
print("edge 4-6 after deposit", round(eta[4, 6], 5), "edge 4-3 untouched", eta[4, 3])

# Pheromone now favours 4 -> 6 a little more.
dist = transition_distribution(g, eta, params, current=4, visited={4})
print({n: round(float(p), 5) for n, p in zip(dist.candidates, dist.probabilities)})

# Without successes the pheromone just decays geometrically.
eta = PheromoneState.initial(g, 0.5)
for k in range(1, 301):
    eta = evaporate(eta, params.rho)
    if k in (1, 10, 100, 300):
        print(k, eta[0, 1])
