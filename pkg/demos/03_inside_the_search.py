"""What one rule-search run looks like from the inside.

The miner's inner loop has two stages: a prototype network summarizes each
class, then a binary particle swarm — seeded from those prototypes — searches
for the single best rule for one class. This script runs the stages by hand
so their intermediate state can be inspected.
"""

import numpy as np

from rulemine import (
    LvqConfig,
    PsoConfig,
    encode,
    evolve,
    fit_network,
    generate,
    render_rule,
    seed_swarm,
)
from rulemine.pso import fitness_from_rule

data = encode(generate("fragmented", rows=800, seed=4).to_raw())
labels = data.schema.class_labels
print(f"{len(data)} rows, {data.dimension} encoded columns, classes {labels}")

# stage 1: prototypes. Centroids per class are allocated proportionally.
network = fit_network(data, LvqConfig(centroid_count=12, max_epochs=30, seed=4))
print(f"\nfitted {len(network.centroids)} centroids:")
for c in network.centroids:
    print(f"  class {labels[c.class_index]:8s} represents {c.represented_count:4d} rows, "
          f"mean deviation {float(np.mean(c.deviation)):.3f}")

# stage 2: the swarm hunts a rule for the rarer class
target = 1
config = PsoConfig(swarm_size=30, max_iterations=150, stagnation_limit=25, seed=4)
swarm = seed_swarm(network, target, 2, data, config)
print(f"\nswarm of {len(swarm.particles)} particles seeded for class {labels[target]!r}")
print(f"initial best fitness: {swarm.best_fitness:.4f}")

best_rule = evolve(swarm, data, config)
trace = swarm.trace
print(f"searched {len(trace)} iterations; best fitness {swarm.best_fitness:.4f}")

# the trace is monotone: the global best can only improve
marks = [trace[0]] + [t for prev, t in zip(trace, trace[1:]) if t > prev]
print(f"improvements along the way: {', '.join(f'{t:.4f}' for t in marks)}")

print(f"\nbest rule found: {render_rule(best_rule, data.schema, data.numeric_ranges)}")
print(f"fitness recomputed from the decoded rule: "
      f"{fitness_from_rule(best_rule, data, config):.4f}")
