"""How network depth buys preparation quality.

A one-layer network cannot carve a single photon out of the vacuum; a few
layers can. This mini sweep averages the best cost over independent restarts
at each depth and prints the resulting table (the bundled config
desk/depth_sweep.json runs the full version).

Run:  python demos/depth_matters.py
"""

import math
import os

from cvforge import objective, optimizer, targets

OUT = os.path.join("demo_out", "depth_sweep")
os.makedirs(OUT, exist_ok=True)

spec = targets.TargetSpec("single_photon")
obj = objective.build_objective(spec, cutoff=6)
shape = optimizer.NetworkShape(layers=1, modes=1, cutoff=6)
config = optimizer.AdamConfig(steps=400, learning_rate=0.001, seed=0)

rows = optimizer.depth_sweep(obj, depths=range(1, 6), shape=shape,
                             config=config, runs_per_depth=4)

print("depth | mean best cost over 4 restarts")
for depth, cost in rows:
    bar = "#" * max(1, int(-4 * math.log10(cost)))
    print(f"  {depth}   | {cost:9.2e}  {bar}")

path = os.path.join(OUT, "depth_sweep.csv")
with open(path, "w") as fh:
    fh.write("depth,mean_best_cost\n")
    for depth, cost in rows:
        fh.write(f"{depth},{cost:.17g}\n")
print(f"\ntable written to {path}")
print(f"improvement from depth 1 to depth {rows[-1][0]}: "
      f"{rows[0][1] / rows[-1][1]:.0f}x")
