"""Learn a circuit that turns the vacuum into a single photon.

An 8-layer single-mode network is trained by Adam descent on the
phase-pinning cost |<1|U(theta)|0> - 1|. A shortened budget keeps this demo
around a minute; the bundled config desk/single_photon.json runs the full
5000-step, 5-restart version.

Run:  python demos/prepare_single_photon.py
"""

import os

from cvforge import diagnostics, network, objective, optimizer, targets

OUT = os.path.join("demo_out", "single_photon")
os.makedirs(OUT, exist_ok=True)

spec = targets.TargetSpec("single_photon")
obj = objective.build_objective(spec, cutoff=6)
shape = optimizer.NetworkShape(layers=8, modes=1, cutoff=6)
config = optimizer.AdamConfig(steps=1500, learning_rate=0.001, seed=0)

record = optimizer.run(obj, shape, config)

print("cost trace:")
for step in (0, 50, 150, 400, 800, 1499):
    print(f"  step {step:5d}: {record.cost_trace[step]:.5f}")
print(f"best cost {record.best_cost:.2e} at step {record.best_step}")
print(f"fidelity to the single photon: {record.report['state_fidelity']:.6f}")
print(f"max |alpha| = {record.report['max_abs_displacement']:.4f}, "
      f"max |r| = {record.report['max_abs_squeezing']:.4f}, "
      f"max |kappa| = {record.report['max_abs_kerr']:.4f}")

# Wigner functions of the target and the learned state. The single photon
# is negative at the origin, a genuinely non-classical feature the network
# has to learn from scratch.
xs, ps = diagnostics.phase_space_grid(half_width=5.0, points=120)
learned = network.network_columns(record.final_params, 1)[:, 0]
for tag, psi in (("target", obj.target_state), ("learned", learned)):
    grid = diagnostics.wigner(psi, xs, ps)
    path = os.path.join(OUT, f"wigner_{tag}.csv")
    diagnostics.write_grid_csv(grid, path)
    print(f"wigner_{tag}: W(0,0) = {grid.values[60, 60]:.5f}  -> {path}")
print("(an ideal single photon has W(0,0) = -1/(2 pi) ~ -0.15915)")
