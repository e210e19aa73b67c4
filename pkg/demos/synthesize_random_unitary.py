"""Synthesise a Haar-random unitary acting on a small Fock block.

Gate synthesis generalises state preparation: the cost averages the
phase-pinning distance over one input-output relation per basis state of the
target block. The reported quality is the average gate fidelity obtained
from the process fidelity.

Run:  python demos/synthesize_random_unitary.py
"""

import os

from cvforge import diagnostics, network, objective, optimizer, targets

OUT = os.path.join("demo_out", "random_unitary")
os.makedirs(OUT, exist_ok=True)

D_BLOCK = 3
spec = targets.TargetSpec("haar_gate", d=D_BLOCK, seed=11)
obj = objective.build_objective(spec, cutoff=8)
shape = optimizer.NetworkShape(layers=12, modes=1, cutoff=8)
config = optimizer.AdamConfig(steps=800, learning_rate=0.0125, beta1=0.995, seed=0)

best, records = optimizer.multi_run(obj, shape, config, n_restarts=2)

print(f"target: Haar unitary on the first {D_BLOCK} Fock states (cutoff 8)")
for rec in records:
    print(f"  seed {rec.seed}: best cost {rec.best_cost:.4f} "
          f"avg fidelity {rec.report['average_fidelity']:.5f}")
print(f"winner: seed {best.seed}, "
      f"process fidelity {best.report['process_fidelity']:.5f}, "
      f"average fidelity {best.report['average_fidelity']:.5f}")

# Real/imaginary heatmap data of the target block and the learned block,
# ready for any matrix-plot tool.
learned = network.network_on_basis(best.final_params, range(D_BLOCK))
for tag, block in (("target", obj.target_gate[:D_BLOCK, :D_BLOCK]),
                   ("learned", learned[:D_BLOCK, :])):
    for part, arr in (("re", block.real), ("im", block.imag)):
        diagnostics.write_matrix_csv(arr, os.path.join(OUT, f"{tag}_{part}.csv"))
print(f"heatmap blocks written to {OUT}/")

# Where does the learned circuit spend its gate budget?
print(f"max |alpha| = {best.report['max_abs_displacement']:.4f}, "
      f"max |r| = {best.report['max_abs_squeezing']:.4f}, "
      f"max |kappa| = {best.report['max_abs_kerr']:.4f}")
