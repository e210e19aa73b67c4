"""Phase-space portraits of the library's target states.

Writes Wigner grids (and a PNG contact sheet when matplotlib is available)
for a handful of canonical states. All library output is plain CSV data;
rendering is the demo's job.

Run:  python demos/wigner_gallery.py
"""

import os

import numpy as np

from cvforge import diagnostics, targets

OUT = os.path.join("demo_out", "gallery")
os.makedirs(OUT, exist_ok=True)

states = {
    "vacuum": targets.fock_state(0, 10),
    "single_photon": targets.single_photon(10),
    "coherent_1.5": targets.coherent(1.5, 25),
    "on_9": targets.on_state(1.0, 9, 14),
    "random_d15": targets.random_state(15, seed=0, cutoff=20),
    "hex_gkp": targets.hex_gkp(1, 2, 0.3, 50),
}

grids = {}
for name, psi in states.items():
    half = 8.0 if name == "hex_gkp" else 6.0
    xs, ps = diagnostics.phase_space_grid(half_width=half, points=150)
    grid = diagnostics.wigner(psi, xs, ps)
    grids[name] = grid
    diagnostics.write_grid_csv(grid, os.path.join(OUT, f"wigner_{name}.csv"))
    negativity = grid.values.min()
    print(f"{name:15s} W range [{negativity:+.4f}, {grid.values.max():+.4f}]"
          f"{'   <- negative: non-classical' if negativity < -1e-3 else ''}")

print(f"\nCSV grids written to {OUT}/")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the PNG contact sheet")
else:
    fig, axes = plt.subplots(2, 3, figsize=(12, 7))
    for ax, (name, grid) in zip(axes.ravel(), grids.items()):
        xs, ps = grid.axes()
        scale = np.max(np.abs(grid.values))
        ax.pcolormesh(xs, ps, grid.values.T, cmap="RdBu_r", vmin=-scale, vmax=scale)
        ax.set_title(name)
        ax.set_xlabel("x")
        ax.set_ylabel("p")
    fig.tight_layout()
    png = os.path.join(OUT, "gallery.png")
    fig.savefig(png, dpi=110)
    print(f"contact sheet saved to {png}")
