"""Batch command-line front end.

Usage:
    cvforge prepare    --config single_photon.json [overrides]
    cvforge synthesize --config cross_kerr.json    [overrides]
    cvforge sweep      --config depth_sweep.json   [overrides]
    cvforge analyze    --params params.json --config target.json [--cutoff D]

One JSON config file describes one experiment; the flags --steps, --seed,
--restarts and --output-dir override individual fields. Configs bundled
with the package resolve by name, e.g. ``--config desk/single_photon``.

Exit codes: 0 success, 2 config error, 3 cutoff precondition failure,
4 numerical failure (non-finite cost).
"""

import argparse
import json
import os
import sys
from importlib import resources

import numpy as np

from . import __version__, diagnostics, network, objective as objective_mod, optimizer
from .objective import CutoffError
from .optimizer import NumericalError
from .targets import TargetSpec


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CUTOFF = 3
EXIT_NUMERICAL = 4


class ConfigError(ValueError):
    """Configuration file or override is invalid."""


# ------------------------------------------------------------------
# Config loading and validation
# ------------------------------------------------------------------

def bundled_config_path(name: str):
    """Filesystem path of a config shipped inside the package, or None."""
    base = resources.files("cvforge") / "configs"
    for candidate in (name, f"{name}.json"):
        path = base / candidate
        if path.is_file():
            return str(path)
    return None


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file and no bundled config of that name")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")


def _field(obj, path, types, required=True, default=None, positive=False):
    head = path.split(".")[-1]
    if head not in obj:
        if required:
            raise ConfigError(f"{path}: missing required field")
        return default
    value = obj[head]
    if types is int and isinstance(value, bool):
        raise ConfigError(f"{path}: expected an integer, got a boolean")
    if not isinstance(value, types):
        raise ConfigError(f"{path}: expected {types}, got {type(value).__name__} ({value!r})")
    if positive and value <= 0:
        raise ConfigError(f"{path}: must be positive, got {value}")
    return value


def validate_config(obj: dict, task: str) -> dict:
    """Check an experiment config document, returning it in resolved form."""
    if not isinstance(obj, dict):
        raise ConfigError("config: top level must be a JSON object")
    cfg_task = _field(obj, "task", str)
    if cfg_task != task:
        raise ConfigError(f"task: config declares {cfg_task!r} but the {task!r} command was invoked")

    target_obj = _field(obj, "target", dict)
    try:
        target = TargetSpec.from_dict(target_obj)
    except ValueError as exc:
        raise ConfigError(f"target: {exc}")

    net = _field(obj, "network", dict)
    layers = _field(net, "network.layers", int, positive=True)
    modes = _field(net, "network.modes", int, positive=True)
    cutoff = _field(net, "network.cutoff", int, positive=True)
    if modes not in (1, 2):
        raise ConfigError(f"network.modes: must be 1 or 2, got {modes}")
    if cutoff < 2:
        raise ConfigError(f"network.cutoff: must be >= 2, got {cutoff}")
    if modes != target.modes:
        raise ConfigError(
            f"network.modes: {modes} does not match the {target.kind!r} target "
            f"({target.modes}-mode)"
        )

    opt = _field(obj, "optimizer", dict)
    steps = _field(opt, "optimizer.steps", int)
    if steps < 0:
        raise ConfigError(f"optimizer.steps: must be >= 0, got {steps}")
    try:
        adam = optimizer.AdamConfig(
            steps=steps,
            learning_rate=_field(opt, "optimizer.learning_rate", (int, float),
                                 required=False, default=0.025),
            beta1=_field(opt, "optimizer.beta1", (int, float), required=False, default=0.9),
            beta2=_field(opt, "optimizer.beta2", (int, float), required=False, default=0.999),
            eps_hat=_field(opt, "optimizer.eps_hat", (int, float), required=False, default=1e-8),
            penalty_weight=_field(opt, "optimizer.penalty_weight", (int, float),
                                  required=False, default=0.0),
            seed=_field(opt, "optimizer.seed", int, required=False, default=0),
            active_std=_field(opt, "optimizer.active_std", (int, float),
                              required=False, default=0.001),
        )
    except ValueError as exc:
        raise ConfigError(f"optimizer: {exc}")

    resolved = {
        "task": cfg_task,
        "target": target.to_dict(),
        "network": {"layers": layers, "modes": modes, "cutoff": cutoff},
        "optimizer": {
            "steps": adam.steps,
            "learning_rate": adam.learning_rate,
            "beta1": adam.beta1,
            "beta2": adam.beta2,
            "eps_hat": adam.eps_hat,
            "penalty_weight": adam.penalty_weight,
            "seed": adam.seed,
            "active_std": adam.active_std,
        },
        "restarts": _field(obj, "restarts", int, required=False, default=1, positive=True),
        "parallelism": _field(obj, "parallelism", int, required=False, default=1, positive=True),
        "output_dir": _field(obj, "output_dir", str, required=False, default="cvforge_out"),
        "allow_leaky": _field(obj, "allow_leaky", bool, required=False, default=False),
    }
    if task == "sweep":
        sweep = _field(obj, "sweep", dict)
        depths = _field(sweep, "sweep.depths", list)
        if not depths or not all(isinstance(d, int) and d >= 1 for d in depths):
            raise ConfigError("sweep.depths: expected a non-empty list of positive integers")
        resolved["sweep"] = {
            "depths": depths,
            "runs_per_depth": _field(sweep, "sweep.runs_per_depth", int,
                                     required=False, default=10, positive=True),
        }
    if task == "prepare" and target.is_gate:
        raise ConfigError(f"target.kind: {target.kind!r} is a gate; use the synthesize command")
    if task == "synthesize" and not target.is_gate:
        raise ConfigError(f"target.kind: {target.kind!r} is a state; use the prepare command")
    return resolved


def load_config(path: str, task: str, overrides) -> dict:
    located = path if os.path.exists(path) else (bundled_config_path(path) or path)
    cfg = validate_config(_load_json(located), task)
    if overrides.steps is not None:
        if overrides.steps < 0:
            raise ConfigError(f"--steps: must be >= 0, got {overrides.steps}")
        cfg["optimizer"]["steps"] = overrides.steps
    if overrides.seed is not None:
        cfg["optimizer"]["seed"] = overrides.seed
    if overrides.restarts is not None:
        if overrides.restarts < 1:
            raise ConfigError(f"--restarts: must be >= 1, got {overrides.restarts}")
        cfg["restarts"] = overrides.restarts
    if overrides.output_dir is not None:
        cfg["output_dir"] = overrides.output_dir
    if getattr(overrides, "allow_leaky", False):
        cfg["allow_leaky"] = True
    return cfg


def _parallelism(cfg: dict) -> int:
    cap = os.environ.get("CVFORGE_THREADS")
    workers = cfg["parallelism"]
    if cap is not None:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"CVFORGE_THREADS: expected an integer, got {cap!r}")
    return workers


def _adam_from(cfg: dict) -> optimizer.AdamConfig:
    return optimizer.AdamConfig(**cfg["optimizer"])


def _shape_from(cfg: dict) -> optimizer.NetworkShape:
    net = cfg["network"]
    return optimizer.NetworkShape(net["layers"], net["modes"], net["cutoff"])


# ------------------------------------------------------------------
# Artifact emission (single writer: all files written from this module)
# ------------------------------------------------------------------

def _write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_trace_csv(trace, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,cost\n")
        for step, cost in enumerate(trace):
            fh.write(f"{step},{cost:.17g}\n")


def _write_run_artifacts(records, out_dir):
    for rec in records:
        _write_json(rec.summary_dict(), os.path.join(out_dir, f"run_{rec.seed}.json"))
        _write_trace_csv(rec.cost_trace, os.path.join(out_dir, f"trace_{rec.seed}.csv"))
        network.save_params_json(
            rec.final_params, os.path.join(out_dir, f"params_{rec.seed}.json")
        )


def _grid_axes(cfg: dict, target_kind: str):
    grid_cfg = cfg.get("grid", {})
    default_half = 8.0 if target_kind == "hex_gkp" else diagnostics.DEFAULT_GRID_HALF_WIDTH
    half = grid_cfg.get("half_width", default_half)
    points = grid_cfg.get("points", diagnostics.DEFAULT_GRID_POINTS)
    return diagnostics.phase_space_grid(half, points)


def _write_state_diagnostics(psi, tag, cfg, target_kind, out_dir, modes):
    xs, ps = _grid_axes(cfg, target_kind)
    if modes == 1:
        diagnostics.write_grid_csv(
            diagnostics.wigner(psi, xs, ps), os.path.join(out_dir, f"wigner_{tag}.csv")
        )
        diagnostics.write_wavefunction_csv(
            xs, diagnostics.wavefunction1d(psi, xs),
            os.path.join(out_dir, f"wavefunction_{tag}.csv"),
        )
    else:
        wf = diagnostics.wavefunction2d(psi, xs, ps)
        for part, arr in (("re", wf.real), ("im", wf.imag)):
            grid = diagnostics.Grid2D(xs[0], xs[-1], len(xs), ps[0], ps[-1], len(ps), arr)
            diagnostics.write_grid_csv(
                grid, os.path.join(out_dir, f"wavefunction2d_{tag}_{part}.csv")
            )


def _write_heatmaps(objective_spec, learned_columns, out_dir):
    indices = list(objective_spec.input_indices)
    cutoff = objective_spec.cutoff
    modes = objective_spec.modes
    target = objective_spec.target_gate
    if objective_mod.is_block_preserving(target, indices):
        rows = indices
    else:
        rows = range(target.shape[0])  # leaky gates need the full columns
    row_list, col_list = list(rows), indices
    labels = diagnostics.fock_labels(cutoff, modes, cutoff ** modes)
    row_labels = [labels[i] for i in row_list]
    col_labels = [labels[i] for i in col_list]
    blocks = {
        "target": target[np.ix_(row_list, col_list)],
        "learned": learned_columns[row_list, :],
    }
    for tag, block in blocks.items():
        for part, arr in (("re", block.real), ("im", block.imag)):
            diagnostics.write_matrix_csv(
                arr, os.path.join(out_dir, f"heatmap_{tag}_{part}.csv"),
                row_labels=row_labels, col_labels=col_labels,
            )


def _superposition_state(objective_spec):
    dim = objective_spec.cutoff ** objective_spec.modes
    psi = np.zeros(dim, dtype=complex)
    indices = list(objective_spec.input_indices)
    psi[indices] = 1.0 / np.sqrt(len(indices))
    return psi


def _report_skeleton(cfg: dict) -> dict:
    return {"version": __version__, "task": cfg["task"], "config": cfg}


# ------------------------------------------------------------------
# Commands
# ------------------------------------------------------------------

def cmd_prepare(cfg: dict) -> int:
    out_dir = cfg["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    obj = objective_mod.build_objective(
        TargetSpec.from_dict(cfg["target"]),
        cfg["network"]["cutoff"],
        cfg["optimizer"]["penalty_weight"],
    )
    best, records = optimizer.multi_run(
        obj, _shape_from(cfg), _adam_from(cfg),
        cfg["restarts"], _parallelism(cfg), cfg["allow_leaky"],
    )
    _write_run_artifacts(records, out_dir)
    network.save_params_json(best.final_params, os.path.join(out_dir, "best_params.json"))

    target_kind = cfg["target"]["kind"]
    psi_learned = network.network_columns(best.final_params, 1)[:, 0]
    _write_state_diagnostics(obj.target_state, "target", cfg, target_kind, out_dir, obj.modes)
    _write_state_diagnostics(psi_learned, "learned", cfg, target_kind, out_dir, obj.modes)

    report = _report_skeleton(cfg)
    report["best_seed"] = best.seed
    report["metrics"] = best.report
    report["runs"] = [
        {"seed": r.seed, "best_cost": r.best_cost, "best_step": r.best_step,
         "wall_time_s": r.wall_time}
        for r in records
    ]
    report["wall_time_s"] = sum(r.wall_time for r in records)
    _write_json(report, os.path.join(out_dir, "report.json"))
    print(f"prepare: best seed {best.seed}, cost {best.best_cost:.6g}, "
          f"state fidelity {best.report['state_fidelity']:.6f} -> {out_dir}")
    return EXIT_OK


def cmd_synthesize(cfg: dict) -> int:
    out_dir = cfg["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    obj = objective_mod.build_objective(
        TargetSpec.from_dict(cfg["target"]),
        cfg["network"]["cutoff"],
        cfg["optimizer"]["penalty_weight"],
    )
    best, records = optimizer.multi_run(
        obj, _shape_from(cfg), _adam_from(cfg),
        cfg["restarts"], _parallelism(cfg), cfg["allow_leaky"],
    )
    _write_run_artifacts(records, out_dir)
    network.save_params_json(best.final_params, os.path.join(out_dir, "best_params.json"))

    learned_cols = network.network_on_basis(best.final_params, obj.input_indices)
    _write_heatmaps(obj, learned_cols, out_dir)

    target_kind = cfg["target"]["kind"]
    psi_sup = _superposition_state(obj)
    _write_state_diagnostics(obj.target_gate @ psi_sup, "target", cfg, target_kind,
                             out_dir, obj.modes)
    _write_state_diagnostics(network.apply_network(best.final_params, psi_sup),
                             "learned", cfg, target_kind, out_dir, obj.modes)

    report = _report_skeleton(cfg)
    report["best_seed"] = best.seed
    report["metrics"] = best.report
    report["runs"] = [
        {"seed": r.seed, "best_cost": r.best_cost, "best_step": r.best_step,
         "wall_time_s": r.wall_time}
        for r in records
    ]
    report["wall_time_s"] = sum(r.wall_time for r in records)
    _write_json(report, os.path.join(out_dir, "report.json"))
    print(f"synthesize: best seed {best.seed}, cost {best.best_cost:.6g}, "
          f"average fidelity {best.report['average_fidelity']:.6f} -> {out_dir}")
    return EXIT_OK


def cmd_sweep(cfg: dict) -> int:
    out_dir = cfg["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    obj = objective_mod.build_objective(
        TargetSpec.from_dict(cfg["target"]),
        cfg["network"]["cutoff"],
        cfg["optimizer"]["penalty_weight"],
    )
    rows = optimizer.depth_sweep(
        obj, cfg["sweep"]["depths"], _shape_from(cfg), _adam_from(cfg),
        cfg["sweep"]["runs_per_depth"], _parallelism(cfg), cfg["allow_leaky"],
    )
    csv_path = os.path.join(out_dir, "depth_sweep.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("depth,mean_best_cost\n")
        for depth, cost in rows:
            fh.write(f"{depth},{cost:.17g}\n")
    report = _report_skeleton(cfg)
    report["rows"] = [{"depth": d, "mean_best_cost": c} for d, c in rows]
    _write_json(report, os.path.join(out_dir, "report.json"))
    print(f"sweep: {len(rows)} depths -> {csv_path}")
    return EXIT_OK


def cmd_analyze(params_path: str, cfg_path: str, overrides) -> int:
    located = cfg_path if os.path.exists(cfg_path) else (bundled_config_path(cfg_path) or cfg_path)
    raw = _load_json(located)
    task = raw.get("task")
    if task not in ("prepare", "synthesize"):
        raise ConfigError(f"task: analyze expects a prepare or synthesize config, got {task!r}")
    cfg = validate_config(raw, task)
    if overrides.output_dir is not None:
        cfg["output_dir"] = overrides.output_dir

    try:
        params = network.load_params_json(params_path)
    except FileNotFoundError:
        raise ConfigError(f"{params_path}: no such parameter file")
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"{params_path}: cannot parse parameter JSON ({exc})")
    if params.modes != cfg["network"]["modes"] or params.n_layers != cfg["network"]["layers"]:
        raise ConfigError(
            f"{params_path}: parameter shape (layers={params.n_layers}, modes="
            f"{params.modes}) does not match the config network section"
        )

    cutoff = overrides.cutoff if overrides.cutoff is not None else params.cutoff
    if cutoff < 2:
        raise ConfigError(f"--cutoff: must be >= 2, got {cutoff}")
    params = network.NetworkParams(params.layers, params.modes, cutoff)
    obj = objective_mod.build_objective(
        TargetSpec.from_dict(cfg["target"]), cutoff, cfg["optimizer"]["penalty_weight"]
    )

    out_dir = cfg["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    metrics = optimizer.evaluate_report(params, obj)
    target_kind = cfg["target"]["kind"]
    if obj.mode == "state_prep":
        psi = network.network_columns(params, 1)[:, 0]
        _write_state_diagnostics(obj.target_state, "target", cfg, target_kind, out_dir, obj.modes)
        _write_state_diagnostics(psi, "learned", cfg, target_kind, out_dir, obj.modes)
    else:
        learned_cols = network.network_on_basis(params, obj.input_indices)
        _write_heatmaps(obj, learned_cols, out_dir)
        psi_sup = _superposition_state(obj)
        _write_state_diagnostics(obj.target_gate @ psi_sup, "target", cfg, target_kind,
                                 out_dir, obj.modes)
        _write_state_diagnostics(network.apply_network(params, psi_sup), "learned",
                                 cfg, target_kind, out_dir, obj.modes)

    report = _report_skeleton(cfg)
    report["params_file"] = os.path.abspath(params_path)
    report["cutoff"] = cutoff
    report["metrics"] = metrics
    _write_json(report, os.path.join(out_dir, "analysis.json"))
    print(f"analyze: cost {metrics['cost']:.6g} -> {out_dir}/analysis.json")
    return EXIT_OK


# ------------------------------------------------------------------
# Entry point
# ------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cvforge",
        description="Learn short-depth continuous-variable circuits for "
                    "state preparation and gate synthesis.",
    )
    parser.add_argument("--version", action="version", version=f"cvforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        p.add_argument("--config", required=needs_config, help="experiment config JSON")
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--restarts", type=int, default=None)
        p.add_argument("--output-dir", dest="output_dir", default=None)
        p.add_argument("--allow-leaky", dest="allow_leaky", action="store_true",
                       help="run even if the target fails the cutoff check; "
                            "the margin is recorded in the report")

    common(sub.add_parser("prepare", help="train a circuit to prepare a target state"))
    common(sub.add_parser("synthesize", help="train a circuit to reproduce a target gate"))
    common(sub.add_parser("sweep", help="mean best cost across network depths"))
    analyze = sub.add_parser("analyze", help="re-evaluate saved circuit parameters")
    analyze.add_argument("--params", required=True, help="parameter JSON file")
    analyze.add_argument("--config", required=True, help="target/experiment config JSON")
    analyze.add_argument("--cutoff", type=int, default=None,
                         help="re-simulate at a different cutoff dimension")
    analyze.add_argument("--output-dir", dest="output_dir", default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args.params, args.config, args)
        cfg = load_config(args.config, args.command, args)
        if args.command == "prepare":
            return cmd_prepare(cfg)
        if args.command == "synthesize":
            return cmd_synthesize(cfg)
        return cmd_sweep(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CutoffError as exc:
        print(f"cutoff error: {exc}", file=sys.stderr)
        return EXIT_CUTOFF
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
