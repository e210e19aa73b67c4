"""Adam descent over network parameters, restarts and depth sweeps.

A run trains for a fixed step budget and keeps the best-seen parameters
rather than stopping early, which makes runtimes predictable and matches
best-of-N restart selection. Everything is deterministic given (seed,
config, target): restart seeds are seed, seed+1, ..., and aggregation is
independent of restart execution order.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import network, objective as objective_mod


__all__ = [
    "AdamConfig",
    "NetworkShape",
    "RunRecord",
    "NumericalError",
    "adam_step",
    "run",
    "multi_run",
    "depth_sweep",
]


class NumericalError(RuntimeError):
    """Training produced a non-finite cost."""


@dataclass(frozen=True)
class AdamConfig:
    steps: int
    learning_rate: float = 0.025
    beta1: float = 0.9
    beta2: float = 0.999
    eps_hat: float = 1e-8
    penalty_weight: float = 0.0
    seed: int = 0
    active_std: float = 0.001

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.learning_rate}")
        for name in ("beta1", "beta2"):
            val = getattr(self, name)
            if not 0.0 <= val < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {val}")


@dataclass(frozen=True)
class NetworkShape:
    layers: int
    modes: int
    cutoff: int


@dataclass
class RunRecord:
    """One optimisation run: config, trace, best parameters, metrics."""

    config: AdamConfig
    shape: NetworkShape
    seed: int
    cost_trace: np.ndarray
    best_step: int
    best_cost: float
    final_params: network.NetworkParams
    report: dict
    wall_time: float

    def summary_dict(self) -> dict:
        """JSON-ready record without the trace (emitted separately as CSV)."""
        return {
            "seed": self.seed,
            "steps": self.config.steps,
            "learning_rate": self.config.learning_rate,
            "beta1": self.config.beta1,
            "beta2": self.config.beta2,
            "eps_hat": self.config.eps_hat,
            "penalty_weight": self.config.penalty_weight,
            "layers": self.shape.layers,
            "modes": self.shape.modes,
            "cutoff": self.shape.cutoff,
            "best_step": self.best_step,
            "best_cost": self.best_cost,
            "report": dict(self.report),
            "wall_time_s": self.wall_time,
        }


def adam_step(theta, grad, moment_state, config: AdamConfig, step_index: int):
    """One Adam update (0-based step_index; bias corrections use t = index+1).

    Returns the new parameter vector and the new (m, v) moment state; the
    inputs are not modified.
    """
    if theta.shape != grad.shape:
        raise ValueError(f"shape mismatch: theta {theta.shape} vs grad {grad.shape}")
    m, v = moment_state
    t = step_index + 1
    m = config.beta1 * m + (1.0 - config.beta1) * grad
    v = config.beta2 * v + (1.0 - config.beta2) * grad * grad
    m_hat = m / (1.0 - config.beta1 ** t)
    v_hat = v / (1.0 - config.beta2 ** t)
    theta = theta - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.eps_hat)
    return theta, (m, v)


def _max_active_magnitudes(params: network.NetworkParams) -> dict:
    disp = max(
        float(np.max(np.hypot(lp.disp_re, lp.disp_im))) for lp in params.layers
    )
    return {
        "max_abs_displacement": disp,
        "max_abs_squeezing": max(
            float(np.max(np.abs(lp.squeeze_r))) for lp in params.layers
        ),
        "max_abs_kerr": max(float(np.max(np.abs(lp.kappa))) for lp in params.layers),
    }


MC_FIDELITY_SAMPLES = 10_000


def evaluate_report(params: network.NetworkParams, objective) -> dict:
    """Cost, fidelity metrics and max gate magnitudes for fixed parameters.

    Gate synthesis reports both the process fidelity and an average
    fidelity, computed from the process-fidelity relation when the target
    preserves its input block and by Monte-Carlo sampling otherwise.
    """
    report = {"cost": network.cost_only(params, objective)}
    if objective.mode == "state_prep":
        psi = network.network_columns(params, 1)[:, 0]
        report["state_fidelity"] = objective_mod.state_fidelity(
            psi, objective.target_state
        )
    else:
        indices = list(objective.input_indices)
        d = len(indices)
        columns = network.network_on_basis(params, indices)
        target_cols = objective.target_gate[:, indices]
        f_proc = objective_mod.process_fidelity(columns, target_cols, d)
        report["process_fidelity"] = f_proc
        if objective_mod.is_block_preserving(objective.target_gate, indices):
            report["average_fidelity"] = objective_mod.average_fidelity(f_proc, d)
            report["fidelity_method"] = "process_relation"
        else:
            mean, stderr = objective_mod.mc_average_fidelity(
                columns, target_cols, d, MC_FIDELITY_SAMPLES, seed=0
            )
            report["average_fidelity"] = mean
            report["average_fidelity_stderr"] = stderr
            report["fidelity_method"] = "monte_carlo"
    report.update(_max_active_magnitudes(params))
    return report


def check_cutoff_precondition(objective, allow_leaky: bool = False) -> dict:
    """Appendix-style truncation rule for the objective's target.

    Raises CutoffError naming the smallest passing cutoff unless the check
    passes or ``allow_leaky`` is set; always returns the margin record.
    """
    spec = getattr(objective, "target_spec", None)
    if spec is None:
        return {}
    rep = objective_mod.target_cutoff_report(spec, objective.cutoff)
    record = {
        "cutoff_margin": rep.margin,
        "cutoff_passes": rep.passes,
        "smallest_passing_cutoff": rep.smallest_passing,
    }
    if not rep.passes and not allow_leaky:
        raise objective_mod.CutoffError(
            f"cutoff {objective.cutoff} keeps only {rep.margin:.6f} of the target "
            f"norm (needs >= {1 - rep.epsilon}); smallest passing cutoff is "
            f"{rep.smallest_passing}"
        )
    return record


def run(objective, shape: NetworkShape, config: AdamConfig,
        allow_leaky: bool = False) -> RunRecord:
    """Train one network against the objective and keep the best-seen step.

    The cost trace has one entry per step, evaluated before that step's
    update; with steps = 0 the record reports the initialisation's cost.
    """
    cutoff_record = check_cutoff_precondition(objective, allow_leaky)
    start = time.perf_counter()
    params0 = network.init_params(
        shape.layers, shape.modes, shape.cutoff, config.seed, config.active_std
    )
    theta = params0.to_flat()
    moments = (np.zeros_like(theta), np.zeros_like(theta))

    trace = np.empty(config.steps)
    best_cost = np.inf
    best_theta = theta.copy()
    best_step = 0
    for step in range(config.steps):
        params = network.NetworkParams.from_flat(
            theta, shape.layers, shape.modes, shape.cutoff
        )
        cost, grad = network.cost_and_gradient(params, objective)
        if not np.isfinite(cost):
            raise NumericalError(f"non-finite cost at step {step} (seed {config.seed})")
        trace[step] = cost
        if cost < best_cost:
            best_cost, best_theta, best_step = cost, theta.copy(), step
        theta, moments = adam_step(theta, grad, moments, config, step)

    best_params = network.NetworkParams.from_flat(
        best_theta, shape.layers, shape.modes, shape.cutoff
    )
    if config.steps == 0:
        best_cost = network.cost_only(best_params, objective)
    report = evaluate_report(best_params, objective)
    report.update(cutoff_record)
    return RunRecord(
        config=config,
        shape=shape,
        seed=config.seed,
        cost_trace=trace,
        best_step=best_step,
        best_cost=float(best_cost),
        final_params=best_params,
        report=report,
        wall_time=time.perf_counter() - start,
    )


def multi_run(objective, shape: NetworkShape, config: AdamConfig,
              n_restarts: int, parallelism: int = 1, allow_leaky: bool = False):
    """Independent restarts with seeds seed+0 ... seed+n-1; best cost wins.

    The winner is selected by lowest best cost (ties broken by seed), so the
    result does not depend on execution order or the level of parallelism.
    """
    if n_restarts < 1:
        raise ValueError(f"need at least one restart, got {n_restarts}")
    configs = [replace(config, seed=config.seed + i) for i in range(n_restarts)]
    if parallelism > 1 and n_restarts > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            records = list(
                pool.map(lambda c: run(objective, shape, c, allow_leaky), configs)
            )
    else:
        records = [run(objective, shape, c, allow_leaky) for c in configs]
    best = min(records, key=lambda r: (r.best_cost, r.seed))
    return best, records


def depth_sweep(objective, depths, shape: NetworkShape, config: AdamConfig,
                runs_per_depth: int, parallelism: int = 1, allow_leaky: bool = False):
    """Mean best cost per depth, averaged over independent restarts.

    Returns a list of (depth, mean_best_cost) rows, one per requested depth.
    """
    depths = list(depths)
    if not depths:
        raise ValueError("depth list is empty")
    rows = []
    for depth in depths:
        _, records = multi_run(
            objective, replace(shape, layers=depth), config,
            runs_per_depth, parallelism, allow_leaky,
        )
        rows.append((depth, float(np.mean([r.best_cost for r in records]))))
    return rows
