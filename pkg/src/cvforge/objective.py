"""Training costs, fidelity metrics and the cutoff adequacy check.

Training minimises phase-pinning costs of the form |z - 1| (state overlap
for state preparation, mean over input-output relations for gate
synthesis). Reported quality uses fidelities: |<t|psi>|^2 for states and,
for gates, either the process-fidelity relation F_avg = (F_proc d + 1)/(d+1)
when the target preserves its input block, or a Monte-Carlo estimate over
Haar-random inputs when it does not (the cubic phase gate maps the block
outside itself).
"""

from dataclasses import dataclass

import numpy as np

from . import targets as targets_mod
from .targets import TargetSpec, haar_unitary


__all__ = [
    "CutoffError",
    "ObjectiveSpec",
    "build_objective",
    "state_prep_cost",
    "gate_synth_cost",
    "state_fidelity",
    "process_fidelity",
    "average_fidelity",
    "mc_average_fidelity",
    "parameter_penalty",
    "restrict_state",
    "cutoff_check",
    "smallest_passing_cutoff",
    "target_cutoff_report",
    "is_block_preserving",
]

CUTOFF_EPSILON = 1e-4
REFERENCE_CUTOFF_MARGIN = 20


class CutoffError(ValueError):
    """Target leaks outside the simulated Fock space (Appendix-A-style rule)."""


# ------------------------------------------------------------------
# Costs
# ------------------------------------------------------------------

def state_prep_cost(psi_out: np.ndarray, psi_target: np.ndarray) -> float:
    """Phase-pinning state preparation cost |<target|out> - 1|."""
    if psi_out.shape != psi_target.shape:
        raise ValueError(f"dimension mismatch: {psi_out.shape} vs {psi_target.shape}")
    return float(abs(np.vdot(psi_target, psi_out) - 1.0))


def gate_synth_cost(columns: np.ndarray, v_target: np.ndarray, indices=None) -> float:
    """Mean of |<i|V^dag U|i> - 1| over the input-output relations.

    ``columns`` holds U applied to the relation basis states; ``indices``
    are their flat basis labels (default: the first columns.shape[1]
    states). With a single relation this reduces to state_prep_cost against
    V|0>.
    """
    if indices is None:
        indices = range(columns.shape[1])
    indices = list(indices)
    if columns.shape[0] != v_target.shape[0]:
        raise ValueError(
            f"shape mismatch: columns {columns.shape} vs target {v_target.shape}"
        )
    if len(indices) != columns.shape[1]:
        raise ValueError(f"{columns.shape[1]} columns but {len(indices)} relation indices")
    z = np.einsum("ij,ij->j", v_target[:, indices].conj(), columns)
    return float(np.mean(np.abs(z - 1.0)))


def parameter_penalty(params, weight: float) -> float:
    """Soft bound weight * sum(active^2) over r, alpha_re, alpha_im, kappa."""
    if weight < 0:
        raise ValueError(f"penalty weight must be >= 0, got {weight}")
    if weight == 0.0:
        return 0.0
    from .network import active_parameter_mask

    theta = params.to_flat()
    mask = active_parameter_mask(params.n_layers, params.modes)
    return weight * float(np.sum(theta[mask] ** 2))


# ------------------------------------------------------------------
# Fidelities
# ------------------------------------------------------------------

def state_fidelity(psi: np.ndarray, psi_target: np.ndarray) -> float:
    """|<target|psi>|^2, in [0, 1] for normalised inputs."""
    if psi.shape != psi_target.shape:
        raise ValueError(f"dimension mismatch: {psi.shape} vs {psi_target.shape}")
    return float(abs(np.vdot(psi_target, psi)) ** 2)


def process_fidelity(u: np.ndarray, v: np.ndarray, d: int, indices=None) -> float:
    """Overlap of the two maximally-entangled Choi-style states.

    Equals |(1/d) sum_j <j|V^dag U|j>|^2 over the d relation states, which
    is insensitive to a global phase but penalises relative column phases.
    ``u`` and ``v`` may be full square matrices or just the relation
    columns.
    """
    if indices is None:
        indices = range(d)
    indices = list(indices)
    if len(indices) != d:
        raise ValueError(f"d = {d} but {len(indices)} relation indices")
    u_cols = u[:, indices] if u.shape[1] != d else u
    v_cols = v[:, indices] if v.shape[1] != d else v
    z = np.einsum("ij,ij->j", v_cols.conj(), u_cols)
    return float(abs(np.mean(z)) ** 2)


def average_fidelity(f_process: float, d: int) -> float:
    """Average gate fidelity from process fidelity: (F d + 1) / (d + 1)."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return (f_process * d + 1.0) / (d + 1.0)


def mc_average_fidelity(u, v, d, n_samples=10_000, seed=0, indices=None):
    """Monte-Carlo average fidelity over Haar-random inputs in the d-block.

    For each sample a Haar d x d unitary W prepares the input W|0> inside
    the relation block; the sample fidelity is |<0|W^dag V^dag U W|0>|^2.
    Used when U maps the block outside itself, so the process-fidelity
    relation does not apply.

    Returns:
        tuple: (mean, standard error of the mean).
    """
    if n_samples < 1:
        raise ValueError(f"need at least one sample, got {n_samples}")
    if indices is None:
        indices = range(d)
    indices = list(indices)
    u_cols = u[:, indices] if u.shape[1] != d else u
    v_cols = v[:, indices] if v.shape[1] != d else v
    rng = np.random.default_rng(seed)
    fids = np.empty(n_samples)
    for i in range(n_samples):
        w0 = haar_unitary(d, rng)[:, 0]
        fids[i] = abs(np.vdot(v_cols @ w0, u_cols @ w0)) ** 2
    mean = float(np.mean(fids))
    stderr = float(np.std(fids, ddof=1) / np.sqrt(n_samples)) if n_samples > 1 else 0.0
    return mean, stderr


def is_block_preserving(v: np.ndarray, indices, tol: float = 1e-9) -> bool:
    """Whether V maps the relation block into itself (up to tol leakage)."""
    indices = list(indices)
    cols = v[:, indices]
    outside = np.delete(cols, indices, axis=0)
    return bool(np.max(np.abs(outside), initial=0.0) < tol)


# ------------------------------------------------------------------
# Cutoff adequacy (truncation rule with epsilon = 1e-4)
# ------------------------------------------------------------------

def restrict_state(vec: np.ndarray, ref_cutoff: int, new_cutoff: int, modes: int):
    """Components of a reference-cutoff state inside a smaller cutoff."""
    if new_cutoff > ref_cutoff:
        raise ValueError(f"new cutoff {new_cutoff} exceeds reference {ref_cutoff}")
    if modes == 1:
        return vec[:new_cutoff]
    return vec.reshape(ref_cutoff, ref_cutoff)[:new_cutoff, :new_cutoff].ravel()


def _restricted_norms(ref_states, ref_cutoff, new_cutoff, modes):
    ref_states = np.atleast_2d(np.asarray(ref_states).T).T  # columns = states
    return np.array(
        [
            np.linalg.norm(restrict_state(ref_states[:, i], ref_cutoff, new_cutoff, modes))
            for i in range(ref_states.shape[1])
        ]
    )


def cutoff_check(ref_states, new_cutoff, eps=CUTOFF_EPSILON, modes=1, ref_cutoff=None):
    """Truncation adequacy: every relation keeps 2-norm >= 1 - eps.

    Args:
        ref_states: state vector or matrix of state columns, built at a
            larger reference cutoff.
        new_cutoff (int): candidate per-mode cutoff to test.
        eps (float): tolerated norm loss.
        modes (int): mode count of the states.
        ref_cutoff (int | None): per-mode reference cutoff; inferred from
            the vector length when omitted.

    Returns:
        tuple: (passes, margin) with margin the smallest restricted norm.
    """
    length = np.asarray(ref_states).shape[0]
    if ref_cutoff is None:
        ref_cutoff = length if modes == 1 else round(np.sqrt(length))
    if ref_cutoff <= new_cutoff:
        raise ValueError(
            f"reference cutoff {ref_cutoff} must exceed the tested cutoff {new_cutoff}"
        )
    margin = float(np.min(_restricted_norms(ref_states, ref_cutoff, new_cutoff, modes)))
    return margin >= 1.0 - eps, margin


def smallest_passing_cutoff(ref_states, eps=CUTOFF_EPSILON, modes=1, ref_cutoff=None):
    """Smallest cutoff D with every restricted relation norm >= 1 - eps."""
    length = np.asarray(ref_states).shape[0]
    if ref_cutoff is None:
        ref_cutoff = length if modes == 1 else round(np.sqrt(length))
    for candidate in range(2, ref_cutoff):
        ok, _ = cutoff_check(ref_states, candidate, eps, modes, ref_cutoff)
        if ok:
            return candidate
    return ref_cutoff


@dataclass(frozen=True)
class CutoffReport:
    passes: bool
    margin: float
    smallest_passing: int
    cutoff: int
    epsilon: float


def _reference_relations(spec: TargetSpec, ref_cutoff: int) -> np.ndarray:
    if spec.is_gate:
        gate = targets_mod.resolve_gate(spec, ref_cutoff)
        idx = targets_mod.input_relation_indices(spec, ref_cutoff)
        return gate[:, list(idx)]
    return targets_mod.resolve_state(spec, ref_cutoff).reshape(-1, 1)


def target_cutoff_report(spec: TargetSpec, cutoff: int, eps=CUTOFF_EPSILON,
                         ref_margin=REFERENCE_CUTOFF_MARGIN) -> CutoffReport:
    """Run the truncation rule for a declarative target at a cutoff.

    The target is rebuilt at reference cutoff ``cutoff + ref_margin`` and
    every input-output relation is restricted back to ``cutoff``.
    """
    ref_cutoff = cutoff + ref_margin
    rel = _reference_relations(spec, ref_cutoff)
    ok, margin = cutoff_check(rel, cutoff, eps, spec.modes, ref_cutoff)
    smallest = smallest_passing_cutoff(rel, eps, spec.modes, ref_cutoff)
    return CutoffReport(ok, margin, smallest, cutoff, eps)


# ------------------------------------------------------------------
# Objective assembly
# ------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectiveSpec:
    """A resolved training objective over the network's output columns."""

    mode: str                      # "state_prep" | "gate_synth"
    target_state: np.ndarray = None
    target_gate: np.ndarray = None
    input_indices: tuple = (0,)
    penalty_weight: float = 0.0
    target_spec: TargetSpec = None
    cutoff: int = None
    modes: int = 1

    @property
    def n_relations(self) -> int:
        return len(self.input_indices)


def build_objective(spec: TargetSpec, cutoff: int, penalty_weight: float = 0.0):
    """Resolve a TargetSpec into a trainable ObjectiveSpec at a cutoff."""
    if spec.is_gate:
        gate = targets_mod.resolve_gate(spec, cutoff)
        idx = targets_mod.input_relation_indices(spec, cutoff)
        return ObjectiveSpec(
            mode="gate_synth",
            target_gate=gate,
            input_indices=idx,
            penalty_weight=penalty_weight,
            target_spec=spec,
            cutoff=cutoff,
            modes=spec.modes,
        )
    state = targets_mod.resolve_state(spec, cutoff)
    return ObjectiveSpec(
        mode="state_prep",
        target_state=state,
        input_indices=(0,),
        penalty_weight=penalty_weight,
        target_spec=spec,
        cutoff=cutoff,
        modes=spec.modes,
    )
