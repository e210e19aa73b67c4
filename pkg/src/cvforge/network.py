"""Layered continuous-variable circuit ansatz and its adjoint gradient.

One layer applies, in order: interferometer U1, per-mode squeezers S(r),
interferometer U2, per-mode displacements D(alpha), per-mode Kerr gates
K(kappa). An interferometer is a rectangular mesh of beamsplitters followed
by one rotation per mode; for a single mode it degenerates to the rotation
alone.

Parameters are held both structured (`NetworkParams`) and as a flat real
vector theta with a fixed ordering: layer-major, then per layer
u1.bs_theta, u1.bs_phi, u1.rotations, squeeze_r, u2.bs_theta, u2.bs_phi,
u2.rotations, disp_re, disp_im, kappa, each group mode-minor. Counts per
layer: 2N^2 + 4N reals (6 for one mode, 16 for two).

Gradients of scalar costs are computed in adjoint reverse mode: the forward
pass caches the state after every elementary gate, the backward pass pulls
the cost co-state through gate adjoints and contracts it with per-gate
parameter derivatives, so one backward sweep yields the full gradient.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import fock, gates


__all__ = [
    "Interferometer",
    "LayerParams",
    "NetworkParams",
    "n_params_per_layer",
    "init_params",
    "apply_layer",
    "apply_network",
    "network_columns",
    "network_on_basis",
    "network_unitary",
    "cost_and_gradient",
    "cost_only",
    "save_params_json",
    "load_params_json",
]


def _check_modes(modes: int):
    if modes not in (1, 2):
        raise ValueError(f"networks support 1 or 2 modes, got {modes}")


def mesh_pairs(modes: int):
    """Beamsplitter mode pairs of the rectangular interferometer mesh.

    Degenerates to no beamsplitters for one mode and a single (0, 1) pair
    for two; the column sweep is written out so the parameter layout
    generalises, but gate application is only wired for modes <= 2.
    """
    pairs = []
    for col in range(modes):
        start = col % 2
        pairs.extend((i, i + 1) for i in range(start, modes - 1, 2))
    return pairs


def n_beamsplitters(modes: int) -> int:
    return modes * (modes - 1) // 2


def n_params_per_layer(modes: int) -> int:
    return 2 * modes * modes + 4 * modes


@dataclass(frozen=True)
class Interferometer:
    bs_theta: np.ndarray
    bs_phi: np.ndarray
    rotations: np.ndarray


@dataclass(frozen=True)
class LayerParams:
    u1: Interferometer
    squeeze_r: np.ndarray
    u2: Interferometer
    disp_re: np.ndarray
    disp_im: np.ndarray
    kappa: np.ndarray


@dataclass(frozen=True)
class NetworkParams:
    """Full parameter set of an L-layer network at a given cutoff."""

    layers: tuple
    modes: int
    cutoff: int

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def total_dim(self) -> int:
        return self.cutoff ** self.modes

    def to_flat(self) -> np.ndarray:
        chunks = []
        for lp in self.layers:
            chunks.extend(
                [
                    lp.u1.bs_theta, lp.u1.bs_phi, lp.u1.rotations,
                    lp.squeeze_r,
                    lp.u2.bs_theta, lp.u2.bs_phi, lp.u2.rotations,
                    lp.disp_re, lp.disp_im, lp.kappa,
                ]
            )
        return np.concatenate(chunks) if chunks else np.zeros(0)

    @classmethod
    def from_flat(cls, theta, n_layers: int, modes: int, cutoff: int):
        _check_modes(modes)
        theta = np.asarray(theta, dtype=float)
        per = n_params_per_layer(modes)
        if theta.shape != (n_layers * per,):
            raise ValueError(
                f"flat vector has length {theta.size}, expected {n_layers * per}"
            )
        nbs = n_beamsplitters(modes)
        layers = []
        pos = 0

        def take(k):
            nonlocal pos
            out = theta[pos:pos + k].copy()
            pos += k
            return out

        for _ in range(n_layers):
            u1 = Interferometer(take(nbs), take(nbs), take(modes))
            r = take(modes)
            u2 = Interferometer(take(nbs), take(nbs), take(modes))
            layers.append(
                LayerParams(u1, r, u2, take(modes), take(modes), take(modes))
            )
        return cls(tuple(layers), modes, cutoff)

    def to_json_dict(self) -> dict:
        def iferom(u):
            return {
                "bs_theta": list(u.bs_theta),
                "bs_phi": list(u.bs_phi),
                "rotations": list(u.rotations),
            }

        return {
            "modes": self.modes,
            "cutoff": self.cutoff,
            "layers": [
                {
                    "u1": iferom(lp.u1),
                    "r": list(lp.squeeze_r),
                    "u2": iferom(lp.u2),
                    "alpha_re": list(lp.disp_re),
                    "alpha_im": list(lp.disp_im),
                    "kappa": list(lp.kappa),
                }
                for lp in self.layers
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict):
        modes = int(obj["modes"])
        cutoff = int(obj["cutoff"])
        nbs = n_beamsplitters(modes)

        def iferom(u):
            itf = Interferometer(
                np.asarray(u["bs_theta"], dtype=float),
                np.asarray(u["bs_phi"], dtype=float),
                np.asarray(u["rotations"], dtype=float),
            )
            if itf.bs_theta.shape != (nbs,) or itf.rotations.shape != (modes,):
                raise ValueError("interferometer arrays do not match declared modes")
            return itf

        layers = []
        for entry in obj["layers"]:
            arrays = {
                key: np.asarray(entry[key], dtype=float)
                for key in ("r", "alpha_re", "alpha_im", "kappa")
            }
            for key, arr in arrays.items():
                if arr.shape != (modes,):
                    raise ValueError(f"layer field {key!r} does not match declared modes")
            layers.append(
                LayerParams(
                    iferom(entry["u1"]), arrays["r"], iferom(entry["u2"]),
                    arrays["alpha_re"], arrays["alpha_im"], arrays["kappa"],
                )
            )
        return cls(tuple(layers), modes, cutoff)


def save_params_json(params: NetworkParams, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(params.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_params_json(path) -> NetworkParams:
    with open(path, encoding="utf-8") as fh:
        return NetworkParams.from_json_dict(json.load(fh))


def init_params(
    n_layers: int,
    modes: int,
    cutoff: int,
    seed: int,
    active_std: float = 0.001,
    phase_range: tuple = (0.0, 2.0 * np.pi),
) -> NetworkParams:
    """Random initial parameters, deterministic for a given seed (PCG64).

    Active parameters (squeeze r, displacement components, Kerr kappa) are
    drawn Normal(0, active_std^2) so the initial state stays close to the
    vacuum; beamsplitter angles and every phase are uniform on phase_range.
    """
    if n_layers < 1:
        raise ValueError(f"need at least one layer, got {n_layers}")
    _check_modes(modes)
    rng = np.random.default_rng(seed)
    lo, hi = phase_range
    nbs = n_beamsplitters(modes)

    def phases(k):
        return rng.uniform(lo, hi, size=k)

    def active(k):
        return active_std * rng.standard_normal(k)

    layers = []
    for _ in range(n_layers):
        u1 = Interferometer(phases(nbs), phases(nbs), phases(modes))
        r = active(modes)
        u2 = Interferometer(phases(nbs), phases(nbs), phases(modes))
        layers.append(LayerParams(u1, r, u2, active(modes), active(modes), active(modes)))
    return NetworkParams(tuple(layers), modes, cutoff)


def active_parameter_mask(n_layers: int, modes: int) -> np.ndarray:
    """Boolean mask of the active (photon-number changing) flat parameters."""
    nbs = n_beamsplitters(modes)
    layer_mask = np.concatenate(
        [
            np.zeros(2 * nbs + modes, dtype=bool),   # u1
            np.ones(modes, dtype=bool),              # squeeze_r
            np.zeros(2 * nbs + modes, dtype=bool),   # u2
            np.ones(3 * modes, dtype=bool),          # disp_re, disp_im, kappa
        ]
    )
    return np.tile(layer_mask, n_layers)


# ------------------------------------------------------------------
# Elementary gate sequence
# ------------------------------------------------------------------

class _DiagGate:
    __slots__ = ("diag", "derivs")

    def __init__(self, diag, derivs):
        self.diag = diag
        self.derivs = derivs  # list of (flat_index, diag_derivative)

    def apply(self, psi):
        return self.diag[:, None] * psi

    def apply_adjoint(self, lam):
        return self.diag.conj()[:, None] * lam

    def deriv_apply(self, dval, psi):
        return dval[:, None] * psi


class _DenseGate:
    __slots__ = ("mat", "derivs")

    def __init__(self, mat, derivs):
        self.mat = mat
        self.derivs = derivs  # list of (flat_index, dense_derivative)

    def apply(self, psi):
        return self.mat @ psi

    def apply_adjoint(self, lam):
        return self.mat.conj().T @ lam

    def deriv_apply(self, dval, psi):
        return dval @ psi


def _mode_numbers(modes: int, cutoff: int, mode: int) -> np.ndarray:
    n = np.arange(cutoff, dtype=float)
    if modes == 1:
        return n
    return np.repeat(n, cutoff) if mode == 0 else np.tile(n, cutoff)


def _embed_diag(diag: np.ndarray, modes: int, cutoff: int, mode: int) -> np.ndarray:
    if modes == 1:
        return diag
    return np.repeat(diag, cutoff) if mode == 0 else np.tile(diag, cutoff)


def _layer_gates(lp: LayerParams, modes, cutoff, base, with_derivs):
    """Elementary gates of one layer, in application order.

    ``base`` is the layer's offset into the flat parameter vector; each gate
    carries the flat indices of its parameters so the backward pass can
    scatter derivative contributions directly.
    """
    nbs = n_beamsplitters(modes)
    pairs = mesh_pairs(modes)
    seq = []

    def interferometer(theta_off, phi_off, rot_off, itf):
        for k, _pair in enumerate(pairs):
            if with_derivs:
                u, d_th, d_ph = gates.beamsplitter_with_derivatives(
                    itf.bs_theta[k], itf.bs_phi[k], cutoff
                )
                derivs = [(base + theta_off + k, d_th), (base + phi_off + k, d_ph)]
            else:
                u = gates.beamsplitter(itf.bs_theta[k], itf.bs_phi[k], cutoff)
                derivs = []
            seq.append(_DenseGate(u, derivs))
        for m in range(modes):
            diag = _embed_diag(gates.rotation_diag(itf.rotations[m], cutoff),
                               modes, cutoff, m)
            derivs = []
            if with_derivs:
                derivs = [(base + rot_off + m,
                           1j * _mode_numbers(modes, cutoff, m) * diag)]
            seq.append(_DiagGate(diag, derivs))

    # u1
    interferometer(0, nbs, 2 * nbs, lp.u1)
    off = 2 * nbs + modes
    # squeezers
    for m in range(modes):
        if with_derivs:
            u, du = gates.squeezing_with_derivatives(lp.squeeze_r[m], cutoff)
            derivs = [(base + off + m, fock.embed_single(du, m, modes))]
        else:
            u = gates.squeezing(lp.squeeze_r[m], cutoff)
            derivs = []
        seq.append(_DenseGate(fock.embed_single(u, m, modes), derivs))
    off += modes
    # u2
    interferometer(off, off + nbs, off + 2 * nbs, lp.u2)
    off += 2 * nbs + modes
    # displacements
    for m in range(modes):
        if with_derivs:
            u, d_re, d_im = gates.displacement_with_derivatives(
                lp.disp_re[m], lp.disp_im[m], cutoff
            )
            derivs = [
                (base + off + m, fock.embed_single(d_re, m, modes)),
                (base + off + modes + m, fock.embed_single(d_im, m, modes)),
            ]
        else:
            u = gates.displacement(lp.disp_re[m], lp.disp_im[m], cutoff)
            derivs = []
        seq.append(_DenseGate(fock.embed_single(u, m, modes), derivs))
    off += 2 * modes
    # Kerr
    for m in range(modes):
        numbers = _mode_numbers(modes, cutoff, m)
        diag = _embed_diag(gates.kerr_diag(lp.kappa[m], cutoff), modes, cutoff, m)
        derivs = []
        if with_derivs:
            derivs = [(base + off + m, 1j * numbers * numbers * diag)]
        seq.append(_DiagGate(diag, derivs))
    return seq


def _gate_sequence(params: NetworkParams, with_derivs: bool):
    per = n_params_per_layer(params.modes)
    seq = []
    for i, lp in enumerate(params.layers):
        seq.extend(_layer_gates(lp, params.modes, params.cutoff, i * per, with_derivs))
    return seq


# ------------------------------------------------------------------
# Forward evaluation
# ------------------------------------------------------------------

def apply_layer(state: np.ndarray, lp: LayerParams, modes: int, cutoff: int) -> np.ndarray:
    """Apply one layer to a state vector."""
    if state.shape != (cutoff ** modes,):
        raise ValueError(
            f"state has shape {state.shape}, expected ({cutoff ** modes},)"
        )
    psi = state.astype(complex).reshape(-1, 1)
    for gate in _layer_gates(lp, modes, cutoff, 0, with_derivs=False):
        psi = gate.apply(psi)
    return psi[:, 0]


def apply_network(params: NetworkParams, state: np.ndarray) -> np.ndarray:
    """Apply the full network to a state vector."""
    psi = state
    for lp in params.layers:
        psi = apply_layer(psi, lp, params.modes, params.cutoff)
    return psi


def network_on_basis(params: NetworkParams, indices) -> np.ndarray:
    """Network applied to the given Fock basis columns, as a matrix."""
    total = params.total_dim
    indices = list(indices)
    psi = np.zeros((total, len(indices)), dtype=complex)
    for col, idx in enumerate(indices):
        if not 0 <= idx < total:
            raise ValueError(f"basis index {idx} out of range for dim {total}")
        psi[idx, col] = 1.0
    for gate in _gate_sequence(params, with_derivs=False):
        psi = gate.apply(psi)
    return psi


def network_columns(params: NetworkParams, d: int) -> np.ndarray:
    """First d columns of the network unitary (lexicographic basis order)."""
    if not 1 <= d <= params.total_dim:
        raise ValueError(f"d = {d} out of range for total dimension {params.total_dim}")
    return network_on_basis(params, range(d))


def network_unitary(params: NetworkParams) -> np.ndarray:
    """The full network unitary as a dense matrix."""
    return network_on_basis(params, range(params.total_dim))


# ------------------------------------------------------------------
# Cost and adjoint gradient
# ------------------------------------------------------------------

_SUBGRADIENT_GUARD = 1e-12


def _objective_columns(params: NetworkParams, objective):
    """Input basis indices and matching target columns for an objective."""
    total = params.total_dim
    if objective.mode == "state_prep":
        target = np.asarray(objective.target_state)
        if target.shape != (total,):
            raise ValueError(
                f"target state has shape {target.shape}, expected ({total},)"
            )
        return (0,), target.reshape(-1, 1)
    if objective.mode == "gate_synth":
        gate = np.asarray(objective.target_gate)
        if gate.shape[0] != total:
            raise ValueError(
                f"target gate has {gate.shape[0]} rows, expected {total}"
            )
        indices = tuple(objective.input_indices)
        if any(not 0 <= i < total for i in indices):
            raise ValueError("input relation index out of range")
        return indices, gate[:, list(indices)]
    raise ValueError(f"unknown objective mode {objective.mode!r}")


def _raw_cost(z: np.ndarray) -> float:
    return float(np.mean(np.abs(z - 1.0)))


def cost_only(params: NetworkParams, objective) -> float:
    """Training cost without the gradient (used by finite-difference checks)."""
    indices, targets = _objective_columns(params, objective)
    psi = network_on_basis(params, indices)
    z = np.einsum("ij,ij->j", targets.conj(), psi)
    cost = _raw_cost(z)
    weight = getattr(objective, "penalty_weight", 0.0)
    if weight > 0.0:
        theta = params.to_flat()
        mask = active_parameter_mask(params.n_layers, params.modes)
        cost += weight * float(np.sum(theta[mask] ** 2))
    return cost


def cost_and_gradient(params: NetworkParams, objective):
    """Cost and its gradient with respect to every flat parameter.

    The cost is the phase-pinning mean of |<target_i|U|i> - 1| over the
    objective's input-output relations (one relation for state preparation),
    plus the optional quadratic penalty on active parameters. At a relation
    with z exactly 1 the cost term is non-differentiable and the zero
    subgradient is used; that point is the optimum, so any subgradient is
    valid and zero terminates cleanly.

    Returns:
        tuple: (cost, gradient) with gradient a real vector matching
        ``params.to_flat()``.
    """
    indices, targets = _objective_columns(params, objective)
    seq = _gate_sequence(params, with_derivs=True)

    psi = np.zeros((params.total_dim, len(indices)), dtype=complex)
    for col, idx in enumerate(indices):
        psi[idx, col] = 1.0
    cache = [psi]
    for gate in seq:
        psi = gate.apply(psi)
        cache.append(psi)

    z = np.einsum("ij,ij->j", targets.conj(), cache[-1])
    cost = _raw_cost(z)

    # d|z-1|/dtheta = Re[(z-1)^* dz/dtheta] / |z-1|, folded into the co-state
    resid = z - 1.0
    mag = np.abs(resid)
    coef = np.zeros_like(z)
    ok = mag > _SUBGRADIENT_GUARD
    coef[ok] = resid[ok].conj() / (mag[ok] * len(indices))

    grad = np.zeros(params.n_layers * n_params_per_layer(params.modes))
    lam = targets * coef.conj()[None, :]
    for j in range(len(seq) - 1, -1, -1):
        gate = seq[j]
        psi_prev = cache[j]
        for flat_idx, dval in gate.derivs:
            grad[flat_idx] += np.sum(
                (lam.conj() * gate.deriv_apply(dval, psi_prev)).real
            )
        lam = gate.apply_adjoint(lam)

    weight = getattr(objective, "penalty_weight", 0.0)
    if weight > 0.0:
        theta = params.to_flat()
        mask = active_parameter_mask(params.n_layers, params.modes)
        cost += weight * float(np.sum(theta[mask] ** 2))
        grad[mask] += 2.0 * weight * theta[mask]
    return cost, grad
