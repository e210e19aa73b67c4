"""Target states and target unitaries, built at a requested cutoff.

All state constructors return unit-norm complex vectors; all gate
constructors return matrices that are unitary on their declared support
block. Seeded constructors use numpy's PCG64 generator
(``np.random.default_rng``), so a given seed reproduces the same target on
any platform.
"""

from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .gates import cross_kerr as cross_kerr_gate
from .gates import cubic_phase as cubic_phase_gate


__all__ = [
    "single_photon",
    "fock_state",
    "coherent",
    "on_state",
    "hex_gkp",
    "HexGkpCertificate",
    "random_state",
    "noon",
    "qft_gate",
    "haar_unitary",
    "haar_gate",
    "cubic_phase_gate",
    "cross_kerr_gate",
    "TargetSpec",
    "resolve_state",
    "resolve_gate",
    "input_relation_indices",
]


def single_photon(cutoff: int) -> np.ndarray:
    """Single photon state |1>."""
    return fock_state(1, cutoff)


def fock_state(n: int, cutoff: int) -> np.ndarray:
    """Fock state |n> at the given cutoff."""
    if not 0 <= n < cutoff:
        raise ValueError(f"Fock index {n} needs cutoff > {n}, got {cutoff}")
    state = np.zeros(cutoff, dtype=complex)
    state[n] = 1.0
    return state


def _coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Unnormalised truncation of <n|alpha> = e^{-|a|^2/2} a^n / sqrt(n!)."""
    amps = np.empty(cutoff, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    return amps


def coherent(alpha: complex, cutoff: int) -> np.ndarray:
    """Coherent state |alpha>, renormalised after truncation."""
    amps = _coherent_amplitudes(complex(alpha), cutoff)
    return amps / np.linalg.norm(amps)


def on_state(a: complex, n: int, cutoff: int) -> np.ndarray:
    """Superposition (|0> + a|N>) / sqrt(1 + |a|^2).

    Args:
        a (complex): amplitude of the N-photon component.
        n (int): the occupied Fock level N.
        cutoff (int): Fock truncation, must exceed n.
    """
    if cutoff <= n:
        raise ValueError(f"ON state with N = {n} needs cutoff > {n}, got {cutoff}")
    state = np.zeros(cutoff, dtype=complex)
    state[0] = 1.0
    state[n] = a
    return state / np.linalg.norm(state)


def noon(n: int, cutoff: int) -> np.ndarray:
    """Two-mode NOON state (|N,0> + |0,N>) / sqrt(2), lexicographic order."""
    if cutoff <= n:
        raise ValueError(f"NOON state with N = {n} needs cutoff > {n}, got {cutoff}")
    state = np.zeros(cutoff * cutoff, dtype=complex)
    state[n * cutoff] = 1.0
    state[n] = 1.0
    return state / np.sqrt(2.0)


def random_state(d: int, seed: int, cutoff: int) -> np.ndarray:
    """Random state on the first d Fock levels, Eq.-style (a_n + i b_n)/norm.

    The real parts a_n are drawn first, then the imaginary parts b_n, both
    standard normal from PCG64(seed); amplitudes are normalised to unit
    2-norm. The same seed gives the same d-level core at every cutoff.
    """
    if d > cutoff:
        raise ValueError(f"support d = {d} exceeds cutoff {cutoff}")
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    state = np.zeros(cutoff, dtype=complex)
    state[:d] = amps / np.linalg.norm(amps)
    return state


@dataclass(frozen=True)
class HexGkpCertificate:
    """Lattice-sum convergence record for a hexagonal GKP construction."""

    radius: int
    tail_norm: float       # next shell's contribution, relative to pre-norm
    pre_norm: float        # 2-norm of the enveloped sum before normalisation


def _gkp_displacements(mu, d_code, delta_unused, n1, n2):
    # Each lattice term is a product of two displacements; combined via
    # Baker-Campbell-Hausdorff into one coherent state with a scalar phase.
    c = np.sqrt(4.0 * np.pi / (np.sqrt(3.0) * d_code))
    s1 = c * (d_code * n1 + mu)
    beta1 = s1 * (np.sqrt(3.0) / 2.0 - 0.5j)
    beta2 = 1j * c * n2
    phase = np.exp(0.5 * (beta1 * np.conj(beta2) - np.conj(beta1) * beta2))
    return phase, beta1 + beta2


def hex_gkp(mu, d_code, delta, cutoff, radius=None, with_certificate=False):
    """Finite-energy hexagonal-lattice GKP state in the Fock basis.

    Evaluates the double lattice sum of displaced vacua as a sum of coherent
    states (closed-form Fock amplitudes, BCH phase per term), applies the
    energy envelope e^{-delta^2 n} componentwise and normalises. With
    ``radius=None`` the lattice radius grows until the next shell of terms
    contributes less than 1e-10 of the accumulated norm.

    Args:
        mu (int): logical index, 0 <= mu < d_code.
        d_code (int): code space dimension of the lattice.
        delta (float): envelope width, > 0.
        cutoff (int): Fock truncation of the returned state.
        radius (int | None): fixed lattice radius, or None for adaptive.
        with_certificate (bool): also return a HexGkpCertificate.

    Returns:
        array, or (array, HexGkpCertificate) when requested.
    """
    if not 0 <= mu < d_code:
        raise ValueError(f"mu = {mu} must satisfy 0 <= mu < d_code = {d_code}")
    if delta <= 0:
        raise ValueError(f"envelope delta must be positive, got {delta}")
    if radius is not None and radius < 1:
        raise ValueError(f"lattice radius must be >= 1, got {radius}")

    envelope = np.exp(-delta * delta * np.arange(cutoff))
    tol = 1e-10
    max_radius = 200

    def shell(r):
        contrib = np.zeros(cutoff, dtype=complex)
        if r == 0:
            points = [(0, 0)]
        else:
            points = [(n1, n2) for n1 in range(-r, r + 1) for n2 in range(-r, r + 1)
                      if max(abs(n1), abs(n2)) == r]
        for n1, n2 in points:
            phase, beta = _gkp_displacements(mu, d_code, delta, n1, n2)
            contrib += phase * _coherent_amplitudes(beta, cutoff)
        return envelope * contrib

    accum = shell(0)
    r = 0
    while True:
        nxt = shell(r + 1)
        tail = float(np.linalg.norm(nxt))
        if radius is None:
            if tail < tol * np.linalg.norm(accum):
                break
            if r + 1 > max_radius:
                raise RuntimeError(
                    f"hex GKP lattice sum did not converge within radius {max_radius}"
                )
        elif r + 1 > radius:
            break
        accum += nxt
        r += 1

    pre_norm = float(np.linalg.norm(accum))
    cert = HexGkpCertificate(radius=r, tail_norm=tail / pre_norm, pre_norm=pre_norm)
    state = accum / pre_norm
    return (state, cert) if with_certificate else state


def qft_gate(d: int, cutoff: int) -> np.ndarray:
    """Fourier gate on the first d Fock levels, identity on the rest.

    The d x d block has entries e^{2 pi i m n / d} / sqrt(d); the 1/sqrt(d)
    prefactor makes the block unitary.
    """
    if d > cutoff:
        raise ValueError(f"block size d = {d} exceeds cutoff {cutoff}")
    gate = np.eye(cutoff, dtype=complex)
    mn = np.outer(np.arange(d), np.arange(d))
    gate[:d, :d] = np.exp(2j * np.pi * mn / d) / np.sqrt(d)
    return gate


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary via QR of a complex Ginibre matrix.

    The R-diagonal phases are pushed into Q (Q <- Q diag(r_jj / |r_jj|)),
    which makes the QR output Haar-uniform.
    """
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_gate(d: int, seed: int, cutoff: int) -> np.ndarray:
    """Embedded Haar-random unitary on the first d Fock levels (PCG64 seed)."""
    if d > cutoff:
        raise ValueError(f"block size d = {d} exceeds cutoff {cutoff}")
    gate = np.eye(cutoff, dtype=complex)
    gate[:d, :d] = haar_unitary(d, np.random.default_rng(seed))
    return gate


# ------------------------------------------------------------------
# Declarative target specification
# ------------------------------------------------------------------

_STATE_KINDS = {
    "single_photon": (),
    "fock_n": ("n",),
    "on_state": ("a", "n"),
    "hex_gkp": ("mu", "d_code", "delta"),
    "random_state": ("d", "seed"),
    "noon": ("n",),
    "coherent": ("alpha",),
}
_GATE_KINDS = {
    "cubic_phase_gate": ("gamma", "d"),
    "qft_gate": ("d",),
    "haar_gate": ("d", "seed"),
    "cross_kerr_gate": ("kappa", "d"),
}
_OPTIONAL = {"hex_gkp": ("radius",)}
_TWO_MODE_KINDS = {"noon", "cross_kerr_gate"}


def _as_complex(value, field):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(value[0], value[1])
    raise ValueError(f"{field}: expected a number or [re, im] pair, got {value!r}")


@dataclass(frozen=True)
class TargetSpec:
    """Declarative description of a target state or gate.

    ``params`` holds the kind-specific values; for JSON configs they sit
    next to "kind" at the top level, e.g.
    {"kind": "hex_gkp", "mu": 1, "d_code": 2, "delta": 0.3}.
    """

    kind: str
    params: MappingProxyType

    def __init__(self, kind: str, **params):
        if kind not in _STATE_KINDS and kind not in _GATE_KINDS:
            known = sorted(_STATE_KINDS) + sorted(_GATE_KINDS)
            raise ValueError(f"unknown target kind {kind!r}; known kinds: {known}")
        required = _STATE_KINDS.get(kind) or _GATE_KINDS.get(kind) or ()
        allowed = set(required) | set(_OPTIONAL.get(kind, ()))
        missing = [f for f in required if f not in params]
        extra = [f for f in params if f not in allowed]
        if missing:
            raise ValueError(f"target kind {kind!r} is missing fields {missing}")
        if extra:
            raise ValueError(f"target kind {kind!r} got unexpected fields {extra}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", MappingProxyType(dict(params)))

    @classmethod
    def from_dict(cls, obj: dict) -> "TargetSpec":
        obj = dict(obj)
        kind = obj.pop("kind", None)
        if kind is None:
            raise ValueError("target: missing 'kind' field")
        return cls(kind, **obj)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **dict(self.params)}

    @property
    def is_gate(self) -> bool:
        return self.kind in _GATE_KINDS

    @property
    def modes(self) -> int:
        return 2 if self.kind in _TWO_MODE_KINDS else 1

    @property
    def relations_per_mode(self) -> int:
        if not self.is_gate:
            raise ValueError(f"target kind {self.kind!r} is a state, not a gate")
        return int(self.params["d"])


def resolve_state(spec: TargetSpec, cutoff: int) -> np.ndarray:
    """Build the target state vector at the given per-mode cutoff."""
    p = spec.params
    if spec.kind == "single_photon":
        return single_photon(cutoff)
    if spec.kind == "fock_n":
        return fock_state(int(p["n"]), cutoff)
    if spec.kind == "on_state":
        return on_state(_as_complex(p["a"], "a"), int(p["n"]), cutoff)
    if spec.kind == "hex_gkp":
        return hex_gkp(int(p["mu"]), int(p["d_code"]), float(p["delta"]), cutoff,
                       radius=p.get("radius"))
    if spec.kind == "random_state":
        return random_state(int(p["d"]), int(p["seed"]), cutoff)
    if spec.kind == "noon":
        return noon(int(p["n"]), cutoff)
    if spec.kind == "coherent":
        return coherent(_as_complex(p["alpha"], "alpha"), cutoff)
    raise ValueError(f"target kind {spec.kind!r} is not a state")


def resolve_gate(spec: TargetSpec, cutoff: int) -> np.ndarray:
    """Build the target unitary at the given per-mode cutoff."""
    p = spec.params
    if spec.kind == "cubic_phase_gate":
        return cubic_phase_gate(float(p["gamma"]), cutoff)
    if spec.kind == "qft_gate":
        return qft_gate(int(p["d"]), cutoff)
    if spec.kind == "haar_gate":
        return haar_gate(int(p["d"]), int(p["seed"]), cutoff)
    if spec.kind == "cross_kerr_gate":
        if int(p["d"]) > cutoff:
            raise ValueError(f"d = {p['d']} per mode exceeds cutoff {cutoff}")
        return cross_kerr_gate(float(p["kappa"]), cutoff)
    raise ValueError(f"target kind {spec.kind!r} is not a gate")


def input_relation_indices(spec: TargetSpec, cutoff: int) -> tuple:
    """Flat basis indices of the gate's input-output relations.

    Single-mode gates use the first d Fock states. Two-mode gates use the
    product set |i,j> with i, j < d, whose lexicographic flat indices are
    i * cutoff + j.
    """
    d = spec.relations_per_mode
    if spec.modes == 1:
        return tuple(range(d))
    return tuple(i * cutoff + j for i in range(d) for j in range(d))
