"""Elementary and target gates on the truncated Fock space.

All constructors return dense complex matrices that are exactly unitary on
the truncated space (generators are truncated first, then exponentiated).
Diagonal gates (rotation, Kerr, cross-Kerr) also have ``*_diag`` helpers
returning just the diagonal, which is what the network hot loop applies.

For gradient-based training every gate exposes its parameter derivative
dG/dtheta, either analytically (diagonal gates) or as a Frechet derivative
of the exponential sharing the eigendecomposition with the gate value.
"""

from functools import lru_cache

import numpy as np

from . import fock


__all__ = [
    "rotation",
    "displacement",
    "squeezing",
    "beamsplitter",
    "kerr",
    "cross_kerr",
    "cubic_phase",
    "gate_derivative",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def _ladder_cached(dim: int):
    a, a_dag, n = fock.ladder(dim)
    return _readonly(a), _readonly(a_dag), _readonly(n)


@lru_cache(maxsize=None)
def _displacement_directions(dim: int):
    # dM/d(alpha_re) and dM/d(alpha_im) for M = alpha a^dag - alpha^* a
    a, a_dag, _ = _ladder_cached(dim)
    return _readonly(a_dag - a), _readonly(1j * (a_dag + a))


@lru_cache(maxsize=None)
def _squeezing_direction(dim: int):
    # dM/dr for M = (r/2)(a^2 - a^dag^2)
    a, a_dag, _ = _ladder_cached(dim)
    return _readonly(0.5 * (a @ a - a_dag @ a_dag))


@lru_cache(maxsize=None)
def _bs_bilinears(dim: int):
    # a1^dag a2 and a1 a2^dag on the two-mode space
    a, a_dag, _ = _ladder_cached(dim)
    return _readonly(np.kron(a_dag, a)), _readonly(np.kron(a, a_dag))


@lru_cache(maxsize=None)
def _x_cubed(dim: int):
    x, _ = fock.quadratures(dim)
    return _readonly(x @ x @ x)


# ------------------------------------------------------------------
# Diagonal gates
# ------------------------------------------------------------------

def rotation_diag(phi: float, dim: int) -> np.ndarray:
    """Diagonal of the rotation gate, entries e^{i phi m}."""
    return np.exp(1j * phi * np.arange(dim))


def rotation(phi: float, dim: int) -> np.ndarray:
    """Rotation gate exp(i phi n) as a dense matrix."""
    return np.diag(rotation_diag(phi, dim))


def kerr_diag(kappa: float, dim: int) -> np.ndarray:
    """Diagonal of the Kerr gate, entries e^{i kappa m^2}."""
    m = np.arange(dim)
    return np.exp(1j * kappa * m * m)


def kerr(kappa: float, dim: int) -> np.ndarray:
    """Kerr gate exp(i kappa n^2), the non-Gaussian layer element."""
    return np.diag(kerr_diag(kappa, dim))


def cross_kerr_diag(kappa: float, dim: int) -> np.ndarray:
    """Diagonal of exp(-i kappa n1 n2) in lexicographic two-mode order."""
    n = np.arange(dim)
    return np.exp(-1j * kappa * np.outer(n, n)).ravel()


def cross_kerr(kappa: float, dim: int) -> np.ndarray:
    """Two-mode cross-Kerr gate exp(-i kappa n1 n2), dimension dim**2."""
    return np.diag(cross_kerr_diag(kappa, dim))


# ------------------------------------------------------------------
# Exponential-of-generator gates
# ------------------------------------------------------------------

def _displacement_generator(alpha_re: float, alpha_im: float, dim: int) -> np.ndarray:
    d_re, d_im = _displacement_directions(dim)
    return alpha_re * d_re + alpha_im * d_im


def displacement(alpha_re: float, alpha_im: float, dim: int) -> np.ndarray:
    """Displacement gate exp(alpha a^dag - alpha^* a), alpha = re + i im.

    Parameterised by the two real components of alpha so the optimiser sees
    no coordinate singularity at alpha = 0.
    """
    return fock.expm_antihermitian(_displacement_generator(alpha_re, alpha_im, dim))


def squeezing(r: float, dim: int) -> np.ndarray:
    """Squeezing gate exp[(r/2)(a^2 - a^dag^2)] with a single real r."""
    return fock.expm_antihermitian(r * _squeezing_direction(dim))


def _beamsplitter_generator(theta: float, phi: float, dim: int) -> np.ndarray:
    up, down = _bs_bilinears(dim)
    return theta * (np.exp(1j * phi) * up - np.exp(-1j * phi) * down)


def beamsplitter(theta: float, phi: float, dim: int) -> np.ndarray:
    """Two-mode beamsplitter exp[theta(e^{i phi} a1^dag a2 - h.c.)].

    Returns a dim**2 x dim**2 matrix, block diagonal in total photon number.
    """
    return fock.expm_antihermitian(_beamsplitter_generator(theta, phi, dim))


def cubic_phase(gamma: float, dim: int) -> np.ndarray:
    """Cubic phase gate exp(-i gamma x^3) with the truncated x = a + a^dag."""
    return fock.expm_antihermitian(-1j * gamma * _x_cubed(dim))


# ------------------------------------------------------------------
# Value + derivative bundles for the training hot loop
# ------------------------------------------------------------------
# Each parameterised generator is a scaled, rotation-conjugated version of
# a fixed matrix: alpha a^dag - alpha^* a = R_psi |alpha|(a^dag - a) R_psi^dag
# with psi = arg(alpha), and likewise for the beamsplitter with the mode-1
# rotation (exact identities of the truncated matrices, since conjugating
# a^dag by e^{i psi n} just multiplies it by e^{i psi}). One cached
# eigendecomposition per cutoff therefore serves every parameter value.

@lru_cache(maxsize=None)
def _displacement_kernel(dim: int):
    d_re, _ = _displacement_directions(dim)
    eigs, vecs = np.linalg.eigh(-1j * d_re)
    return _readonly(eigs), _readonly(vecs)


@lru_cache(maxsize=None)
def _squeezing_kernel(dim: int):
    eigs, vecs = np.linalg.eigh(-1j * _squeezing_direction(dim))
    return _readonly(eigs), _readonly(vecs)


@lru_cache(maxsize=None)
def _beamsplitter_kernel(dim: int):
    up, down = _bs_bilinears(dim)
    eigs, vecs = np.linalg.eigh(-1j * (up - down))
    return _readonly(eigs), _readonly(vecs)


def _conjugate_by_phases(mat: np.ndarray, phases: np.ndarray) -> np.ndarray:
    return phases[:, None] * mat * phases.conj()[None, :]


def displacement_with_derivatives(alpha_re: float, alpha_im: float, dim: int):
    """Gate value and (d/d alpha_re, d/d alpha_im), one shared kernel."""
    eigs0, vecs = _displacement_kernel(dim)
    amp = np.hypot(alpha_re, alpha_im)
    psi = np.arctan2(alpha_im, alpha_re) if amp > 0 else 0.0
    rot = rotation_diag(psi, dim)
    rot_dag = rot.conj()

    eigs = amp * eigs0
    u0 = (vecs * np.exp(1j * eigs)) @ vecs.conj().T
    phi = fock.frechet_phi(eigs)
    d_re, d_im = _displacement_directions(dim)

    def deriv(direction):
        back = _conjugate_by_phases(direction, rot_dag)
        return _conjugate_by_phases(fock.frechet_from_eig(eigs, vecs, back, phi), rot)

    return _conjugate_by_phases(u0, rot), deriv(d_re), deriv(d_im)


def squeezing_with_derivatives(r: float, dim: int):
    """Gate value and d/dr, one shared kernel."""
    eigs0, vecs = _squeezing_kernel(dim)
    eigs = r * eigs0
    u = (vecs * np.exp(1j * eigs)) @ vecs.conj().T
    du = fock.frechet_from_eig(eigs, vecs, _squeezing_direction(dim))
    return u, du


def beamsplitter_with_derivatives(theta: float, phi: float, dim: int):
    """Gate value and (d/dtheta, d/dphi), one shared kernel.

    With the phase pulled into a mode-1 rotation, BS(theta, phi) =
    R1(phi) B0(theta) R1(phi)^dag, so d/dtheta follows from the fixed
    eigenbasis of B0's generator and d/dphi = i [n1, BS].
    """
    eigs0, vecs = _beamsplitter_kernel(dim)
    n1 = np.repeat(np.arange(dim), dim)
    rot1 = np.exp(1j * phi * n1)

    eigs = theta * eigs0
    exp_eigs = np.exp(1j * eigs)
    u0 = (vecs * exp_eigs) @ vecs.conj().T
    du0_dtheta = (vecs * (1j * eigs0 * exp_eigs)) @ vecs.conj().T

    u = _conjugate_by_phases(u0, rot1)
    d_theta = _conjugate_by_phases(du0_dtheta, rot1)
    d_phi = 1j * (n1[:, None] - n1[None, :]) * u
    return u, d_theta, d_phi


def cubic_phase_with_derivative(gamma: float, dim: int):
    """Gate value and d/dgamma from one factorisation."""
    direction = -1j * _x_cubed(dim)
    u, eigs, vecs = fock.expm_eig(gamma * direction)
    return u, fock.frechet_from_eig(eigs, vecs, direction)


_N_PARAMS = {
    "rotation": 1,
    "displacement": 2,
    "squeezing": 1,
    "beamsplitter": 2,
    "kerr": 1,
    "cross_kerr": 1,
    "cubic_phase": 1,
}


def gate_derivative(kind: str, params, which_param: int, dim: int) -> np.ndarray:
    """Parameter derivative dG/dtheta of an elementary or target gate.

    Args:
        kind (str): one of rotation, displacement, squeezing, beamsplitter,
            kerr, cross_kerr, cubic_phase.
        params: the gate's real parameters in constructor order.
        which_param (int): index of the differentiated parameter.
        dim (int): Fock cutoff per mode.

    Returns:
        array: dense derivative matrix, same shape as the gate.
    """
    if kind not in _N_PARAMS:
        raise ValueError(f"unknown gate kind {kind!r}")
    params = tuple(np.atleast_1d(params).astype(float))
    if len(params) != _N_PARAMS[kind]:
        raise ValueError(f"{kind} takes {_N_PARAMS[kind]} parameter(s), got {len(params)}")
    if not 0 <= which_param < _N_PARAMS[kind]:
        raise ValueError(f"parameter index {which_param} out of range for {kind}")

    if kind == "rotation":
        m = np.arange(dim)
        return np.diag(1j * m * rotation_diag(params[0], dim))
    if kind == "kerr":
        m = np.arange(dim)
        return np.diag(1j * m * m * kerr_diag(params[0], dim))
    if kind == "cross_kerr":
        n12 = np.outer(np.arange(dim), np.arange(dim)).ravel()
        return np.diag(-1j * n12 * cross_kerr_diag(params[0], dim))
    if kind == "displacement":
        return displacement_with_derivatives(params[0], params[1], dim)[1 + which_param]
    if kind == "squeezing":
        return squeezing_with_derivatives(params[0], dim)[1]
    if kind == "beamsplitter":
        return beamsplitter_with_derivatives(params[0], params[1], dim)[1 + which_param]
    # cubic_phase
    return cubic_phase_with_derivative(params[0], dim)[1]
