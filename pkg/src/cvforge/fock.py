"""Truncated Fock-space linear algebra.

Every mode is truncated to ``D`` Fock levels, so a single-mode state is a
complex vector of length D and a two-mode state a vector of length D**2 with
lexicographic ordering (|0,0>, ..., |0,D-1>, |1,0>, ...).

Convention used throughout: hbar = 2, i.e. x = a + a^dag, p = -i(a - a^dag),
so the vacuum quadrature variance <x^2> is 1.

Unitaries are built by exponentiating *truncated* generators. The truncated
generator is exactly anti-Hermitian, so the resulting matrix is exactly
unitary on the simulated space (to rounding), which makes norm preservation
a global testable invariant.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg


UNITARITY_ATOL = 1e-10

__all__ = [
    "CutoffConfig",
    "ladder",
    "quadratures",
    "expm_antihermitian",
    "expm_eig",
    "frechet_phi",
    "frechet_from_eig",
    "expm_frechet",
    "tensor",
    "embed_single",
    "overlap",
    "basis_state",
    "unitarity_defect",
]


class InvalidCutoffError(ValueError):
    """Raised for cutoff dimensions that cannot represent a mode."""


@dataclass(frozen=True)
class CutoffConfig:
    """Fock truncation: ``dim`` levels per mode, ``modes`` in {1, 2}."""

    dim: int
    modes: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidCutoffError(f"cutoff dimension must be >= 2, got {self.dim}")
        if self.modes not in (1, 2):
            raise InvalidCutoffError(f"modes must be 1 or 2, got {self.modes}")

    @property
    def total_dim(self) -> int:
        return self.dim ** self.modes


def ladder(dim: int):
    """Annihilation, creation and number operators at cutoff ``dim``.

    Args:
        dim (int): Fock cutoff dimension, at least 2.

    Returns:
        tuple: ``(a, a_dag, n)`` dense complex arrays of shape [dim, dim],
        with ``a[m, m+1] = sqrt(m+1)`` and ``n = diag(0, 1, ..., dim-1)``.
    """
    if dim < 2:
        raise InvalidCutoffError(f"cutoff dimension must be >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    ms = np.arange(dim - 1)
    a[ms, ms + 1] = np.sqrt(ms + 1.0)
    a_dag = a.conj().T
    n = np.diag(np.arange(dim, dtype=float)).astype(complex)
    return a, a_dag, n


def quadratures(dim: int):
    """Position and momentum operators x = a + a^dag, p = -i(a - a^dag)."""
    a, a_dag, _ = ladder(dim)
    x = a + a_dag
    p = -1j * (a - a_dag)
    return x, p


def _check_antihermitian(m: np.ndarray, atol: float = 1e-12):
    defect = np.max(np.abs(m + m.conj().T))
    if defect > atol:
        raise ValueError(
            f"matrix is not anti-Hermitian (defect {defect:.3e} > {atol:.0e})"
        )


def expm_eig(m: np.ndarray):
    """Eigen-factorised exponential of an anti-Hermitian matrix.

    Writes m = iH with H Hermitian and diagonalises H, so the exponential
    V diag(e^{i eigs}) V^dag is exactly unitary up to rounding. The
    factorisation is returned so parameter derivatives can reuse it.

    Returns:
        tuple: ``(u, eigs, vecs)`` with ``u = expm(m)``, ``eigs`` the real
        eigenvalues of H = -i m and ``vecs`` its eigenvector matrix.
    """
    _check_antihermitian(m)
    h = -1j * m
    h = 0.5 * (h + h.conj().T)
    eigs, vecs = np.linalg.eigh(h)
    u = (vecs * np.exp(1j * eigs)) @ vecs.conj().T
    return u, eigs, vecs


def expm_antihermitian(m: np.ndarray) -> np.ndarray:
    """Unitary exponential exp(m) of an anti-Hermitian matrix m = iH."""
    u, _, _ = expm_eig(m)
    return u


def frechet_phi(eigs: np.ndarray) -> np.ndarray:
    """Divided-difference kernel of e^{ix} on an eigenvalue grid.

    Phi_kl = i e^{i(l_k+l_l)/2} sinc((l_k - l_l)/2) with the unnormalised
    sinc, so coincident eigenvalues are handled exactly.
    """
    mid = 0.5 * (eigs[:, None] + eigs[None, :])
    half_gap = 0.5 * (eigs[:, None] - eigs[None, :])
    return 1j * np.exp(1j * mid) * np.sinc(half_gap / np.pi)


def frechet_from_eig(eigs, vecs, direction, phi=None):
    """Directional derivative of expm at m = i V diag(eigs) V^dag.

    Uses the Daleckii-Krein formula for f(x) = e^{ix}: with
    Et = V^dag (-i direction) V the derivative is V (Phi * Et) V^dag.
    ``phi`` may be passed in when several directions share one gate.
    """
    if phi is None:
        phi = frechet_phi(eigs)
    et = vecs.conj().T @ (-1j * direction) @ vecs
    return vecs @ (phi * et) @ vecs.conj().T


def expm_frechet(m: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Frechet derivative L(m, direction) of the matrix exponential.

    Computed from the block-augmented exponential: the upper-right block of
    expm([[m, direction], [0, m]]). Valid for any square m; no structure is
    assumed, which makes this the reference route for testing the
    eigendecomposition-based fast path (`frechet_from_eig`).
    """
    if m.shape != direction.shape or m.shape[0] != m.shape[1]:
        raise ValueError(
            f"dimension mismatch: m has shape {m.shape}, direction {direction.shape}"
        )
    dim = m.shape[0]
    block = np.zeros((2 * dim, 2 * dim), dtype=complex)
    block[:dim, :dim] = m
    block[:dim, dim:] = direction
    block[dim:, dim:] = m
    return scipy.linalg.expm(block)[:dim, dim:]


def tensor(op_a: np.ndarray, op_b: np.ndarray) -> np.ndarray:
    """Kronecker product in lexicographic two-mode ordering (mode 0 first)."""
    return np.kron(op_a, op_b)


def embed_single(op: np.ndarray, mode_index: int, modes: int) -> np.ndarray:
    """Lift a single-mode operator to the full space, identity elsewhere."""
    if modes == 1:
        if mode_index != 0:
            raise ValueError(f"mode index {mode_index} out of range for 1 mode")
        return op
    if modes != 2:
        raise ValueError(f"only 1 or 2 modes are supported, got {modes}")
    dim = op.shape[0]
    eye = np.eye(dim, dtype=complex)
    if mode_index == 0:
        return np.kron(op, eye)
    if mode_index == 1:
        return np.kron(eye, op)
    raise ValueError(f"mode index {mode_index} out of range for 2 modes")


def overlap(u: np.ndarray, v: np.ndarray) -> complex:
    """Inner product <u|v> = sum_k conj(u_k) v_k."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def basis_state(index: int, total_dim: int) -> np.ndarray:
    """Fock basis vector |index> in a space of the given total dimension."""
    if not 0 <= index < total_dim:
        raise ValueError(f"basis index {index} out of range for dim {total_dim}")
    vec = np.zeros(total_dim, dtype=complex)
    vec[index] = 1.0
    return vec


def unitarity_defect(op: np.ndarray) -> float:
    """Max-entry norm of op^dag op - I, zero for an exactly unitary matrix."""
    dim = op.shape[0]
    return float(np.max(np.abs(op.conj().T @ op - np.eye(dim))))
