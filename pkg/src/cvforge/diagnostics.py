"""Phase-space and matrix diagnostics for states and learned circuits.

All outputs are plain data (arrays and CSV files), never rendered images,
so any plotting tool can reproduce the figures. Wigner functions use the
hbar = 2 normalisation: the vacuum peaks at 1/(2 pi) and the function
integrates to 1 over phase space; position wavefunctions use the matching
oscillator eigenfunctions with phi_0(x) = (2 pi)^(-1/4) e^(-x^2/4).
"""

from dataclasses import dataclass

import numpy as np


__all__ = [
    "Grid2D",
    "phase_space_grid",
    "wigner",
    "oscillator_eigenfunctions",
    "wavefunction1d",
    "wavefunction2d",
    "matrix_heatmap",
    "write_grid_csv",
    "read_grid_csv",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_wavefunction_csv",
    "fock_labels",
]

DEFAULT_GRID_HALF_WIDTH = 6.0
DEFAULT_GRID_POINTS = 200


@dataclass(frozen=True)
class Grid2D:
    """Values on a rectangular phase-space (or position) grid.

    ``values[i, j]`` is the value at (x_i, y_j) with both axes linearly
    spaced, x varying along rows.
    """

    x_min: float
    x_max: float
    nx: int
    y_min: float
    y_max: float
    ny: int
    values: np.ndarray

    def axes(self):
        return (
            np.linspace(self.x_min, self.x_max, self.nx),
            np.linspace(self.y_min, self.y_max, self.ny),
        )


def phase_space_grid(half_width=DEFAULT_GRID_HALF_WIDTH, points=DEFAULT_GRID_POINTS):
    """Symmetric square grid axes covering [-half_width, half_width]."""
    axis = np.linspace(-half_width, half_width, points)
    return axis, axis.copy()


def _laguerre_series(order, x, coeffs):
    # Clenshaw evaluation of sum_n c_n * LL_n^order(x) with
    # LL_n^L = (-1)^n sqrt(L! n! / (L+n)!) LaguerreL[n, L, x].
    if len(coeffs) == 1:
        y0 = coeffs[0]
        y1 = 0.0
    elif len(coeffs) == 2:
        y0, y1 = coeffs[0], coeffs[1]
    else:
        k = len(coeffs)
        y0, y1 = coeffs[-2], coeffs[-1]
        for i in range(3, len(coeffs) + 1):
            k -= 1
            y0, y1 = (
                coeffs[-i] - y1 * np.sqrt(((k - 1.0) * (order + k - 1.0)) / ((order + k) * k)),
                y0 - y1 * (order + 2.0 * k - 1.0 - x) / np.sqrt((order + k) * k),
            )
    return y0 - y1 * (order + 1.0 - x) / np.sqrt(order + 1.0)


def wigner(psi: np.ndarray, xvec: np.ndarray, pvec: np.ndarray) -> Grid2D:
    """Wigner function of a single-mode pure state on a rectangular grid.

    Evaluates the Laguerre series of the density matrix psi psi^dag with a
    Clenshaw recurrence over its diagonals, which stays numerically stable
    at large photon numbers.

    Args:
        psi (array): single-mode Fock amplitudes.
        xvec, pvec (array): quadrature axes (hbar = 2 units).

    Returns:
        Grid2D: W values of shape [len(xvec), len(pvec)].
    """
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise ValueError("wigner expects a single-mode state vector")
    dim = psi.shape[0]
    rho = np.outer(psi, psi.conj())
    rho_doubled = rho * (2.0 - np.eye(dim))

    x_grid, p_grid = np.meshgrid(xvec, pvec, indexing="ij")
    a2 = x_grid + 1j * p_grid  # 2*alpha with alpha = (x + i p)/2
    b = np.abs(a2) ** 2

    w = np.full(a2.shape, 2.0 * rho[0, -1], dtype=complex)
    for order in range(dim - 2, -1, -1):
        w = _laguerre_series(order, b, np.diag(rho_doubled, order)) \
            + w * a2 / np.sqrt(order + 1.0)

    values = w.real * np.exp(-0.5 * b) / (2.0 * np.pi)
    return Grid2D(
        float(xvec[0]), float(xvec[-1]), len(xvec),
        float(pvec[0]), float(pvec[-1]), len(pvec),
        values,
    )


def oscillator_eigenfunctions(n_max: int, xs: np.ndarray) -> np.ndarray:
    """Rows phi_n(x) for n < n_max, hbar = 2 convention.

    phi_0(x) = (2 pi)^(-1/4) e^(-x^2/4) and
    phi_{n+1} = (x phi_n - sqrt(n) phi_{n-1}) / sqrt(n+1).
    """
    xs = np.asarray(xs, dtype=float)
    out = np.empty((n_max, len(xs)))
    out[0] = (2.0 * np.pi) ** (-0.25) * np.exp(-0.25 * xs * xs)
    if n_max > 1:
        out[1] = xs * out[0]
    for n in range(1, n_max - 1):
        out[n + 1] = (xs * out[n] - np.sqrt(n) * out[n - 1]) / np.sqrt(n + 1.0)
    return out


def wavefunction1d(psi: np.ndarray, xs) -> np.ndarray:
    """Position wavefunction sum_n c_n phi_n(x) of a single-mode state."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0:
        raise ValueError("empty position grid")
    psi = np.asarray(psi)
    return psi @ oscillator_eigenfunctions(psi.shape[0], xs).astype(complex)


def wavefunction2d(psi: np.ndarray, xs, ys) -> np.ndarray:
    """Two-mode position wavefunction Psi(x, y) on a rectangular grid.

    ``psi`` is a length D^2 vector in lexicographic order; the result has
    shape [len(xs), len(ys)].
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    if xs.size == 0 or ys.size == 0:
        raise ValueError("empty position grid")
    psi = np.asarray(psi)
    dim = round(np.sqrt(psi.shape[0]))
    if dim * dim != psi.shape[0]:
        raise ValueError(f"state length {psi.shape[0]} is not a perfect square")
    coeffs = psi.reshape(dim, dim)
    fx = oscillator_eigenfunctions(dim, xs)
    fy = oscillator_eigenfunctions(dim, ys)
    return fx.T.astype(complex) @ coeffs @ fy.astype(complex)


def matrix_heatmap(v: np.ndarray, d_in: int, d_out: int):
    """Real and imaginary parts of the d_out x d_in top-left block of V."""
    if d_in > v.shape[1] or d_out > v.shape[0]:
        raise ValueError(
            f"block {d_out} x {d_in} exceeds matrix shape {v.shape}"
        )
    block = v[:d_out, :d_in]
    return block.real.copy(), block.imag.copy()


def fock_labels(dim: int, modes: int, count: int):
    """Basis labels for heatmap rows/columns, lexicographic for two modes."""
    if modes == 1:
        return [str(n) for n in range(count)]
    return [f"{i // dim},{i % dim}" for i in range(count)]


# ------------------------------------------------------------------
# CSV emission (17 significant digits, exact float round-trip)
# ------------------------------------------------------------------

_FMT = "%.17g"


def write_grid_csv(grid: Grid2D, path):
    """Grid CSV: header '# x_min x_max nx p_min p_max ny', values row-major."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"# {_FMT % grid.x_min} {_FMT % grid.x_max} {grid.nx} "
            f"{_FMT % grid.y_min} {_FMT % grid.y_max} {grid.ny}\n"
        )
        np.savetxt(fh, grid.values, fmt=_FMT, delimiter=",")


def read_grid_csv(path) -> Grid2D:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError(f"{path}: missing grid header row")
        parts = header[1:].split()
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    x_min, x_max, nx, y_min, y_max, ny = parts
    return Grid2D(
        float(x_min), float(x_max), int(nx),
        float(y_min), float(y_max), int(ny),
        values,
    )


def write_matrix_csv(mat: np.ndarray, path, row_labels=None, col_labels=None):
    """Plain numeric CSV; labels go to a '<path>.labels' companion file."""
    np.savetxt(path, np.atleast_2d(mat), fmt=_FMT, delimiter=",")
    if row_labels is not None or col_labels is not None:
        with open(f"{path}.labels", "w", encoding="utf-8") as fh:
            fh.write("rows," + ";".join(row_labels or []) + "\n")
            fh.write("cols," + ";".join(col_labels or []) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def write_wavefunction_csv(xs, values, path):
    """Complex 1-D wavefunction as columns x, re, im."""
    data = np.column_stack([xs, np.real(values), np.imag(values)])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# x,re,im\n")
        np.savetxt(fh, data, fmt=_FMT, delimiter=",")
