"""SWAP, transpose and partial transpose written as displacement averages.

Each displacement is a generalized permutation, so every sum here is
accumulated by scattering ``D`` entries per label instead of forming dense
products.  The direct index-permutation versions live alongside as oracles.
"""

from __future__ import annotations

import numpy as np

from .algebra import embedded_points, monomial, phase_points
from .errors import BudgetError
from .states import DensityMatrix, DimSpec, NORM_TOL, Partition

# SWAP matrices are (D^2 x D^2); D = 36 is about 27 MB of complex128.
SWAP_MAX_DIM = 36


def _check_budget(dims: DimSpec) -> None:
    if dims.total_dim > SWAP_MAX_DIM:
        raise BudgetError(
            f"register dimension {dims.total_dim} exceeds the dense SWAP budget of {SWAP_MAX_DIM}"
        )


def swap_by_displacements(dims) -> np.ndarray:
    """``(1/D) sum_mu T_mu^dagger (x) T_mu`` on ``H (x) H``."""
    dims = DimSpec.of(dims)
    _check_budget(dims)
    D = dims.total_dim
    out = np.zeros((D * D, D * D), dtype=np.complex128)
    j = np.arange(D)
    for mu in phase_points(dims):
        perm, coeff = monomial(dims, mu)
        # T^dagger |perm[j]> = conj(coeff[j]) |j>
        inv = np.empty_like(perm)
        inv[perm] = j
        adj = coeff[inv].conj()
        rows = inv[:, None] * D + perm[None, :]
        cols = j[:, None] * D + j[None, :]
        out[rows, cols] += adj[:, None] * coeff[None, :]
    return out / D


def exact_swap(dims) -> np.ndarray:
    """Permutation matrix sending ``|f>|g>`` to ``|g>|f>``."""
    dims = DimSpec.of(dims)
    _check_budget(dims)
    D = dims.total_dim
    i, k = np.divmod(np.arange(D * D), D)
    out = np.zeros((D * D, D * D), dtype=np.complex128)
    out[k * D + i, i * D + k] = 1.0
    return out


def _as_density(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    raise TypeError(f"expected a DensityMatrix, got {type(rho).__name__}")


def _conjugation_average(mat: np.ndarray, dims: DimSpec, labels) -> np.ndarray:
    """``sum_mu T_mu M T_mu^*`` over the given labels."""
    out = np.zeros_like(mat)
    for mu in labels:
        perm, coeff = monomial(dims, mu)
        # (T M T^*)[perm[j], k] = coeff[j] M[j, perm[k]] conj(coeff[k])
        out[perm, :] += coeff[:, None] * mat[:, perm] * coeff.conj()[None, :]
    return out


def transpose_by_displacements(rho: DensityMatrix) -> DensityMatrix:
    """``(1/D) sum_mu T_mu rho T_mu^*``, which equals ``rho^T``."""
    rho = _as_density(rho)
    dims = rho.dims
    out = _conjugation_average(rho.entries, dims, phase_points(dims))
    return DensityMatrix(dims, out / dims.total_dim)


def partial_transpose(rho: DensityMatrix, part: Partition) -> DensityMatrix:
    """Transpose the qudits in ``part`` by averaging displacements over them.

    ``rho^PT = (1/dim H_B) sum_{mu_B} (I (x) T_{mu_B}) rho (I (x) T_{mu_B}^*)``
    with ``B`` the qudits listed in ``part``.
    """
    rho = _as_density(rho)
    dims = rho.dims
    positions = part.positions(dims)
    if not positions:
        return rho
    dB = dims.sub(positions).total_dim
    out = _conjugation_average(rho.entries, dims, embedded_points(dims, positions))
    return DensityMatrix(dims, out / dB)


def partial_transpose_direct(rho: DensityMatrix, part: Partition) -> DensityMatrix:
    """Partial transpose by exchanging row and column indices of the chosen qudits."""
    rho = _as_density(rho)
    dims = rho.dims
    positions = part.positions(dims)
    n = dims.n
    t = rho.entries.reshape(dims.dims + dims.dims)
    axes = list(range(2 * n))
    for p in positions:
        axes[p], axes[n + p] = n + p, p
    D = dims.total_dim
    return DensityMatrix(dims, np.transpose(t, axes).reshape(D, D))


def trace_norm_hermitian(mat: np.ndarray) -> tuple[float, np.ndarray]:
    evals = np.linalg.eigvalsh(mat)
    return float(np.sum(np.abs(evals))), evals


def negativity(rho: DensityMatrix, part: Partition) -> tuple[float, float]:
    """Negativity and natural-log negativity of ``rho`` across ``part``.

    Returns ``((||rho^PT||_1 - 1) / 2, ln ||rho^PT||_1)``.
    """
    rho = _as_density(rho)
    if not rho.is_hermitian(NORM_TOL):
        raise ValueError("negativity requires a Hermitian density matrix")
    if abs(rho.trace() - 1) > NORM_TOL:
        raise ValueError(f"negativity requires unit trace, got {rho.trace():.12g}")
    pt = partial_transpose(rho, part).entries
    # the average is Hermitian up to rounding; symmetrize before eigvalsh
    norm1, _ = trace_norm_hermitian((pt + pt.conj().T) / 2)
    return (norm1 - 1) / 2, float(np.log(norm1))

