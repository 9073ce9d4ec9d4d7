r"""Truncated Fock-space displacements and Weyl-function entropies.

Matrix elements of :math:`D(z) = e^{z a^\dagger - z^* a}` come from the
closed form

.. math::

    \langle m|D(z)|n\rangle = \sqrt{n!/m!}\, z^{m-n} e^{-|z|^2/2} L_n^{(m-n)}(|z|^2),
    \qquad m \ge n,

with ``<m|D(z)|n> = sqrt(m!/n!) (-z^*)^{n-m} e^{-|z|^2/2} L_m^{(n-m)}(|z|^2)``
for ``m < n``.  These are the exact infinite-dimensional elements, so a Weyl
function of a state supported below the cutoff carries no truncation error;
only states built by truncation (coherent states, Gaussian unitaries) do.

Phase-space integrals ``int d^2 z`` use a Cartesian midpoint rule over the
disc ``|z| <= R`` with ``z = x + i y`` and cell area ``h^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .errors import BudgetError, DimensionError
from .states import DimSpec, StateVector

# two-mode SWAP matrices have (N_c + 1)^4 entries
CV_SWAP_MAX_DIM = 41
_CHUNK = 512


@dataclass(frozen=True)
class FockMode:
    """One bosonic mode truncated to ``|0>, ..., |cutoff>``."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @cached_property
    def annihilation(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.dim)), k=1).astype(np.complex128)

    @property
    def creation(self) -> np.ndarray:
        return self.annihilation.conj().T

    def number(self) -> np.ndarray:
        return np.diag(np.arange(self.dim)).astype(np.complex128)


def _elements(rows: np.ndarray, cols: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """``<m|D(z)|n>`` for ``m`` in rows, ``n`` in cols, every ``z``; shape (len(zs), rows, cols)."""
    m = np.asarray(rows)[:, None]
    n = np.asarray(cols)[None, :]
    lo = np.minimum(m, n)
    hi = np.maximum(m, n)
    k = hi - lo
    zs = np.asarray(zs, dtype=np.complex128).reshape(-1, 1, 1)
    r = np.abs(zs)
    x = r**2
    logmag = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - x / 2 + k * np.log(np.where(r > 0, r, 1.0))
    theta = np.angle(zs)
    # m >= n: z^k;  m < n: (-conj z)^k
    phase = np.where(m >= n, k * theta, k * (np.pi - theta))
    lag = eval_genlaguerre(lo, k, x)
    out = np.exp(logmag + 1j * phase) * lag
    # z = 0: only the diagonal survives
    return np.where((r == 0) & (k > 0), 0.0, out)


def displacement_element(m: int, n: int, z: complex) -> complex:
    if m < 0 or n < 0:
        raise ValueError(f"Fock indices must be non-negative, got ({m}, {n})")
    return complex(_elements(np.array([m]), np.array([n]), np.array([z]))[0, 0, 0])


def displacement_matrix_cv(mode: FockMode, z: complex) -> np.ndarray:
    """Truncated ``D(z)`` from the analytic elements.

    Accurate (and close to unitary) on low Fock rows while ``|z|^2`` is well
    below the cutoff.
    """
    idx = np.arange(mode.dim)
    return _elements(idx, idx, np.array([z]))[0]


def displacement_matrix_expm(mode: FockMode, z: complex) -> np.ndarray:
    """``expm(z a^dagger - z^* a)`` on the truncated space; exactly unitary there."""
    a = mode.annihilation
    return expm(z * a.conj().T - np.conj(z) * a)


def _fock_register(mode: FockMode, n_modes: int = 1) -> DimSpec:
    return DimSpec((mode.dim,) * n_modes)


def fock_state(mode: FockMode, n: int) -> StateVector:
    if not 0 <= n <= mode.cutoff:
        raise ValueError(f"|{n}> is outside the cutoff {mode.cutoff}")
    amps = np.zeros(mode.dim, dtype=np.complex128)
    amps[n] = 1.0
    return StateVector(_fock_register(mode), amps)


def vacuum(mode: FockMode) -> StateVector:
    return fock_state(mode, 0)


def coherent_amplitudes(mode: FockMode, w: complex) -> np.ndarray:
    """Untruncated-normalization amplitudes ``e^{-|w|^2/2} w^n / sqrt(n!)``."""
    return _elements(np.arange(mode.dim), np.array([0]), np.array([w]))[0, :, 0]


def truncation_deficit(mode: FockMode, w: complex) -> float:
    """Probability weight of ``|w>`` lost above the cutoff."""
    return float(1.0 - np.sum(np.abs(coherent_amplitudes(mode, w)) ** 2))


def coherent_state(mode: FockMode, w: complex) -> StateVector:
    """``|w> = D(w)|0>`` truncated and renormalized; see :func:`truncation_deficit`."""
    amps = coherent_amplitudes(mode, w)
    return StateVector(_fock_register(mode), amps / np.linalg.norm(amps))


def coherent_overlap(z1: complex, z2: complex) -> complex:
    """Exact ``<z1|z2>`` on the untruncated space."""
    return complex(np.exp(-abs(z1) ** 2 / 2 - abs(z2) ** 2 / 2 + np.conj(z1) * z2))


def _modes_of(state: StateVector) -> FockMode:
    dims = set(state.dims.dims)
    if len(dims) != 1:
        raise DimensionError(f"modes must share one cutoff, got dims {state.dims.dims}")
    return FockMode(dims.pop() - 1)


def weyl_function(state: StateVector, zs: Sequence[complex]) -> complex:
    """``<psi| D(z_1) ... D(z_N) |psi>`` with one ``z`` per mode."""
    zs = list(zs)
    if len(zs) != state.dims.n:
        raise DimensionError(f"{len(zs)} displacements for {state.dims.n} modes")
    mode = _modes_of(state)
    psi = state.tensor()
    phi = psi
    for k, z in enumerate(zs):
        Dk = displacement_matrix_cv(mode, z)
        phi = np.moveaxis(np.tensordot(Dk, phi, axes=([1], [k])), 0, k)
    return complex(np.vdot(psi, phi))


def weyl_distribution(state: StateVector, zs: Sequence[complex]) -> float:
    """``|W(z_1, ..., z_N)|^2 / pi^N``."""
    w = weyl_function(state, zs)
    return abs(w) ** 2 / math.pi ** state.dims.n


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoints of the ``h x h`` cells of ``[-R, R]^2`` whose centre lies in ``|z| <= R``."""

    radius: float
    spacing: float
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.radius <= 0 or self.spacing <= 0:
            raise ValueError("radius and spacing must be positive")
        cells = max(1, int(round(2 * self.radius / self.spacing)))
        x = -self.radius + (np.arange(cells) + 0.5) * (2 * self.radius / cells)
        z = (x[:, None] + 1j * x[None, :]).reshape(-1)
        object.__setattr__(self, "nodes", z[np.abs(z) <= self.radius])

    @property
    def cell(self) -> float:
        """Cell side actually used (``2R`` split into a whole number of cells)."""
        return 2 * self.radius / max(1, int(round(2 * self.radius / self.spacing)))

    @property
    def weight(self) -> float:
        return self.cell**2

    def __len__(self):
        return self.nodes.size


def _support(psi: np.ndarray, axis: int) -> np.ndarray:
    other = tuple(i for i in range(psi.ndim) if i != axis)
    mass = np.sum(np.abs(psi) ** 2, axis=other) if other else np.abs(psi) ** 2
    return np.flatnonzero(mass > 0)


def weyl_on_grid(state: StateVector, grid: QuadratureGrid | Sequence[QuadratureGrid]) -> np.ndarray:
    """Weyl function at every node of the product grid (one axis per mode)."""
    n = state.dims.n
    grids = [grid] * n if isinstance(grid, QuadratureGrid) else list(grid)
    if len(grids) != n:
        raise DimensionError(f"{len(grids)} grids for {n} modes")
    psi = state.tensor()
    if n == 1:
        sup = _support(psi, 0)
        bra = psi[sup].conj()
        ket = psi[sup]
        out = np.empty(len(grids[0]), dtype=np.complex128)
        for s in range(0, len(grids[0]), _CHUNK):
            block = _elements(sup, sup, grids[0].nodes[s:s + _CHUNK])
            out[s:s + _CHUNK] = np.einsum("m,xmn,n->x", bra, block, ket)
        return out
    # restrict each mode to the levels the state occupies
    sups = [_support(psi, k) for k in range(n)]
    psi = psi[np.ix_(*sups)]
    state_ax = list(range(n))
    batch_ax = list(range(n, 2 * n))
    phi, phi_ax = psi, list(state_ax)
    for k in range(n):
        Dk = _elements(sups[k], sups[k], grids[k].nodes)
        row = 2 * n
        out_ax = batch_ax[:k + 1] + [row if a == k else a for a in state_ax]
        phi = np.einsum(Dk, [batch_ax[k], row, k], phi, phi_ax, out_ax)
        phi_ax = batch_ax[:k + 1] + state_ax
    return np.einsum(psi.conj(), state_ax, phi, phi_ax, batch_ax)


def weyl_entropy(state: StateVector, grid: QuadratureGrid | Sequence[QuadratureGrid]
                 ) -> tuple[float, float]:
    """Differential entropy ``-int p ln p`` of ``p = |W|^2 / pi^N`` and ``int p``.

    The second value is a self-check of the grid: it should be close to 1.
    """
    n = state.dims.n
    grids = [grid] * n if isinstance(grid, QuadratureGrid) else list(grid)
    W = weyl_on_grid(state, grids)
    p = np.abs(W) ** 2 / math.pi**n
    weight = math.prod(g.weight for g in grids)
    pos = p[p > 0]
    entropy = float(-weight * np.sum(pos * np.log(pos)))
    return entropy, float(weight * np.sum(p))


def cv_swap_quadrature(mode: FockMode, grid: QuadratureGrid) -> np.ndarray:
    """``sum_nodes (h^2 / pi) D(-z) (x) D(z)`` on the two-mode truncated space."""
    if mode.dim > CV_SWAP_MAX_DIM:
        raise BudgetError(f"cutoff {mode.cutoff} exceeds the two-mode SWAP budget")
    d = mode.dim
    idx = np.arange(d)
    sign = (-1.0) ** (idx[:, None] - idx[None, :])
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for s in range(0, len(grid), _CHUNK):
        Dz = _elements(idx, idx, grid.nodes[s:s + _CHUNK])
        # <m|D(-z)|n> = (-1)^{m-n} <m|D(z)|n>
        Dm = (Dz * sign).reshape(len(Dz), -1)
        # rows (m1, n1) x (m2, n2) -> reorder to (m1 m2), (n1 n2)
        block = Dm.T @ Dz.reshape(len(Dz), -1)
        out += block.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    return out * grid.weight / math.pi


def fock_swap(mode: FockMode) -> np.ndarray:
    d = mode.dim
    i, k = np.divmod(np.arange(d * d), d)
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    out[k * d + i, i * d + k] = 1.0
    return out


def swap_block_error(swap: np.ndarray, mode: FockMode, block: int | None = None) -> float:
    """Frobenius distance to the exact SWAP on ``|m, n>`` with ``m, n <= block``."""
    block = mode.cutoff // 2 if block is None else block
    d = mode.dim
    m, n = np.divmod(np.arange(d * d), d)
    keep = np.flatnonzero((m <= block) & (n <= block))
    diff = (swap - fock_swap(mode))[np.ix_(keep, keep)]
    return float(np.linalg.norm(diff))


def coherent_matrix_element(swap: np.ndarray, mode: FockMode, u1: complex, u2: complex,
                            w1: complex, w2: complex) -> complex:
    """``<u1, u2| S |w1, w2>`` with truncated (not renormalized) coherent states."""
    bra = np.kron(coherent_amplitudes(mode, u1), coherent_amplitudes(mode, u2))
    ket = np.kron(coherent_amplitudes(mode, w1), coherent_amplitudes(mode, w2))
    return complex(np.vdot(bra, swap @ ket))


def gaussian_ops(mode: FockMode, w: complex = 0.5 + 0.25j, theta: float = 0.7,
                 xi: complex = 0.2) -> dict[str, np.ndarray]:
    """Truncated displacement, phase rotation and single-mode squeezing matrices."""
    if abs(xi) > 0.3:
        raise ValueError(f"squeezing |xi| = {abs(xi):.3g} is outside the supported range 0.3")
    a = mode.annihilation
    return {
        "displacement": displacement_matrix_cv(mode, w),
        "rotation": np.diag(np.exp(1j * theta * np.arange(mode.dim))),
        "squeezing": expm(0.5 * (np.conj(xi) * a @ a - xi * a.conj().T @ a.conj().T)),
    }


def apply_unitary(U: np.ndarray, state: StateVector) -> StateVector:
    """``U|psi>`` renormalized to absorb truncation loss."""
    if U.shape != (state.dims.total_dim,) * 2:
        raise DimensionError(f"operator of shape {U.shape} on dimension {state.dims.total_dim}")
    return StateVector(state.dims, U @ state.amplitudes).normalized()
