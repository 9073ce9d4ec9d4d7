"""Second Rényi entanglement entropy, three ways.

``renyi2_displacement`` uses only single-copy expectation values of
displacements on the subsystem; ``renyi2_oracle`` goes through the reduced
density matrix; ``swap_expectation`` evaluates the SWAP trick on two copies.
All logarithms are natural.
"""

from __future__ import annotations

import math
import warnings
from math import prod

import numpy as np

from .algebra import embedded_points, expectation
from .errors import BudgetError
from .states import Partition, StateVector, reduced_density

PURITY_FLOOR = 1e-12
# |psi> (x) |psi> is materialized; 2**22 amplitudes is 64 MB
DOUBLED_MAX_DIM = 2**22


class ClampWarning(RuntimeWarning):
    """A purity sum fell below the floor and was clamped before the log."""


def _safe_neg_log(purity: float) -> float:
    if purity < PURITY_FLOOR:
        warnings.warn(
            f"purity {purity:.3e} clamped to {PURITY_FLOOR:g} before taking the log",
            ClampWarning,
            stacklevel=3,
        )
        purity = PURITY_FLOOR
    return -math.log(purity)


def subsystem_purity(state: StateVector, part: Partition) -> float:
    """``sum_{mu_A} |<psi| T_{mu_A} (x) I_B |psi>|^2 / dim H_A``."""
    state.require_normalized()
    positions = part.positions(state.dims)
    if not positions:
        return 1.0
    dA = state.dims.sub(positions).total_dim
    total = 0.0
    for mu in embedded_points(state.dims, positions):
        total += abs(expectation(state, mu)) ** 2
    return total / dA


def renyi2_displacement(state: StateVector, part: Partition) -> float:
    return _safe_neg_log(subsystem_purity(state, part))


def renyi2_oracle(state: StateVector, part: Partition) -> float:
    """``-ln Tr(rho_A^2)`` from an explicit partial trace."""
    rho = reduced_density(state, part).entries
    purity = float(np.real(np.sum(rho * rho.T)))
    return _safe_neg_log(purity)


def swap_expectation(state: StateVector, part: Partition) -> float:
    """``<psi|<psi| SWAP_A |psi>|psi>`` with SWAP_A exchanging the two copies of A."""
    state.require_normalized()
    dims = state.dims
    positions = part.positions(dims)
    if dims.total_dim**2 > DOUBLED_MAX_DIM:
        raise BudgetError(f"doubled space of dimension {dims.total_dim ** 2} is over budget")
    n = dims.n
    psi = state.tensor()
    doubled = np.multiply.outer(psi, psi)
    axes = list(range(2 * n))
    for p in positions:
        axes[p], axes[n + p] = n + p, p
    swapped = np.transpose(doubled, axes)
    return float(np.real(np.vdot(doubled, swapped)))


def max_entropy(state: StateVector, part: Partition) -> float:
    """``ln dim H_A``, the upper bound on S_2 for subsystem ``part``."""
    return math.log(prod(state.dims.dims[i] for i in part.positions(state.dims)))
