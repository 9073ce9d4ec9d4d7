r"""Stabilizer Rényi entropy for qudit registers.

A normalized pure state induces the distribution

.. math::

    p_\psi(\mu) = |\langle\psi|T_\mu|\psi\rangle|^2 / D

over the ``D^2`` displacement labels, and the magic of the state is

.. math::

    M_\alpha = \frac{1}{1-\alpha}\ln\sum_\mu p_\psi(\mu)^\alpha - \ln D.

The Clifford gates used to generate stabilizer states are not taken on
trust: each one is checked to map every displacement onto a displacement
before it is handed out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (
    PhasePoint,
    expectation,
    expectation_table,
    monomial,
    overlap_table,
    phase_points,
    point_from_index,
    point_index,
    weyl_coefficients,
)
from .errors import DimensionError, NotCliffordError
from .states import DimSpec, StateVector, basis_state

CLIFFORD_TOL = 1e-8
# weights at or below this are treated as exact zeros in p^alpha and p ln p
ZERO_WEIGHT = 1e-14


@dataclass(frozen=True)
class DisplacementDistribution:
    dims: DimSpec
    weights: np.ndarray

    def weight(self, mu) -> float:
        return float(self.weights[point_index(mu, self.dims)])

    def support(self, tol: float = ZERO_WEIGHT) -> list[PhasePoint]:
        labels = list(phase_points(self.dims))
        return [labels[i] for i in np.flatnonzero(self.weights > tol)]

    def total(self) -> float:
        return float(np.sum(self.weights))


def displacement_distribution(state: StateVector) -> DisplacementDistribution:
    state.require_normalized()
    w = np.abs(expectation_table(state)) ** 2 / state.dims.total_dim
    w = np.clip(w, 0.0, None)
    w.setflags(write=False)
    return DisplacementDistribution(state.dims, w)


def stabilizer_renyi(state: StateVector, alpha: float, shannon: bool = False) -> float:
    """Stabilizer Rényi entropy ``M_alpha`` in nats.

    ``shannon=True`` (or ``alpha == 1`` exactly) selects the Shannon limit
    ``-sum p ln p - ln D``; the Rényi formula is never evaluated near 1.
    """
    if not shannon and alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    p = displacement_distribution(state).weights
    p = p[p > ZERO_WEIGHT]
    lnD = math.log(state.dims.total_dim)
    if shannon or alpha == 1:
        return float(-np.sum(p * np.log(p))) - lnD
    return float(np.log(np.sum(p**alpha))) / (1 - alpha) - lnD


def cross_fidelity(state: StateVector, other: StateVector) -> float:
    """``|<psi|phi>|^2`` from single-copy displacement expectations.

    Evaluates ``sum_mu conj(<psi|T_mu|psi>) <phi|T_mu|phi> / D``, which is
    ``Tr(SWAP (|psi><psi| (x) |phi><phi|))`` once the SWAP is expanded in
    displacements.
    """
    if state.dims != other.dims:
        raise DimensionError(f"{state.dims.dims} vs {other.dims.dims}")
    s = np.sum(expectation_table(state).conj() * expectation_table(other))
    return float(s.real) / state.dims.total_dim


def twirl_sum(state: StateVector, other: StateVector) -> float:
    """``sum_mu |<psi|T_mu|phi>|^2 / D``.

    The displacements form a unitary 1-design, so this is
    ``<psi|psi><phi|phi>`` for any pair; it does not see the overlap.
    """
    if state.dims != other.dims:
        raise DimensionError(f"{state.dims.dims} vs {other.dims.dims}")
    return float(np.sum(np.abs(overlap_table(state, other)) ** 2)) / state.dims.total_dim


@dataclass(frozen=True)
class CliffordImage:
    target: PhasePoint
    phase: complex


def _conjugate(U: np.ndarray, dims: DimSpec, mu) -> np.ndarray:
    perm, coeff = monomial(dims, mu)
    # (U T)[:, j] = U[:, perm[j]] coeff[j]
    return (U[:, perm] * coeff[None, :]) @ U.conj().T


def clifford_image(U: np.ndarray, mu, dims) -> CliffordImage:
    """Find ``(mu', phase)`` with ``U T_mu U^dagger = phase * T_mu'``.

    Raises :class:`NotCliffordError` when no displacement matches.
    """
    dims = DimSpec.of(dims)
    U = np.asarray(U, dtype=np.complex128)
    D = dims.total_dim
    if U.shape != (D, D):
        raise DimensionError(f"unitary of shape {U.shape} on a register of dimension {D}")
    V = _conjugate(U, dims, mu)
    overlaps = weyl_coefficients(V, dims) / D
    best = int(np.argmax(np.abs(overlaps)))
    c = overlaps[best]
    if abs(abs(c) - 1) > CLIFFORD_TOL:
        raise NotCliffordError(f"U T_{{{PhasePoint.of(mu)}}} U^dagger is not a displacement (best overlap {abs(c):.6f})")
    target = point_from_index(best, dims)
    phase = c / abs(c)
    perm, coeff = monomial(dims, target)
    Tt = np.zeros((D, D), dtype=np.complex128)
    Tt[perm, np.arange(D)] = coeff
    if np.max(np.abs(V - phase * Tt)) > CLIFFORD_TOL:
        raise NotCliffordError(f"U T_{{{PhasePoint.of(mu)}}} U^dagger deviates from its closest displacement")
    return CliffordImage(target, complex(phase))


def certify(U: np.ndarray, dims) -> dict[PhasePoint, CliffordImage]:
    """Images of every displacement under ``U``; raises if ``U`` is not Clifford."""
    dims = DimSpec.of(dims)
    return {mu: clifford_image(U, mu, dims) for mu in phase_points(dims)}


@dataclass(frozen=True)
class Gate:
    """A unitary acting on adjacent qudits ``targets`` of a register."""

    name: str
    targets: tuple[int, ...]
    matrix: np.ndarray

    def full(self, dims) -> np.ndarray:
        dims = DimSpec.of(dims)
        lo, hi = self.targets[0], self.targets[-1] + 1
        left = int(np.prod(dims.dims[:lo]))
        right = int(np.prod(dims.dims[hi:]))
        return np.kron(np.kron(np.eye(left), self.matrix), np.eye(right))

    def apply(self, state: StateVector) -> StateVector:
        dims = state.dims
        local = dims.sub(self.targets).dims
        k = len(self.targets)
        g = self.matrix.reshape(local + local)
        t = np.tensordot(g, state.tensor(), axes=(list(range(k, 2 * k)), list(self.targets)))
        t = np.moveaxis(t, list(range(k)), list(self.targets))
        return StateVector(dims, t.reshape(-1))


def fourier(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def quadratic_phase(d: int) -> np.ndarray:
    """``diag(exp(i pi j (j + s) / d))`` with ``s = 0`` for even ``d`` and ``s = d`` for odd."""
    j = np.arange(d)
    s = 0 if d % 2 == 0 else d
    return np.diag(np.exp(1j * np.pi * ((j * (j + s)) % (2 * d)) / d))


def sum_gate(d: int) -> np.ndarray:
    """``|j, k> -> |j, j + k mod d>``."""
    j, k = np.divmod(np.arange(d * d), d)
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    out[j * d + (j + k) % d, j * d + k] = 1.0
    return out


@lru_cache(maxsize=None)
def _certified_local(d: int) -> tuple[tuple[str, np.ndarray], ...]:
    if d == 2:
        names = ("H", "S", "CNOT")
    else:
        names = ("F", "P", "SUM")
    gates = ((names[0], fourier(d), (d,)), (names[1], quadratic_phase(d), (d,)),
             (names[2], sum_gate(d), (d, d)))
    for name, U, local in gates:
        try:
            certify(U, local)
        except NotCliffordError as exc:
            raise RuntimeError(f"generator {name} for d={d} failed certification") from exc
    return tuple((name, U) for name, U, _ in gates)


def clifford_generators(dims) -> list[Gate]:
    """Single-qudit Fourier and phase gates on every qudit, SUM on equal-dimension neighbours."""
    dims = DimSpec.of(dims)
    out = []
    for q, d in enumerate(dims.dims):
        (f_name, F), (p_name, P), _ = _certified_local(d)
        out.append(Gate(f"{f_name}[{q}]", (q,), F))
        out.append(Gate(f"{p_name}[{q}]", (q,), P))
    for q in range(dims.n - 1):
        d = dims.dims[q]
        if dims.dims[q + 1] != d:
            continue
        s_name, SUM = _certified_local(d)[2]
        out.append(Gate(f"{s_name}[{q},{q + 1}]", (q, q + 1), SUM))
    return out


def random_stabilizer_state(dims, depth: int, seed: int) -> StateVector:
    """Apply ``depth`` uniformly drawn generators to ``|0...0>``."""
    if depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    dims = DimSpec.of(dims)
    rng = np.random.default_rng(seed)
    gens = clifford_generators(dims)
    state = basis_state(dims, (0,) * dims.n)
    for _ in range(depth):
        state = gens[rng.integers(len(gens))].apply(state)
    return state


def exact_purity(state: StateVector) -> float:
    """``sum_mu p_psi(mu)^2``."""
    return float(np.sum(displacement_distribution(state).weights ** 2))


def purity_estimator(state: StateVector, samples: int, seed: int,
                     exhaustive: bool = False) -> tuple[float, float]:
    """Monte-Carlo estimate of ``sum_mu p_psi(mu)^2`` and its standard error.

    Labels are drawn uniformly, so ``D^2 p(mu)^2`` is an unbiased sample.
    ``exhaustive=True`` enumerates all labels instead and reports zero error.
    """
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    state.require_normalized()
    dims = state.dims
    D = dims.total_dim
    if exhaustive:
        return exact_purity(state), 0.0
    rng = np.random.default_rng(seed)
    idx = rng.integers(D * D, size=samples)
    uniq, inverse = np.unique(idx, return_inverse=True)
    values = np.empty(uniq.size)
    for i, flat in enumerate(uniq):
        p = abs(expectation(state, point_from_index(flat, dims))) ** 2 / D
        values[i] = D * D * p * p
    x = values[inverse]
    est = float(np.mean(x))
    err = float(np.std(x, ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return est, err
