r"""Heisenberg-Weyl displacements on qudit registers.

For a single qudit of dimension ``d`` the displacement is

.. math::

    T_{a,b} = e^{-i\pi ab/d} Z^a X^b,\qquad X|j\rangle = |j+1\rangle,\quad
    Z|j\rangle = \omega^j|j\rangle,\quad \omega = e^{2\pi i/d},

and a register displacement is the tensor product of one such factor per
qudit.  The definition is used literally for every integer ``(a, b)``.  Because
``Z`` and ``X`` have order ``d`` only the scalar prefactor depends on the
representative, so for even ``d`` the operator is periodic only up to sign.
Labels are therefore always stored reduced to ``[0, d)`` and any reduction
returns the phase it produced as an exact rational multiple of pi.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import pi
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import DimensionError
from .states import DimSpec, StateVector


@dataclass(frozen=True)
class Phase:
    """The unit complex number ``exp(i*pi*angle)`` with ``angle`` kept exact."""

    angle: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "angle", Fraction(self.angle) % 2)

    @property
    def value(self) -> complex:
        a = self.angle
        # exact values for the common quarter turns
        if a.denominator <= 2:
            return {Fraction(0): 1 + 0j, Fraction(1, 2): 1j, Fraction(1): -1 + 0j,
                    Fraction(3, 2): -1j}[a]
        return cmath.exp(1j * pi * float(a))

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.angle + other.angle)

    def conjugate(self) -> "Phase":
        return Phase(-self.angle)

    def __complex__(self):
        return self.value


ONE = Phase()


@dataclass(frozen=True)
class PhasePoint:
    """Displacement label ``mu = (a_1, b_1; ...; a_n, b_n)``.

    Instances hold whatever integers they are given; :func:`canonicalize`
    produces the reduced representative together with the relating phase.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))

    @classmethod
    def zero(cls, dims) -> "PhasePoint":
        return cls(((0, 0),) * DimSpec.of(dims).n)

    @classmethod
    def of(cls, mu: "MuLike") -> "PhasePoint":
        if isinstance(mu, PhasePoint):
            return mu
        return cls(tuple(mu))

    def is_canonical(self, dims: DimSpec) -> bool:
        return all(0 <= a < d and 0 <= b < d for (a, b), d in zip(self.pairs, dims.dims))

    def check(self, dims: DimSpec) -> None:
        if len(self.pairs) != dims.n:
            raise DimensionError(f"label has {len(self.pairs)} pairs, register has {dims.n} qudits")

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(tuple((-a, -b) for a, b in self.pairs))

    def __str__(self):
        return ";".join(f"{a},{b}" for a, b in self.pairs)


MuLike = Union[PhasePoint, Sequence[Sequence[int]]]


def _prefactor_angle(pairs, dims: DimSpec) -> Fraction:
    return sum((Fraction(-a * b, d) for (a, b), d in zip(pairs, dims.dims)), Fraction(0))


def canonicalize(mu: MuLike, dims) -> tuple[PhasePoint, Phase]:
    """Reduce ``mu`` mod ``d_i``; returns ``(nu, phase)`` with ``T_mu = phase * T_nu``."""
    dims = DimSpec.of(dims)
    mu = PhasePoint.of(mu)
    mu.check(dims)
    reduced = PhasePoint(tuple((a % d, b % d) for (a, b), d in zip(mu.pairs, dims.dims)))
    angle = _prefactor_angle(mu.pairs, dims) - _prefactor_angle(reduced.pairs, dims)
    return reduced, Phase(angle)


def phase_points(dims) -> Iterator[PhasePoint]:
    """All canonical labels, ordered as nested loops over ``a_1, b_1, a_2, b_2, ...``."""
    dims = DimSpec.of(dims)
    ranges = [range(d) for d in dims.dims for _ in (0, 1)]
    for flat in itertools.product(*ranges):
        yield PhasePoint(tuple(zip(flat[0::2], flat[1::2])))


def embedded_points(dims, positions) -> Iterator[PhasePoint]:
    """Canonical labels supported on ``positions``, trivial on the other qudits."""
    dims = DimSpec.of(dims)
    positions = tuple(positions)
    for nu in phase_points(dims.sub(positions)):
        pairs = [(0, 0)] * dims.n
        for p, pair in zip(positions, nu.pairs):
            pairs[p] = pair
        yield PhasePoint(tuple(pairs))


def point_index(mu: MuLike, dims) -> int:
    """Position of a canonical label in :func:`phase_points` order."""
    dims = DimSpec.of(dims)
    mu = PhasePoint.of(mu)
    mu.check(dims)
    flat = [c for pair in mu.pairs for c in pair]
    return int(np.ravel_multi_index(flat, [d for d in dims.dims for _ in (0, 1)]))


def point_from_index(index: int, dims) -> PhasePoint:
    """Inverse of :func:`point_index`."""
    dims = DimSpec.of(dims)
    flat = np.unravel_index(int(index), [d for d in dims.dims for _ in (0, 1)])
    return PhasePoint(tuple(zip(flat[0::2], flat[1::2])))


def displacement_matrix(d: int, a: int, b: int) -> np.ndarray:
    """Dense ``T_{a,b}`` for one qudit, built from explicit ``Z`` and ``X``."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    j = np.arange(d)
    X = np.zeros((d, d), dtype=np.complex128)
    X[(j + 1) % d, j] = 1.0
    Z = np.diag([Phase(Fraction(2 * k, d)).value for k in range(d)])
    # Z^d = X^d = I, so reducing the exponents leaves the operator unchanged
    ZX = np.linalg.matrix_power(Z, a % d) @ np.linalg.matrix_power(X, b % d)
    return Phase(Fraction(-a * b, d)).value * ZX


def displacement_operator(dims, mu: MuLike) -> np.ndarray:
    """Dense ``T_mu`` on the whole register as a Kronecker product."""
    dims = DimSpec.of(dims)
    mu = PhasePoint.of(mu)
    mu.check(dims)
    out = np.ones((1, 1), dtype=np.complex128)
    for (a, b), d in zip(mu.pairs, dims.dims):
        out = np.kron(out, displacement_matrix(d, a, b))
    return out


def monomial(dims, mu: MuLike) -> tuple[np.ndarray, np.ndarray]:
    """``T_mu`` as a generalized permutation.

    Returns ``(perm, coeff)`` with ``T_mu |j> = coeff[j] |perm[j]>``.
    """
    dims = DimSpec.of(dims)
    mu = PhasePoint.of(mu)
    mu.check(dims)
    digits = np.indices(dims.dims).reshape(dims.n, -1)
    shifted = np.empty_like(digits)
    # phase exponent sum_i a_i (j_i + b_i) / d_i, accumulated in turns
    turns = np.zeros(digits.shape[1])
    for i, ((a, b), d) in enumerate(zip(mu.pairs, dims.dims)):
        shifted[i] = (digits[i] + b) % d
        turns += ((a * shifted[i]) % d) / d
    perm = np.ravel_multi_index(tuple(shifted), dims.dims)
    pre = Phase(_prefactor_angle(mu.pairs, dims)).value
    coeff = pre * np.exp(2j * pi * turns)
    return perm, coeff


def _as_amplitudes(state) -> tuple[DimSpec, np.ndarray]:
    if isinstance(state, StateVector):
        return state.dims, state.amplitudes
    raise TypeError(f"expected a StateVector, got {type(state).__name__}")


def apply_displacement(state: StateVector, mu: MuLike) -> StateVector:
    """``T_mu |psi>`` by index shifts and diagonal phases (no dense matrix)."""
    dims, amps = _as_amplitudes(state)
    perm, coeff = monomial(dims, mu)
    out = np.empty_like(amps)
    out[perm] = coeff * amps
    return StateVector(dims, out)


def expectation(state: StateVector, mu: MuLike) -> complex:
    """``<psi|T_mu|psi>``."""
    dims, amps = _as_amplitudes(state)
    perm, coeff = monomial(dims, mu)
    return complex(np.sum(amps[perm].conj() * coeff * amps))


def compose(mu: MuLike, mu2: MuLike, dims) -> tuple[PhasePoint, Phase]:
    """``T_mu T_mu2 = phase * T_nu`` with ``nu`` canonical."""
    dims = DimSpec.of(dims)
    mu, mu2 = PhasePoint.of(mu), PhasePoint.of(mu2)
    mu.check(dims)
    mu2.check(dims)
    angle = Fraction(0)
    raw = []
    for (a, b), (a2, b2), d in zip(mu.pairs, mu2.pairs, dims.dims):
        angle += Fraction(a * b2 - a2 * b, d)
        raw.append((a + a2, b + b2))
    nu, wrap = canonicalize(raw, dims)
    return nu, Phase(angle) * wrap


def adjoint_index(mu: MuLike, dims) -> tuple[PhasePoint, Phase]:
    """``T_mu^dagger = phase * T_nu`` with ``nu`` the canonical form of ``-mu``."""
    mu = PhasePoint.of(mu)
    return canonicalize(-mu, dims)


def overlap_table(bra: StateVector, ket: StateVector) -> np.ndarray:
    """``<bra|T_mu|ket>`` for every canonical ``mu``, in :func:`phase_points` order.

    One inverse FFT per shift vector, so ``O(D^2 log D)`` overall.
    """
    dims, left = _as_amplitudes(bra)
    kdims, right = _as_amplitudes(ket)
    if kdims != dims:
        raise DimensionError(f"{dims.dims} vs {kdims.dims}")
    n, D = dims.n, dims.total_dim
    left = left.reshape(dims.dims).conj()
    right = right.reshape(dims.dims)
    axes = tuple(range(n))
    a_grid = np.indices(dims.dims)
    table = np.empty(dims.dims + dims.dims, dtype=np.complex128)
    for b in itertools.product(*(range(d) for d in dims.dims)):
        # sum_k conj(bra[k]) ket[k - b] omega^{a.k}, times the prefactor e^{-i pi a.b/d}
        vals = np.fft.ifftn(left * np.roll(right, b, axis=axes)) * D
        halfturns = sum((a_grid[i] * b[i] % (2 * d)) / d for i, d in enumerate(dims.dims))
        table[(Ellipsis,) + b] = vals * np.exp(-1j * pi * halfturns)
    return _interleave(table, n)


def expectation_table(state: StateVector) -> np.ndarray:
    return overlap_table(state, state)


def weyl_coefficients(op: np.ndarray, dims) -> np.ndarray:
    """``Tr(T_mu^dagger op)`` for every canonical ``mu``, in :func:`phase_points` order."""
    dims = DimSpec.of(dims)
    n, D = dims.n, dims.total_dim
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (D, D):
        raise DimensionError(f"operator of shape {op.shape} on a register of dimension {D}")
    t = op.reshape(dims.dims + dims.dims)
    axes = tuple(range(n, 2 * n))
    a_grid = np.indices(dims.dims)
    k = tuple(np.indices(dims.dims))
    table = np.empty(dims.dims + dims.dims, dtype=np.complex128)
    for b in itertools.product(*(range(d) for d in dims.dims)):
        # g[k] = op[k, k - b]; sum_k omega^{-a.k} g[k], times e^{+i pi a.b/d}
        g = np.roll(t, b, axis=axes)[k + k]
        vals = np.fft.fftn(g)
        halfturns = sum((a_grid[i] * b[i] % (2 * d)) / d for i, d in enumerate(dims.dims))
        table[(Ellipsis,) + b] = vals * np.exp(1j * pi * halfturns)
    return _interleave(table, n)


def _interleave(table: np.ndarray, n: int) -> np.ndarray:
    # axes (a_1..a_n, b_1..b_n) -> (a_1, b_1, ..., a_n, b_n), flattened
    order = [k for i in range(n) for k in (i, n + i)]
    return np.transpose(table, order).reshape(-1)
