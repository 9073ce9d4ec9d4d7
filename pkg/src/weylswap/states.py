"""Dense states on multi-qudit registers.

Basis ordering is big-endian everywhere: the basis vector ``|j_1, ..., j_n>``
sits at index ``sum_i j_i * prod_{k>i} d_k``, which is exactly numpy's C-order
``reshape(dims)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotNormalizedError

NORM_TOL = 1e-10


@dataclass(frozen=True)
class DimSpec:
    """Local dimensions of an n-qudit register."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a register needs at least one qudit")
        if any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def of(cls, dims: "DimSpec | Sequence[int] | int") -> "DimSpec":
        if isinstance(dims, DimSpec):
            return dims
        if isinstance(dims, (int, np.integer)):
            return cls((int(dims),))
        return cls(tuple(dims))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def index(self, digits: Sequence[int]) -> int:
        """Big-endian basis index of ``|j_1, ..., j_n>``."""
        if len(digits) != self.n:
            raise DimensionError(f"expected {self.n} digits, got {len(digits)}")
        return int(np.ravel_multi_index(tuple(digits), self.dims))

    def digits(self, index: int) -> tuple[int, ...]:
        return tuple(int(j) for j in np.unravel_index(index, self.dims))

    def concat(self, other: "DimSpec") -> "DimSpec":
        return DimSpec(self.dims + other.dims)

    def sub(self, positions: Iterable[int]) -> "DimSpec":
        return DimSpec(tuple(self.dims[i] for i in positions))


@dataclass(frozen=True)
class Partition:
    """A subset of qudit positions; the complement is implied by the register."""

    subsystem: frozenset[int]

    def __init__(self, subsystem: Iterable[int]):
        object.__setattr__(self, "subsystem", frozenset(int(i) for i in subsystem))

    def validate(self, dims: DimSpec) -> None:
        bad = [i for i in self.subsystem if not 0 <= i < dims.n]
        if bad:
            raise DimensionError(f"positions {sorted(bad)} outside a {dims.n}-qudit register")

    def positions(self, dims: DimSpec) -> tuple[int, ...]:
        self.validate(dims)
        return tuple(sorted(self.subsystem))

    def complement(self, dims: DimSpec) -> tuple[int, ...]:
        self.validate(dims)
        return tuple(i for i in range(dims.n) if i not in self.subsystem)


class StateVector:
    """Amplitudes of a pure state over a :class:`DimSpec`.

    The amplitude array is copied and made read-only so instances can be
    shared freely.
    """

    __slots__ = ("dims", "amplitudes")

    def __init__(self, dims, amplitudes):
        dims = DimSpec.of(dims)
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != dims.total_dim:
            raise DimensionError(
                f"{amps.size} amplitudes for a register of dimension {dims.total_dim}"
            )
        amps.setflags(write=False)
        self.dims = dims
        self.amplitudes = amps

    def __repr__(self):
        return f"StateVector(dims={list(self.dims.dims)}, norm={self.norm():.6g})"

    def __len__(self):
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def require_normalized(self, tol: float = NORM_TOL) -> None:
        if not self.is_normalized(tol):
            raise NotNormalizedError(f"state has squared norm {self.norm() ** 2:.12g}")

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0:
            raise NotNormalizedError("cannot normalize the zero vector")
        return StateVector(self.dims, self.amplitudes / nrm)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qudit."""
        return self.amplitudes.reshape(self.dims.dims)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


class DensityMatrix:
    """A dense operator on a register, usually (not necessarily) a physical state."""

    __slots__ = ("dims", "entries")

    def __init__(self, dims, entries):
        dims = DimSpec.of(dims)
        mat = np.array(entries, dtype=np.complex128)
        D = dims.total_dim
        if mat.shape != (D, D):
            raise DimensionError(f"matrix of shape {mat.shape} on a register of dimension {D}")
        mat.setflags(write=False)
        self.dims = dims
        self.entries = mat

    def __repr__(self):
        return f"DensityMatrix(dims={list(self.dims.dims)})"

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_hermitian(self, tol: float = NORM_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0) <= tol)


def basis_state(dims, digits: Sequence[int]) -> StateVector:
    dims = DimSpec.of(dims)
    amps = np.zeros(dims.total_dim, dtype=np.complex128)
    amps[dims.index(digits)] = 1.0
    return StateVector(dims, amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(a.dims.concat(b.dims), np.kron(a.amplitudes, b.amplitudes))


def inner(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, antilinear in ``a``."""
    if a.dims != b.dims:
        raise DimensionError(f"{a.dims.dims} vs {b.dims.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def reduced_density(state: StateVector, part: Partition) -> DensityMatrix:
    """Partial trace of ``|psi><psi|`` onto the qudits in ``part``."""
    state.require_normalized()
    keep = part.positions(state.dims)
    drop = part.complement(state.dims)
    psi = np.transpose(state.tensor(), keep + drop)
    dA = prod(state.dims.dims[i] for i in keep)
    psi = psi.reshape(dA, -1)
    return DensityMatrix(state.dims.sub(keep), psi @ psi.conj().T)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every qudit of ``rho`` not listed in ``keep``."""
    dims = rho.dims
    keep = tuple(sorted(keep))
    Partition(keep).validate(dims)
    n = dims.n
    t = rho.entries.reshape(dims.dims + dims.dims)
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    t = np.einsum(t, row + col, out)
    dA = prod(dims.dims[i] for i in keep)
    return DensityMatrix(dims.sub(keep), t.reshape(dA, dA))


def random_state(dims, seed: int) -> StateVector:
    """Haar-random pure state from normalized complex Gaussian amplitudes."""
    dims = DimSpec.of(dims)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(dims.total_dim) + 1j * rng.standard_normal(dims.total_dim)
    return StateVector(dims, z / np.linalg.norm(z))
