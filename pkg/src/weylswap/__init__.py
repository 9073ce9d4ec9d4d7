"""Heisenberg-Weyl displacement algebra and the measures built on it."""

from .algebra import (
    Phase,
    PhasePoint,
    adjoint_index,
    apply_displacement,
    canonicalize,
    compose,
    displacement_matrix,
    displacement_operator,
    expectation,
    phase_points,
)
from .entanglement import renyi2_displacement, renyi2_oracle, swap_expectation
from .magic import (
    clifford_generators,
    clifford_image,
    cross_fidelity,
    displacement_distribution,
    purity_estimator,
    random_stabilizer_state,
    stabilizer_renyi,
)
from .states import (
    DensityMatrix,
    DimSpec,
    Partition,
    StateVector,
    basis_state,
    inner,
    random_state,
    reduced_density,
    tensor,
)
from .swap import (
    exact_swap,
    negativity,
    partial_transpose,
    swap_by_displacements,
    transpose_by_displacements,
)

__version__ = "0.1.0"
