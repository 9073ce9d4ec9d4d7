import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylswap.algebra import apply_displacement, embedded_points
from weylswap.entanglement import (
    ClampWarning,
    max_entropy,
    renyi2_displacement,
    renyi2_oracle,
    subsystem_purity,
    swap_expectation,
)
from weylswap.errors import NotNormalizedError
from weylswap.states import Partition, StateVector, random_state, tensor

BATTERY = [((2, 2), [0]), ((2, 2, 2), [0, 2]), ((3, 3), [1]), ((2, 3), [0]), ((2, 3), [1])]


@pytest.mark.parametrize("dims,part", BATTERY)
def test_three_routes_agree(dims, part):
    part = Partition(part)
    for seed in range(25):
        psi = random_state(dims, seed)
        s_disp = renyi2_displacement(psi, part)
        s_oracle = renyi2_oracle(psi, part)
        s_swap = -math.log(swap_expectation(psi, part))
        assert abs(s_disp - s_oracle) < 1e-8
        assert abs(s_disp - s_swap) < 1e-8


def test_bell(bell):
    assert abs(renyi2_displacement(bell, Partition([0])) - math.log(2)) < 1e-10


def test_ghz_any_cut(ghz):
    for part in ([0], [1], [0, 1], [1, 2]):
        assert abs(renyi2_displacement(ghz, Partition(part)) - math.log(2)) < 1e-10


def test_product_state_is_zero():
    psi = tensor(random_state(2, 0), random_state(3, 1))
    assert abs(renyi2_displacement(psi, Partition([0]))) < 1e-12


@pytest.mark.parametrize("dims,part", BATTERY)
def test_range_and_complement_symmetry(dims, part):
    for seed in range(10):
        psi = random_state(dims, 100 + seed)
        A = Partition(part)
        B = Partition(A.complement(psi.dims))
        s = renyi2_displacement(psi, A)
        assert -1e-12 <= s <= max_entropy(psi, A) + 1e-12
        assert abs(s - renyi2_displacement(psi, B)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31), k=st.integers(0, 80))
def test_invariant_under_local_displacements(seed, k):
    psi = random_state((3, 3), seed)
    labels = list(embedded_points(psi.dims, (0,)))
    moved = apply_displacement(psi, labels[k % len(labels)])
    assert abs(renyi2_displacement(moved, Partition([0])) - renyi2_displacement(psi, Partition([0]))) < 1e-10


def test_purity_empty_partition():
    assert subsystem_purity(random_state((2, 2), 0), Partition([])) == 1.0


def test_requires_normalized():
    with pytest.raises(NotNormalizedError):
        renyi2_displacement(StateVector((2, 2), [1, 1, 0, 0]), Partition([0]))


def test_clamp_warning():
    from weylswap.entanglement import _safe_neg_log

    with pytest.warns(ClampWarning):
        assert _safe_neg_log(0.0) == pytest.approx(-math.log(1e-12))
