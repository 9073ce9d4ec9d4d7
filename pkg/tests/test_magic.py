import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylswap.algebra import PhasePoint, displacement_matrix, phase_points
from weylswap.errors import NotCliffordError, NotNormalizedError
from weylswap.magic import (
    certify,
    clifford_generators,
    clifford_image,
    cross_fidelity,
    displacement_distribution,
    exact_purity,
    fourier,
    purity_estimator,
    quadratic_phase,
    random_stabilizer_state,
    stabilizer_renyi,
    sum_gate,
    twirl_sum,
)
from weylswap.states import StateVector, basis_state, random_state, tensor

STAB_DIMS = [(2, 2), (3, 3), (2, 2, 2)]


class TestDistribution:
    def test_qubit_zero(self):
        dist = displacement_distribution(basis_state(2, [0]))
        assert dist.weight([(0, 0)]) == pytest.approx(0.5)
        assert dist.weight([(1, 0)]) == pytest.approx(0.5)
        assert dist.weight([(0, 1)]) == pytest.approx(0.0, abs=1e-15)
        assert dist.weight([(1, 1)]) == pytest.approx(0.0, abs=1e-15)

    def test_qutrit_zero(self):
        dist = displacement_distribution(basis_state(3, [0]))
        assert set(dist.support()) == {PhasePoint(((a, 0),)) for a in range(3)}
        for a in range(3):
            assert dist.weight([(a, 0)]) == pytest.approx(1 / 3)

    @pytest.mark.parametrize("dims", [(2, 2), (2, 2, 2), (3, 3), (2, 3)])
    def test_normalized(self, dims):
        for seed in range(25):
            assert abs(displacement_distribution(random_state(dims, seed)).total() - 1) < 1e-9

    def test_requires_normalized(self):
        with pytest.raises(NotNormalizedError):
            displacement_distribution(StateVector(2, [1, 1]))


class TestStabilizerRenyi:
    def test_t_state(self, t_state):
        # brute force over the four qubit displacements: p = 1/2, 1/4, 1/4, 0
        p = [abs(np.vdot(t_state.amplitudes, displacement_matrix(2, a, b) @ t_state.amplitudes)) ** 2 / 2
             for a in range(2) for b in range(2)]
        expected = -math.log(2 * sum(x**2 for x in p))
        assert abs(expected - math.log(4 / 3)) < 1e-12
        assert abs(stabilizer_renyi(t_state, 2) - math.log(4 / 3)) < 1e-10

    @pytest.mark.parametrize("alpha", [0.5, 1, 2, 3])
    def test_basis_states_are_free(self, alpha):
        assert abs(stabilizer_renyi(basis_state((3, 3), [1, 2]), alpha)) < 1e-10

    def test_rejects_nonpositive_alpha(self, t_state):
        with pytest.raises(ValueError):
            stabilizer_renyi(t_state, 0)

    def test_shannon_flag(self, t_state):
        assert stabilizer_renyi(t_state, 2, shannon=True) == pytest.approx(stabilizer_renyi(t_state, 1))

    @pytest.mark.parametrize("dims", STAB_DIMS)
    def test_stabilizer_states_are_free(self, dims):
        for seed in range(20):
            psi = random_stabilizer_state(dims, depth=20, seed=seed)
            for alpha in (0.5, 2, 3):
                assert abs(stabilizer_renyi(psi, alpha)) < 1e-8

    @pytest.mark.parametrize("dims", [(2,), (2, 2), (3,)])
    def test_haar_states_have_magic(self, dims):
        assert stabilizer_renyi(random_state(dims, 5), 2) > 1e-3

    @pytest.mark.parametrize("dims", STAB_DIMS + [(2, 3)])
    @pytest.mark.parametrize("alpha", [0.5, 2, 3])
    def test_clifford_invariance(self, dims, alpha):
        psi = random_state(dims, 17)
        base = stabilizer_renyi(psi, alpha)
        for gate in clifford_generators(dims):
            assert abs(stabilizer_renyi(gate.apply(psi), alpha) - base) < 1e-8, gate.name

    @pytest.mark.parametrize("alpha", [0.5, 1, 2, 3])
    def test_additivity(self, alpha):
        for seed in range(5):
            a, b = random_state(2, seed), random_state(3, seed + 50)
            lhs = stabilizer_renyi(tensor(a, b), alpha)
            assert abs(lhs - stabilizer_renyi(a, alpha) - stabilizer_renyi(b, alpha)) < 1e-8

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**31))
    def test_nonnegative(self, seed):
        assert stabilizer_renyi(random_state((2, 2), seed), 2) >= -1e-12


class TestCrossFidelity:
    def test_orthogonal(self):
        assert abs(cross_fidelity(basis_state(3, [0]), basis_state(3, [1]))) < 1e-12

    def test_self(self):
        psi = random_state((2, 3), 0)
        assert abs(cross_fidelity(psi, psi) - 1) < 1e-12

    @pytest.mark.parametrize("dims", [(2,), (2, 2), (3, 3), (2, 3)])
    def test_matches_overlap(self, dims):
        for seed in range(25):
            psi, phi = random_state(dims, seed), random_state(dims, 1000 + seed)
            expected = abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2
            assert abs(cross_fidelity(psi, phi) - expected) < 1e-9

    def test_twirl_sum_is_one(self):
        # the literal sum_mu |<psi|T|phi>|^2 / D does not see the overlap
        for seed in range(5):
            psi, phi = random_state((2, 3), seed), random_state((2, 3), seed + 9)
            assert abs(twirl_sum(psi, phi) - 1) < 1e-12
        assert abs(twirl_sum(basis_state(3, [0]), basis_state(3, [1])) - 1) < 1e-12


class TestClifford:
    def test_hadamard_images(self):
        H = fourier(2)
        assert clifford_image(H, [(1, 0)], 2).target == PhasePoint(((0, 1),))
        assert clifford_image(H, [(0, 1)], 2).target == PhasePoint(((1, 0),))

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_local_gates_certify_as_bijections(self, d):
        for U in (fourier(d), quadratic_phase(d)):
            images = certify(U, d)
            assert len(images) == d * d
            assert len({img.target for img in images.values()}) == d * d
            for mu, img in images.items():
                lhs = U @ displacement_matrix(d, *mu.pairs[0]) @ U.conj().T
                assert np.allclose(lhs, img.phase * displacement_matrix(d, *img.target.pairs[0]),
                                   atol=1e-10)

    @pytest.mark.parametrize("d", [2, 3])
    def test_sum_gate(self, d):
        images = certify(sum_gate(d), (d, d))
        assert len({img.target for img in images.values()}) == d**4

    def test_t_gate_is_not_clifford(self):
        T = np.diag([1, np.exp(1j * np.pi / 4)])
        with pytest.raises(NotCliffordError):
            clifford_image(T, [(0, 1)], 2)
        with pytest.raises(NotCliffordError):
            certify(T, 2)

    def test_generators_names(self):
        names = [g.name for g in clifford_generators((2, 2))]
        assert {"H[0]", "H[1]", "S[0]", "CNOT[0,1]"} <= set(names)
        names3 = [g.name for g in clifford_generators((2, 3))]
        assert not any(n.startswith(("CNOT", "SUM")) for n in names3)

    def test_identity_maps_labels_to_themselves(self):
        for mu in phase_points((2, 2)):
            img = clifford_image(np.eye(4), mu, (2, 2))
            assert img.target == mu and abs(img.phase - 1) < 1e-12


class TestEstimator:
    def test_unbiased_t_state(self, t_state):
        exact = exact_purity(t_state)
        assert exact == pytest.approx(3 / 8)
        est, err = purity_estimator(t_state, samples=20_000, seed=1)
        assert abs(est - exact) < 4 * err

    def test_seeded(self):
        psi = random_state((2, 2), 3)
        assert purity_estimator(psi, 200, seed=4) == purity_estimator(psi, 200, seed=4)

    def test_exhaustive(self):
        psi = random_state((3,), 3)
        assert purity_estimator(psi, 1, seed=0, exhaustive=True) == (exact_purity(psi), 0.0)

    def test_error_shrinks(self):
        psi = random_state((2, 2), 8)
        _, e1 = purity_estimator(psi, 500, seed=0)
        _, e2 = purity_estimator(psi, 8000, seed=0)
        assert e2 < e1

    def test_rejects_zero_samples(self, t_state):
        with pytest.raises(ValueError):
            purity_estimator(t_state, 0, seed=0)
