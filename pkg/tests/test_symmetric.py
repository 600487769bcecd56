"""Coupling multi-qubit product states into the spin-j ladder basis."""

import math

import numpy as np
import pytest

from spinaxes import (
    BlochVector,
    DomainError,
    HalfInt,
    SeparableEnsemble,
    ValidationError,
    coherent_state,
    ensemble_to_rho,
    product_state_in_jm,
    purity,
    qubit_density,
    symmetric_subspace_unitary,
    symmetrize_pair,
)

h = HalfInt


def random_direction(rng):
    v = rng.normal(size=3)
    return BlochVector.from_cartesian(*v)


class TestBlochVector:
    def test_cartesian_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            d = random_direction(rng)
            back = BlochVector.from_cartesian(*d.cartesian)
            assert back.theta == pytest.approx(d.theta, abs=1e-12)
            assert abs(back.phi - d.phi) % (2 * math.pi) == pytest.approx(0.0, abs=1e-12)

    def test_phi_wraps(self):
        d = BlochVector(1.0, 2.0 * math.pi + 0.5)
        assert d.phi == pytest.approx(0.5, abs=1e-12)

    def test_rejects_bad_theta(self):
        with pytest.raises(DomainError):
            BlochVector(3.5, 0.0)
        with pytest.raises(DomainError):
            BlochVector(-0.1, 0.0)
        with pytest.raises(DomainError):
            BlochVector(math.nan, 0.0)

    def test_zero_vector_has_no_direction(self):
        with pytest.raises(DomainError):
            BlochVector.from_cartesian(0.0, 0.0, 0.0)

    def test_dot(self):
        x = BlochVector(math.pi / 2, 0.0)
        z = BlochVector(0.0, 0.0)
        assert x.dot(z) == pytest.approx(0.0, abs=1e-15)
        assert x.dot(x) == pytest.approx(1.0, abs=1e-15)


class TestQubitDensity:
    def test_projects_onto_direction(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            d = random_direction(rng)
            rho = qubit_density(d)
            np.testing.assert_allclose(rho @ rho, rho, atol=1e-14)
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)

    def test_poles(self):
        np.testing.assert_allclose(qubit_density(BlochVector(0.0, 0.0)), np.diag([1.0, 0.0]), atol=1e-16)
        np.testing.assert_allclose(qubit_density(BlochVector(math.pi, 0.0)), np.diag([0.0, 1.0]), atol=1e-16)


class TestSubspaceUnitary:
    def test_two_qubits_explicit(self):
        s = 1.0 / math.sqrt(2.0)
        expected = np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, s, s, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, s, -s, 0.0],
            ]
        )
        np.testing.assert_allclose(symmetric_subspace_unitary(2), expected, atol=1e-15)

    def test_unitary(self):
        for n in range(1, 7):
            u = symmetric_subspace_unitary(n)
            np.testing.assert_allclose(u @ u.conj().T, np.eye(2**n), atol=1e-13)

    def test_top_rows_are_symmetric_states(self):
        # the first n+1 rows must be invariant under any qubit swap
        for n in (2, 3, 4):
            u = symmetric_subspace_unitary(n)
            top = u[: n + 1]
            for axes in _adjacent_swaps(n):
                swapped = top.reshape((n + 1,) + (2,) * n).transpose((0,) + axes).reshape(n + 1, 2**n)
                np.testing.assert_allclose(swapped, top, atol=1e-13)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            symmetric_subspace_unitary(0)
        with pytest.raises(DomainError):
            symmetric_subspace_unitary(13)


def _adjacent_swaps(n):
    out = []
    for i in range(n - 1):
        axes = list(range(1, n + 1))
        axes[i], axes[i + 1] = axes[i + 1], axes[i]
        out.append(tuple(axes))
    return out


class TestSymmetrizePair:
    def test_antisymmetric_weight_formula(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            d1, d2 = random_direction(rng), random_direction(rng)
            rho, weight = symmetrize_pair(d1, d2)
            assert weight == pytest.approx((1.0 - d1.dot(d2)) / 4.0, abs=1e-13)
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-13)

    def test_no_coherence_between_sectors(self):
        rng = np.random.default_rng(13)
        u = symmetric_subspace_unitary(2)
        for _ in range(25):
            rho, _ = symmetrize_pair(random_direction(rng), random_direction(rng))
            coupled = u @ rho @ u.conj().T
            assert np.abs(coupled[:3, 3]).max() < 1e-13
            assert np.abs(coupled[3, :3]).max() < 1e-13

    def test_aligned_pair_has_no_singlet(self):
        d = BlochVector(0.7, 1.2)
        _, weight = symmetrize_pair(d, d)
        assert weight == pytest.approx(0.0, abs=1e-15)

    def test_opposite_pair_maximizes_singlet(self):
        _, weight = symmetrize_pair(BlochVector(0.0, 0.0), BlochVector(math.pi, 0.0))
        assert weight == pytest.approx(0.5, abs=1e-15)


class TestProductState:
    def test_matches_full_tensor_route(self):
        rng = np.random.default_rng(17)
        for n in (1, 2, 3, 4):
            u = symmetric_subspace_unitary(n)
            for _ in range(5):
                d = random_direction(rng)
                full = qubit_density(d)
                for _ in range(n - 1):
                    full = np.kron(full, qubit_density(d))
                coupled = u @ full @ u.conj().T
                block = coupled[: n + 1, : n + 1]
                direct = product_state_in_jm(d, n)
                np.testing.assert_allclose(block, direct.matrix, atol=1e-13)
                # aligned products never leave the symmetric subspace
                assert np.trace(block).real == pytest.approx(1.0, abs=1e-13)

    def test_north_pole_is_top_basis_state(self):
        rho = product_state_in_jm(BlochVector(0.0, 0.0), 4)
        expected = np.zeros((5, 5))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(rho.matrix, expected, atol=1e-15)

    def test_is_coherent_state_projector(self):
        d = BlochVector(1.1, 0.4)
        vec = coherent_state(h(3), d.theta, d.phi)
        rho = product_state_in_jm(d, 3)
        np.testing.assert_allclose(rho.matrix, np.outer(vec, vec.conj()), atol=1e-15)


class TestSeparableEnsemble:
    def test_validation(self):
        z = BlochVector(0.0, 0.0)
        with pytest.raises(ValidationError, match="positive"):
            SeparableEnsemble(2, ((-0.5, z), (1.5, z)))
        with pytest.raises(ValidationError, match="sum"):
            SeparableEnsemble(2, ((0.3, z), (0.3, z)))
        with pytest.raises(ValidationError, match="BlochVector"):
            SeparableEnsemble(2, ((1.0, (0.0, 0.0)),))
        with pytest.raises(ValidationError, match="at least one"):
            SeparableEnsemble(2, ())
        with pytest.raises(DomainError):
            SeparableEnsemble(0, ((1.0, z),))

    def test_j_is_half_the_qubit_count(self):
        z = BlochVector(0.0, 0.0)
        assert SeparableEnsemble(3, ((1.0, z),)).j == h(3)

    def test_single_term_is_pure(self):
        rho = ensemble_to_rho(SeparableEnsemble(3, ((1.0, BlochVector(0.9, 2.2)),)))
        assert purity(rho) == pytest.approx(1.0, abs=1e-13)

    def test_mixture_matches_weighted_sum(self):
        rng = np.random.default_rng(19)
        dirs = [random_direction(rng) for _ in range(3)]
        weights = (0.2, 0.5, 0.3)
        ens = SeparableEnsemble(4, tuple(zip(weights, dirs)))
        rho = ensemble_to_rho(ens)
        manual = sum(w * product_state_in_jm(d, 4).matrix for w, d in zip(weights, dirs))
        np.testing.assert_allclose(rho.matrix, manual, atol=1e-14)

    def test_distinct_directions_mix(self):
        ens = SeparableEnsemble(
            2, ((0.5, BlochVector(0.0, 0.0)), (0.5, BlochVector(math.pi / 2, 0.0)))
        )
        assert purity(ensemble_to_rho(ens)) < 1.0 - 1e-9
