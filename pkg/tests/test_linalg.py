import math

import numpy as np
import pytest

from proctensor import (
    DensityMatrix,
    DimensionLimitError,
    NotAStateError,
    NotHermitianError,
    eigenvalues_hermitian,
    kron,
    max_entangled_state,
    maximally_mixed,
    mutual_information,
    partial_trace,
    partial_transpose,
    relative_entropy,
    trace_distance,
    von_neumann_entropy,
)
from proctensor.channels import depolarizing_choi, swap_unitary

from conftest import random_density, random_pure

LN2 = math.log(2)


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]), (2,))

    def test_rejects_negative(self):
        with pytest.raises(NotAStateError):
            DensityMatrix(np.diag([1.5, -0.5]), (2,))

    def test_rejects_bad_trace(self):
        with pytest.raises(NotAStateError):
            DensityMatrix(np.eye(2), (2,))

    def test_rejects_bad_shape_product(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(4) / 4, (2, 3))


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_diagonal_product(self):
        got = kron(np.diag([1.0, 0.0]), np.eye(2) / 2)
        assert np.allclose(got, np.diag([0.5, 0.5, 0.0, 0.0]))

    def test_trace_multiplicative(self, rng):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.isclose(np.trace(kron(a, b)), np.trace(a) * np.trace(b))

    def test_dimension_limit(self, monkeypatch):
        monkeypatch.setenv("PROCTENSOR_MAX_DIM", "8")
        with pytest.raises(DimensionLimitError):
            kron(np.eye(4), np.eye(4))


class TestPartialTrace:
    def test_product_state(self, rng):
        a = random_density(rng, (2,))
        b = random_density(rng, (3,))
        joint = DensityMatrix(kron(a.mat, b.mat), (2, 3))
        assert np.allclose(partial_trace(joint, (0,)).mat, a.mat)
        assert np.allclose(partial_trace(joint, (1,)).mat, b.mat)

    def test_max_entangled_marginal(self):
        phi = max_entangled_state(3)
        assert np.allclose(partial_trace(phi, (0,)).mat, np.eye(3) / 3)

    def test_depolarizing_trace_condition(self):
        for p in (0.0, 0.3, 1.0):
            choi = depolarizing_choi(2, p)
            assert np.allclose(partial_trace(choi.state, (0,)).mat, np.eye(2) / 2)

    def test_sequential_equals_joint(self, rng):
        rho = random_density(rng, (2, 2, 3))
        via_two = partial_trace(partial_trace(rho, (0, 2)), (1,))
        direct = partial_trace(rho, (2,))
        assert np.max(np.abs(via_two.mat - direct.mat)) <= 1e-9

    def test_invalid_subset(self, rng):
        rho = random_density(rng, (2, 2))
        with pytest.raises(ValueError):
            partial_trace(rho, (2,))
        with pytest.raises(ValueError):
            partial_trace(rho, ())


class TestPartialTranspose:
    def test_involutive(self, rng):
        # separable state, so the transposed matrix is itself a valid state
        mat = np.zeros((6, 6), dtype=complex)
        for _ in range(3):
            mat += kron(random_density(rng, (2,)).mat, random_density(rng, (3,)).mat)
        rho = DensityMatrix(mat / 3, (2, 3))
        once = DensityMatrix(partial_transpose(rho, (1,)), (2, 3))
        assert np.allclose(partial_transpose(once, (1,)), rho.mat)

    def test_product_case(self, rng):
        a = random_density(rng, (2,))
        b = random_density(rng, (3,))
        joint = DensityMatrix(kron(a.mat, b.mat), (2, 3))
        assert np.allclose(partial_transpose(joint, (1,)), kron(a.mat, b.mat.T))

    def test_max_entangled_gives_swap(self):
        for d in (2, 3):
            phi = max_entangled_state(d)
            assert np.allclose(partial_transpose(phi, (0,)), swap_unitary(d) / d)


class TestEigenvalues:
    def test_identity(self):
        assert np.allclose(eigenvalues_hermitian(np.eye(3)), [1, 1, 1])

    def test_diagonal(self):
        assert np.allclose(eigenvalues_hermitian(np.diag([0.8, 0.2])), [0.2, 0.8])

    def test_depolarizing_spectrum(self):
        got = eigenvalues_hermitian(depolarizing_choi(2, 0.5).state.mat)
        assert np.allclose(got, [1 / 8, 1 / 8, 1 / 8, 5 / 8])

    def test_non_hermitian_rejected(self):
        with pytest.raises(NotHermitianError):
            eigenvalues_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestEntropy:
    def test_maximally_mixed(self):
        for d in (2, 3, 5):
            assert von_neumann_entropy(maximally_mixed(d)) == pytest.approx(math.log(d))

    def test_pure_state(self, rng):
        assert von_neumann_entropy(random_pure(rng, (4,))) == pytest.approx(0.0, abs=1e-12)

    def test_isotropic_spectrum_value(self):
        # independent oracle: -sum(lambda ln lambda) on the analytic spectrum
        lams = np.array([5 / 8, 1 / 8, 1 / 8, 1 / 8])
        expected = float(-np.sum(lams * np.log(lams)))
        rho = DensityMatrix(np.diag(lams), (4,))
        assert von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(1.0735429, abs=1e-6)

    def test_pure_bipartition_entropies_match(self, rng):
        for _ in range(25):
            psi = random_pure(rng, (3, 4))
            sa = von_neumann_entropy(partial_trace(psi, (0,)))
            sb = von_neumann_entropy(partial_trace(psi, (1,)))
            assert sa == pytest.approx(sb, abs=1e-8)

    def test_araki_lieb_and_subadditivity(self, rng):
        for _ in range(50):
            rho = random_density(rng, (3, 3))
            sa = von_neumann_entropy(partial_trace(rho, (0,)))
            sb = von_neumann_entropy(partial_trace(rho, (1,)))
            sab = von_neumann_entropy(rho)
            assert abs(sa - sb) <= sab + 1e-8
            assert sab <= sa + sb + 1e-8


class TestRelativeEntropy:
    def test_self_is_zero(self, rng):
        rho = random_density(rng, (4,))
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)

    def test_max_entangled_vs_mixed(self):
        phi = max_entangled_state(2)
        assert relative_entropy(phi, maximally_mixed((2, 2))) == pytest.approx(
            2 * LN2, abs=1e-10
        )

    def test_orthogonal_supports_infinite(self):
        zero = DensityMatrix(np.diag([1.0, 0.0]), (2,))
        one = DensityMatrix(np.diag([0.0, 1.0]), (2,))
        assert relative_entropy(zero, one) == math.inf

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            relative_entropy(random_density(rng, (2,)), random_density(rng, (3,)))


class TestMutualInformation:
    def test_product_is_zero(self, rng):
        a = random_density(rng, (2,))
        b = random_density(rng, (3,))
        joint = DensityMatrix(kron(a.mat, b.mat), (2, 3))
        assert mutual_information(joint, ((0,), (1,))) == pytest.approx(0.0, abs=1e-9)

    def test_max_entangled(self):
        for d in (2, 3):
            phi = max_entangled_state(d)
            assert mutual_information(phi, ((0,), (1,))) == pytest.approx(
                2 * math.log(d), abs=1e-10
            )

    def test_four_pure_factors(self, rng):
        mats = [random_pure(rng, (2,)).mat for _ in range(4)]
        mat = mats[0]
        for m in mats[1:]:
            mat = kron(mat, m)
        joint = DensityMatrix(mat, (2, 2, 2, 2))
        got = mutual_information(joint, ((0,), (1,), (2,), (3,)))
        assert got == pytest.approx(0.0, abs=1e-9)

    def test_matches_relative_entropy_form(self, rng):
        for _ in range(20):
            rho = random_density(rng, (2, 3))
            mi = mutual_information(rho, ((0,), (1,)))
            marginals = kron(partial_trace(rho, (0,)).mat, partial_trace(rho, (1,)).mat)
            rel = relative_entropy(rho, DensityMatrix(marginals, (2, 3)))
            assert mi == pytest.approx(rel, abs=1e-8)
            assert mi >= -1e-8

    def test_malformed_partition(self, rng):
        rho = random_density(rng, (2, 2))
        with pytest.raises(ValueError):
            mutual_information(rho, ((0,), (0, 1)))
        with pytest.raises(ValueError):
            mutual_information(rho, ((0,),))


class TestTraceDistance:
    def test_identical(self, rng):
        rho = random_density(rng, (3,))
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure(self):
        zero = DensityMatrix(np.diag([1.0, 0.0]), (2,))
        one = DensityMatrix(np.diag([0.0, 1.0]), (2,))
        assert trace_distance(zero, one) == pytest.approx(1.0)

    def test_diagonal_example(self):
        a = maximally_mixed(2)
        b = DensityMatrix(np.diag([0.75, 0.25]), (2,))
        assert trace_distance(a, b) == pytest.approx(0.25)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            trace_distance(random_density(rng, (2,)), random_density(rng, (3,)))
