import numpy as np
import pytest

from qgcc.errors import DimensionMismatch, NonPositiveKappa, StructureViolation
from qgcc.qmodel import (
    CouplingOperator,
    DoubledMatrix,
    MatrixKind,
    UncertaintyClass,
    channel_commutator,
    commutation_matrix,
    diffusion_matrix,
    doubled_from_parameters,
    dpa_system,
    drift_matrix,
    hermitian_doubled_basis,
    perturbation_in_class,
    popov_offset,
    swap_matrix,
)


def random_doubled(rng, n, kind=MatrixKind.GENERAL):
    b1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if kind is MatrixKind.HERMITIAN:
        b1 = (b1 + b1.conj().T) / 2
        b2 = (b2 + b2.T) / 2
    return DoubledMatrix(b1, b2, kind)


class TestDoubledMatrix:
    def test_dpa_hamiltonian_assembles(self):
        m = DoubledMatrix([[-1.0]], [[0.5j]], MatrixKind.HERMITIAN)
        expected = np.array([[-1.0, 0.5j], [-0.5j, -1.0]])
        assert np.allclose(m.full, expected)
        assert np.max(np.abs(m.full - m.full.conj().T)) <= 1e-12

    def test_zero_matrix(self):
        z = DoubledMatrix([[0.0]], [[0.0]], MatrixKind.HERMITIAN)
        assert np.all(z.full == 0)

    def test_one_by_one_block2_always_symmetric(self):
        m = DoubledMatrix([[1.0]], [[1.0 + 1.0j]], MatrixKind.HERMITIAN)
        assert np.allclose(m.block2, [[1.0 + 1.0j]])

    def test_hermitian_kind_rejects_bad_block1(self):
        with pytest.raises(StructureViolation):
            DoubledMatrix([[1.0, 2.0], [0.0, 1.0]], np.zeros((2, 2)),
                          MatrixKind.HERMITIAN)

    def test_hermitian_kind_rejects_asymmetric_block2(self):
        with pytest.raises(StructureViolation):
            DoubledMatrix(np.eye(2), [[0.0, 1.0], [-1.0, 0.0]],
                          MatrixKind.HERMITIAN)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            DoubledMatrix(np.eye(2), np.zeros((3, 3)))

    def test_closure_under_product_sum_adjoint(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(1, 5))
            a = random_doubled(rng, n)
            b = random_doubled(rng, n)
            prod = a @ b
            assert np.allclose(prod.full, a.full @ b.full, atol=1e-12)
            total = a + b
            assert np.allclose(total.full, a.full + b.full, atol=1e-12)
            adj = a.adjoint()
            assert np.allclose(adj.full, a.full.conj().T, atol=1e-12)
            # each result re-validates through from_full
            DoubledMatrix.from_full(prod.full)
            DoubledMatrix.from_full(total.full)
            DoubledMatrix.from_full(adj.full)

    def test_from_full_rejects_broken_structure(self):
        bad = np.eye(4, dtype=complex)
        bad[2, 0] = 5.0
        with pytest.raises(StructureViolation):
            DoubledMatrix.from_full(bad)

    def test_immutability(self):
        m = DoubledMatrix([[1.0]], [[0.0]], MatrixKind.HERMITIAN)
        with pytest.raises(ValueError):
            m.block1[0, 0] = 2.0


class TestConstants:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_involutions_and_commutation(self, n):
        j = commutation_matrix(n)
        s = swap_matrix(n)
        assert np.array_equal(j @ j, np.eye(2 * n))
        assert np.array_equal(s @ s, np.eye(2 * n))
        assert np.array_equal(j, j.T)
        assert np.array_equal(s, s.T)
        assert np.array_equal(j @ s @ j @ s, s @ j @ s @ j)


class TestDriftMatrix:
    def test_dpa_drift_at_kappa_4_5(self):
        system, _, _ = dpa_system(4.5)
        f = system.drift_matrix()
        expected = np.array([[-2.25 + 1j, 0.5], [0.5, -2.25 - 1j]])
        assert np.allclose(f, expected, atol=1e-12)

    def test_zero_inputs(self):
        m = DoubledMatrix.zeros(2)
        n = CouplingOperator(np.zeros((1, 2)), np.zeros((1, 2)))
        assert np.allclose(drift_matrix(m, n), 0.0)

    def test_matches_independent_expression(self):
        # second implementation path: explicit doubled matrices, no helpers
        rng = np.random.default_rng(11)
        for _ in range(25):
            n = 2
            m = random_doubled(rng, n, MatrixKind.HERMITIAN)
            coup = CouplingOperator(
                rng.standard_normal((3, n)) + 1j * rng.standard_normal((3, n)),
                rng.standard_normal((3, n)) + 1j * rng.standard_normal((3, n)),
            )
            j = np.diag([1.0, 1.0, -1.0, -1.0])
            jm = np.diag([1.0, 1.0, 1.0, -1.0, -1.0, -1.0])
            nd = np.block([[coup.n1, coup.n2], [coup.n2.conj(), coup.n1.conj()]])
            direct = -1j * j @ m.full - 0.5 * j @ nd.conj().T @ jm @ nd
            assert np.allclose(drift_matrix(m, coup), direct, atol=1e-10)

    def test_linearity_in_hamiltonian(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            n = int(rng.integers(1, 4))
            m1 = random_doubled(rng, n, MatrixKind.HERMITIAN)
            m2 = random_doubled(rng, n, MatrixKind.HERMITIAN)
            coup = CouplingOperator(
                rng.standard_normal((2, n)), rng.standard_normal((2, n))
            )
            j = commutation_matrix(n)
            lhs = drift_matrix(m1 + m2, coup) - drift_matrix(m2, coup)
            assert np.max(np.abs(lhs - (-1j) * j @ m1.full)) <= 1e-10


class TestDiffusionMatrix:
    def test_dpa_value(self):
        system, _, _ = dpa_system(4.5)
        d = system.diffusion_matrix()
        assert np.allclose(d, np.diag([4.5, 0.0]), atol=1e-12)
        assert abs(np.trace(d).real - 4.5) <= 1e-12

    def test_zero_coupling(self):
        n = CouplingOperator(np.zeros((2, 2)), np.zeros((2, 2)))
        assert np.allclose(diffusion_matrix(n), 0.0)

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            n = int(rng.integers(1, 4))
            m = int(rng.integers(1, 4))
            coup = CouplingOperator(
                rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)),
                rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)),
            )
            eigs = np.linalg.eigvalsh(diffusion_matrix(coup))
            assert eigs[0] >= -1e-10


class TestChannelCommutator:
    def test_dpa_value(self):
        system, _, _ = dpa_system(4.5)
        c = channel_commutator(system.channel, system.coupling)
        assert np.allclose(c, [[0.0], [-np.sqrt(4.5)]], atol=1e-12)

    def test_zero_coupling(self):
        channel = DoubledMatrix.identity(1)
        coup = CouplingOperator([[0.0]], [[0.0]])
        assert np.allclose(channel_commutator(channel, coup), 0.0)

    def test_squared_magnitude_is_kappa(self):
        system, _, _ = dpa_system(4.5)
        c = channel_commutator(system.channel, system.coupling)
        assert abs(np.sum(np.abs(c) ** 2) - 4.5) <= 1e-12


class TestPopovOffset:
    def test_paper_values(self):
        system, _, _ = dpa_system(3.8, gamma=2.0,
                                  uncertainty_class=UncertaintyClass.POSITIVE_BOUND)
        assert popov_offset(system, 0.1) == pytest.approx(0.76, abs=1e-12)
        system, _, _ = dpa_system(4.5, gamma=2.0,
                                  uncertainty_class=UncertaintyClass.POSITIVE_BOUND)
        assert popov_offset(system, 0.5) == pytest.approx(4.5, abs=1e-12)

    def test_zero_theta(self):
        system, _, _ = dpa_system(4.5)
        assert popov_offset(system, 0.0) == 0.0

    def test_negative_theta_rejected(self):
        system, _, _ = dpa_system(4.5)
        with pytest.raises(ValueError):
            popov_offset(system, -0.1)


class TestPerturbationMembership:
    def test_example_perturbation(self):
        _, delta, _ = dpa_system(4.5)
        # spectrum {0.5, 1.5}
        assert perturbation_in_class(delta, UncertaintyClass.NORM_BOUND, 1.0)
        assert perturbation_in_class(delta, UncertaintyClass.POSITIVE_BOUND, 2.0)
        assert not perturbation_in_class(delta, UncertaintyClass.NORM_BOUND, 2.0)

    def test_requires_hermitian_kind(self):
        general = DoubledMatrix([[1.0]], [[0.0]], MatrixKind.GENERAL)
        with pytest.raises(StructureViolation):
            perturbation_in_class(general, UncertaintyClass.NORM_BOUND, 1.0)


class TestDpaSystem:
    def test_drift_and_controller(self):
        system, delta, controller = dpa_system(4.5)
        f = system.drift_matrix()
        assert np.allclose(f, [[-2.25 + 1j, 0.5], [0.5, -2.25 - 1j]])
        assert np.allclose(controller.full, [[0.0, -0.5j], [0.5j, 0.0]])

    @pytest.mark.parametrize("kappa", [0.5, 4.5, 10.0])
    def test_perturbed_hamiltonian(self, kappa):
        system, delta, _ = dpa_system(kappa)
        e = system.channel.full
        perturbed = system.hamiltonian.full + e.conj().T @ delta.full @ e
        assert np.allclose(perturbed, [[0.0, 1.0j], [-1.0j, 0.0]], atol=1e-12)
        # perturbed Hamiltonian re-validates as Hermitian doubled
        DoubledMatrix.from_full(perturbed, MatrixKind.HERMITIAN)

    def test_rejects_negative_kappa(self):
        with pytest.raises(NonPositiveKappa):
            dpa_system(-1.0)

    def test_undamped_plant_constructible(self):
        system, _, _ = dpa_system(0.0)
        eigs = np.linalg.eigvals(system.drift_matrix())
        assert np.max(np.abs(eigs.real)) <= 1e-12
        assert np.allclose(np.sort(eigs.imag), [-np.sqrt(0.75), np.sqrt(0.75)])

    def test_default_gammas(self):
        sys_norm, _, _ = dpa_system(4.5)
        assert sys_norm.gamma == 1.0
        sys_pos, _, _ = dpa_system(
            4.5, uncertainty_class=UncertaintyClass.POSITIVE_BOUND
        )
        assert sys_pos.gamma == 2.0


class TestHermitianBasis:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_dimension_and_structure(self, n):
        basis = hermitian_doubled_basis(n)
        assert len(basis) == 2 * n * n + n
        flat = np.array([b.full.view(float).ravel() for b in basis])
        assert np.linalg.matrix_rank(flat) == len(basis)
        for b in basis:
            assert np.max(np.abs(b.full - b.full.conj().T)) <= 1e-12

    def test_round_trip(self):
        rng = np.random.default_rng(23)
        for n in (1, 2):
            values = rng.standard_normal(2 * n * n + n)
            x = doubled_from_parameters(values, n)
            assert x.kind is MatrixKind.HERMITIAN
            # expansion in the basis reproduces the coordinates
            basis = hermitian_doubled_basis(n)
            gram = np.array(
                [[np.vdot(a.full, b.full).real for b in basis] for a in basis]
            )
            rhs = np.array([np.vdot(b.full, x.full).real for b in basis])
            recovered = np.linalg.solve(gram, rhs)
            assert np.allclose(recovered, values, atol=1e-10)
