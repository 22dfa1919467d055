import numpy as np
import pytest

from qgcc.errors import NotHurwitz
from qgcc.oracle import (
    ClosedLoop,
    closed_loop_drift,
    is_hurwitz,
    lyapunov_cost,
    sample_perturbation,
    steady_state_covariance,
    verify_bound,
)
from qgcc.qmodel import (
    DoubledMatrix,
    MatrixKind,
    UncertaintyClass,
    dpa_system,
    perturbation_in_class,
)


class TestClosedLoopDrift:
    def test_paper_perturbation_and_controller(self):
        system, delta, controller = dpa_system(4.5)
        drift = closed_loop_drift(system, delta, controller)
        assert np.allclose(drift, [[-2.25, 0.5], [0.5, -2.25]], atol=1e-12)

    def test_open_loop_reduces_to_nominal_drift(self):
        system, _, _ = dpa_system(4.5)
        drift = closed_loop_drift(system, None, None)
        assert np.allclose(drift, system.drift_matrix(), atol=0.0)

    def test_perturbation_without_controller(self):
        system, delta, _ = dpa_system(4.5)
        drift = closed_loop_drift(system, delta, None)
        assert np.allclose(drift, [[-2.25, 1.0], [1.0, -2.25]], atol=1e-12)


class TestLyapunovCost:
    def test_isotropic_contraction(self):
        loop = ClosedLoop(-np.eye(2), 2.0 * np.eye(2), np.eye(2))
        assert lyapunov_cost(loop) == pytest.approx(2.0, abs=1e-12)

    def test_dpa_closed_loop_regression(self):
        # hand-derived from the 3-equation real symmetric system:
        # s3 = 4.5/173.25, s2 = 4.5*s3, s1 = 39.5*s3, cost = s1 + s3
        loop = ClosedLoop(
            np.array([[-2.25, 0.5], [0.5, -2.25]]),
            np.diag([4.5, 0.0]),
            np.eye(2),
        )
        cost = lyapunov_cost(loop)
        assert cost == pytest.approx(182.25 / 173.25, abs=1e-10)
        assert cost == pytest.approx(1.0519, abs=1e-3)

    def test_zero_noise_zero_cost(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((4, 4))
        drift = a - (np.max(np.linalg.eigvals(a).real) + 1.0) * np.eye(4)
        loop = ClosedLoop(drift, np.zeros((4, 4)), np.eye(4))
        assert lyapunov_cost(loop) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_unstable_drift(self):
        loop = ClosedLoop(np.eye(2), np.eye(2), np.eye(2))
        with pytest.raises(NotHurwitz):
            lyapunov_cost(loop)

    def test_cost_linear_in_noise(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            drift = a - (np.max(np.linalg.eigvals(a).real) + 0.5) * np.eye(3)
            g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            noise = g @ g.conj().T
            r = rng.standard_normal((3, 3))
            cost_m = r @ r.T + np.eye(3)
            once = lyapunov_cost(ClosedLoop(drift, noise, cost_m))
            twice = lyapunov_cost(ClosedLoop(drift, 2.0 * noise, cost_m))
            assert twice == pytest.approx(2.0 * once, rel=1e-10)

    def test_residual_gate_on_covariance(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            drift = a - (np.max(np.linalg.eigvals(a).real) + 0.5) * np.eye(4)
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            noise = g @ g.conj().T
            cov = steady_state_covariance(drift, noise)
            residual = np.max(np.abs(drift @ cov + cov @ drift.conj().T + noise))
            assert residual <= 1e-8 * max(1.0, np.max(np.abs(noise)))
            assert np.linalg.eigvalsh(cov)[0] >= -1e-8


class TestSamplePerturbation:
    @pytest.mark.parametrize(
        "cls,gamma",
        [(UncertaintyClass.NORM_BOUND, 1.0), (UncertaintyClass.POSITIVE_BOUND, 2.0)],
    )
    def test_membership_by_construction(self, cls, gamma):
        rng = np.random.default_rng(42)
        for _ in range(500):
            delta = sample_perturbation(cls, gamma, 1, rng)
            assert perturbation_in_class(delta, cls, gamma)

    def test_positive_class_spectrum(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            delta = sample_perturbation(UncertaintyClass.POSITIVE_BOUND, 2.0, 2, rng)
            eigs = np.linalg.eigvalsh(delta.full)
            assert eigs[0] >= -1e-12
            assert eigs[-1] <= 2.0 + 1e-12

    def test_seed_determinism(self):
        first = sample_perturbation(UncertaintyClass.NORM_BOUND, 1.0, 1, 42)
        second = sample_perturbation(UncertaintyClass.NORM_BOUND, 1.0, 1, 42)
        assert np.array_equal(first.full, second.full)


class TestVerifyBound:
    def test_generous_bound_never_violated(self):
        system, delta, controller = dpa_system(4.5)
        report = verify_bound(
            system,
            controller,
            np.eye(2),
            rho=0.1,
            bound=1e6,
            num_samples=50,
            seed=42,
            extra_perturbations=(delta,),
        )
        assert report.violations == 0
        assert report.samples == 52
        assert report.worst_margin < 0

    def test_negative_bound_is_violated(self):
        system, delta, controller = dpa_system(4.5)
        report = verify_bound(
            system,
            controller,
            np.eye(2),
            rho=0.1,
            bound=-1.0,
            num_samples=20,
            seed=42,
            extra_perturbations=(delta,),
        )
        assert report.violations > 0
        assert report.worst_margin > 0

    def test_report_deterministic_in_seed(self):
        system, _, controller = dpa_system(4.5)
        first = verify_bound(system, controller, np.eye(2), 0.1, 5.0,
                             num_samples=30, seed=9)
        second = verify_bound(system, controller, np.eye(2), 0.1, 5.0,
                              num_samples=30, seed=9)
        assert first == second

    def test_infinite_bound_rejected(self):
        system, _, _ = dpa_system(4.5)
        with pytest.raises(ValueError):
            verify_bound(system, None, np.eye(2), 0.1, np.inf)

    def test_inadmissible_extra_rejected(self):
        system, _, _ = dpa_system(4.5)
        too_big = DoubledMatrix([[10.0]], [[0.0]], MatrixKind.HERMITIAN)
        with pytest.raises(ValueError):
            verify_bound(system, None, np.eye(2), 0.1, 1.0,
                         num_samples=1, extra_perturbations=(too_big,))


def test_hurwitz_helper():
    assert is_hurwitz(-np.eye(2))
    assert not is_hurwitz(np.diag([-1.0, 0.0]))
    assert not is_hurwitz(np.diag([-1.0, 1e-12]), margin=1e-10)
