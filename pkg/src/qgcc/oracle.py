"""Independent ground truth for the guaranteed-cost bounds.

The time-averaged quadratic cost of a stable linear closed loop equals
tr(R_cost @ S) where S solves the steady-state second-moment equation
F S + S F^dag + D = 0.  This module evaluates that cost exactly (dense
Kronecker solve with a residual gate), draws structured admissible
perturbations, and checks claimed bounds against sampled closed loops.
The solve path shares nothing with the LMI machinery, so agreement
between the two is meaningful evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IllConditioned, NotHurwitz
from .qmodel import (
    DoubledMatrix,
    MatrixKind,
    UncertainSystem,
    UncertaintyClass,
    commutation_matrix,
    diffusion_matrix,
    perturbation_in_class,
)

#: Slack allowed before a sampled cost counts as a bound violation.
VIOLATION_SLACK = 1e-6


@dataclass(frozen=True)
class ClosedLoop:
    """Closed-loop drift, noise matrix and cost matrix for one evaluation."""

    drift: np.ndarray
    noise: np.ndarray
    cost: np.ndarray

    def __post_init__(self):
        drift = np.array(self.drift, dtype=complex)
        noise = np.array(self.noise, dtype=complex)
        cost = np.array(self.cost, dtype=complex)
        d = drift.shape[0]
        if drift.shape != (d, d) or noise.shape != (d, d) or cost.shape != (d, d):
            raise DimensionMismatch("drift, noise and cost must be square and equal")
        for name, m in (("noise", noise), ("cost", cost)):
            dev = float(np.max(np.abs(m - m.conj().T)))
            if dev > 1e-10 * max(1.0, float(np.max(np.abs(m)))):
                raise DimensionMismatch(f"{name} matrix must be Hermitian")
        if float(np.linalg.eigvalsh(noise)[0]) < -1e-10:
            raise DimensionMismatch("noise matrix must be positive semidefinite")
        for arr in (drift, noise, cost):
            arr.setflags(write=False)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "cost", cost)


def is_hurwitz(matrix, margin: float = 0.0) -> bool:
    """True when every eigenvalue has real part below -margin."""
    return bool(np.max(np.linalg.eigvals(matrix).real) < -margin)


def closed_loop_drift(
    system: UncertainSystem,
    perturbation: DoubledMatrix | None = None,
    controller: DoubledMatrix | None = None,
) -> np.ndarray:
    """Drift of the perturbed, controlled loop: -iJ(M + E^dag D E + K) - damping."""
    n = system.n_modes
    hamiltonian = system.hamiltonian.full.copy()
    if perturbation is not None:
        if perturbation.kind is not MatrixKind.HERMITIAN:
            raise DimensionMismatch("perturbation must be Hermitian kind")
        e = system.channel.full
        if perturbation.full.shape[0] != e.shape[0]:
            raise DimensionMismatch(
                f"perturbation size {perturbation.full.shape} does not match "
                f"the channel output size {e.shape[0]}"
            )
        hamiltonian = hamiltonian + e.conj().T @ perturbation.full @ e
    if controller is not None:
        if controller.kind is not MatrixKind.HERMITIAN:
            raise DimensionMismatch("controller must be Hermitian kind")
        if controller.full.shape != (2 * n, 2 * n):
            raise DimensionMismatch("controller must act on the plant modes")
        hamiltonian = hamiltonian + controller.full
    j = commutation_matrix(n)
    nd = system.coupling.doubled
    jm = commutation_matrix(system.coupling.n_outputs)
    return -1j * j @ hamiltonian - 0.5 * j @ nd.conj().T @ jm @ nd


def steady_state_covariance(drift, noise) -> np.ndarray:
    """Solve F S + S F^dag + D = 0 by vectorization.

    Raises NotHurwitz for an unstable drift and IllConditioned when the
    back-substituted residual is untrustworthy.
    """
    f = np.asarray(drift, dtype=complex)
    d = np.asarray(noise, dtype=complex)
    if not is_hurwitz(f):
        raise NotHurwitz("the drift matrix has an eigenvalue with Re >= 0")
    size = f.shape[0]
    eye = np.eye(size)
    operator = np.kron(f, eye) + np.kron(eye, f.conj())
    vec = np.linalg.solve(operator, -d.reshape(-1))
    cov = vec.reshape(size, size)
    cov = (cov + cov.conj().T) / 2.0
    residual = float(np.max(np.abs(f @ cov + cov @ f.conj().T + d)))
    if residual > 1e-8 * max(1.0, float(np.max(np.abs(d)))):
        raise IllConditioned(f"steady-state solve residual {residual:.3e} too large")
    return cov


def lyapunov_cost(loop: ClosedLoop) -> float:
    """Exact steady-state quadratic cost tr(R_cost @ S) of a stable loop."""
    cov = steady_state_covariance(loop.drift, loop.noise)
    eig_min = float(np.linalg.eigvalsh(cov)[0])
    if eig_min < -1e-8:
        raise IllConditioned(
            f"steady covariance has eigenvalue {eig_min:.3e} below tolerance"
        )
    value = complex(np.trace(loop.cost @ cov))
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise IllConditioned(f"cost trace has imaginary residue {value.imag:.3e}")
    return float(value.real)


def sample_perturbation(
    uncertainty_class: UncertaintyClass,
    gamma: float,
    size: int,
    rng: np.random.Generator | int,
) -> DoubledMatrix:
    """Draw one structured admissible perturbation matrix.

    Norm-bounded class: Hermitian doubled Gaussian rescaled so the norm is
    uniform on [0, 2/gamma].  Positive-bounded class: G^dag G for a
    Gaussian doubled G, rescaled so the top eigenvalue is uniform on
    [0, 4/gamma].  Membership holds by construction.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    m = size

    def complex_normal():
        return rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))

    fraction = float(rng.uniform())
    if uncertainty_class is UncertaintyClass.NORM_BOUND:
        b1 = complex_normal()
        b2 = complex_normal()
        delta = DoubledMatrix((b1 + b1.conj().T) / 2, (b2 + b2.T) / 2,
                              MatrixKind.HERMITIAN)
        norm = float(np.linalg.norm(delta.full, 2))
        target = fraction * 2.0 / gamma
        scale = 0.0 if norm == 0.0 else target / norm
        return delta.scaled(scale)
    root = DoubledMatrix(complex_normal(), complex_normal(), MatrixKind.GENERAL)
    product = root.adjoint() @ root
    delta = DoubledMatrix(product.block1, product.block2, MatrixKind.HERMITIAN)
    top = float(np.linalg.eigvalsh(delta.full)[-1])
    target = fraction * 4.0 / gamma
    scale = 0.0 if top == 0.0 else target / top
    return delta.scaled(scale)


@dataclass(frozen=True)
class VerificationReport:
    samples: int
    violations: int
    worst_margin: float
    unstable_samples: int
    seed: int


def verify_bound(
    system: UncertainSystem,
    controller: DoubledMatrix | None,
    cost_matrix,
    rho: float,
    bound: float,
    num_samples: int = 200,
    seed: int = 42,
    extra_perturbations: tuple[DoubledMatrix, ...] = (),
) -> VerificationReport:
    """Check a claimed guaranteed-cost bound against sampled perturbations.

    Evaluates the exact cost for ``num_samples`` random admissible
    perturbations plus the zero perturbation and any supplied extras
    (extras are evaluated first), counting closed loops whose cost exceeds
    the bound beyond the fixed slack and closed loops that are unstable.
    """
    if not np.isfinite(bound):
        raise ValueError("bound must be finite; infeasible outcomes have no bound")
    cost_matrix = np.asarray(cost_matrix, dtype=complex)
    if controller is not None:
        k_full = controller.full
        cost_matrix = cost_matrix + rho * k_full @ k_full
    noise = diffusion_matrix(system.coupling)

    rng = np.random.default_rng(seed)
    perturbations = list(extra_perturbations)
    perturbations.append(DoubledMatrix.zeros(system.channel_outputs))
    for _ in range(num_samples):
        perturbations.append(
            sample_perturbation(
                system.uncertainty_class, system.gamma, system.channel_outputs, rng
            )
        )

    violations = 0
    unstable = 0
    worst = -np.inf
    for delta in perturbations:
        if not perturbation_in_class(delta, system.uncertainty_class, system.gamma):
            raise ValueError("a supplied perturbation is outside the admissible set")
        drift = closed_loop_drift(system, delta, controller)
        if not is_hurwitz(drift):
            unstable += 1
            continue
        cost = lyapunov_cost(ClosedLoop(drift, noise, cost_matrix))
        worst = max(worst, cost - bound)
        if cost > bound + VIOLATION_SLACK:
            violations += 1
    return VerificationReport(
        samples=len(perturbations),
        violations=violations,
        worst_margin=float(worst),
        unstable_samples=unstable,
        seed=seed,
    )
