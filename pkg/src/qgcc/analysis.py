"""Robust performance analysis via small-gain and Popov matrix inequalities.

Both paths certify an upper bound on the steady time-averaged quadratic
cost of the uncertain plant by finding a structured Lyapunov matrix P.
The small-gain path covers norm-bounded Hamiltonian perturbations and is
made jointly affine by the substitution s = 1/tau^2; the Popov path
covers positive-bounded perturbations with a scalar multiplier theta that
is scanned over a grid, each grid point being a plain LMI.  The bound is
minimized (it is linear in the decision variables), so the reported value
is the tightest the method can certify with this solver.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveR, NotHurwitz
from .lmi import AffineConstraint, DEFAULT_BOX, LmiProgram, SdpSolution, solve
from .qmodel import (
    DoubledMatrix,
    UncertainSystem,
    UncertaintyClass,
    commutation_matrix,
    diffusion_matrix,
    doubled_from_parameters,
    hermitian_doubled_basis,
    popov_offset,
)

#: Default multiplier grid for the Popov path.
DEFAULT_THETA_GRID: tuple[float, ...] = tuple(
    round(0.05 * i, 10) for i in range(21)
)

HURWITZ_MARGIN = 1e-10


class Method(enum.Enum):
    SMALL_GAIN = "smallgain"
    POPOV = "popov"


@dataclass(frozen=True)
class AnalysisOutcome:
    """Certified performance-analysis result.

    ``multiplier`` carries s = 1/tau^2 for the small-gain method and the
    chosen theta for the Popov method; it is NaN when infeasible."""

    method: Method
    feasible: bool
    certificate: DoubledMatrix | None
    multiplier: float
    bound: float
    solver: SdpSolution


def _validated_cost(cost_matrix, n: int) -> np.ndarray:
    r = np.asarray(cost_matrix, dtype=complex)
    if r.shape != (2 * n, 2 * n):
        raise NonPositiveR(f"cost matrix must be {2 * n}x{2 * n}, got {r.shape}")
    if float(np.max(np.abs(r - r.conj().T))) > 1e-10 * max(1.0, float(np.max(np.abs(r)))):
        raise NonPositiveR("cost matrix must be Hermitian")
    r = (r + r.conj().T) / 2.0
    if float(np.linalg.eigvalsh(r)[0]) <= 0.0:
        raise NonPositiveR("cost matrix must be positive definite")
    return r


def _hurwitz_drift(system: UncertainSystem) -> np.ndarray:
    f = system.drift_matrix()
    top = float(np.max(np.linalg.eigvals(f).real))
    if top >= -HURWITZ_MARGIN:
        raise NotHurwitz(
            f"the nominal drift is not Hurwitz (max real part {top:.3e})"
        )
    return f


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2.0


def assemble_smallgain_analysis(
    system: UncertainSystem, cost_matrix, epsilon: float = 1e-6
) -> LmiProgram:
    """Small-gain analysis LMI in the Lyapunov parameters and s = 1/tau^2.

    Main constraint (strict):
        [[F^dag P + P F + (s/gamma^2) E^dag E + R,  2 P J E^dag],
         [2 E J P,                                  -s I]]  <=  -eps I
    plus P >= eps I and s >= eps; the objective tr(P D) + delta * s is the
    certified cost bound.
    """
    if system.uncertainty_class is not UncertaintyClass.NORM_BOUND:
        raise ValueError(
            "small-gain analysis applies to the norm-bounded uncertainty class"
        )
    n = system.n_modes
    f = _hurwitz_drift(system)
    r = _validated_cost(cost_matrix, n)
    e = system.channel.full
    m2 = e.shape[0]
    j = commutation_matrix(n)
    d_noise = diffusion_matrix(system.coupling)
    basis = hermitian_doubled_basis(n)
    k = len(basis) + 1
    dim = 2 * n + m2
    gamma2 = system.gamma**2

    def main_block(p_full, s_value):
        top_left = np.zeros((2 * n, 2 * n), dtype=complex)
        top_right = np.zeros((2 * n, m2), dtype=complex)
        if p_full is not None:
            top_left = f.conj().T @ p_full + p_full @ f
            top_right = 2.0 * p_full @ j @ e.conj().T
        g = np.zeros((dim, dim), dtype=complex)
        g[: 2 * n, : 2 * n] = top_left + s_value / gamma2 * (e.conj().T @ e)
        g[: 2 * n, 2 * n :] = top_right
        g[2 * n :, : 2 * n] = top_right.conj().T
        g[2 * n :, 2 * n :] = -s_value * np.eye(m2)
        return _hermitize(g)

    main_terms = [np.zeros((dim, dim), dtype=complex)]
    main_terms[0][: 2 * n, : 2 * n] = r
    for b in basis:
        main_terms.append(main_block(b.full, 0.0))
    main_terms.append(main_block(None, 1.0))

    pos_terms = [np.zeros((2 * n, 2 * n), dtype=complex)]
    pos_terms.extend(-b.full for b in basis)
    pos_terms.append(np.zeros((2 * n, 2 * n), dtype=complex))

    objective = np.array(
        [float(np.trace(b.full @ d_noise).real) for b in basis] + [system.delta]
    )
    bounds = [(-DEFAULT_BOX, DEFAULT_BOX)] * len(basis) + [(epsilon, DEFAULT_BOX)]
    return LmiProgram(
        num_vars=k,
        objective=objective,
        constraints=(
            AffineConstraint(tuple(main_terms), strict=True, label="performance"),
            AffineConstraint(tuple(pos_terms), strict=True, label="positivity"),
        ),
        var_bounds=tuple(bounds),
        strictness_margin=epsilon,
    )


def analyze_smallgain(
    system: UncertainSystem, cost_matrix=None, *, epsilon: float = 1e-6
) -> AnalysisOutcome:
    """Certified small-gain cost bound, minimized over the feasible set."""
    n = system.n_modes
    if cost_matrix is None:
        cost_matrix = np.eye(2 * n)
    program = assemble_smallgain_analysis(system, cost_matrix, epsilon)
    solution = solve(program)
    if not solution.feasible:
        return AnalysisOutcome(Method.SMALL_GAIN, False, None, math.nan,
                               math.inf, solution)
    certificate = doubled_from_parameters(solution.x[:-1], n)
    s = float(solution.x[-1])
    d_noise = diffusion_matrix(system.coupling)
    bound = float(np.trace(certificate.full @ d_noise).real) + system.delta * s
    return AnalysisOutcome(Method.SMALL_GAIN, True, certificate, s, bound, solution)


def assemble_popov_analysis(
    system: UncertainSystem, cost_matrix, theta: float, epsilon: float = 1e-6
) -> LmiProgram:
    """Popov analysis LMI in the Lyapunov parameters at a fixed multiplier.

    Main constraint (strict):
        [[P F + F^dag P + R,  -2i P J E^dag + E^dag + theta F^dag E^dag],
         [2i E J P + E + theta E F,  -gamma I]]  <=  -eps I
    plus P >= eps I; the objective tr(P D) gives the bound after adding
    the constant multiplier offset.
    """
    if system.uncertainty_class is not UncertaintyClass.POSITIVE_BOUND:
        raise ValueError(
            "Popov analysis applies to the positive-bounded uncertainty class"
        )
    if theta < 0:
        raise ValueError("theta must be non-negative")
    n = system.n_modes
    f = _hurwitz_drift(system)
    r = _validated_cost(cost_matrix, n)
    e = system.channel.full
    m2 = e.shape[0]
    j = commutation_matrix(n)
    d_noise = diffusion_matrix(system.coupling)
    basis = hermitian_doubled_basis(n)
    dim = 2 * n + m2

    g0 = np.zeros((dim, dim), dtype=complex)
    g0[: 2 * n, : 2 * n] = r
    lower_const = e + theta * e @ f
    g0[2 * n :, : 2 * n] = lower_const
    g0[: 2 * n, 2 * n :] = lower_const.conj().T
    g0[2 * n :, 2 * n :] = -system.gamma * np.eye(m2)
    terms = [_hermitize(g0)]
    for b in basis:
        g = np.zeros((dim, dim), dtype=complex)
        g[: 2 * n, : 2 * n] = b.full @ f + f.conj().T @ b.full
        lower = 2j * e @ j @ b.full
        g[2 * n :, : 2 * n] = lower
        g[: 2 * n, 2 * n :] = lower.conj().T
        terms.append(_hermitize(g))

    pos_terms = [np.zeros((2 * n, 2 * n), dtype=complex)]
    pos_terms.extend(-b.full for b in basis)

    objective = np.array([float(np.trace(b.full @ d_noise).real) for b in basis])
    bounds = [(-DEFAULT_BOX, DEFAULT_BOX)] * len(basis)
    return LmiProgram(
        num_vars=len(basis),
        objective=objective,
        constraints=(
            AffineConstraint(tuple(terms), strict=True, label="performance"),
            AffineConstraint(tuple(pos_terms), strict=True, label="positivity"),
        ),
        var_bounds=tuple(bounds),
        strictness_margin=epsilon,
    )


def analyze_popov(
    system: UncertainSystem,
    cost_matrix=None,
    theta_grid=None,
    *,
    epsilon: float = 1e-6,
) -> AnalysisOutcome:
    """Certified Popov cost bound, minimized over the multiplier grid.

    Each grid point is solved independently; the returned outcome is the
    grid argmin of tr(P D) plus the theta offset (ties broken toward the
    smaller theta).  Infeasible at every point means an infinite bound.
    """
    n = system.n_modes
    if cost_matrix is None:
        cost_matrix = np.eye(2 * n)
    if theta_grid is None:
        theta_grid = DEFAULT_THETA_GRID
    grid = [float(t) for t in theta_grid]
    if not grid:
        raise ValueError("theta grid must be non-empty")
    if any(t < 0 for t in grid):
        raise ValueError("all theta values must be non-negative")
    grid = sorted(grid)

    d_noise = diffusion_matrix(system.coupling)
    best: AnalysisOutcome | None = None
    last_solution: SdpSolution | None = None
    for theta in grid:
        program = assemble_popov_analysis(system, cost_matrix, theta, epsilon)
        solution = solve(program)
        last_solution = solution
        if not solution.feasible:
            continue
        certificate = doubled_from_parameters(solution.x, n)
        bound = float(np.trace(certificate.full @ d_noise).real)
        bound += popov_offset(system, theta)
        if best is None or bound < best.bound:
            best = AnalysisOutcome(Method.POPOV, True, certificate, theta,
                                   bound, solution)
    if best is None:
        return AnalysisOutcome(Method.POPOV, False, None, math.nan, math.inf,
                               last_solution)
    return best
