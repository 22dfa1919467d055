"""Coherent guaranteed-cost controller synthesis.

The controller is an added quadratic Hamiltonian with doubled-Hermitian
matrix K.  Both synthesis paths linearize the problem with Q = P^{-1} =
q*I and Y = K q, making every constraint affine in (q, Y, ...) and the
certified cost bound tr(D)/q (+ delta/t for the small-gain path, + the
multiplier offset for the Popov path).  The bound itself is minimized
through an auxiliary epigraph variable and a Schur-complement objective
constraint, so the reported controller is the tightest this formulation
certifies.

Y is parameterized with the doubled-Hermitian block structure: with a
real scalar q, Y = K q inherits the controller's structure, and only
such K define valid Hamiltonians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import (
    DEFAULT_THETA_GRID,
    Method,
    _hermitize,
    _hurwitz_drift,
    _validated_cost,
)
from .errors import NotHurwitz
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

#: Margin used by the defensive closed-loop stability re-check.
CLOSED_LOOP_MARGIN = 1e-8


@dataclass(frozen=True)
class SynthesisOutcome:
    """Certified synthesis result.

    ``q`` scales the Lyapunov certificate (P = I/q), ``scaled_controller``
    is Y = K q, ``tau_squared`` the small-gain multiplier (NaN for Popov)
    and ``theta`` the Popov multiplier (NaN for small gain)."""

    method: Method
    feasible: bool
    q: float
    scaled_controller: DoubledMatrix | None
    tau_squared: float
    theta: float
    controller: DoubledMatrix | None
    bound: float
    solver: SdpSolution


def _principal_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(matrix)
    return _hermitize(vectors @ np.diag(np.sqrt(values)) @ vectors.conj().T)


def _controller_commutator_block(k_full: np.ndarray, j: np.ndarray) -> np.ndarray:
    """The A-block contribution i Y J - i J Y of a doubled-Hermitian Y."""
    return 1j * k_full @ j - 1j * j @ k_full


def assemble_smallgain_synthesis(
    system: UncertainSystem,
    cost_matrix,
    rho: float,
    epsilon: float = 1e-6,
    *,
    fixed_controller: DoubledMatrix | None = None,
) -> LmiProgram:
    """Small-gain synthesis LMI in (q, Y, t = tau^2, xi).

    Main constraint (strict), with A = q(F + F^dag) + iYJ - iJY:
        [[A + 4t J E^dag E J,  Y,       q R^(1/2),  q E^dag],
         [Y,                   -I/rho,  0,          0      ],
         [q R^(1/2),           0,       -I,         0      ],
         [q E,                 0,       0,          -gamma^2 t I]] <= -eps I
    Objective constraint (non-strict), linearizing tr(D)/q + delta/t <= xi:
        [[-xi,        sqrt(delta), sqrt(tr D)],
         [sqrt(delta), -t,          0        ],
         [sqrt(tr D),  0,           -q       ]] <= 0
    and minimize xi.  ``fixed_controller`` folds Y = q K into the q terms,
    which turns the program into a restricted feasibility test for a
    given controller.
    """
    if system.uncertainty_class is not UncertaintyClass.NORM_BOUND:
        raise ValueError(
            "small-gain synthesis applies to the norm-bounded uncertainty class"
        )
    if not rho > 0:
        raise ValueError("rho must be strictly positive")
    n = system.n_modes
    f = _hurwitz_drift(system)
    r = _validated_cost(cost_matrix, n)
    r_sqrt = _principal_sqrt(r)
    e = system.channel.full
    m2 = e.shape[0]
    j = commutation_matrix(n)
    d_noise = diffusion_matrix(system.coupling)
    trace_d = float(np.trace(d_noise).real)
    basis = () if fixed_controller is not None else hermitian_doubled_basis(n)
    gamma2 = system.gamma**2
    two_n = 2 * n
    dim = 3 * two_n + m2

    def main(q, y_full, t):
        g = np.zeros((dim, dim), dtype=complex)
        s1 = slice(0, two_n)
        s2 = slice(two_n, 2 * two_n)
        s3 = slice(2 * two_n, 3 * two_n)
        s4 = slice(3 * two_n, dim)
        if q:
            g[s1, s1] += q * (f + f.conj().T)
            g[s1, s3] += q * r_sqrt
            g[s3, s1] += q * r_sqrt
            g[s1, s4] += q * e.conj().T
            g[s4, s1] += q * e
            if fixed_controller is not None:
                k_full = fixed_controller.full
                g[s1, s1] += q * _controller_commutator_block(k_full, j)
                g[s1, s2] += q * k_full
                g[s2, s1] += q * k_full
        if y_full is not None:
            g[s1, s1] += _controller_commutator_block(y_full, j)
            g[s1, s2] += y_full
            g[s2, s1] += y_full
        if t:
            g[s1, s1] += 4.0 * t * j @ e.conj().T @ e @ j
            g[s4, s4] += -gamma2 * t * np.eye(m2)
        return _hermitize(g)

    g0 = np.zeros((dim, dim), dtype=complex)
    g0[two_n : 2 * two_n, two_n : 2 * two_n] = -np.eye(two_n) / rho
    g0[2 * two_n : 3 * two_n, 2 * two_n : 3 * two_n] = -np.eye(two_n)
    main_terms = [g0, main(1.0, None, 0.0)]
    main_terms.extend(main(0.0, b.full, 0.0) for b in basis)
    main_terms.append(main(0.0, None, 1.0))
    main_terms.append(np.zeros((dim, dim), dtype=complex))  # xi

    zero3 = np.zeros((3, 3))
    obj0 = np.array(
        [
            [0.0, math.sqrt(system.delta), math.sqrt(trace_d)],
            [math.sqrt(system.delta), 0.0, 0.0],
            [math.sqrt(trace_d), 0.0, 0.0],
        ]
    )
    obj_q = np.diag([0.0, 0.0, -1.0])
    obj_t = np.diag([0.0, -1.0, 0.0])
    obj_xi = np.diag([-1.0, 0.0, 0.0])
    objective_terms = [obj0, obj_q]
    objective_terms.extend(zero3 for _ in basis)
    objective_terms.extend([obj_t, obj_xi])

    num_vars = 3 + len(basis)
    objective = np.zeros(num_vars)
    objective[-1] = 1.0
    bounds = [(epsilon, DEFAULT_BOX)]
    bounds.extend((-DEFAULT_BOX, DEFAULT_BOX) for _ in basis)
    bounds.append((epsilon, DEFAULT_BOX))
    bounds.append((-DEFAULT_BOX, DEFAULT_BOX))
    return LmiProgram(
        num_vars=num_vars,
        objective=objective,
        constraints=(
            AffineConstraint(tuple(main_terms), strict=True, label="synthesis"),
            AffineConstraint(tuple(objective_terms), strict=False, label="bound"),
        ),
        var_bounds=tuple(bounds),
        strictness_margin=epsilon,
    )


def _extract(system, solution, n, with_t, fixed_controller):
    q = float(solution.x[0])
    if fixed_controller is not None:
        controller = fixed_controller
        scaled = fixed_controller.scaled(q)
    else:
        n_params = 2 * n * n + n
        scaled = doubled_from_parameters(solution.x[1 : 1 + n_params], n)
        controller = scaled.scaled(1.0 / q)
    f = system.drift_matrix()
    j = commutation_matrix(n)
    closed = f - 1j * j @ controller.full
    if float(np.max(np.linalg.eigvals(closed).real)) > -CLOSED_LOOP_MARGIN:
        raise NotHurwitz(
            "extracted controller fails the defensive closed-loop check"
        )
    return q, scaled, controller


def synth_smallgain(
    system: UncertainSystem,
    cost_matrix=None,
    rho: float = 0.1,
    *,
    epsilon: float = 1e-6,
    fixed_controller: DoubledMatrix | None = None,
) -> SynthesisOutcome:
    """Minimum-bound small-gain controller; bound is tr(D)/q + delta/t."""
    n = system.n_modes
    if cost_matrix is None:
        cost_matrix = np.eye(2 * n)
    program = assemble_smallgain_synthesis(
        system, cost_matrix, rho, epsilon, fixed_controller=fixed_controller
    )
    solution = solve(program)
    if not solution.feasible:
        return SynthesisOutcome(Method.SMALL_GAIN, False, math.nan, None,
                                math.nan, math.nan, None, math.inf, solution)
    q, scaled, controller = _extract(system, solution, n, True, fixed_controller)
    t = float(solution.x[-2])
    trace_d = float(np.trace(diffusion_matrix(system.coupling)).real)
    bound = trace_d / q + system.delta / t
    return SynthesisOutcome(Method.SMALL_GAIN, True, q, scaled, t, math.nan,
                            controller, bound, solution)


def assemble_popov_synthesis(
    system: UncertainSystem,
    cost_matrix,
    rho: float,
    theta: float,
    epsilon: float = 1e-6,
    *,
    fixed_controller: DoubledMatrix | None = None,
) -> LmiProgram:
    """Popov synthesis LMI in (q, Y, xi) at a fixed multiplier theta.

    Main constraint (strict), with A = Fq + qF^dag - iJY + iYJ and
    B = 2iEJ + Eq + theta E F q - i theta E J Y:
        [[A,          B^dag,     Y,       q R^(1/2)],
         [B,          -gamma I,  0,       0        ],
         [Y,          0,         -I/rho,  0        ],
         [q R^(1/2),  0,         0,       -I       ]] <= -eps I
    Objective constraint (non-strict): [[-xi, sqrt(tr D)],
    [sqrt(tr D), -q]] <= 0, and minimize xi; the multiplier offset is a
    constant added to the bound afterwards.
    """
    if system.uncertainty_class is not UncertaintyClass.POSITIVE_BOUND:
        raise ValueError(
            "Popov synthesis applies to the positive-bounded uncertainty class"
        )
    if not rho > 0:
        raise ValueError("rho must be strictly positive")
    if theta < 0:
        raise ValueError("theta must be non-negative")
    n = system.n_modes
    f = _hurwitz_drift(system)
    r = _validated_cost(cost_matrix, n)
    r_sqrt = _principal_sqrt(r)
    e = system.channel.full
    m2 = e.shape[0]
    j = commutation_matrix(n)
    d_noise = diffusion_matrix(system.coupling)
    trace_d = float(np.trace(d_noise).real)
    basis = () if fixed_controller is not None else hermitian_doubled_basis(n)
    two_n = 2 * n
    dim = 3 * two_n + m2

    s1 = slice(0, two_n)
    s2 = slice(two_n, two_n + m2)
    s3 = slice(two_n + m2, 2 * two_n + m2)
    s4 = slice(2 * two_n + m2, dim)

    def with_b_block(g, b_block):
        g[s2, s1] += b_block
        g[s1, s2] += b_block.conj().T

    def main(q, y_full):
        g = np.zeros((dim, dim), dtype=complex)
        if q:
            g[s1, s1] += q * (f + f.conj().T)
            with_b_block(g, q * (e + theta * e @ f))
            g[s1, s4] += q * r_sqrt
            g[s4, s1] += q * r_sqrt
            if fixed_controller is not None:
                k_full = fixed_controller.full
                g[s1, s1] += q * _controller_commutator_block(k_full, j)
                g[s1, s3] += q * k_full
                g[s3, s1] += q * k_full
                with_b_block(g, -1j * theta * q * e @ j @ k_full)
        if y_full is not None:
            g[s1, s1] += _controller_commutator_block(y_full, j)
            g[s1, s3] += y_full
            g[s3, s1] += y_full
            with_b_block(g, -1j * theta * e @ j @ y_full)
        return _hermitize(g)

    g0 = np.zeros((dim, dim), dtype=complex)
    with_b_block(g0, 2j * e @ j)
    g0[s2, s2] = -system.gamma * np.eye(m2)
    g0[s3, s3] = -np.eye(two_n) / rho
    g0[s4, s4] = -np.eye(two_n)
    main_terms = [_hermitize(g0), main(1.0, None)]
    main_terms.extend(main(0.0, b.full) for b in basis)
    main_terms.append(np.zeros((dim, dim), dtype=complex))  # xi

    obj0 = np.array([[0.0, math.sqrt(trace_d)], [math.sqrt(trace_d), 0.0]])
    objective_terms = [obj0, np.diag([0.0, -1.0])]
    objective_terms.extend(np.zeros((2, 2)) for _ in basis)
    objective_terms.append(np.diag([-1.0, 0.0]))

    num_vars = 2 + len(basis)
    objective = np.zeros(num_vars)
    objective[-1] = 1.0
    bounds = [(epsilon, DEFAULT_BOX)]
    bounds.extend((-DEFAULT_BOX, DEFAULT_BOX) for _ in basis)
    bounds.append((-DEFAULT_BOX, DEFAULT_BOX))
    return LmiProgram(
        num_vars=num_vars,
        objective=objective,
        constraints=(
            AffineConstraint(tuple(main_terms), strict=True, label="synthesis"),
            AffineConstraint(tuple(objective_terms), strict=False, label="bound"),
        ),
        var_bounds=tuple(bounds),
        strictness_margin=epsilon,
    )


def synth_popov(
    system: UncertainSystem,
    cost_matrix=None,
    rho: float = 0.1,
    theta_grid=None,
    *,
    epsilon: float = 1e-6,
    fixed_controller: DoubledMatrix | None = None,
) -> SynthesisOutcome:
    """Minimum-bound Popov controller over the multiplier grid.

    Per grid point the bound is tr(D)/q plus the constant offset; the
    returned outcome is the grid argmin, ties broken toward smaller theta.
    """
    n = system.n_modes
    if cost_matrix is None:
        cost_matrix = np.eye(2 * n)
    if theta_grid is None:
        theta_grid = DEFAULT_THETA_GRID
    grid = sorted(float(t) for t in theta_grid)
    if not grid:
        raise ValueError("theta grid must be non-empty")
    if any(t < 0 for t in grid):
        raise ValueError("all theta values must be non-negative")

    trace_d = float(np.trace(diffusion_matrix(system.coupling)).real)
    best: SynthesisOutcome | None = None
    last_solution: SdpSolution | None = None
    for theta in grid:
        program = assemble_popov_synthesis(
            system, cost_matrix, rho, theta, epsilon,
            fixed_controller=fixed_controller,
        )
        solution = solve(program)
        last_solution = solution
        if not solution.feasible:
            continue
        q, scaled, controller = _extract(system, solution, n, False,
                                         fixed_controller)
        bound = trace_d / q + popov_offset(system, theta)
        if best is None or bound < best.bound:
            best = SynthesisOutcome(Method.POPOV, True, q, scaled, math.nan,
                                    theta, controller, bound, solution)
    if best is None:
        return SynthesisOutcome(Method.POPOV, False, math.nan, None, math.nan,
                                math.nan, None, math.inf, last_solution)
    return best
