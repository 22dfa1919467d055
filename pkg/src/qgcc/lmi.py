"""Affine Hermitian matrix-inequality programs and a dense barrier solver.

A program collects constraints of the form G0 + sum_i x_i Gi <= -eps*I
(or <= 0 when flagged non-strict) in a real decision vector x, together
with box bounds and a linear objective.  Complex Hermitian constraints are
mapped to real symmetric ones by the standard doubling embedding and the
program is solved by a two-phase log-determinant barrier method:

* phase 1 minimizes a scalar slack u subject to G_j(x) <= u*I, which is
  strictly feasible for large u; the program is declared infeasible when
  the attainable slack stays above -eps,
* phase 2 follows the central path of the original objective, reducing the
  barrier weight tenfold per stage until the duality measure is small.

Every feasible answer is re-certified on the complex side with a plain
eigenvalue check that shares no code with the solver iteration, so an
uncertified point is never reported as feasible.  The solver keeps all
iterates strictly inside constraints shifted by an extra 0.75*eps, which
guarantees the certified margin of eps/2 regardless of how tightly the
optimum presses against a constraint.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian

#: Fraction of the strictness margin kept as interior head-room.
_INTERIOR_FACTOR = 0.75
#: Default bound applied to otherwise unbounded decision variables.
DEFAULT_BOX = 1e6


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class AffineConstraint:
    """Constraint G(x) = terms[0] + sum_i x_i terms[1+i] <= -eps*I (strict)
    or G(x) <= 0 (non-strict).  All terms must be Hermitian of one size."""

    terms: tuple[np.ndarray, ...]
    strict: bool = True
    label: str = ""

    def __post_init__(self):
        if not self.terms:
            raise DimensionMismatch("a constraint needs at least the constant term")
        cleaned = []
        d = None
        for t in self.terms:
            a = np.array(t, dtype=complex)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise DimensionMismatch(f"constraint terms must be square, got {a.shape}")
            if d is None:
                d = a.shape[0]
            elif a.shape[0] != d:
                raise DimensionMismatch("constraint terms must share one dimension")
            dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
            if dev > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
                raise NotHermitian(f"constraint term deviates from Hermitian by {dev:.3e}")
            a = (a + a.conj().T) / 2.0
            a.setflags(write=False)
            cleaned.append(a)
        object.__setattr__(self, "terms", tuple(cleaned))

    @property
    def dim(self) -> int:
        return self.terms[0].shape[0]

    @property
    def num_vars(self) -> int:
        return len(self.terms) - 1

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        g = self.terms[0].copy()
        for xi, t in zip(np.asarray(x, dtype=float), self.terms[1:]):
            g = g + xi * t
        return g


@dataclass(frozen=True)
class LmiProgram:
    """A feasibility/minimization program over affine Hermitian constraints."""

    num_vars: int
    objective: np.ndarray
    constraints: tuple[AffineConstraint, ...]
    var_bounds: tuple[tuple[float, float], ...]
    strictness_margin: float = 1e-6

    def __post_init__(self):
        c = np.array(self.objective, dtype=float)
        if c.shape != (self.num_vars,):
            raise DimensionMismatch(
                f"objective must have {self.num_vars} entries, got {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "objective", c)
        constraints = tuple(self.constraints)
        for con in constraints:
            if con.num_vars != self.num_vars:
                raise DimensionMismatch(
                    f"constraint has {con.num_vars} variable terms, "
                    f"expected {self.num_vars}"
                )
        object.__setattr__(self, "constraints", constraints)
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.var_bounds)
        if len(bounds) != self.num_vars:
            raise DimensionMismatch("one (lower, upper) pair per variable required")
        for lo, hi in bounds:
            if not lo < hi:
                raise DimensionMismatch(f"empty bound interval ({lo}, {hi})")
        object.__setattr__(self, "var_bounds", bounds)
        if not self.strictness_margin > 0:
            raise ValueError("strictness_margin must be positive")


@dataclass(frozen=True)
class SdpSolution:
    status: SolveStatus
    x: np.ndarray
    objective_value: float
    max_constraint_eig: float
    iterations: int

    @property
    def feasible(self) -> bool:
        return self.status in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE)


def real_embed(h) -> np.ndarray:
    """Embed a complex Hermitian d x d matrix as a real symmetric 2d x 2d one.

    The embedding [[Re H, -Im H], [Im H, Re H]] has the same spectrum with
    every eigenvalue doubled in multiplicity, so semidefiniteness is
    preserved in both directions.
    """
    a = np.array(h, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > 1e-10 * max(1.0, float(np.max(np.abs(a)))):
        raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3e}")
    a = (a + a.conj().T) / 2.0
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])


def certify(program: LmiProgram, x) -> tuple[bool, float]:
    """Evaluate every constraint at x on the complex side.

    Returns (certified, worst eigenvalue) where the worst eigenvalue is the
    largest eigenvalue over all constraints after moving the strictness
    margin to the left-hand side; certification requires it to stay below
    -eps/2.  Pure function, independent of the solver iteration.
    """
    x = np.asarray(x, dtype=float)
    eps = program.strictness_margin
    worst = -math.inf
    for con in program.constraints:
        g = con.evaluate(x)
        if con.strict:
            g = g + eps * np.eye(con.dim)
        lam = float(np.linalg.eigvalsh(g)[-1])
        worst = max(worst, lam)
    return worst <= -eps / 2.0, worst


class _BarrierProblem:
    """Embedded real-symmetric data plus box bounds for the barrier loop."""

    def __init__(self, stacks, lo, hi, objective):
        self.stacks = stacks  # list of (k+1, d, d) float arrays
        self.lo = lo
        self.hi = hi
        self.c = objective
        self.nu = sum(s.shape[1] for s in stacks) + np.isfinite(lo).sum() + np.isfinite(hi).sum()

    def inside_box(self, x) -> bool:
        return bool(np.all(x > self.lo) and np.all(x < self.hi))

    def slacks(self, x):
        """Cholesky factors of the slack matrices, or None if infeasible."""
        chols = []
        for t in self.stacks:
            s = -(t[0] + np.tensordot(x, t[1:], axes=1))
            try:
                chols.append(np.linalg.cholesky(s))
            except np.linalg.LinAlgError:
                return None
        return chols

    def value(self, x, mu, chols):
        logdet = sum(2.0 * np.sum(np.log(np.diag(l))) for l in chols)
        box = 0.0
        finite_hi = np.isfinite(self.hi)
        finite_lo = np.isfinite(self.lo)
        box += np.sum(np.log(self.hi[finite_hi] - x[finite_hi]))
        box += np.sum(np.log(x[finite_lo] - self.lo[finite_lo]))
        return float(self.c @ x + mu * (-logdet - box))

    def grad_hess(self, x, mu):
        k = x.size
        grad = np.zeros(k)
        hess = np.zeros((k, k))
        for t in self.stacks:
            s = -(t[0] + np.tensordot(x, t[1:], axes=1))
            s_inv = np.linalg.inv(s)
            s_inv = (s_inv + s_inv.T) / 2.0
            w = np.einsum("ab,ibc->iac", s_inv, t[1:])
            grad += np.einsum("iaa->i", w)
            hess += np.einsum("iab,lba->il", w, w)
        finite_hi = np.isfinite(self.hi)
        finite_lo = np.isfinite(self.lo)
        inv_hi = np.zeros(k)
        inv_lo = np.zeros(k)
        inv_hi[finite_hi] = 1.0 / (self.hi[finite_hi] - x[finite_hi])
        inv_lo[finite_lo] = 1.0 / (x[finite_lo] - self.lo[finite_lo])
        grad += inv_hi - inv_lo
        hess[np.diag_indices(k)] += inv_hi**2 + inv_lo**2
        return self.c + mu * grad, mu * ((hess + hess.T) / 2.0)


def _solve_direction(hess, grad):
    """Newton direction with escalating ridge regularization."""
    ridge = 0.0
    scale = max(float(np.max(np.abs(hess))), 1.0)
    for _ in range(10):
        try:
            h = hess if ridge == 0.0 else hess + ridge * np.eye(hess.shape[0])
            l = np.linalg.cholesky(h)
            y = np.linalg.solve(l, -grad)
            return np.linalg.solve(l.T, y)
        except np.linalg.LinAlgError:
            ridge = max(ridge * 100.0, 1e-14 * scale)
    return None


def _center(problem, x, mu, max_steps, stop_when=None):
    """Damped Newton iteration for the barrier objective at fixed mu."""
    steps = 0
    for _ in range(max_steps):
        grad, hess = problem.grad_hess(x, mu)
        direction = _solve_direction(hess, grad)
        if direction is None:
            break
        decrement2 = float(-grad @ direction)
        if decrement2 <= 1e-12 * max(1.0, abs(float(problem.c @ x))):
            break
        chols = problem.slacks(x)
        f0 = problem.value(x, mu, chols)
        alpha = 1.0
        slope = float(grad @ direction)
        accepted = False
        while alpha > 1e-14:
            trial = x + alpha * direction
            if problem.inside_box(trial):
                trial_chols = problem.slacks(trial)
                if trial_chols is not None:
                    if problem.value(trial, mu, trial_chols) <= f0 + 0.25 * alpha * slope:
                        x = trial
                        accepted = True
                        break
            alpha *= 0.5
        steps += 1
        if not accepted:
            break
        if stop_when is not None and stop_when(x):
            break
    return x, steps


def _phase1(problem, x0, eps, budget):
    """Search for a strictly feasible point by minimizing the worst slack."""
    k = x0.size
    u0 = 1.0
    for t in problem.stacks:
        top = t[0] + np.tensordot(x0, t[1:], axes=1)
        u0 = max(u0, float(np.linalg.eigvalsh(top)[-1]) + 1.0)
    aug_stacks = []
    for t in problem.stacks:
        d = t.shape[1]
        aug = np.concatenate([t, -np.eye(d)[None]], axis=0)
        aug_stacks.append(aug)
    lo = np.concatenate([problem.lo, [-10.0 * DEFAULT_BOX]])
    hi = np.concatenate([problem.hi, [u0 + 10.0]])
    c = np.zeros(k + 1)
    c[-1] = 1.0
    aug = _BarrierProblem(aug_stacks, lo, hi, c)

    target = -0.25 * eps
    x = np.concatenate([x0, [u0]])
    mu = 1.0
    total = 0
    while total < budget:
        x, steps = _center(aug, x, mu, min(60, budget - total),
                           stop_when=lambda z: z[-1] <= -1e-2)
        total += steps
        u_best = float(x[-1])
        if u_best <= target:
            return x[:k], total, True
        if u_best - aug.nu * mu > target:
            return x[:k], total, False
        if mu < 1e-13:
            return x[:k], total, u_best <= target
        mu *= 0.1
    return x[:k], total, float(x[-1]) <= target


def solve(program: LmiProgram, *, max_iterations: int = 500) -> SdpSolution:
    """Solve the program with the two-phase barrier method.

    Returns an Optimal/Feasible solution only when the independent
    certification passes; Infeasible when phase 1 cannot push the worst
    slack below -eps; NumericalFailure when the iteration budget is
    exhausted or certification of a computed point fails.
    """
    eps = program.strictness_margin
    k = program.num_vars
    lo = np.array([b[0] for b in program.var_bounds])
    hi = np.array([b[1] for b in program.var_bounds])

    stacks = []
    for con in program.constraints:
        shift = (eps if con.strict else 0.0) + _INTERIOR_FACTOR * eps
        mats = [real_embed(t) for t in con.terms]
        mats[0] = mats[0] + shift * np.eye(mats[0].shape[0])
        stacks.append(np.stack(mats))
    problem = _BarrierProblem(stacks, lo, hi, np.asarray(program.objective, dtype=float))

    # start strictly inside the box, preferring unit scale
    x0 = np.clip(np.zeros(k), lo + np.minimum(1.0, (hi - lo) / 4),
                 hi - np.minimum(1.0, (hi - lo) / 4))

    x, used, feasible = _phase1(problem, x0, eps, max_iterations)
    if not feasible:
        _, worst = certify(program, x)
        return SdpSolution(
            status=SolveStatus.INFEASIBLE,
            x=x,
            objective_value=math.inf,
            max_constraint_eig=worst,
            iterations=used,
        )

    status = SolveStatus.FEASIBLE
    if np.any(problem.c != 0.0):
        mu = 1.0
        mu_min = max(1e-8 / problem.nu, 1e-11)
        while used < max_iterations:
            x, steps = _center(problem, x, mu, min(60, max_iterations - used))
            used += steps
            if mu <= mu_min:
                status = SolveStatus.OPTIMAL
                break
            mu *= 0.1
        else:
            _, worst = certify(program, x)
            return SdpSolution(
                status=SolveStatus.NUMERICAL_FAILURE,
                x=x,
                objective_value=float(problem.c @ x),
                max_constraint_eig=worst,
                iterations=used,
            )
    else:
        # pure feasibility: one centering pass improves the margin
        x, steps = _center(problem, x, 1.0, min(60, max(0, max_iterations - used)))
        used += steps

    ok, worst = certify(program, x)
    if not ok:
        return SdpSolution(
            status=SolveStatus.NUMERICAL_FAILURE,
            x=x,
            objective_value=float(problem.c @ x),
            max_constraint_eig=worst,
            iterations=used,
        )
    return SdpSolution(
        status=status,
        x=x,
        objective_value=float(problem.c @ x),
        max_constraint_eig=worst,
        iterations=used,
    )
