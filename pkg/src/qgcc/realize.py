"""Static-squeezer realization of a single-mode controller Hamiltonian.

Coupling the plant to a memoryless Bogoliubov component with matrix
B(r, alpha, beta) and coupling strength kappa_tilde adds the traceless
drift term

    -kt / (2 - 2 cosh r cos alpha) *
        [[i cosh r sin alpha,  sinh r e^{i beta}],
         [sinh r e^{-i beta}, -i cosh r sin alpha]]

to the closed loop (the damping added by the extra channel cancels
exactly).  Matching that term to -iJK for a target controller matrix K
reduces, after eliminating alpha and the phase beta, to an equation that
is linear in |sinh r|, so the squeeze parameter is recovered in closed
form and verified by running the forward map.

Two parameter sets realize the same target: (sinh r, beta) and
(-sinh r, beta + pi).  Results are canonicalized to sinh r <= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NoControllerNeeded,
    SingularSqueezer,
    Unrealizable,
    Unsupported,
)
from .qmodel import DoubledMatrix, MatrixKind, commutation_matrix

#: Largest |sinh r| the solver reports as realizable.
MAX_SINH = 10.0
#: Residual allowed between the realized term and the target -iJK.
TARGET_TOL = 1e-9


def bogoliubov_matrix(r: float, alpha: float, beta: float) -> np.ndarray:
    """Transformation matrix of a static squeezer with the given parameters.

    Satisfies B^dag J B = J exactly up to round-off for every (r, alpha,
    beta); r = 0 with alpha = beta = 0 gives the identity.
    """
    ch = math.cosh(r)
    sh = math.sinh(r)
    b1 = ch * complex(math.cos(alpha), math.sin(alpha))
    b2 = sh * complex(math.cos(beta), math.sin(beta))
    return np.array([[b1, b2], [np.conj(b2), np.conj(b1)]])


@dataclass(frozen=True)
class SqueezerRealization:
    """Squeezer parameters realizing one controller Hamiltonian matrix."""

    r: float
    alpha: float
    beta: float
    kappa_tilde: float
    matrix: np.ndarray = None

    def __post_init__(self):
        if not self.kappa_tilde > 0:
            raise ValueError("the squeezer coupling must be strictly positive")
        b = bogoliubov_matrix(self.r, self.alpha, self.beta)
        j = commutation_matrix(1)
        deviation = float(np.max(np.abs(b.conj().T @ j @ b - j)))
        if deviation > 1e-12:
            raise ValueError(f"Bogoliubov condition violated by {deviation:.3e}")
        if abs(2.0 - 2.0 * math.cosh(self.r) * math.cos(self.alpha)) < 1e-12:
            raise SingularSqueezer(
                "the squeezer feedback inverse does not exist "
                "(cosh r cos alpha = 1)"
            )
        b.setflags(write=False)
        object.__setattr__(self, "matrix", b)


def realized_coupling_term(realization: SqueezerRealization) -> np.ndarray:
    """Drift contribution of the squeezer loop, equal to -iJK on success."""
    r, alpha, beta = realization.r, realization.alpha, realization.beta
    denom = 2.0 - 2.0 * math.cosh(r) * math.cos(alpha)
    if abs(denom) < 1e-12:
        raise SingularSqueezer("the squeezer feedback inverse does not exist")
    ch = math.cosh(r)
    sh = math.sinh(r)
    phase = complex(math.cos(beta), math.sin(beta))
    core = np.array(
        [
            [1j * ch * math.sin(alpha), sh * phase],
            [sh * np.conj(phase), -1j * ch * math.sin(alpha)],
        ]
    )
    return -(realization.kappa_tilde / denom) * core


def _controller_target(controller: DoubledMatrix) -> tuple[float, complex]:
    """Split -iJK into its diagonal level p and off-diagonal entry w."""
    if controller.kind is not MatrixKind.HERMITIAN:
        raise Unsupported("the controller matrix must be Hermitian kind")
    if controller.block_shape != (1, 1):
        raise Unsupported(
            "squeezer realization covers single-mode controllers only, "
            f"got blocks of shape {controller.block_shape}"
        )
    target = -1j * commutation_matrix(1) @ controller.full
    p = float(target[0, 0].imag)
    w = complex(target[0, 1])
    return p, w


def solve_squeezer(controller: DoubledMatrix, kappa_tilde: float) -> SqueezerRealization:
    """Find squeezer parameters whose coupling term equals -iJK.

    Raises NoControllerNeeded for the zero controller (the required B
    would make the feedback inverse singular), Unrealizable when the
    target needs |sinh r| beyond the supported range or sits exactly on
    the degenerate coupling value, Unsupported for multi-mode input.
    """
    if not kappa_tilde > 0:
        raise ValueError("kappa_tilde must be strictly positive")
    p, w = _controller_target(controller)
    kt = float(kappa_tilde)

    if abs(w) < 1e-14 and abs(p) < 1e-14:
        raise NoControllerNeeded(
            "the controller matrix is zero; realizing it would need r = 0 "
            "with a singular feedback inverse"
        )

    if abs(w) < 1e-14:
        # pure detuning target: r = 0, alpha from the half-angle identity
        alpha = 2.0 * math.atan2(-kt, 2.0 * p)
        candidate = SqueezerRealization(0.0, alpha, 0.0, kt)
        return _verified(candidate, controller)

    # eliminate alpha: with v = |sinh r| and sign s of the denominator,
    # sin^2 + cos^2 = 1 collapses to a linear equation in v
    denominator = 4.0 * p * p + kt * kt - 4.0 * abs(w) ** 2
    if denominator == 0.0:
        raise Unrealizable(
            "the coupling sits exactly on the degenerate value "
            f"kappa_tilde = {math.sqrt(max(4 * abs(w) ** 2 - 4 * p * p, 0.0)):.6g}; "
            "any other positive coupling realizes this controller"
        )
    sign = 1.0 if denominator > 0 else -1.0
    v = 4.0 * sign * kt * abs(w) / denominator
    if not 0.0 < v <= MAX_SINH:
        raise Unrealizable(
            f"the target needs |sinh r| = {v:.6g}, outside the supported "
            f"range (0, {MAX_SINH}]; choose a coupling with "
            f"4p^2 + kt^2 - 4|w|^2 further from zero"
        )
    ch = math.sqrt(1.0 + v * v)
    den = sign * kt * v / abs(w)
    cos_alpha = (2.0 - den) / (2.0 * ch)
    sin_alpha = -p * sign * v / (abs(w) * ch)
    alpha = math.atan2(sin_alpha, cos_alpha)
    beta = float(np.angle(sign * w))
    candidate = SqueezerRealization(math.asinh(-v), alpha, beta, kt)
    return _verified(candidate, controller)


def _verified(candidate: SqueezerRealization, controller: DoubledMatrix):
    target = -1j * commutation_matrix(1) @ controller.full
    residual = float(np.max(np.abs(realized_coupling_term(candidate) - target)))
    if residual > TARGET_TOL:
        raise Unrealizable(
            f"forward verification failed with residual {residual:.3e}"
        )
    return candidate


def realization_residual(
    realization: SqueezerRealization, controller: DoubledMatrix
) -> float:
    """Max-norm mismatch between the realized term and -iJK."""
    target = -1j * commutation_matrix(1) @ controller.full
    return float(np.max(np.abs(realized_coupling_term(realization) - target)))


def coupling_for_squeeze(controller: DoubledMatrix, r: float) -> float:
    """Closed-form inverse of the one-parameter family: the coupling that
    realizes a pure-squeezing controller with the given squeeze parameter."""
    p, w = _controller_target(controller)
    if abs(p) > 1e-14 or abs(w) < 1e-14:
        raise Unsupported(
            "the closed-form coupling inverse covers pure squeezing targets"
        )
    sh = math.sinh(r)
    if abs(sh) < 1e-14:
        raise Unrealizable("r = 0 cannot realize a squeezing controller")
    return abs(w) * (2.0 * math.cosh(r) - 2.0) / abs(sh)


def closed_loop_qsde_drift(kappa: float, realization: SqueezerRealization) -> np.ndarray:
    """Drift of the amplifier-plus-squeezer loop at full perturbation.

    Equals [[-kappa/2, 1], [1, -kappa/2]] plus the realized coupling term;
    for the example plant it reproduces the oracle's closed-loop drift.
    """
    base = np.array([[-kappa / 2.0, 1.0], [1.0, -kappa / 2.0]], dtype=complex)
    return base + realized_coupling_term(realization)
