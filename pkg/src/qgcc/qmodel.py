"""Doubled-form matrix types for uncertain linear quantum systems.

A single-mode annihilation/creation pair is stacked as [a; a#], so every
system matrix acts on a 2n-dimensional doubled space and carries the block
structure [[X1, X2], [X2#, X1#]].  This module provides the structured
matrix carrier, the plant description, derived drift/diffusion matrices,
the admissibility tests for Hamiltonian perturbations, and the degenerate
parametric amplifier (DPA) example plant.

Hamiltonian matrices (the plant matrix, perturbation matrices and
controller matrices) are stored *without* the conventional 1/2 prefactor
of the quadratic form; every downstream formula consumes them directly in
that normalization, so no caller should divide by two again.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


from .errors import (
    DimensionMismatch,
    NonPositiveKappa,
    StructureViolation,
)

#: Tolerance for Hermitian/symmetric block validation.  Fixture data is
#: exact; the tolerance only absorbs arithmetic round-off.
STRUCTURE_TOL = 1e-10


class MatrixKind(enum.Enum):
    """Structural class of a doubled matrix."""

    HERMITIAN = "hermitian"
    GENERAL = "general"


class UncertaintyClass(enum.Enum):
    """Admissible perturbation set for the Hamiltonian uncertainty."""

    #: Perturbation matrix bounded in induced norm by 2/gamma.
    NORM_BOUND = "norm_bound"
    #: Perturbation matrix between 0 and (4/gamma) I in the Loewner order.
    POSITIVE_BOUND = "positive_bound"


def commutation_matrix(n: int) -> np.ndarray:
    """Return the 2n x 2n signature matrix diag(I, -I)."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


def swap_matrix(n: int) -> np.ndarray:
    """Return the 2n x 2n block swap [[0, I], [I, 0]]."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [eye, zero]])


def _as_complex(x) -> np.ndarray:
    a = np.array(x, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def _max_abs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


@dataclass(frozen=True)
class DoubledMatrix:
    """A structured matrix [[X1, X2], [X2#, X1#]] acting on [a; a#].

    ``block1`` and ``block2`` are the upper blocks X1 and X2 (same shape,
    square for the Hermitian kind).  The Hermitian kind additionally
    requires X1 = X1^dag and X2 = X2^T; blocks are canonicalized on
    construction so the assembled matrix is Hermitian exactly.
    """

    block1: np.ndarray
    block2: np.ndarray
    kind: MatrixKind = MatrixKind.GENERAL

    def __post_init__(self):
        b1 = _as_complex(self.block1)
        b2 = _as_complex(self.block2)
        if b1.shape != b2.shape:
            raise DimensionMismatch(
                f"blocks must share a shape, got {b1.shape} and {b2.shape}"
            )
        if self.kind is MatrixKind.HERMITIAN:
            if b1.shape[0] != b1.shape[1]:
                raise StructureViolation(
                    "Hermitian doubled matrices need square blocks, "
                    f"got {b1.shape}"
                )
            herm_dev = _max_abs(b1 - b1.conj().T)
            sym_dev = _max_abs(b2 - b2.T)
            if herm_dev > STRUCTURE_TOL or sym_dev > STRUCTURE_TOL:
                raise StructureViolation(
                    "Hermitian kind requires X1 = X1^dag and X2 = X2^T "
                    f"(deviations {herm_dev:.3e}, {sym_dev:.3e})"
                )
            b1 = (b1 + b1.conj().T) / 2.0
            b2 = (b2 + b2.T) / 2.0
        b1.setflags(write=False)
        b2.setflags(write=False)
        object.__setattr__(self, "block1", b1)
        object.__setattr__(self, "block2", b2)

    @property
    def block_shape(self) -> tuple[int, int]:
        return self.block1.shape

    @property
    def n_modes(self) -> int:
        """Number of modes the matrix acts on (columns of a block)."""
        return self.block1.shape[1]

    @property
    def full(self) -> np.ndarray:
        """The assembled 2p x 2q matrix."""
        return np.block(
            [
                [self.block1, self.block2],
                [self.block2.conj(), self.block1.conj()],
            ]
        )

    @classmethod
    def from_full(cls, x, kind: MatrixKind = MatrixKind.GENERAL) -> "DoubledMatrix":
        """Split an assembled matrix back into blocks, validating closure."""
        a = _as_complex(x)
        p, q = a.shape
        if p % 2 or q % 2:
            raise DimensionMismatch(f"doubled matrices have even sizes, got {a.shape}")
        p, q = p // 2, q // 2
        b1, b2 = a[:p, :q], a[:p, q:]
        lower_dev = max(
            _max_abs(a[p:, :q] - b2.conj()), _max_abs(a[p:, q:] - b1.conj())
        )
        if lower_dev > STRUCTURE_TOL * max(1.0, _max_abs(a)):
            raise StructureViolation(
                f"lower blocks are not the conjugates of the upper ones "
                f"(deviation {lower_dev:.3e})"
            )
        return cls(b1, b2, kind)

    @classmethod
    def zeros(cls, n: int, kind: MatrixKind = MatrixKind.HERMITIAN) -> "DoubledMatrix":
        z = np.zeros((n, n), dtype=complex)
        return cls(z, z, kind)

    @classmethod
    def identity(cls, n: int) -> "DoubledMatrix":
        return cls(np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex),
                   MatrixKind.HERMITIAN)

    def __add__(self, other: "DoubledMatrix") -> "DoubledMatrix":
        kind = (
            MatrixKind.HERMITIAN
            if self.kind is MatrixKind.HERMITIAN and other.kind is MatrixKind.HERMITIAN
            else MatrixKind.GENERAL
        )
        return DoubledMatrix(self.block1 + other.block1,
                             self.block2 + other.block2, kind)

    def __matmul__(self, other: "DoubledMatrix") -> "DoubledMatrix":
        # (AB)1 = A1 B1 + A2 B2#, (AB)2 = A1 B2 + A2 B1#: closure under products.
        b1 = self.block1 @ other.block1 + self.block2 @ other.block2.conj()
        b2 = self.block1 @ other.block2 + self.block2 @ other.block1.conj()
        return DoubledMatrix(b1, b2, MatrixKind.GENERAL)

    def adjoint(self) -> "DoubledMatrix":
        return DoubledMatrix(self.block1.conj().T, self.block2.T, self.kind)

    def scaled(self, factor: float) -> "DoubledMatrix":
        """Scale by a real factor (preserves the Hermitian kind)."""
        return DoubledMatrix(self.block1 * float(factor),
                             self.block2 * float(factor), self.kind)


@dataclass(frozen=True)
class CouplingOperator:
    """Matrix data of the field coupling vector: L = [n1 n2] [a; a#]."""

    n1: np.ndarray
    n2: np.ndarray

    def __post_init__(self):
        a1 = _as_complex(self.n1)
        a2 = _as_complex(self.n2)
        if a1.shape != a2.shape:
            raise DimensionMismatch(
                f"coupling blocks must share a shape, got {a1.shape} and {a2.shape}"
            )
        a1.setflags(write=False)
        a2.setflags(write=False)
        object.__setattr__(self, "n1", a1)
        object.__setattr__(self, "n2", a2)

    @property
    def n_outputs(self) -> int:
        return self.n1.shape[0]

    @property
    def n_modes(self) -> int:
        return self.n1.shape[1]

    @property
    def tilde(self) -> np.ndarray:
        """The m x 2n row form [n1 n2]."""
        return np.hstack([self.n1, self.n2])

    @property
    def doubled(self) -> np.ndarray:
        """The 2m x 2n doubled form [[n1, n2], [n2#, n1#]]."""
        return np.block([[self.n1, self.n2], [self.n2.conj(), self.n1.conj()]])


@dataclass(frozen=True)
class UncertainSystem:
    """Uncertain linear plant: nominal Hamiltonian matrix, field coupling,
    uncertainty channel and the admissible perturbation class.

    The scattering matrix is implicitly the identity; other choices are
    outside the supported problem class.
    """

    n_modes: int
    hamiltonian: DoubledMatrix
    coupling: CouplingOperator
    channel: DoubledMatrix
    gamma: float
    delta: float = 0.0
    uncertainty_class: UncertaintyClass = UncertaintyClass.NORM_BOUND

    def __post_init__(self):
        n = self.n_modes
        if n < 1:
            raise DimensionMismatch("n_modes must be a positive integer")
        if self.hamiltonian.kind is not MatrixKind.HERMITIAN:
            raise StructureViolation("the Hamiltonian matrix must be Hermitian kind")
        if self.hamiltonian.block_shape != (n, n):
            raise DimensionMismatch(
                f"Hamiltonian blocks must be {n}x{n}, got {self.hamiltonian.block_shape}"
            )
        if self.coupling.n_modes != n:
            raise DimensionMismatch(
                f"coupling acts on {self.coupling.n_modes} modes, expected {n}"
            )
        if self.channel.block_shape[1] != n:
            raise DimensionMismatch(
                f"uncertainty channel has {self.channel.block_shape[1]} mode "
                f"columns, expected {n}"
            )
        if not self.gamma > 0:
            raise ValueError("gamma must be strictly positive")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")

    @property
    def channel_outputs(self) -> int:
        """Number of uncertainty outputs m' (the channel is 2m' x 2n)."""
        return self.channel.block_shape[0]

    def drift_matrix(self) -> np.ndarray:
        return drift_matrix(self.hamiltonian, self.coupling)

    def diffusion_matrix(self) -> np.ndarray:
        return diffusion_matrix(self.coupling)


def drift_matrix(hamiltonian: DoubledMatrix, coupling: CouplingOperator) -> np.ndarray:
    """Drift of the doubled first-moment dynamics: -iJM - (1/2) J N^dag J N."""
    n = hamiltonian.n_modes
    if coupling.n_modes != n:
        raise DimensionMismatch(
            f"coupling acts on {coupling.n_modes} modes, Hamiltonian on {n}"
        )
    j = commutation_matrix(n)
    nd = coupling.doubled
    jm = commutation_matrix(coupling.n_outputs)
    return -1j * j @ hamiltonian.full - 0.5 * j @ nd.conj().T @ jm @ nd


def diffusion_matrix(coupling: CouplingOperator) -> np.ndarray:
    """Noise matrix D = J N^dag diag(I, 0) N J of the second-moment dynamics.

    The steady covariance satisfies F S + S F^dag + D = 0, and the
    guaranteed-cost bounds are traces against this matrix.
    """
    n = coupling.n_modes
    m = coupling.n_outputs
    j = commutation_matrix(n)
    nd = coupling.doubled
    upper = np.zeros((2 * m, 2 * m))
    upper[:m, :m] = np.eye(m)
    d = j @ nd.conj().T @ upper @ nd @ j
    return (d + d.conj().T) / 2.0


def channel_commutator(channel: DoubledMatrix, coupling: CouplingOperator) -> np.ndarray:
    """Constant commutator between the uncertainty output and the coupling.

    Equals E J Sigma Ntilde^T, a 2m' x m constant matrix.
    """
    n = channel.n_modes
    if coupling.n_modes != n:
        raise DimensionMismatch(
            f"coupling acts on {coupling.n_modes} modes, channel on {n}"
        )
    j = commutation_matrix(n)
    sigma = swap_matrix(n)
    return channel.full @ j @ sigma @ coupling.tilde.T


def popov_offset(system: UncertainSystem, theta: float) -> float:
    """Constant added to the Popov cost bound for multiplier theta >= 0.

    Equals (4 theta / gamma) tr(c^dag c) with c the channel/coupling
    commutator; non-negative, zero at theta = 0.
    """
    if theta < 0:
        raise ValueError("theta must be non-negative")
    c = channel_commutator(system.channel, system.coupling)
    return float(4.0 * theta / system.gamma * np.sum(np.abs(c) ** 2))


def perturbation_in_class(
    perturbation: DoubledMatrix,
    uncertainty_class: UncertaintyClass,
    gamma: float,
) -> bool:
    """Membership test for an admissible Hamiltonian perturbation matrix."""
    if perturbation.kind is not MatrixKind.HERMITIAN:
        raise StructureViolation("perturbation matrices must be Hermitian kind")
    full = perturbation.full
    if uncertainty_class is UncertaintyClass.NORM_BOUND:
        norm = float(np.linalg.norm(full, 2))
        return norm <= 2.0 / gamma + 1e-12
    eigs = np.linalg.eigvalsh(full)
    return bool(eigs[0] >= -1e-12 and eigs[-1] <= 4.0 / gamma + 1e-12)


def hermitian_doubled_basis(n: int) -> tuple[DoubledMatrix, ...]:
    """Real basis of the Hermitian doubled matrices on n modes.

    The space has dimension 2n^2 + n: n^2 real parameters for the
    Hermitian upper-left block and n(n+1) for the symmetric upper-right
    block.  The order is fixed and shared by every LMI assembly.
    """
    zero = np.zeros((n, n), dtype=complex)
    basis: list[DoubledMatrix] = []

    def unit(i, j, value):
        b = zero.copy()
        b[i, j] = value
        return b

    for i in range(n):
        basis.append(DoubledMatrix(unit(i, i, 1.0), zero, MatrixKind.HERMITIAN))
    for i in range(n):
        for j in range(i + 1, n):
            b = unit(i, j, 1.0)
            basis.append(DoubledMatrix(b + b.conj().T, zero, MatrixKind.HERMITIAN))
            b = unit(i, j, 1.0j)
            basis.append(DoubledMatrix(b + b.conj().T, zero, MatrixKind.HERMITIAN))
    for i in range(n):
        for j in range(i, n):
            for value in (1.0, 1.0j):
                b = unit(i, j, value)
                if i != j:
                    b = b + b.T
                basis.append(DoubledMatrix(zero, b, MatrixKind.HERMITIAN))
    return tuple(basis)


def doubled_from_parameters(values, n: int) -> DoubledMatrix:
    """Assemble a Hermitian doubled matrix from its real basis coordinates."""
    basis = hermitian_doubled_basis(n)
    values = np.asarray(values, dtype=float)
    if values.shape != (len(basis),):
        raise DimensionMismatch(
            f"expected {len(basis)} parameters for n = {n}, got {values.shape}"
        )
    b1 = sum(v * b.block1 for v, b in zip(values, basis))
    b2 = sum(v * b.block2 for v, b in zip(values, basis))
    return DoubledMatrix(b1, b2, MatrixKind.HERMITIAN)


def dpa_system(
    kappa: float,
    *,
    gamma: float | None = None,
    delta: float = 0.0,
    uncertainty_class: UncertaintyClass = UncertaintyClass.NORM_BOUND,
) -> tuple[UncertainSystem, DoubledMatrix, DoubledMatrix]:
    """Degenerate parametric amplifier example plant.

    Returns the uncertain system, the example perturbation matrix and the
    example controller matrix.  When ``gamma`` is omitted it defaults to
    the value making the example perturbation admissible: 1 for the
    norm-bounded class, 2 for the positive-bounded class.

    The undamped plant (kappa = 0) is constructible so that analysis can
    report its non-Hurwitz drift; negative damping is rejected.
    """
    if kappa < 0:
        raise NonPositiveKappa(f"kappa must be non-negative, got {kappa}")
    if gamma is None:
        gamma = 1.0 if uncertainty_class is UncertaintyClass.NORM_BOUND else 2.0
    hamiltonian = DoubledMatrix([[-1.0]], [[0.5j]], MatrixKind.HERMITIAN)
    coupling = CouplingOperator([[np.sqrt(kappa)]], [[0.0]])
    channel = DoubledMatrix([[1.0]], [[0.0]], MatrixKind.GENERAL)
    system = UncertainSystem(
        n_modes=1,
        hamiltonian=hamiltonian,
        coupling=coupling,
        channel=channel,
        gamma=float(gamma),
        delta=float(delta),
        uncertainty_class=uncertainty_class,
    )
    perturbation = DoubledMatrix([[1.0]], [[0.5j]], MatrixKind.HERMITIAN)
    controller = DoubledMatrix([[0.0]], [[-0.5j]], MatrixKind.HERMITIAN)
    return system, perturbation, controller
