"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one `[acceptance] ... PASS/FAIL` line.  Run with
``pytest tests/test_acceptance.py -v -s`` to see the lines as they
happen.  Criterion 8 encodes a published-figure expectation that the
default weighting cannot reproduce; it is asserted exactly as stated and
its failure is analyzed in the project notes rather than papered over.
"""

import functools
import json
import math
from dataclasses import replace

import numpy as np

from qgcc.analysis import analyze_popov, analyze_smallgain, assemble_popov_analysis
from qgcc.cli import main
from qgcc.lmi import certify, solve
from qgcc.oracle import (
    closed_loop_drift,
    is_hurwitz,
    lyapunov_cost,
    ClosedLoop,
    steady_state_covariance,
    verify_bound,
)
from qgcc.qmodel import (
    DoubledMatrix,
    MatrixKind,
    UncertaintyClass,
    commutation_matrix,
    diffusion_matrix,
    dpa_system,
    popov_offset,
)
from qgcc.realize import realized_coupling_term, solve_squeezer
from qgcc.synthesis import (
    assemble_popov_synthesis,
    assemble_smallgain_synthesis,
    synth_popov,
    synth_smallgain,
)

THETA_GRID = tuple(round(0.05 * i, 10) for i in range(21))
R_IDENTITY = np.eye(2)
RHO = 0.1


def criterion(number, title):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] {number:>2}. {title}: FAIL")
                raise
            print(f"[acceptance] {number:>2}. {title}: PASS")

        return wrapper

    return decorate


@criterion(1, "realization exactness")
def test_realization_exactness():
    controller = DoubledMatrix([[0.0]], [[-0.5j]], MatrixKind.HERMITIAN)
    realization = solve_squeezer(controller, 1.0 / 3.0)
    assert abs(realization.alpha) <= 1e-9
    assert abs(realization.beta) <= 1e-9
    assert abs(math.sinh(realization.r) + 0.75) <= 1e-9
    expected_b = np.array([[1.25, -0.75], [-0.75, 1.25]])
    assert np.max(np.abs(realization.matrix - expected_b)) <= 1e-9
    j = commutation_matrix(1)
    bogo = realization.matrix.conj().T @ j @ realization.matrix - j
    assert np.max(np.abs(bogo)) <= 1e-12
    term = realized_coupling_term(realization)
    assert np.max(np.abs(term - np.array([[0.0, -0.5], [-0.5, 0.0]]))) <= 1e-9


@criterion(2, "oracle regression")
def test_oracle_regression():
    # independently re-derived: s3 = 4.5/173.25, s2 = 4.5 s3, s1 = 39.5 s3,
    # cost = s1 + s3 = 182.25/173.25 = 1.05194...
    loop = ClosedLoop(
        np.array([[-2.25, 0.5], [0.5, -2.25]]), np.diag([4.5, 0.0]), np.eye(2)
    )
    cost = lyapunov_cost(loop)
    assert abs(cost - 1.0519) <= 1e-3
    assert abs(cost - 182.25 / 173.25) <= 1e-9


@criterion(3, "duality against the oracle at zero channel")
def test_duality_zero_channel():
    for kappa in (4.5, 6.0, 8.0):
        system, _, _ = dpa_system(kappa, delta=0.0)
        system = replace(
            system, channel=DoubledMatrix([[0.0]], [[0.0]], MatrixKind.GENERAL)
        )
        outcome = analyze_smallgain(system, R_IDENTITY)
        assert outcome.feasible
        cov = steady_state_covariance(
            system.drift_matrix(), diffusion_matrix(system.coupling)
        )
        nominal = float(np.trace(R_IDENTITY @ cov).real)
        assert abs(outcome.bound - nominal) / nominal <= 1e-4


@criterion(4, "analysis bound soundness")
def test_analysis_bound_soundness():
    for kappa in (4.5, 6.0, 8.0):
        system, paper_delta, _ = dpa_system(kappa, gamma=1.0)
        outcome = analyze_smallgain(system, R_IDENTITY)
        if outcome.feasible:
            report = verify_bound(
                system, None, R_IDENTITY, RHO, outcome.bound,
                num_samples=200, seed=42, extra_perturbations=(paper_delta,),
            )
            assert report.violations == 0
        else:
            # an infinite bound dominates trivially; at kappa = 4.5 the
            # infeasibility is forced: an admissible perturbation
            # destabilizes the plant, so no finite bound can exist
            if kappa == 4.5:
                destabilizer = DoubledMatrix([[0.0]], [[2.0j]],
                                             MatrixKind.HERMITIAN)
                assert np.linalg.norm(destabilizer.full, 2) <= 2.0 / system.gamma
                assert not is_hurwitz(closed_loop_drift(system, destabilizer))
            print(f"[acceptance]     note: small-gain analysis infeasible at "
                  f"kappa={kappa} (bound = inf dominates vacuously)")

    for kappa in (4.5, 6.0, 8.0):
        system, paper_delta, _ = dpa_system(
            kappa, gamma=2.0, uncertainty_class=UncertaintyClass.POSITIVE_BOUND
        )
        outcome = analyze_popov(system, R_IDENTITY, THETA_GRID)
        assert outcome.feasible
        report = verify_bound(
            system, None, R_IDENTITY, RHO, outcome.bound,
            num_samples=200, seed=42, extra_perturbations=(paper_delta,),
        )
        assert report.violations == 0


@criterion(5, "synthesis soundness")
def test_synthesis_soundness():
    cases = []
    system, paper_delta, _ = dpa_system(4.5, gamma=1.0)
    cases.append((system, paper_delta, synth_smallgain(system, R_IDENTITY, RHO)))
    for kappa in (3.8, 4.5):
        system, paper_delta, _ = dpa_system(
            kappa, gamma=2.0, uncertainty_class=UncertaintyClass.POSITIVE_BOUND
        )
        cases.append(
            (system, paper_delta, synth_popov(system, R_IDENTITY, RHO, THETA_GRID))
        )
    for system, paper_delta, outcome in cases:
        assert outcome.feasible
        j = commutation_matrix(system.n_modes)
        closed = system.drift_matrix() - 1j * j @ outcome.controller.full
        assert is_hurwitz(closed, margin=1e-8)
        report = verify_bound(
            system, outcome.controller, R_IDENTITY, RHO, outcome.bound,
            num_samples=200, seed=42, extra_perturbations=(paper_delta,),
        )
        assert report.violations == 0
        assert report.unstable_samples == 0


@criterion(6, "feasibility thresholds")
def test_feasibility_thresholds():
    system, _, _ = dpa_system(3.8, gamma=1.0)
    assert not synth_smallgain(system, R_IDENTITY, RHO).feasible
    system, _, _ = dpa_system(4.5, gamma=1.0)
    assert synth_smallgain(system, R_IDENTITY, RHO).feasible
    system, _, _ = dpa_system(
        3.8, gamma=2.0, uncertainty_class=UncertaintyClass.POSITIVE_BOUND
    )
    assert synth_popov(system, R_IDENTITY, RHO, THETA_GRID).feasible

    threshold = None
    for kappa in [round(3.5 + 0.05 * i, 10) for i in range(21)]:
        system, _, _ = dpa_system(kappa, gamma=1.0)
        if synth_smallgain(system, R_IDENTITY, RHO).feasible:
            threshold = kappa
            break
    print(f"[acceptance]     note: empirical small-gain synthesis threshold "
          f"kappa = {threshold}")
    assert threshold is not None and 3.5 <= threshold <= 4.5


@criterion(7, "Popov dominance over small gain")
def test_popov_dominance():
    for kappa in (4.5, 5.0, 6.0, 8.0, 10.0):
        norm_system, _, _ = dpa_system(kappa, gamma=1.0)
        pos_system, _, _ = dpa_system(
            kappa, gamma=2.0, uncertainty_class=UncertaintyClass.POSITIVE_BOUND
        )
        small_gain = synth_smallgain(norm_system, R_IDENTITY, RHO)
        popov = synth_popov(pos_system, R_IDENTITY, RHO, THETA_GRID)
        assert small_gain.feasible and popov.feasible
        assert popov.bound < small_gain.bound


@criterion(8, "theta curve attains an interior minimum")
def test_theta_curve_shape():
    # Published-figure expectation: minimum near theta = 0.1.  With the
    # default weights the measured argmin is theta = 0 (see notes).
    system, _, _ = dpa_system(
        3.8, gamma=2.0, uncertainty_class=UncertaintyClass.POSITIVE_BOUND
    )
    bounds = {}
    for theta in THETA_GRID:
        outcome = synth_popov(system, R_IDENTITY, RHO, [theta])
        if outcome.feasible:
            bounds[theta] = outcome.bound
    assert bounds, "no feasible theta at kappa = 3.8"
    argmin = min(bounds, key=bounds.get)
    print(f"[acceptance]     note: bound(theta) argmin = {argmin}, "
          f"curve head = {[round(bounds[t], 4) for t in THETA_GRID[:5]]}")
    assert 0.05 <= argmin <= 0.3, (
        f"theta argmin {argmin} outside [0.05, 0.3]: the multiplier offset "
        f"(2*theta*kappa = {popov_offset(system, 1.0):.3g} at theta = 1) "
        "dominates the feasibility gain under the default weights"
    )


@criterion(9, "certification and determinism")
def test_certification_and_determinism(tmp_path):
    programs = []
    system, _, _ = dpa_system(8.0, gamma=1.0)
    programs.append(assemble_smallgain_synthesis(system, R_IDENTITY, RHO))
    pos_system, _, _ = dpa_system(
        4.5, gamma=2.0, uncertainty_class=UncertaintyClass.POSITIVE_BOUND
    )
    programs.append(assemble_popov_analysis(pos_system, R_IDENTITY, 0.1))
    programs.append(assemble_popov_synthesis(pos_system, R_IDENTITY, RHO, 0.1))
    feasible_seen = 0
    for program in programs:
        solution = solve(program)
        if solution.feasible:
            ok, worst = certify(program, solution.x)
            assert ok
            assert worst <= -program.strictness_margin / 2
            feasible_seen += 1
        again = solve(program)
        assert again.status is solution.status
        assert again.objective_value == solution.objective_value
        assert np.array_equal(again.x, solution.x)
    assert feasible_seen == len(programs)

    config = {
        "system": {"fixture": "dpa", "kappa": 4.5},
        "method": "smallgain",
        "verification": {"samples": 50, "seed": 42},
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    tables = []
    for name in ("one.csv", "two.csv"):
        out = tmp_path / name
        code = main(
            [
                "sweep", "--config", str(config_path), "--param", "kappa",
                "--from", "4.3", "--to", "4.6", "--step", "0.1",
                "--method", "smallgain", "--out", str(out),
            ]
        )
        assert code == 0
        tables.append(out.read_bytes())

    def strip_wall(raw: bytes) -> bytes:
        lines = raw.split(b"\n")
        kept = []
        for line in lines:
            if line.startswith(b"#") or line == b"":
                kept.append(line)
            else:
                kept.append(line.rsplit(b",", 1)[0])
        return b"\n".join(kept)

    # wall_ms is timing and cannot be byte-stable; all other bytes must be
    assert strip_wall(tables[0]) == strip_wall(tables[1])


@criterion(10, "doubled structure preservation")
def test_structure_preservation():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        n = int(rng.integers(1, 5))

        def draw(kind):
            b1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            b2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            if kind is MatrixKind.HERMITIAN:
                b1 = (b1 + b1.conj().T) / 2
                b2 = (b2 + b2.T) / 2
            return DoubledMatrix(b1, b2, kind)

        a = draw(MatrixKind.GENERAL)
        b = draw(MatrixKind.GENERAL)
        for result in (a @ b, a + b, a.adjoint()):
            DoubledMatrix.from_full(result.full)
        h = draw(MatrixKind.HERMITIAN)
        d = draw(MatrixKind.HERMITIAN)
        DoubledMatrix.from_full((h + d).full, MatrixKind.HERMITIAN)

    system, paper_delta, _ = dpa_system(4.5, gamma=1.0)
    outcome = synth_smallgain(system, R_IDENTITY, RHO)
    assert outcome.feasible
    k = outcome.controller
    DoubledMatrix(k.block1, k.block2, MatrixKind.HERMITIAN)
    e = system.channel.full
    perturbed = system.hamiltonian.full + e.conj().T @ paper_delta.full @ e
    DoubledMatrix.from_full(perturbed, MatrixKind.HERMITIAN)
    DoubledMatrix.from_full(
        (outcome.scaled_controller @ outcome.scaled_controller).full
    )
