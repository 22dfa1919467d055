"""Command-line front end.

Subcommands: analyze, synthesize, sweep, verify, realize.  Runs are
described by a JSON config (fixture selector or explicit system
matrices); results land in CSV tables with metadata comment lines,
controller/realization artifacts in JSON, and sweep tables can be
rendered to a figure.  Exit codes: 0 success/feasible, 1 infeasible or
unrealizable, 2 configuration error, 3 solver failure, 4 bound violated
under verification.

Complex scalars are serialized as two-element [re, im] arrays and
matrices as row-major nested arrays of such pairs.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .analysis import analyze_popov, analyze_smallgain
from .errors import (
    ConfigError,
    NoControllerNeeded,
    NonPositiveKappa,
    NotHurwitz,
    QgccError,
    Unrealizable,
    Unsupported,
)
from .lmi import SolveStatus
from .oracle import verify_bound
from .qmodel import (
    CouplingOperator,
    DoubledMatrix,
    MatrixKind,
    UncertainSystem,
    UncertaintyClass,
    dpa_system,
    perturbation_in_class,
)
from .realize import realization_residual, solve_squeezer
from .report import render_sweep_figure, write_table
from .synthesis import synth_popov, synth_smallgain

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_UNSOUND = 4

_METHOD_CLASS = {
    "smallgain": UncertaintyClass.NORM_BOUND,
    "popov": UncertaintyClass.POSITIVE_BOUND,
}


@dataclass(frozen=True)
class RunConfig:
    system: dict
    method: str = "smallgain"
    r_spec: object = "identity"
    rho: float = 0.1
    theta_from: float = 0.0
    theta_to: float = 1.0
    theta_step: float = 0.05
    epsilon: float = 1e-6
    samples: int = 200
    seed: int = 42
    output: str | None = None

    def theta_grid(self) -> list[float]:
        return make_grid(self.theta_from, self.theta_to, self.theta_step)

    def to_dict(self) -> dict:
        data = {
            "system": dict(self.system),
            "cost": {"R": self.r_spec, "rho": self.rho},
            "method": self.method,
            "theta_grid": {
                "from": self.theta_from,
                "to": self.theta_to,
                "step": self.theta_step,
            },
            "epsilon": self.epsilon,
            "verification": {"samples": self.samples, "seed": self.seed},
        }
        if self.output is not None:
            data["output"] = self.output
        return data


def make_grid(start: float, stop: float, step: float) -> list[float]:
    if not step > 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if not start < stop:
        raise ConfigError(f"empty grid range [{start}, {stop}]")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def matrix_to_pairs(matrix) -> list:
    a = np.asarray(matrix, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def pairs_to_matrix(data, context: str) -> np.ndarray:
    try:
        a = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: not a numeric matrix of [re, im] pairs") from exc
    if a.ndim != 3 or a.shape[2] != 2:
        raise ConfigError(
            f"{context}: expected a nested array of [re, im] pairs, got shape {a.shape}"
        )
    return a[..., 0] + 1j * a[..., 1]


def _require_keys(data: dict, allowed: set[str], required: set[str], context: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected an object")
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"{context}: unknown keys {sorted(unknown)}")
    missing = required - set(data)
    if missing:
        raise ConfigError(f"{context}: missing keys {sorted(missing)}")


def _number(data, context: str) -> float:
    if isinstance(data, bool) or not isinstance(data, (int, float)):
        raise ConfigError(f"{context}: expected a number, got {data!r}")
    return float(data)


def parse_config(data: dict) -> RunConfig:
    _require_keys(
        data,
        {"system", "cost", "method", "theta_grid", "epsilon", "verification", "output"},
        {"system"},
        "config",
    )
    system = data["system"]
    if not isinstance(system, dict):
        raise ConfigError("config.system: expected an object")
    if "scattering" in system or "S" in system:
        raise ConfigError(
            "config.system: scattering matrices other than the identity are "
            "unsupported"
        )
    if "fixture" in system:
        _require_keys(system, {"fixture", "kappa", "gamma", "delta"},
                      {"fixture", "kappa"}, "config.system")
        if system["fixture"] != "dpa":
            raise ConfigError(f"config.system: unknown fixture {system['fixture']!r}")
        normalized = {"fixture": "dpa", "kappa": _number(system["kappa"], "kappa")}
        if "gamma" in system:
            normalized["gamma"] = _number(system["gamma"], "gamma")
        if "delta" in system:
            normalized["delta"] = _number(system["delta"], "delta")
    else:
        _require_keys(
            system,
            {"n_modes", "hamiltonian", "coupling", "channel", "gamma", "delta"},
            {"n_modes", "hamiltonian", "coupling", "channel", "gamma"},
            "config.system",
        )
        normalized = dict(system)

    method = data.get("method", "smallgain")
    if method not in ("smallgain", "popov", "both"):
        raise ConfigError(f"config.method: expected smallgain|popov|both, got {method!r}")

    cost = data.get("cost", {})
    _require_keys(cost, {"R", "rho"}, set(), "config.cost")
    r_spec = cost.get("R", "identity")
    if isinstance(r_spec, str):
        if r_spec != "identity":
            raise ConfigError(f"config.cost.R: expected 'identity' or a matrix, got {r_spec!r}")
    else:
        pairs_to_matrix(r_spec, "config.cost.R")
        r_spec = matrix_to_pairs(pairs_to_matrix(r_spec, "config.cost.R"))
    rho = _number(cost.get("rho", 0.1), "config.cost.rho")
    if rho <= 0:
        raise ConfigError("config.cost.rho must be strictly positive")

    grid = data.get("theta_grid", {})
    _require_keys(grid, {"from", "to", "step"}, set(), "config.theta_grid")
    theta_from = _number(grid.get("from", 0.0), "theta_grid.from")
    theta_to = _number(grid.get("to", 1.0), "theta_grid.to")
    theta_step = _number(grid.get("step", 0.05), "theta_grid.step")

    epsilon = _number(data.get("epsilon", 1e-6), "config.epsilon")
    if epsilon <= 0:
        raise ConfigError("config.epsilon must be strictly positive")

    verification = data.get("verification", {})
    _require_keys(verification, {"samples", "seed"}, set(), "config.verification")
    samples = int(_number(verification.get("samples", 200), "verification.samples"))
    seed = int(_number(verification.get("seed", 42), "verification.seed"))
    if samples < 1:
        raise ConfigError("config.verification.samples must be at least 1")

    output = data.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("config.output: expected a path string")

    return RunConfig(
        system=normalized,
        method=method,
        r_spec=r_spec,
        rho=rho,
        theta_from=theta_from,
        theta_to=theta_to,
        theta_step=theta_step,
        epsilon=epsilon,
        samples=samples,
        seed=seed,
        output=output,
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return parse_config(data)


def build_system(
    config: RunConfig, method: str, kappa_override: float | None = None
) -> tuple[UncertainSystem, tuple[DoubledMatrix, ...], float]:
    """Instantiate the plant for one method; returns extra verification
    perturbations (the fixture's example matrix) and the fixture kappa."""
    cls = _METHOD_CLASS[method]
    spec = config.system
    if spec.get("fixture") == "dpa":
        kappa = float(kappa_override if kappa_override is not None else spec["kappa"])
        try:
            system, delta, _ = dpa_system(
                kappa,
                gamma=spec.get("gamma"),
                delta=spec.get("delta", 0.0),
                uncertainty_class=cls,
            )
        except NonPositiveKappa as exc:
            raise ConfigError(str(exc)) from exc
        admissible = perturbation_in_class(
            delta, system.uncertainty_class, system.gamma
        )
        return system, (delta,) if admissible else (), kappa
    if kappa_override is not None:
        raise ConfigError("kappa sweeps require the dpa fixture")
    try:
        hamiltonian = DoubledMatrix(
            pairs_to_matrix(spec["hamiltonian"]["block1"], "hamiltonian.block1"),
            pairs_to_matrix(spec["hamiltonian"]["block2"], "hamiltonian.block2"),
            MatrixKind.HERMITIAN,
        )
        coupling = CouplingOperator(
            pairs_to_matrix(spec["coupling"]["n1"], "coupling.n1"),
            pairs_to_matrix(spec["coupling"]["n2"], "coupling.n2"),
        )
        channel = DoubledMatrix(
            pairs_to_matrix(spec["channel"]["block1"], "channel.block1"),
            pairs_to_matrix(spec["channel"]["block2"], "channel.block2"),
            MatrixKind.GENERAL,
        )
        system = UncertainSystem(
            n_modes=int(spec["n_modes"]),
            hamiltonian=hamiltonian,
            coupling=coupling,
            channel=channel,
            gamma=float(spec["gamma"]),
            delta=float(spec.get("delta", 0.0)),
            uncertainty_class=cls,
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"config.system: {exc}") from exc
    except QgccError as exc:
        raise ConfigError(f"config.system: {exc}") from exc
    return system, (), math.nan


def cost_matrix_for(config: RunConfig, system: UncertainSystem) -> np.ndarray:
    if isinstance(config.r_spec, str):
        return np.eye(2 * system.n_modes)
    return pairs_to_matrix(config.r_spec, "config.cost.R")


def metadata_for(config: RunConfig, method: str) -> dict:
    meta = {
        "method": method,
        "rho": config.rho,
        "epsilon": config.epsilon,
        "theta_from": config.theta_from,
        "theta_to": config.theta_to,
        "theta_step": config.theta_step,
        "samples": config.samples,
        "seed": config.seed,
        "R": "identity" if isinstance(config.r_spec, str) else "custom",
    }
    spec = config.system
    if spec.get("fixture") == "dpa":
        meta["fixture"] = "dpa"
        meta["kappa"] = spec["kappa"]
        # the fixture defaults gamma per method: 1 (smallgain) or 2 (popov)
        meta["gamma"] = spec.get("gamma", "auto")
        meta["delta"] = spec.get("delta", 0.0)
    else:
        meta["gamma"] = spec["gamma"]
        meta["delta"] = spec.get("delta", 0.0)
    return meta


def _analysis_row(method, kappa, config, system, cost):
    start = time.perf_counter()
    try:
        if method == "smallgain":
            outcome = analyze_smallgain(system, cost, epsilon=config.epsilon)
            theta = None
            t = 1.0 / outcome.multiplier if outcome.feasible else None
        else:
            outcome = analyze_popov(
                system, cost, config.theta_grid(), epsilon=config.epsilon
            )
            theta = outcome.multiplier if outcome.feasible else None
            t = None
        status = outcome.solver.status.value
        feasible = outcome.feasible
        bound = outcome.bound
    except NotHurwitz as exc:
        print(f"qgcc: F not Hurwitz: {exc}", file=sys.stderr)
        outcome, theta, t = None, None, None
        status, feasible, bound = "not_hurwitz", False, math.inf
    wall = (time.perf_counter() - start) * 1e3
    row = {
        "method": f"{method}-analysis",
        "kappa": kappa,
        "theta": theta,
        "feasible": feasible,
        "bound": bound,
        "q": None,
        "t": t,
        "solver_status": status,
        "wall_ms": wall,
    }
    return row, outcome


def _synthesis_row(method, kappa, config, system, cost):
    start = time.perf_counter()
    try:
        if method == "smallgain":
            outcome = synth_smallgain(system, cost, config.rho, epsilon=config.epsilon)
            theta = None
            t = outcome.tau_squared if outcome.feasible else None
        else:
            outcome = synth_popov(
                system, cost, config.rho, config.theta_grid(), epsilon=config.epsilon
            )
            theta = outcome.theta if outcome.feasible else None
            t = None
        status = outcome.solver.status.value
        feasible = outcome.feasible
        bound = outcome.bound
        q = outcome.q if outcome.feasible else None
    except NotHurwitz as exc:
        print(f"qgcc: F not Hurwitz: {exc}", file=sys.stderr)
        outcome, theta, t, q = None, None, None, None
        status, feasible, bound = "not_hurwitz", False, math.inf
    wall = (time.perf_counter() - start) * 1e3
    row = {
        "method": f"{method}-synthesis",
        "kappa": kappa,
        "theta": theta,
        "feasible": feasible,
        "bound": bound,
        "q": q,
        "t": t,
        "solver_status": status,
        "wall_ms": wall,
    }
    return row, outcome


def _exit_for(row) -> int:
    if row["feasible"]:
        return EXIT_OK
    if row["solver_status"] == SolveStatus.NUMERICAL_FAILURE.value:
        return EXIT_SOLVER
    return EXIT_INFEASIBLE


def _single_method(config: RunConfig, override: str | None) -> str:
    method = override or config.method
    if method not in ("smallgain", "popov"):
        raise ConfigError(
            "this command needs a single method (smallgain or popov); "
            f"got {method!r}"
        )
    return method


def cmd_analyze(args) -> int:
    config = load_config(args.config)
    method = _single_method(config, args.method)
    system, _, kappa = build_system(config, method)
    cost = cost_matrix_for(config, system)
    row, _ = _analysis_row(method, _nan_none(kappa), config, system, cost)
    write_table(args.out or config.output, metadata_for(config, method), [row])
    return _exit_for(row)


def _controller_payload(outcome, method, kappa):
    payload = {
        "format": "qgcc-controller",
        "method": method,
        "n_modes": outcome.controller.n_modes,
        "block1": matrix_to_pairs(outcome.controller.block1),
        "block2": matrix_to_pairs(outcome.controller.block2),
        "q": outcome.q,
        "bound": outcome.bound,
    }
    if kappa is not None:
        payload["kappa"] = kappa
    if method == "smallgain":
        payload["tau_squared"] = outcome.tau_squared
    else:
        payload["theta"] = outcome.theta
    return payload


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def cmd_synthesize(args) -> int:
    config = load_config(args.config)
    method = _single_method(config, args.method)
    system, _, kappa = build_system(config, method)
    cost = cost_matrix_for(config, system)
    kappa = _nan_none(kappa)
    row, outcome = _synthesis_row(method, kappa, config, system, cost)
    out = args.out or config.output
    write_table(out, metadata_for(config, method), [row])
    if row["feasible"]:
        controller_path = args.controller_out
        if controller_path is None:
            controller_path = (
                os.path.splitext(out)[0] + ".controller.json"
                if out
                else "controller.json"
            )
        _write_json(controller_path, _controller_payload(outcome, method, kappa))
    return _exit_for(row)


def _load_controller(path: str) -> tuple[DoubledMatrix, float | None]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read controller {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != "qgcc-controller":
        raise ConfigError(f"{path} is not a qgcc controller file")
    try:
        controller = DoubledMatrix(
            pairs_to_matrix(data["block1"], "controller.block1"),
            pairs_to_matrix(data["block2"], "controller.block2"),
            MatrixKind.HERMITIAN,
        )
    except KeyError as exc:
        raise ConfigError(f"controller file missing key {exc}") from exc
    except QgccError as exc:
        raise ConfigError(f"controller file invalid: {exc}") from exc
    bound = data.get("bound")
    return controller, (float(bound) if bound is not None else None)


def cmd_verify(args) -> int:
    config = load_config(args.config)
    method = _single_method(config, args.method)
    system, extras, _ = build_system(config, method)
    cost = cost_matrix_for(config, system)
    samples = args.samples if args.samples is not None else config.samples
    seed = args.seed if args.seed is not None else config.seed

    controller = None
    bound = args.bound
    if args.controller:
        controller, file_bound = _load_controller(args.controller)
        if bound is None:
            bound = file_bound
    if bound is None:
        row, outcome = _analysis_row(method, None, config, system, cost)
        if not row["feasible"]:
            print("qgcc: no finite bound available to verify", file=sys.stderr)
            return EXIT_CONFIG
        bound = outcome.bound
    if not math.isfinite(bound):
        print("qgcc: no finite bound available to verify", file=sys.stderr)
        return EXIT_CONFIG

    report = verify_bound(
        system,
        controller,
        cost,
        config.rho,
        bound,
        num_samples=samples,
        seed=seed,
        extra_perturbations=extras,
    )
    payload = {
        "samples": report.samples,
        "violations": report.violations,
        "worst_margin": report.worst_margin,
        "unstable_samples": report.unstable_samples,
        "seed": report.seed,
        "bound": bound,
    }
    _write_json(args.out, payload)
    if report.violations > 0:
        print(
            f"qgcc: bound violated on {report.violations} samples "
            "(implementation bug or wrong bound)",
            file=sys.stderr,
        )
        return EXIT_UNSOUND
    if report.unstable_samples > 0:
        print(
            f"qgcc: {report.unstable_samples} sampled closed loops unstable; "
            "a finite bound cannot cover them",
            file=sys.stderr,
        )
        return EXIT_UNSOUND
    return EXIT_OK


def cmd_realize(args) -> int:
    if not args.ktilde > 0:
        print("qgcc: --ktilde must be strictly positive", file=sys.stderr)
        return EXIT_CONFIG
    controller, _ = _load_controller(args.controller)
    try:
        realization = solve_squeezer(controller, args.ktilde)
    except NoControllerNeeded as exc:
        print(f"qgcc: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Unrealizable as exc:
        print(f"qgcc: unrealizable: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Unsupported as exc:
        print(f"qgcc: unsupported: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    payload = {
        "format": "qgcc-realization",
        "r": realization.r,
        "alpha": realization.alpha,
        "beta": realization.beta,
        "kappa_tilde": realization.kappa_tilde,
        "matrix": matrix_to_pairs(realization.matrix),
        "residual": realization_residual(realization, controller),
    }
    _write_json(args.out, payload)
    return EXIT_OK


def _sweep_methods(config: RunConfig, override: str | None) -> list[str]:
    method = override or config.method
    if method == "both":
        return ["smallgain", "popov"]
    if method in ("smallgain", "popov"):
        return [method]
    raise ConfigError(f"unknown method {method!r}")


def _sweep_point(config, methods, parameter, value):
    rows = []
    for method in methods:
        if parameter == "kappa":
            system, _, kappa = build_system(config, method, kappa_override=value)
            point_config = config
        else:
            system, _, kappa = build_system(config, method)
            point_config = _with_singleton_theta(config, value)
        cost = cost_matrix_for(config, system)
        kappa = _nan_none(kappa)
        arow, _ = _analysis_row(method, kappa, point_config, system, cost)
        srow, _ = _synthesis_row(method, kappa, point_config, system, cost)
        if parameter == "theta":
            arow["theta"] = value
            srow["theta"] = value
        rows.append(arow)
        rows.append(srow)
    return rows


def _with_singleton_theta(config: RunConfig, theta: float) -> RunConfig:
    return RunConfig(
        system=config.system,
        method=config.method,
        r_spec=config.r_spec,
        rho=config.rho,
        theta_from=theta,
        theta_to=theta + 1.0,
        theta_step=2.0,
        epsilon=config.epsilon,
        samples=config.samples,
        seed=config.seed,
        output=config.output,
    )


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    methods = _sweep_methods(config, args.method)
    parameter = args.param
    if parameter == "theta":
        methods = [m for m in methods if m == "popov"]
        if not methods:
            raise ConfigError("theta sweeps apply to the popov method only")
        start = args.sweep_from if args.sweep_from is not None else config.theta_from
        stop = args.sweep_to if args.sweep_to is not None else config.theta_to
        step = args.sweep_step if args.sweep_step is not None else config.theta_step
    else:
        if config.system.get("fixture") != "dpa":
            raise ConfigError("kappa sweeps require the dpa fixture")
        if args.sweep_from is None or args.sweep_to is None or args.sweep_step is None:
            raise ConfigError("kappa sweeps need --from, --to and --step")
        start, stop, step = args.sweep_from, args.sweep_to, args.sweep_step
    grid = make_grid(start, stop, step)

    workers = os.environ.get("QGCC_THREADS")
    max_workers = int(workers) if workers else (os.cpu_count() or 1)
    max_workers = max(1, min(max_workers, len(grid)))
    results: list[list[dict]] = [[] for _ in grid]
    if max_workers == 1:
        for index, value in enumerate(grid):
            results[index] = _sweep_point(config, methods, parameter, value)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = {
                pool.submit(_sweep_point, config, methods, parameter, value): index
                for index, value in enumerate(grid)
            }
            for future in concurrent.futures.as_completed(futures):
                results[futures[future]] = future.result()

    rows = [row for point in results for row in point]
    metadata = metadata_for(config, "+".join(methods))
    metadata.update({"sweep_param": parameter, "sweep_from": start,
                     "sweep_to": stop, "sweep_step": step})
    out = args.out or config.output
    write_table(out, metadata, rows)
    if args.plot:
        figure_path = args.plot if isinstance(args.plot, str) else None
        if figure_path is None:
            figure_path = (os.path.splitext(out)[0] + ".png") if out else "sweep.png"
        render_sweep_figure(rows, parameter, figure_path)
    return EXIT_OK


def _nan_none(value):
    if value is None:
        return None
    return None if isinstance(value, float) and math.isnan(value) else value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgcc",
        description=(
            "Guaranteed-cost analysis, coherent controller synthesis, bound "
            "verification and squeezer realization for uncertain linear "
            "quantum systems."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_method=True):
        p.add_argument("--config", required=True, help="JSON run configuration")
        if with_method:
            p.add_argument("--method", choices=["smallgain", "popov"],
                           help="override the configured method")
        p.add_argument("--out", help="output path (default: config output or stdout)")

    p = sub.add_parser("analyze", help="performance analysis of the uncertain plant")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synthesize", help="guaranteed-cost controller synthesis")
    common(p)
    p.add_argument("--controller-out", help="controller JSON path")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("sweep", help="parameter sweeps over kappa or theta")
    p.add_argument("--config", required=True)
    p.add_argument("--method", choices=["smallgain", "popov", "both"],
                   help="override the configured method")
    p.add_argument("--param", choices=["kappa", "theta"], required=True)
    p.add_argument("--from", dest="sweep_from", type=float)
    p.add_argument("--to", dest="sweep_to", type=float)
    p.add_argument("--step", dest="sweep_step", type=float)
    p.add_argument("--out")
    p.add_argument("--plot", nargs="?", const=True, default=False,
                   help="render the sweep to a figure (optional path)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check a bound against sampled perturbations")
    common(p)
    p.add_argument("--controller", help="controller JSON from synthesize")
    p.add_argument("--bound", type=float, help="override the bound under test")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("realize", help="realize a controller as a static squeezer")
    p.add_argument("--controller", required=True, help="controller JSON")
    p.add_argument("--ktilde", type=float, required=True,
                   help="squeezer coupling strength")
    p.add_argument("--out")
    p.set_defaults(func=cmd_realize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"qgcc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Unsupported as exc:
        print(f"qgcc: unsupported: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QgccError as exc:
        print(f"qgcc: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
