"""Command-line interface.

Subcommands: ``plan`` (leader trajectory CSV), ``graph`` (consensus
matrices plus spectrum report), ``check`` (schedule safety report),
``simulate`` (full run bundle), ``validate`` (recompute metrics from an
existing bundle). Exit codes: 0 success, 1 validation failure, 2 usage
or parse error.

The simulator is deterministic; ``--seed`` is reserved and rejected so
nobody assumes stochasticity. ``AFFINESWARM_OUT`` sets the default
output directory root for ``simulate``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bundle import (
    dumps_json,
    emit_bundle,
    matrices_document,
    plan_csv_text,
    read_manifest,
    read_trace,
    safety_document,
)
from .errors import AffineSwarmError, ConfigError, SafetyError, ScenarioError
from .formation import (
    build_matrices,
    compute_alpha,
    compute_follower_weights,
    min_reference_distance,
    verify_spectrum,
)
from .metrics import validate_run
from .phases import check_schedule_safety, leader_trajectory
from .scenario import Scenario, load_scenario, parse_scenario
from .simulation import SimParams, run_simulation
from .transform import min_scaling_bound

ENV_OUT = "AFFINESWARM_OUT"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affineswarm",
        description="Decentralized affine-transformation coordination toolkit.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--seed",
        default=None,
        help="reserved; the simulator is deterministic and rejects this flag",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="write leader desired-trajectory CSV")
    p_plan.add_argument("scenario", help="scenario file (JSON)")
    p_plan.add_argument("--out", default=None, help="CSV path (default stdout)")

    p_graph = sub.add_parser(
        "graph", help="emit consensus matrices and the spectrum report as JSON"
    )
    p_graph.add_argument("scenario")
    p_graph.add_argument("--out", default=None, help="JSON path (default stdout)")

    p_check = sub.add_parser("check", help="check the schedule against the strain bound")
    p_check.add_argument("scenario")
    p_check.add_argument("--out", default=None, help="JSON path (default stdout)")

    p_sim = sub.add_parser("simulate", help="run the full simulation and emit a bundle")
    p_sim.add_argument("scenario", nargs="?", default=None)
    p_sim.add_argument("--scenario", dest="scenario_flag", default=None,
                       help="alternative to the positional scenario path")
    p_sim.add_argument("--out", default=None, help="bundle output directory")
    p_sim.add_argument("--dt", type=float, default=None)
    p_sim.add_argument("--control-rate", type=float, default=None)
    p_sim.add_argument("--kp", type=float, default=None)
    p_sim.add_argument("--kd", type=float, default=None)
    p_sim.add_argument("--delay-ticks", type=int, default=None)
    p_sim.add_argument("--duration", type=float, default=None)
    p_sim.add_argument(
        "--skip-safety-check",
        action="store_true",
        help="run even when the schedule fails the strain precheck",
    )

    p_val = sub.add_parser("validate", help="recompute metrics from an existing bundle")
    p_val.add_argument("bundle", help="bundle directory written by simulate")
    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, newline="\n")


def _cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    traj = leader_trajectory(
        scenario.schedule,
        scenario.config,
        tick_rate=scenario.params.control_rate,
    )
    _emit(plan_csv_text(traj), args.out)
    return 0


def _graph_doc(scenario: Scenario):
    weights = compute_follower_weights(scenario.config)
    alpha = compute_alpha(scenario.config)
    matrices = build_matrices(scenario.config, weights, alpha)
    spectrum = verify_spectrum(matrices)
    return matrices, spectrum


def _cmd_graph(args) -> int:
    scenario = load_scenario(args.scenario)
    matrices, spectrum = _graph_doc(scenario)
    _emit(dumps_json(matrices_document(matrices, spectrum)), args.out)
    return 0 if spectrum.ok else 1


def _cmd_check(args) -> int:
    scenario = load_scenario(args.scenario)
    d_min = min_reference_distance(scenario.config)
    bound = min_scaling_bound(
        scenario.safety.delta_budget, scenario.safety.agent_radius, d_min
    )
    report = check_schedule_safety(
        scenario.schedule, bound, scenario.params.control_rate
    )
    _emit(dumps_json(safety_document(report, d_min=d_min)), args.out)
    return 0 if report.passed else 1


def _resolved_params(scenario: Scenario, args) -> SimParams:
    p = scenario.params
    return SimParams(
        dt=args.dt if args.dt is not None else p.dt,
        control_rate=args.control_rate if args.control_rate is not None else p.control_rate,
        kp=args.kp if args.kp is not None else p.kp,
        kd=args.kd if args.kd is not None else p.kd,
        duration=args.duration if args.duration is not None else p.duration,
        delay_ticks=args.delay_ticks if args.delay_ticks is not None else p.delay_ticks,
    )


def _cmd_simulate(args) -> int:
    if args.scenario and args.scenario_flag:
        print("error: pass the scenario positionally or via --scenario, not both",
              file=sys.stderr)
        return 2
    path = args.scenario or args.scenario_flag
    if path is None:
        print("error: a scenario file is required", file=sys.stderr)
        return 2
    scenario = load_scenario(path)
    params = _resolved_params(scenario, args)
    scenario = Scenario(
        name=scenario.name,
        config=scenario.config,
        schedule=scenario.schedule,
        params=params,
        safety=scenario.safety,
        corridor=scenario.corridor,
    )
    out_dir = args.out
    if out_dir is None:
        root = os.environ.get(ENV_OUT, "runs")
        out_dir = str(Path(root) / scenario.name)

    matrices, spectrum = _graph_doc(scenario)
    if not spectrum.ok:
        print(
            f"error: consensus matrices fail the spectrum check "
            f"(max real part {spectrum.max_real_part:.3e}, "
            f"H deviation {spectrum.h_deviation:.3e})",
            file=sys.stderr,
        )
        return 1
    bound = min_scaling_bound(
        scenario.safety.delta_budget,
        scenario.safety.agent_radius,
        min_reference_distance(scenario.config),
    )
    trace = run_simulation(
        scenario.config,
        matrices,
        scenario.schedule,
        params,
        safety_bound=bound,
        skip_safety_check=args.skip_safety_check,
    )
    metrics = validate_run(
        trace,
        scenario.config,
        scenario.schedule,
        scenario.safety.agent_radius,
        corridor=scenario.corridor,
        matrices=matrices,
    )
    bundle = emit_bundle(out_dir, scenario, trace, metrics, matrices, spectrum)
    print(f"bundle written to {bundle.out_dir}")
    print(dumps_json(metrics.to_dict()), end="")
    return 0


def _cmd_validate(args) -> int:
    manifest = read_manifest(args.bundle)
    scenario = parse_scenario(
        json.dumps(manifest["scenario"]), source=f"{args.bundle}/manifest.json"
    )
    trace = read_trace(args.bundle, manifest)
    corridor = scenario.corridor
    metrics = validate_run(
        trace,
        scenario.config,
        scenario.schedule,
        scenario.safety.agent_radius,
        corridor=corridor,
    )
    print(dumps_json(metrics.to_dict()), end="")
    ok = metrics.safety_pass and metrics.converged
    if corridor is not None and metrics.min_corridor_clearance is not None:
        ok = ok and metrics.min_corridor_clearance > 0.0
    return 0 if ok else 1


_COMMANDS = {
    "plan": _cmd_plan,
    "graph": _cmd_graph,
    "check": _cmd_check,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        print(
            "error: the simulation is deterministic; --seed is reserved and "
            "not accepted",
            file=sys.stderr,
        )
        return 2
    try:
        return _COMMANDS[args.command](args)
    except ScenarioError as exc:
        for line in exc.errors:
            print(f"error: {line}", file=sys.stderr)
        return 2
    except (ConfigError, SafetyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AffineSwarmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
