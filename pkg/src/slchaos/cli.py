"""Command-line interface.

Exit codes: 0 success, 1 usage error (bad flags, unknown scenario or
malformed values), 2 runtime failure (integration failure, Newton failure,
I/O trouble).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .analysis import (
    NewtonError,
    classify_spectrum,
    conjecture_report,
    eigenvalues_3x3,
    max_lyapunov,
)
from .dynamics import (
    State3,
    SystemKind,
    SystemParams,
    effective_params,
    equilibria,
    jacobian,
)
from .integrate import (
    IntegrationError,
    IntegratorConfig,
    Method,
    SamplingMode,
    SamplingPlan,
    SLMode,
)
from .scenarios import (
    Scenario,
    ScenarioNotFound,
    SweepSpec,
    builtin_scenarios,
    lookup_scenario,
    run_compare,
    run_scenario,
    run_sweep,
)
from .svgplot import Curve, export_svg, isometric_projection
from .timegauge import Gauge
from .trajio import format_float, read_trajectory_csv

__all__ = ["cli_main", "main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", default="out", help="output directory (default: out)")
    sub.add_argument("--tol", type=float, default=None, help="absolute and relative tolerance")
    sub.add_argument("--samples", type=int, default=None, help="sample count override")
    sub.add_argument("--method", choices=[m.value for m in Method], default=None)
    sub.add_argument("--mode", choices=[m.value for m in SLMode], default=None)


def _add_system_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--system", choices=[k.value for k in SystemKind], default=None)
    sub.add_argument("--a", type=float, default=None)
    sub.add_argument("--b", type=float, default=3.0 / 10.0)
    sub.add_argument("--c", type=float, default=27.0)
    sub.add_argument("--D", type=float, default=2.0 / 3.0)
    sub.add_argument("--mu", type=float, default=0.9)
    sub.add_argument("--x0", type=float, default=0.1)
    sub.add_argument("--y0", type=float, default=0.1)
    sub.add_argument("--z0", type=float, default=0.1)
    sub.add_argument("--t0", type=float, default=None)
    sub.add_argument("--t1", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slchaos", description="scaling-law chaotic system toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    p_list = subs.add_parser("list", help="list built-in scenarios")
    p_list.set_defaults(func=_cmd_list)

    p_sim = subs.add_parser("simulate", help="run a scenario and write its artifacts")
    _add_common(p_sim)
    p_sim.add_argument("--scenario", default=None, help="registry name")
    _add_system_flags(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = subs.add_parser("sweep", help="rerun a scenario across parameter values")
    _add_common(p_sweep)
    p_sweep.add_argument("--scenario", required=True)
    p_sweep.add_argument("--param", required=True, choices=["a", "b", "c", "D", "mu"])
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cmp = subs.add_parser("compare", help="overlay several scenarios")
    _add_common(p_cmp)
    p_cmp.add_argument("scenarios", nargs="+", help="two or more registry names")
    p_cmp.add_argument("--axis", choices=["s", "t"], default="s", help="series time axis")
    p_cmp.set_defaults(func=_cmd_compare)

    p_fp = subs.add_parser("fixed-points", help="closed-form equilibria with classification")
    _add_system_flags(p_fp)
    p_fp.set_defaults(func=_cmd_fixed_points)

    p_ly = subs.add_parser("lyapunov", help="largest-exponent estimate")
    p_ly.add_argument("--scenario", default=None)
    _add_system_flags(p_ly)
    p_ly.add_argument("--horizon", type=float, default=1000.0)
    p_ly.add_argument("--renorm", type=float, default=None, help="default: horizon/500")
    p_ly.set_defaults(func=_cmd_lyapunov)

    p_plot = subs.add_parser("plot", help="render an SVG view from a trajectory CSV")
    p_plot.add_argument("--csv", required=True)
    p_plot.add_argument("--view", choices=["3d", "xy", "xz", "yz", "x", "y", "z"], default="3d")
    p_plot.add_argument("--out", default="out")
    p_plot.set_defaults(func=_cmd_plot)

    return parser


def _scenario_line(sc: Scenario) -> str:
    p = sc.params
    bits = [
        f"{sc.name}:",
        f"system={sc.kind.value}",
        f"a={format_float(p.a)}",
        f"b={format_float(p.b)}",
        f"c={format_float(p.c)}",
    ]
    if sc.gauge is not None:
        bits.append(f"D={format_float(sc.gauge.D)}")
        bits.append(f"mu={format_float(sc.gauge.mu)}")
        bits.append(f"lambda={format_float(sc.gauge.lam)}")
    bits.append(f"x0=({format_float(sc.x0.x)},{format_float(sc.x0.y)},{format_float(sc.x0.z)})")
    bits.append(f"span=[{format_float(sc.span[0])},{format_float(sc.span[1])}]")
    return " ".join(bits)


def _cmd_list(ns: argparse.Namespace) -> int:
    for sc in builtin_scenarios():
        print(_scenario_line(sc))
    return 0


def _custom_params(ns: argparse.Namespace) -> tuple[SystemKind, SystemParams]:
    if ns.system is None:
        raise _UsageError("give --scenario or --system")
    kind = SystemKind(ns.system)
    if kind is SystemKind.SL:
        if ns.a is None:
            raise _UsageError("--system sl needs --a (and optionally --b, --c)")
        return kind, SystemParams(ns.a, ns.b, ns.c)
    return kind, effective_params(kind)


def _custom_scenario(ns: argparse.Namespace) -> Scenario:
    kind, params = _custom_params(ns)
    if kind is SystemKind.SL:
        gauge = Gauge(ns.mu, ns.D)
        span = (
            ns.t0 if ns.t0 is not None else 0.1,
            ns.t1 if ns.t1 is not None else 1e6,
        )
        plan = SamplingPlan(SamplingMode.GEOMETRIC)
        name = f"custom-sl-a{format_float(params.a)}"
    else:
        gauge = None
        span = (
            ns.t0 if ns.t0 is not None else 0.0,
            ns.t1 if ns.t1 is not None else 60.0,
        )
        plan = SamplingPlan(SamplingMode.LINEAR)
        name = f"custom-{kind.value}"
    return Scenario(
        name=name,
        kind=kind,
        params=params,
        gauge=gauge,
        x0=State3(ns.x0, ns.y0, ns.z0),
        span=span,
        plan=plan,
    )


def _apply_overrides(sc: Scenario, ns: argparse.Namespace) -> Scenario:
    config = sc.config
    plan = sc.plan
    if ns.tol is not None:
        config = dataclasses.replace(config, abs_tol=ns.tol, rel_tol=ns.tol)
    if ns.method is not None:
        config = dataclasses.replace(config, method=Method(ns.method))
    if ns.samples is not None:
        plan = dataclasses.replace(plan, sample_count=ns.samples)
    return dataclasses.replace(sc, config=config, plan=plan)


def _cmd_simulate(ns: argparse.Namespace) -> int:
    if ns.scenario is not None:
        sc = lookup_scenario(ns.scenario)
    else:
        sc = _custom_scenario(ns)
    sc = _apply_overrides(sc, ns)
    mode = SLMode(ns.mode) if ns.mode is not None else None
    paths = run_scenario(sc, ns.out, mode)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_sweep(ns: argparse.Namespace) -> int:
    try:
        values = tuple(float(v) for v in ns.values.split(","))
    except ValueError:
        raise _UsageError(f"--values must be comma-separated numbers, got {ns.values!r}")
    spec = SweepSpec(ns.scenario, ns.param, values)
    summary = run_sweep(spec, ns.out)
    failures = [r for r in summary["results"] if "error" in r]
    for row in summary["results"]:
        tag = row.get("error", "ok")
        print(f"{summary['parameter']}={format_float(row['value'])}: {tag}")
    print(f"wrote {Path(ns.out) / 'summary.json'}")
    return 0 if not failures else 2


def _cmd_compare(ns: argparse.Namespace) -> int:
    paths = run_compare(tuple(ns.scenarios), ns.out, ns.axis)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_fixed_points(ns: argparse.Namespace) -> int:
    kind, params = _custom_params(ns)
    entries = []
    for eq in equilibria(params):
        spec = eigenvalues_3x3(jacobian(kind, params, eq.point))
        entries.append(
            {
                "point": [eq.point.x, eq.point.y, eq.point.z],
                "residual": eq.residual_norm,
                "note": eq.multiplicity_note,
                "spectrum": [[v.real, v.imag] for v in spec.eigenvalues],
                "class": classify_spectrum(spec),
            }
        )
    conj = conjecture_report(params)
    doc = {
        "system": kind.value,
        "params": {"a": params.a, "b": params.b, "c": params.c},
        "equilibria": entries,
        "conjecture": {
            "verdict": conj.verdict,
            "equilibrium_count": len(conj.equilibria_found),
            "note": conj.note,
        },
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_lyapunov(ns: argparse.Namespace) -> int:
    if ns.scenario is not None:
        sc = lookup_scenario(ns.scenario)
        kind, params, gauge, x0 = sc.kind, sc.params, sc.gauge, sc.x0
    else:
        kind, params = _custom_params(ns)
        gauge = Gauge(ns.mu, ns.D) if kind is SystemKind.SL else None
        x0 = State3(ns.x0, ns.y0, ns.z0)
    renorm = ns.renorm if ns.renorm is not None else ns.horizon / 500.0
    est = max_lyapunov(kind, params, gauge, x0, ns.horizon, renorm)
    doc = {
        "system": kind.value,
        "lambda_max": est.lambda_max,
        "horizon": est.horizon,
        "renorm_interval": est.renorm_interval,
        "sample_stddev": est.sample_stddev,
        "time_variable": est.time_variable,
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_plot(ns: argparse.Namespace) -> int:
    traj = read_trajectory_csv(ns.csv)
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(ns.csv).stem
    st = traj.states
    if ns.view == "3d":
        u, v = isometric_projection(st)
        curve, xl, yl = Curve("", u, v), "u (iso)", "v (iso)"
    elif ns.view in ("xy", "xz", "yz"):
        cols = {"x": 0, "y": 1, "z": 2}
        xi, yi = cols[ns.view[0]], cols[ns.view[1]]
        curve, xl, yl = Curve("", st[:, xi], st[:, yi]), ns.view[0], ns.view[1]
    else:
        ci = {"x": 0, "y": 1, "z": 2}[ns.view]
        curve, xl, yl = Curve("", traj.s, st[:, ci]), "s", ns.view
    path = export_svg([curve], out / f"{stem}-{ns.view}.svg", x_label=xl, y_label=yl)
    print(f"wrote {path}")
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse help actions exit directly; mirror their code.
        return int(exc.code) if exc.code else 0
    try:
        return ns.func(ns)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ScenarioNotFound, ValueError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"usage error: {msg}", file=sys.stderr)
        return 1
    except (IntegrationError, NewtonError, ArithmeticError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
