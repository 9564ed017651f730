"""Named runnable scenarios and their exporters.

The registry holds the four SL parameter studies (a swept over 2.35, 2,
1.5, 1.35 with b = 3/10, c = 27 under the default gauge) and the two fixed
Lorenz arrangements.  Running a scenario produces one trajectory CSV, one
JSON analysis report, and four SVG views (an isometric 3-D projection plus
the x-y, x-z, y-z planes).  Sweeps rerun a base scenario across a parameter
list into per-value subdirectories with a summary; comparisons overlay up
to several scenarios in seven shared views (the four geometry views plus a
time series per component).

Everything written here is deterministic byte for byte; see `trajio` and
`svgplot` for the formats.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .analysis import (
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
    make_field,
)
from .integrate import (
    IntegratorConfig,
    Method,
    SamplingMode,
    SamplingPlan,
    SLMode,
    Trajectory,
    integrate_adaptive,
    integrate_fixed,
    integrate_sl,
)
from .svgplot import COMPARE_COLORS, Curve, export_svg, isometric_projection
from .timegauge import Gauge, scale_time
from .trajio import format_float, write_trajectory_csv

__all__ = [
    "Scenario",
    "SweepSpec",
    "ScenarioNotFound",
    "builtin_scenarios",
    "scenario_registry",
    "run_trajectory",
    "scenario_report",
    "run_scenario",
    "run_sweep",
    "run_compare",
]

# Renormalization geometry for report-level Lyapunov estimates: the horizon
# is the scenario's own span (in its analysis time variable), split into 500
# intervals, comfortably above the 100-interval floor.
LYAPUNOV_INTERVALS = 500

SWEEPABLE = ("a", "b", "c", "D", "mu")


class ScenarioNotFound(KeyError):
    pass


@dataclass(frozen=True)
class Scenario:
    """A complete run description: system, coefficients, gauge (for SL),
    start state, ordinary-time span, integrator, and sampling."""

    name: str
    kind: SystemKind
    params: SystemParams
    gauge: Gauge | None
    x0: State3
    span: tuple[float, float]
    config: IntegratorConfig = dataclasses.field(default_factory=IntegratorConfig)
    plan: SamplingPlan = dataclasses.field(default_factory=SamplingPlan)
    sl_mode: SLMode = SLMode.SCALED_S

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("scenario needs a non-empty name")
        t0, t1 = (float(self.span[0]), float(self.span[1]))
        if not (math.isfinite(t0) and math.isfinite(t1) and t1 > t0):
            raise ValueError(f"scenario {self.name!r}: span must be finite with t1 > t0")
        object.__setattr__(self, "span", (t0, t1))
        if self.kind is SystemKind.SL:
            if self.gauge is None:
                raise ValueError(f"scenario {self.name!r}: SL runs need a gauge")
            if t0 <= 0.0:
                raise ValueError(f"scenario {self.name!r}: SL spans must start at t0 > 0")
        elif self.gauge is not None:
            raise ValueError(f"scenario {self.name!r}: Lorenz runs take no gauge")
        if self.params.c <= 0.0:
            raise ValueError(f"scenario {self.name!r}: c must be positive, got {self.params.c!r}")


@dataclass(frozen=True)
class SweepSpec:
    """Rerun `base` with `parameter` set to each value in turn."""

    base: str
    parameter: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.parameter not in SWEEPABLE:
            raise ValueError(
                f"sweep parameter must be one of {SWEEPABLE}, got {self.parameter!r}"
            )
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("sweep needs at least one value")
        for v in vals:
            if not math.isfinite(v):
                raise ValueError(f"sweep values must be finite, got {v!r}")
        object.__setattr__(self, "values", vals)


_SL_B = 3.0 / 10.0
_SL_C = 27.0
_SL_SPAN = (0.1, 1e6)
_SL_X0 = State3(0.1, 0.1, 0.1)
_DEFAULT_GAUGE = Gauge(0.9, 2.0 / 3.0)
_LORENZ_SPAN = (0.0, 60.0)


def builtin_scenarios() -> list[Scenario]:
    """Fresh instances of the six built-in scenarios, in registry order."""
    sl_as = (("sl-a2.35", 47.0 / 20.0), ("sl-a2", 2.0), ("sl-a1.5", 1.5), ("sl-a1.35", 1.35))
    out = [
        Scenario(
            name=name,
            kind=SystemKind.SL,
            params=SystemParams(a, _SL_B, _SL_C),
            gauge=_DEFAULT_GAUGE,
            x0=_SL_X0,
            span=_SL_SPAN,
            plan=SamplingPlan(SamplingMode.GEOMETRIC),
        )
        for name, a in sl_as
    ]
    for name, kind in (
        ("lorenz-standard", SystemKind.LORENZ_STANDARD),
        ("lorenz-literal", SystemKind.LORENZ_LITERAL),
    ):
        out.append(
            Scenario(
                name=name,
                kind=kind,
                params=effective_params(kind),
                gauge=None,
                x0=_SL_X0,
                span=_LORENZ_SPAN,
                plan=SamplingPlan(SamplingMode.LINEAR),
            )
        )
    return out


def scenario_registry() -> dict[str, Scenario]:
    return {sc.name: sc for sc in builtin_scenarios()}


def lookup_scenario(name: str) -> Scenario:
    reg = scenario_registry()
    if name not in reg:
        known = ", ".join(sorted(reg))
        raise ScenarioNotFound(f"unknown scenario {name!r}; known: {known}")
    return reg[name]


def run_trajectory(scenario: Scenario, mode: SLMode | None = None) -> Trajectory:
    """Integrate a scenario; `mode` overrides the SL integration route."""
    if scenario.kind is SystemKind.SL:
        assert scenario.gauge is not None
        return integrate_sl(
            scenario.params,
            scenario.gauge,
            scenario.span,
            scenario.x0,
            scenario.config,
            scenario.plan,
            mode if mode is not None else scenario.sl_mode,
        )
    rhs = make_field(scenario.kind, scenario.params)
    if scenario.config.method is Method.RK4_FIXED:
        return integrate_fixed(
            rhs, scenario.span[0], scenario.span[1], scenario.x0, scenario.plan.sample_count - 1
        )
    return integrate_adaptive(
        rhs, scenario.span[0], scenario.span[1], scenario.x0, scenario.config, scenario.plan
    )


def _analysis_horizon(scenario: Scenario) -> float:
    t0, t1 = scenario.span
    if scenario.kind is SystemKind.SL:
        assert scenario.gauge is not None
        return scale_time(scenario.gauge, t1) - scale_time(scenario.gauge, t0)
    return t1 - t0


def _complex_pairs(values: Iterable[complex]) -> list[list[float]]:
    return [[v.real, v.imag] for v in values]


def scenario_report(scenario: Scenario, trajectory: Trajectory) -> dict:
    """Assemble the JSON-ready analysis document for a finished run."""
    eff = effective_params(scenario.kind, scenario.params)
    eq_entries = []
    for eq in equilibria(eff):
        spec = eigenvalues_3x3(jacobian(scenario.kind, scenario.params, eq.point))
        eq_entries.append(
            {
                "point": [eq.point.x, eq.point.y, eq.point.z],
                "residual": eq.residual_norm,
                "note": eq.multiplicity_note,
                "spectrum": _complex_pairs(spec.eigenvalues),
                "class": classify_spectrum(spec),
            }
        )

    horizon = _analysis_horizon(scenario)
    est = max_lyapunov(
        scenario.kind,
        scenario.params,
        scenario.gauge,
        scenario.x0,
        horizon,
        horizon / LYAPUNOV_INTERVALS,
    )
    conj = conjecture_report(eff)
    meta = trajectory.meta
    gauge_doc = None
    if scenario.gauge is not None:
        gauge_doc = {"mu": scenario.gauge.mu, "D": scenario.gauge.D, "lambda": scenario.gauge.lam}
    return {
        "scenario": scenario.name,
        "system": scenario.kind.value,
        "params": {"a": eff.a, "b": eff.b, "c": eff.c},
        "gauge": gauge_doc,
        "x0": [scenario.x0.x, scenario.x0.y, scenario.x0.z],
        "span": [scenario.span[0], scenario.span[1]],
        "equilibria": eq_entries,
        "lyapunov": {
            "lambda_max": est.lambda_max,
            "horizon": est.horizon,
            "renorm_interval": est.renorm_interval,
            "sample_stddev": est.sample_stddev,
            "time_variable": est.time_variable,
        },
        "conjecture": {
            "verdict": conj.verdict,
            "equilibrium_count": len(conj.equilibria_found),
            "note": conj.note,
        },
        "meta": {
            "steps_taken": meta.steps_taken,
            "steps_rejected": meta.steps_rejected,
            "method": meta.method,
            "abs_tol": meta.abs_tol,
            "rel_tol": meta.rel_tol,
            "mode": meta.mode,
        },
    }


def _write_json(doc: dict, path: Path) -> Path:
    path.write_bytes((json.dumps(doc, indent=2) + "\n").encode("ascii"))
    return path


def _geometry_views(trajectory: Trajectory, label: str, color: str) -> list[tuple[str, Curve, str, str]]:
    """The four standard views as (stem, curve, x_label, y_label)."""
    st = trajectory.states
    u, v = isometric_projection(st)
    return [
        ("traj3d", Curve(label, u, v, color), "u (iso)", "v (iso)"),
        ("xy", Curve(label, st[:, 0], st[:, 1], color), "x", "y"),
        ("xz", Curve(label, st[:, 0], st[:, 2], color), "x", "z"),
        ("yz", Curve(label, st[:, 1], st[:, 2], color), "y", "z"),
    ]


def _execute(scenario: Scenario, out_dir: Path, mode: SLMode | None = None) -> tuple[list[Path], Trajectory, dict]:
    out_dir.mkdir(parents=True, exist_ok=True)
    traj = run_trajectory(scenario, mode)
    report = scenario_report(scenario, traj)
    written: list[Path] = []
    try:
        written.append(write_trajectory_csv(traj, out_dir / f"{scenario.name}.csv"))
        written.append(_write_json(report, out_dir / f"{scenario.name}-analysis.json"))
        for stem, curve, xl, yl in _geometry_views(traj, "", COMPARE_COLORS[2]):
            written.append(
                export_svg(
                    [curve],
                    out_dir / f"{scenario.name}-{stem}.svg",
                    x_label=xl,
                    y_label=yl,
                    title=f"{scenario.name} {stem}",
                )
            )
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return written, traj, report


def run_scenario(
    scenario: Scenario | str, output_dir: str | Path, mode: SLMode | None = None
) -> list[Path]:
    """Run one scenario and write CSV + JSON + four SVG views into
    `output_dir`.  Returns the written paths.  Accepts a registry name or a
    Scenario instance; `mode` optionally overrides the SL route."""
    sc = lookup_scenario(scenario) if isinstance(scenario, str) else scenario
    paths, _, _ = _execute(sc, Path(output_dir), mode)
    return paths


def _sweep_member(base: Scenario, parameter: str, value: float) -> Scenario:
    tag = f"{parameter}{format_float(value)}"
    name = f"{base.name}-{tag}"
    if parameter in ("a", "b", "c"):
        if base.kind is not SystemKind.SL:
            raise ValueError(f"cannot sweep {parameter!r}: {base.name!r} has fixed coefficients")
        params = dataclasses.replace(base.params, **{parameter: value})
        return dataclasses.replace(base, name=name, params=params)
    if base.gauge is None:
        raise ValueError(f"cannot sweep {parameter!r}: {base.name!r} has no gauge")
    gauge = Gauge(value, base.gauge.D) if parameter == "mu" else Gauge(base.gauge.mu, value)
    return dataclasses.replace(base, name=name, gauge=gauge)


def run_sweep(spec: SweepSpec, output_dir: str | Path) -> dict:
    """Run a parameter sweep into per-value subdirectories.

    Each member lands in `<parameter>-<value>/` with the full scenario
    artifact set; `summary.json` collects per-value rows (final state,
    lambda_max, origin classification) in input order.  A member that fails
    to build or run contributes an error row instead of aborting the rest.
    """
    base = lookup_scenario(spec.base)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for value in spec.values:
        subdir = out / f"{spec.parameter}-{format_float(value)}"
        row: dict = {"value": value, "directory": subdir.name}
        try:
            member = _sweep_member(base, spec.parameter, value)
            _, traj, report = _execute(member, subdir)
        except Exception as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        else:
            row["scenario"] = member.name
            row["gauge"] = report["gauge"]
            row["final_state"] = [float(v) for v in traj.states[-1]]
            row["lambda_max"] = report["lyapunov"]["lambda_max"]
            row["origin_class"] = report["equilibria"][0]["class"]
        rows.append(row)
    summary = {
        "base": spec.base,
        "parameter": spec.parameter,
        "values": list(spec.values),
        "results": rows,
    }
    _write_json(summary, out / "summary.json")
    return summary


def _series_axis(scenario: Scenario, traj: Trajectory, time_axis: str) -> tuple[np.ndarray, str]:
    if scenario.kind is not SystemKind.SL:
        return traj.t, "t"
    if time_axis == "t":
        return np.log10(traj.t), "log10(t)"
    return traj.s, "s"


def run_compare(
    names: list[str] | tuple[str, ...], output_dir: str | Path, time_axis: str = "s"
) -> list[Path]:
    """Overlay several scenarios in seven shared views.

    Four geometry views (isometric, x-y, x-z, y-z) plus one time series per
    component.  Gauged scenarios plot their series against scaled time by
    default; `time_axis="t"` switches them to log10 of ordinary time, which
    is the only readable choice across a six-decade span.  Colors follow
    the documented overlay order (green, red, blue, then extras) and the
    legend lists scenario names in argument order.
    """
    if len(names) < 2:
        raise ValueError("comparison needs at least two scenario names")
    if len(names) > len(COMPARE_COLORS):
        raise ValueError(f"comparison supports at most {len(COMPARE_COLORS)} scenarios")
    if time_axis not in ("s", "t"):
        raise ValueError(f"time_axis must be 's' or 't', got {time_axis!r}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    runs = []
    for i, name in enumerate(names):
        sc = lookup_scenario(name)
        traj = run_trajectory(sc)
        runs.append((sc, traj, COMPARE_COLORS[i]))

    geom: dict[str, list[Curve]] = {"traj3d": [], "xy": [], "xz": [], "yz": []}
    geom_labels = {
        "traj3d": ("u (iso)", "v (iso)"),
        "xy": ("x", "y"),
        "xz": ("x", "z"),
        "yz": ("y", "z"),
    }
    for sc, traj, color in runs:
        for stem, curve, _, _ in _geometry_views(traj, sc.name, color):
            geom[stem].append(curve)

    written: list[Path] = []
    try:
        for stem, curves in geom.items():
            xl, yl = geom_labels[stem]
            written.append(
                export_svg(
                    curves,
                    out / f"compare-{stem}.svg",
                    x_label=xl,
                    y_label=yl,
                    title=f"compare {stem}",
                )
            )
        for ci, comp in enumerate("xyz"):
            curves = []
            axis_labels: list[str] = []
            for sc, traj, color in runs:
                axis, label = _series_axis(sc, traj, time_axis)
                if label not in axis_labels:
                    axis_labels.append(label)
                curves.append(Curve(sc.name, axis, traj.states[:, ci], color))
            written.append(
                export_svg(
                    curves,
                    out / f"compare-series-{comp}.svg",
                    x_label=" / ".join(axis_labels),
                    y_label=comp,
                    title=f"compare {comp}(time)",
                )
            )
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return written
