"""Stability and chaos diagnostics.

Eigenvalues of 3x3 Jacobians come from the characteristic cubic in closed
form (trigonometric branch for three real roots, Cardano otherwise) with one
Newton polish per root; no iterative eigensolver is involved, which keeps
the results bit-deterministic.  On top of that sit equilibrium
classification, Newton refinement of fixed points, a twin-trajectory
largest-Lyapunov estimator with periodic renormalization, a raw two-run
divergence probe, and a report for the fixed-point-existence property that
every parameter choice is expected to satisfy.

Gauged systems are analyzed in scaled time: under s = mu * t**(1 - D) the
system is autonomous, so exponents quoted per unit s are honest constants,
whereas per-unit-t rates would decay with the weight t**(-D).  Every
estimate records which time variable it is measured in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dynamics import (
    Equilibrium,
    State3,
    SystemKind,
    SystemParams,
    effective_params,
    equilibria,
    eval_sl_field,
    field_norm,
    jacobian,
    make_field,
)
from .integrate import rk4_step
from .timegauge import Gauge

__all__ = [
    "Spectrum3",
    "LyapunovEstimate",
    "SeparationSeries",
    "ConjectureReport",
    "NewtonError",
    "eigenvalues_3x3",
    "char_poly_residual",
    "classify_spectrum",
    "classify_equilibrium",
    "newton_fixed_point",
    "max_lyapunov",
    "lyapunov_from_field",
    "divergence_probe",
    "separation_slope",
    "conjecture_report",
]

# Real parts closer to zero than this are treated as marginal rather than
# guessed at; double-precision eigenvalues cannot support a sign claim there.
MARGINAL_REAL_PART = 1e-9


@dataclass(frozen=True)
class Spectrum3:
    """Eigenvalues of a 3x3 real matrix, sorted by descending real part,
    ties broken by descending imaginary part."""

    eigenvalues: tuple[complex, complex, complex]

    @property
    def real_parts(self) -> tuple[float, float, float]:
        e = self.eigenvalues
        return (e[0].real, e[1].real, e[2].real)


@dataclass(frozen=True)
class LyapunovEstimate:
    """Largest-exponent estimate with its averaging geometry.

    The horizon must cover at least 100 renormalization intervals; shorter
    runs produce numbers too noisy to report.
    """

    lambda_max: float
    horizon: float
    renorm_interval: float
    sample_stddev: float
    time_variable: str = "t"

    def __post_init__(self) -> None:
        if not (self.renorm_interval > 0.0 and math.isfinite(self.renorm_interval)):
            raise ValueError(f"renorm_interval must be positive, got {self.renorm_interval!r}")
        if self.horizon < 100.0 * self.renorm_interval:
            raise ValueError(
                f"horizon {self.horizon!r} covers fewer than 100 renormalization "
                f"intervals of {self.renorm_interval!r}"
            )
        if self.time_variable not in ("t", "s"):
            raise ValueError(f"time_variable must be 't' or 's', got {self.time_variable!r}")


@dataclass(frozen=True)
class SeparationSeries:
    """Twin-run separation ||x_a - x_b||_2 sampled along the run."""

    time: np.ndarray
    separation: np.ndarray
    delta0: float
    time_variable: str = "t"


@dataclass(frozen=True)
class ConjectureReport:
    """Outcome of checking that a parameter choice admits at least one
    fixed point.  The origin is a zero of the field for every (a, b, c), so
    the expected verdict is always 'satisfied'; the report exists to make
    that check explicit and to count the equilibria found."""

    params: SystemParams
    equilibria_found: tuple[Equilibrium, ...]
    verdict: str
    note: str


class NewtonError(RuntimeError):
    """Newton refinement failed: singular Jacobian, divergence, or no
    convergence within the iteration budget.  Carries the last iterate."""

    def __init__(self, message: str, last_point: tuple[float, float, float], residual: float):
        super().__init__(message)
        self.last_point = last_point
        self.residual = residual


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


def _cubic_roots(p: float, q: float, r: float) -> list[complex]:
    """Roots of lambda**3 + p*lambda**2 + q*lambda + r, via the depressed
    cubic u**3 + A*u + B with lambda = u - p/3."""
    shift = p / 3.0
    A = q - p * p / 3.0
    B = 2.0 * p**3 / 27.0 - p * q / 3.0 + r
    disc = 0.25 * B * B + A**3 / 27.0

    roots_u: list[complex]
    if disc > 0.0:
        # One real root.  Build it from the larger-magnitude cube-root term
        # and recover the other via the product identity to avoid
        # cancellation.
        sq = math.sqrt(disc)
        w1 = -0.5 * B + sq
        w2 = -0.5 * B - sq
        big = w1 if abs(w1) >= abs(w2) else w2
        T = math.copysign(abs(big) ** (1.0 / 3.0), big)
        u1 = T - A / (3.0 * T)
        half = -0.5 * u1
        im = 0.5 * math.sqrt(max(3.0 * u1 * u1 + 4.0 * A, 0.0))
        roots_u = [complex(u1, 0.0), complex(half, im), complex(half, -im)]
    elif disc < 0.0:
        # Three distinct real roots (requires A < 0).
        m = 2.0 * math.sqrt(-A / 3.0)
        arg = 3.0 * B / (A * m)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg) / 3.0
        roots_u = [
            complex(m * math.cos(theta - 2.0 * math.pi * k / 3.0), 0.0) for k in (0, 1, 2)
        ]
    else:
        if A == 0.0:
            roots_u = [complex(0.0, 0.0)] * 3
        else:
            alpha = math.copysign(abs(0.5 * B) ** (1.0 / 3.0), B)
            roots_u = [complex(-2.0 * alpha, 0.0), complex(alpha, 0.0), complex(alpha, 0.0)]

    return [u - shift for u in roots_u]


def char_poly_residual(matrix: np.ndarray, spectrum: Spectrum3) -> float:
    """max_i |p(lambda_i)| for the characteristic polynomial of `matrix`."""
    p, q, r = _char_poly_coeffs(np.asarray(matrix, dtype=float))
    worst = 0.0
    for lam in spectrum.eigenvalues:
        worst = max(worst, abs(((lam + p) * lam + q) * lam + r))
    return worst


def _char_poly_coeffs(m: np.ndarray) -> tuple[float, float, float]:
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (
        (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        + (m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0])
        + (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    )
    det = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    return (-tr, minors, -det)


def eigenvalues_3x3(matrix: np.ndarray | Sequence[Sequence[float]]) -> Spectrum3:
    """Closed-form spectrum of a real 3x3 matrix.

    Each root gets one Newton correction on the characteristic polynomial,
    applied only when it is a genuine contraction, which tightens simple
    roots without destabilizing near-multiple ones.
    """
    m = np.asarray(matrix, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")

    p, q, r = _char_poly_coeffs(m)
    roots = _cubic_roots(p, q, r)

    polished: list[complex] = []
    for lam in roots:
        val = ((lam + p) * lam + q) * lam + r
        der = (3.0 * lam + 2.0 * p) * lam + q
        if der != 0 and val != 0:
            step = val / der
            # Near a multiple root both val and der sit at rounding noise and
            # their quotient is garbage, so a step is kept only if it is small
            # and demonstrably reduces the residual.
            if abs(step) < 0.5 * (1.0 + abs(lam)):
                cand = lam - step
                cval = ((cand + p) * cand + q) * cand + r
                if abs(cval) < abs(val):
                    lam = cand
        polished.append(lam)

    polished.sort(key=lambda v: (-v.real, -v.imag))
    return Spectrum3((polished[0], polished[1], polished[2]))


def classify_spectrum(spectrum: Spectrum3, marginal_tol: float = MARGINAL_REAL_PART) -> str:
    """'stable node' / 'stable focus-node' / 'unstable' / 'saddle' /
    'marginal' from the sign pattern of the real parts."""
    res = spectrum.real_parts
    if any(abs(v) < marginal_tol for v in res):
        return "marginal"
    if all(v < 0.0 for v in res):
        if any(lam.imag != 0.0 for lam in spectrum.eigenvalues):
            return "stable focus-node"
        return "stable node"
    if all(v > 0.0 for v in res):
        return "unstable"
    return "saddle"


def classify_equilibrium(
    kind: SystemKind,
    params: SystemParams | None,
    point: State3 | Sequence[float],
    residual_tol: float = 1e-10,
) -> str:
    """Classify a fixed point by the Jacobian spectrum there.

    The point must actually be an equilibrium: classifying a generic point
    would silently produce nonsense, so the residual is checked first.
    """
    p = effective_params(kind, params)
    res = field_norm(p, point)
    if res > residual_tol:
        raise ValueError(
            f"point {tuple(point)!r} is not an equilibrium (residual {res:.3e} "
            f"> {residual_tol:.0e})"
        )
    return classify_spectrum(eigenvalues_3x3(jacobian(kind, params, point)))


# ---------------------------------------------------------------------------
# Newton refinement
# ---------------------------------------------------------------------------


def newton_fixed_point(
    kind: SystemKind,
    params: SystemParams | None,
    guess: State3 | Sequence[float],
    tol: float = 1e-12,
    max_iter: int = 50,
) -> Equilibrium:
    """Refine `guess` to a zero of the field with ||f|| <= tol.

    Full Newton steps on the exact Jacobian.  Raises NewtonError on a
    singular Jacobian, a non-finite iterate, or failure to reach the
    tolerance within `max_iter` iterations; the error carries the last
    iterate and its residual so callers can report where the search died.
    """
    p = effective_params(kind, params)
    pt = np.array([float(v) for v in guess], dtype=float)
    res = field_norm(p, pt)
    for _ in range(max_iter):
        if res <= tol:
            return Equilibrium(State3(pt[0], pt[1], pt[2]), res, "")
        jac = jacobian(kind, params, pt)
        fvec = np.asarray(list(eval_sl_field(p, pt)), dtype=float)
        try:
            delta = np.linalg.solve(jac, fvec)
        except np.linalg.LinAlgError as exc:
            raise NewtonError(
                f"singular Jacobian at {tuple(pt)!r}", tuple(pt), res
            ) from exc
        pt = pt - delta
        if not np.all(np.isfinite(pt)):
            raise NewtonError(
                f"iterate diverged to non-finite values from guess {tuple(guess)!r}",
                tuple(pt),
                math.inf,
            )
        res = field_norm(p, pt)
    if res <= tol:
        return Equilibrium(State3(pt[0], pt[1], pt[2]), res, "")
    raise NewtonError(
        f"no convergence to ||f|| <= {tol!r} within {max_iter} iterations "
        f"(last residual {res:.3e})",
        tuple(pt),
        res,
    )


# ---------------------------------------------------------------------------
# Lyapunov estimation
# ---------------------------------------------------------------------------


def _sl_autonomous_context(
    kind: SystemKind, params: SystemParams | None, gauge: Gauge | None
):
    """Field, time-variable label, and gauge handling shared by the
    trajectory-divergence estimators.  SL runs are measured in scaled time
    (where the system is autonomous); Lorenz runs in ordinary time."""
    if kind is SystemKind.SL:
        if gauge is None:
            raise ValueError("SL divergence analysis needs the gauge to label scaled time")
        return make_field(kind, params), "s"
    return make_field(kind, params), "t"


def lyapunov_from_field(
    rhs: Callable[[float, tuple[float, float, float]], tuple[float, float, float]],
    x0: Sequence[float],
    horizon: float,
    renorm_interval: float,
    *,
    offset: float = 1e-8,
    dt_target: float = 0.01,
    transient_fraction: float = 0.1,
    time_variable: str = "t",
) -> LyapunovEstimate:
    """Benettin-style largest exponent for an arbitrary autonomous field.

    Two copies run side by side, the second displaced by `offset` along x.
    After every `renorm_interval` the log growth of their separation is
    recorded and the twin is pulled back to distance `offset` along the
    current separation direction.  The first `transient_fraction` of the
    growth samples is discarded; the mean of the rest is the estimate and
    their standard deviation is reported as a quality signal.
    """
    if not (offset > 0.0 and math.isfinite(offset)):
        raise ValueError(f"offset must be positive, got {offset!r}")
    if not (renorm_interval > 0.0 and math.isfinite(renorm_interval)):
        raise ValueError(f"renorm_interval must be positive, got {renorm_interval!r}")
    if horizon < 100.0 * renorm_interval:
        raise ValueError(
            f"horizon {horizon!r} must cover at least 100 renormalization intervals"
        )

    n_intervals = int(round(horizon / renorm_interval))
    n_sub = max(1, math.ceil(renorm_interval / dt_target))
    dt = renorm_interval / n_sub

    rx, ry, rz = (float(v) for v in x0)
    ref = (rx, ry, rz)
    twin = (ref[0] + offset, ref[1], ref[2])
    rates: list[float] = []
    for i in range(n_intervals):
        base = i * renorm_interval
        for j in range(n_sub):
            tj = base + j * dt
            ref = rk4_step(rhs, tj, ref, dt)
            twin = rk4_step(rhs, tj, twin, dt)
        dx = twin[0] - ref[0]
        dy = twin[1] - ref[1]
        dz = twin[2] - ref[2]
        d = math.hypot(dx, dy, dz)
        if d == 0.0:
            # The twins collapsed onto each other below double resolution;
            # restart the displacement and skip the unusable sample.
            twin = (ref[0] + offset, ref[1], ref[2])
            continue
        rates.append(math.log(d / offset) / renorm_interval)
        f = offset / d
        twin = (ref[0] + dx * f, ref[1] + dy * f, ref[2] + dz * f)

    discard = int(len(rates) * transient_fraction)
    tail = rates[discard:]
    if not tail:
        raise ValueError("no growth samples survived the transient discard")
    lam = float(np.mean(tail))
    stddev = float(np.std(tail))
    return LyapunovEstimate(lam, float(horizon), float(renorm_interval), stddev, time_variable)


def max_lyapunov(
    kind: SystemKind,
    params: SystemParams | None,
    gauge: Gauge | None,
    x0: State3 | Sequence[float],
    horizon: float,
    renorm_interval: float,
    *,
    offset: float = 1e-8,
    dt_target: float = 0.01,
    transient_fraction: float = 0.1,
) -> LyapunovEstimate:
    """Largest Lyapunov exponent of a system, measured in its natural time
    variable: scaled time s for the gauged SL system, ordinary t otherwise."""
    rhs, tvar = _sl_autonomous_context(kind, params, gauge)
    return lyapunov_from_field(
        rhs,
        tuple(float(v) for v in x0),
        horizon,
        renorm_interval,
        offset=offset,
        dt_target=dt_target,
        transient_fraction=transient_fraction,
        time_variable=tvar,
    )


def divergence_probe(
    kind: SystemKind,
    params: SystemParams | None,
    gauge: Gauge | None,
    x0: State3 | Sequence[float],
    delta0: float,
    horizon: float,
    *,
    dt_target: float = 0.01,
    sample_interval: float | None = None,
) -> SeparationSeries:
    """Raw separation of two runs started `delta0` apart along x.

    No renormalization: this is the plain picture of how fast nearby states
    drift apart (or together), sampled every `sample_interval` time units
    (default horizon/400) in the same time variable max_lyapunov uses.
    """
    if not (delta0 > 0.0 and math.isfinite(delta0)):
        raise ValueError(f"delta0 must be positive, got {delta0!r}")
    if not (horizon > 0.0 and math.isfinite(horizon)):
        raise ValueError(f"horizon must be positive, got {horizon!r}")
    rhs, tvar = _sl_autonomous_context(kind, params, gauge)

    if sample_interval is None:
        sample_interval = horizon / 400.0
    n_samples = max(1, int(round(horizon / sample_interval)))
    n_sub = max(1, math.ceil(sample_interval / dt_target))
    dt = sample_interval / n_sub

    ax, ay, az = (float(v) for v in x0)
    a = (ax, ay, az)
    b = (a[0] + delta0, a[1], a[2])
    times = [0.0]
    seps = [delta0]
    for i in range(n_samples):
        base = i * sample_interval
        for j in range(n_sub):
            tj = base + j * dt
            a = rk4_step(rhs, tj, a, dt)
            b = rk4_step(rhs, tj, b, dt)
        times.append((i + 1) * sample_interval)
        seps.append(math.hypot(b[0] - a[0], b[1] - a[1], b[2] - a[2]))
    return SeparationSeries(np.asarray(times), np.asarray(seps), delta0, tvar)


def separation_slope(series: SeparationSeries, growth_decades: float = 4.0) -> float:
    """Least-squares slope of ln(separation) against time, fitted over the
    linear-growth window.

    A separation record from a chaotic run has three regimes: an alignment
    transient where the offset rotates into the expanding direction (the
    log-separation wanders), clean exponential growth, and saturation at
    the attractor diameter.  When the series grows by at least
    `growth_decades` decades overall, the fit window is bracketed off the
    saturation level S = max separation: it ends where the separation first
    reaches S/100 and starts at the last moment before that where it still
    sat within 100 * delta0.  A series that never grows that much (a
    contracting system) has no such regimes; then the whole record minus
    the first tenth is fitted, which is what the sign checks against
    lambda_max use.  Zero separations cannot enter a log fit and are
    dropped.
    """
    sep = series.separation
    t = series.time
    peak = float(sep.max())
    if peak >= series.delta0 * 10.0**growth_decades:
        high = np.nonzero(sep >= 0.01 * peak)[0]
        end = int(high[0]) + 1
        low = np.nonzero(sep[:end] <= 100.0 * series.delta0)[0]
        start = int(low[-1]) if low.size else 0
    else:
        start = len(sep) // 10
        end = len(sep)
    tw = t[start:end]
    sw = sep[start:end]
    keep = sw > 0.0
    if int(keep.sum()) < 2:
        raise ValueError("separation series has fewer than two usable samples in the fit window")
    slope = np.polyfit(tw[keep], np.log(sw[keep]), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# fixed-point existence
# ---------------------------------------------------------------------------


def conjecture_report(params: SystemParams) -> ConjectureReport:
    """Check that the parameter choice admits at least one fixed point.

    Uses the closed-form solution set; the verdict is 'satisfied' whenever
    that set is non-empty (the origin alone suffices).
    """
    eqs = tuple(equilibria(params))
    count = len(eqs)
    if count == 0:
        return ConjectureReport(params, eqs, "violated", "no real equilibria found")
    kinds = "origin only" if count == 1 else f"origin and symmetric pair ({count} total)"
    return ConjectureReport(params, eqs, "satisfied", kinds)
