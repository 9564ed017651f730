"""Power-law time gauge and the gauged right-hand side.

A gauge (mu, D) with mu > 0 and 0 < D < 1 defines the scaled time

    s = mu * t**(1 - D)

and the coefficient lam = mu * (1 - D).  Weighting an ordinary time
derivative by t**D / lam turns dx/dt into d/ds, so the gauged system

    dx/dt = lam * t**(-D) * f(x, y, z)

is equivalent to the autonomous system dx/ds = f under the substitution
above: the chain rule gives ds/dt = mu * (1 - D) * t**(-D) = lam * t**(-D).
That equivalence is the correctness anchor for the two integration modes in
`integrate.integrate_sl`.

Real powers are evaluated as exp(p * log(t)) rather than t**p so that both
directions of the map use the identical primitive and round-trip cleanly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .dynamics import State3, SystemParams, eval_sl_field

__all__ = [
    "Gauge",
    "lambda_coeff",
    "scale_time",
    "unscale_time",
    "msl_rhs",
    "make_gauged_field",
]


def lambda_coeff(mu: float, D: float) -> float:
    """The prefactor lam = mu * (1 - D).

    mu must be positive and finite; D must lie strictly inside (0, 1).  At
    D = 1 the scaled time degenerates to a constant and at D = 0 the gauge
    is the identity with no reparametrization content, so both endpoints are
    rejected.
    """
    mu = float(mu)
    D = float(D)
    if not (math.isfinite(mu) and mu > 0.0):
        raise ValueError(f"gauge mu must be positive and finite, got {mu!r}")
    if not (math.isfinite(D) and 0.0 < D < 1.0):
        raise ValueError(f"gauge D must lie strictly in (0, 1), got {D!r}")
    return mu * (1.0 - D)


@dataclass(frozen=True)
class Gauge:
    """A validated (mu, D) pair; `lam` is always derived, never stored free."""

    mu: float
    D: float
    lam: float = field(init=False)

    def __post_init__(self) -> None:
        lam = lambda_coeff(self.mu, self.D)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "D", float(self.D))
        object.__setattr__(self, "lam", lam)


def scale_time(gauge: Gauge, t: float) -> float:
    """Map ordinary time t >= 0 to scaled time s = mu * t**(1 - D)."""
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"scale_time needs finite t >= 0, got {t!r}")
    if t == 0.0:
        return 0.0
    return gauge.mu * math.exp((1.0 - gauge.D) * math.log(t))


def unscale_time(gauge: Gauge, s: float) -> float:
    """Inverse map: t = (s / mu)**(1 / (1 - D)) for s >= 0."""
    s = float(s)
    if not math.isfinite(s) or s < 0.0:
        raise ValueError(f"unscale_time needs finite s >= 0, got {s!r}")
    if s == 0.0:
        return 0.0
    return math.exp(math.log(s / gauge.mu) / (1.0 - gauge.D))


def msl_rhs(
    params: SystemParams, gauge: Gauge, t: float, state: State3 | Sequence[float]
) -> State3:
    """Gauged right-hand side lam * t**(-D) * f(state).

    The weight is singular at t = 0, so gauged evaluation requires t > 0.
    """
    t = float(t)
    if not math.isfinite(t) or t <= 0.0:
        raise ValueError(f"gauged field needs finite t > 0 (weight ~ t**(-D)), got {t!r}")
    w = gauge.lam * math.exp(-gauge.D * math.log(t))
    f = eval_sl_field(params, state)
    return State3(w * f.x, w * f.y, w * f.z)


def make_gauged_field(
    params: SystemParams, gauge: Gauge
) -> Callable[[float, tuple[float, float, float]], tuple[float, float, float]]:
    """Bind (params, gauge) into a plain-tuple evaluator for the integrators."""
    a, b, c = params.a, params.b, params.c
    lam, D = gauge.lam, gauge.D
    log = math.log
    exp = math.exp

    def rhs(t: float, state: tuple[float, float, float]) -> tuple[float, float, float]:
        if t <= 0.0:
            raise ValueError(f"gauged field needs t > 0, got {t!r}")
        w = lam * exp(-D * log(t))
        x, y, z = state
        return (w * a * (y - x), w * (x * (b - z) - y), w * (x * y - c * z))

    return rhs
