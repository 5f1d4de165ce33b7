"""The Cartan condition as an ODE for b along a slant null curve.

    db/dt = b theta(phi C') - a^2 theta(C') + (2/a) sqrt(a^4 + b^2)

integrated with classical fixed-step RK4.  With vanishing Lee form the
equation separates and has the closed-form solution implemented in
:func:`analytic_b_F0`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, NonFinite, ZeroSlant


def _zero(t):
    return 0.0


@dataclass(frozen=True)
class BOdeProblem:
    a: float
    b0: float
    t0: float
    t1: float
    step: float
    theta_C: Callable[[float], float] = _zero
    theta_phiC: Callable[[float], float] = _zero

    def __post_init__(self):
        if self.a == 0:
            raise ZeroSlant("slant constant a must be nonzero")
        if not self.step > 0:
            raise ConfigError("step must be positive")
        if not self.t1 > self.t0:
            raise ConfigError("need t0 < t1")

    def rhs(self, t: float, b: float) -> float:
        a = self.a
        return b * self.theta_phiC(t) - a * a * self.theta_C(t) + (2.0 / a) * math.hypot(a * a, b)


@dataclass(frozen=True)
class BSolution:
    t: np.ndarray
    b: np.ndarray
    u: float | None = None


def solve_b_numeric(p: BOdeProblem) -> BSolution:
    """Fixed-step RK4; the step is shrunk slightly so the grid ends exactly at t1."""
    n = max(1, math.ceil((p.t1 - p.t0) / p.step - 1e-9))
    h = (p.t1 - p.t0) / n
    ts = p.t0 + h * np.arange(n + 1)
    ts[-1] = p.t1
    bs = np.empty(n + 1)
    b = float(p.b0)
    bs[0] = b
    f = p.rhs
    for i in range(n):
        t = ts[i]
        k1 = f(t, b)
        k2 = f(t + h / 2, b + h / 2 * k1)
        k3 = f(t + h / 2, b + h / 2 * k2)
        k4 = f(t + h, b + h * k3)
        b = b + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not math.isfinite(b):
            raise NonFinite(f"b overflowed at t = {ts[i + 1]:.6g}")
        bs[i + 1] = b
    return BSolution(ts, bs)


def analytic_b_F0(a, u, t):
    """b(t) = (exp(2(t+u)/a) - a^4 exp(-2(t+u)/a)) / 2, for vanishing Lee form."""
    if a == 0:
        raise ZeroSlant("slant constant a must be nonzero")
    x = 2 * (np.asarray(t, dtype=float) + u) / a
    return 0.5 * (np.exp(x) - a**4 * np.exp(-x))


def invert_b_for_u(a: float, t0: float, b0: float) -> float:
    """Integration constant u of the closed-form solution passing through (t0, b0)."""
    if a == 0:
        raise ZeroSlant("slant constant a must be nonzero")
    r = math.hypot(a * a, b0)
    # b + r loses precision for large negative b; use a^4 / (r - b) there
    s = b0 + r if b0 >= 0 else a**4 / (r - b0)
    return a / 2 * math.log(s) - t0


def solve_b_analytic(a: float, b0: float, t0: float, ts) -> BSolution:
    u = invert_b_for_u(a, t0, b0)
    ts = np.asarray(ts, dtype=float)
    return BSolution(ts, analytic_b_F0(a, u, ts), u)
