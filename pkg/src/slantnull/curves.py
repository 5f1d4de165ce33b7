"""Slant null curves, their Frenet frames and curvature functions.

A curve is represented by its tangent field expressed in the model's basis.
Frame fields along the curve are built over the basis {C', xi, phi C'}:

    W = alpha xi + beta C' + gamma phi C'
    N = lambda xi + mu C' + nu phi C'

with b = g(C', phi C') and a = eta(C').  Derivatives of fields along the
curve are taken by Richardson-refined central differences when the tangent
is an analytic callback, by second-order finite differences on the grid for
sampled curves, and not at all for left-invariant curves (all frame fields
then have constant components).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Union

import numpy as np

from .errors import ConfigError, GeodesicCurve, NotSlantNull, TangentVanishes, ZeroSlant
from .models import ManifoldModel, lee_forms
from .structure import Metric3, StructureTensors, apply_phi, eta_of, metric_eval

ANALYTIC = "coordinate-analytic"
SAMPLED = "coordinate-sampled"
LEFT_INVARIANT_CONSTANT = "left-invariant-constant"

NULL_TOL = 1e-9
GRAM_TOL = 1e-9
GEODESIC_TOL = 1e-8
CARTAN_EQ_TOL = 1e-5
CARTAN_CURVATURE_TOL = 1e-6

Beta = Union[None, float, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class CurveRep:
    """A regular curve given through its tangent field.

    ``tangent_fn`` maps an array of parameters of shape (m,) to tangent
    components of shape (m, 3).
    """

    kind: str
    tangent_fn: Callable[[np.ndarray], np.ndarray]
    t0: float
    t1: float
    n: int
    position: Callable[[np.ndarray], np.ndarray] | None = None
    fd_step: float | None = None
    sample_times: np.ndarray | None = field(default=None, repr=False)
    generator: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in (ANALYTIC, SAMPLED, LEFT_INVARIANT_CONSTANT):
            raise ConfigError(f"unknown curve kind {self.kind!r}")
        if not self.t0 < self.t1:
            raise ConfigError("need t0 < t1")
        if self.n < 3:
            raise ConfigError("need at least 3 samples")

    @property
    def ts(self) -> np.ndarray:
        if self.sample_times is not None:
            return self.sample_times
        return np.linspace(self.t0, self.t1, self.n)

    @property
    def step(self) -> float:
        """Finite-difference step: grid spacing, capped at 1e-2."""
        if self.fd_step is not None:
            return self.fd_step
        return min((self.t1 - self.t0) / (self.n - 1), 1e-2)

    def tangent(self, t=None) -> np.ndarray:
        t = self.ts if t is None else np.atleast_1d(np.asarray(t, dtype=float))
        return np.asarray(self.tangent_fn(t), dtype=float)

    def ddt(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """d/dt of ``fn`` at the sample times."""
        ts = self.ts
        if self.kind == LEFT_INVARIANT_CONSTANT:
            return np.zeros_like(np.asarray(fn(ts), dtype=float))
        if self.kind == SAMPLED:
            return np.gradient(np.asarray(fn(ts), dtype=float), ts, axis=0, edge_order=2)
        h = self.step

        def central(hh):
            return (np.asarray(fn(ts + hh)) - np.asarray(fn(ts - hh))) / (2 * hh)

        return (4 * central(h / 2) - central(h)) / 3


def analytic_curve(tangent, t0, t1, n, position=None, fd_step=None) -> CurveRep:
    return CurveRep(ANALYTIC, tangent, float(t0), float(t1), int(n), position, fd_step)


def sampled_curve(ts, points) -> CurveRep:
    """Curve known only through positions at increasing parameter values."""
    ts = np.asarray(ts, dtype=float)
    pts = np.asarray(points, dtype=float)
    if pts.shape != (len(ts), 3):
        raise ConfigError(f"expected points of shape ({len(ts)}, 3), got {pts.shape}")
    if len(ts) < 3 or np.any(np.diff(ts) <= 0):
        raise ConfigError("sample times must be strictly increasing, at least 3 of them")
    vel = np.gradient(pts, ts, axis=0, edge_order=2)

    def tangent(t):
        return np.stack([np.interp(t, ts, vel[:, k]) for k in range(3)], axis=-1)

    def position(t):
        return np.stack([np.interp(t, ts, pts[:, k]) for k in range(3)], axis=-1)

    return CurveRep(SAMPLED, tangent, float(ts[0]), float(ts[-1]), len(ts), position, sample_times=ts)


def left_invariant_curve(X, t0=0.0, t1=1.0, n=3) -> CurveRep:
    """One-parameter subgroup exp(tX); its tangent has constant components X."""
    X = np.asarray(X, dtype=float)

    def tangent(t):
        return np.broadcast_to(X, (np.size(t), 3)).copy()

    return CurveRep(LEFT_INVARIANT_CONSTANT, tangent, float(t0), float(t1), int(n), generator=X)


# ---------------------------------------------------------------------------
# slant / null data


@dataclass(frozen=True)
class SlantNullCertificate:
    a: float
    max_null_residual: float
    max_slant_residual: float
    tol: float = NULL_TOL

    @property
    def valid(self) -> bool:
        return self.max_null_residual < self.tol and self.max_slant_residual < self.tol


def slant_null_check(c: CurveRep, model: ManifoldModel, tol: float = NULL_TOL) -> SlantNullCertificate:
    s = model.structure
    T = c.tangent()
    if np.any(np.all(np.abs(T) < 1e-14, axis=1)):
        raise TangentVanishes("tangent vanishes at a sample")
    eta = eta_of(s, T)
    a = float(np.mean(eta))
    return SlantNullCertificate(
        a=a,
        max_null_residual=float(np.max(np.abs(metric_eval(s.g, T, T)))),
        max_slant_residual=float(np.max(np.abs(eta - a))),
        tol=tol,
    )


def _b_fn(c: CurveRep, s: StructureTensors):
    def b(t):
        T = c.tangent(t)
        return metric_eval(s.g, T, apply_phi(s, T))
    return b


@dataclass(frozen=True)
class SampledB:
    t: np.ndarray
    b: np.ndarray
    db: np.ndarray


def compute_b(c: CurveRep, model: ManifoldModel) -> SampledB:
    """b = g(C', phi C') at each sample, with db/dt."""
    bf = _b_fn(c, model.structure)
    return SampledB(c.ts, bf(c.ts), c.ddt(bf))


def basis_determinant(c: CurveRep, model: ManifoldModel) -> np.ndarray:
    """det[C', xi, phi C'] with each column scaled to unit Euclidean norm."""
    s = model.structure
    T = c.tangent()
    cols = [T, np.broadcast_to(np.asarray(s.xi, dtype=float), T.shape), apply_phi(s, T).astype(float)]
    cols = [v / np.linalg.norm(v, axis=1, keepdims=True) for v in cols]
    return np.linalg.det(np.stack(cols, axis=-1))


# ---------------------------------------------------------------------------
# frames


def _sqrt(x):
    if isinstance(x, Fraction):
        n, d = isqrt(x.numerator), isqrt(x.denominator)
        if n * n == x.numerator and d * d == x.denominator:
            return Fraction(n, d)
        return float(x) ** 0.5
    return np.sqrt(x)


@dataclass(frozen=True)
class FrameCoefficients:
    alpha: object
    beta: object
    gamma: object
    lam: object
    mu: object
    nu: object


def general_frame_coefficients(a, b, beta) -> FrameCoefficients:
    """Coefficients of the positively oriented general Frenet frame.

    ``beta`` is free; the remaining five coefficients follow from the Gram
    relations.  Vectorizes over array ``b`` and ``beta``; exact for Fraction
    inputs when a^4 + b^2 is a rational square.
    """
    if np.any(np.asarray(a) == 0):
        raise ZeroSlant("slant constant a must be nonzero")
    D = a**4 + b**2
    r = _sqrt(D)
    return FrameCoefficients(
        alpha=-b / r,
        beta=beta,
        gamma=a / r,
        lam=(a**3 + beta * b * r) / D,
        mu=-(a**2 + beta**2 * D) / (2 * D),
        nu=(b - beta * a * r) / D,
    )


def distinguished_coefficients(a, b) -> FrameCoefficients:
    """The beta = -alpha/a member, which forces nu = 0."""
    if np.any(np.asarray(a) == 0):
        raise ZeroSlant("slant constant a must be nonzero")
    r = _sqrt(a**4 + b**2)
    alpha = -b / r
    zero = 0 * b
    return FrameCoefficients(
        alpha=alpha,
        beta=-alpha / a,
        gamma=a / r,
        lam=zero + 1 / a,
        mu=zero - 1 / (2 * a**2),
        nu=zero,
    )


def frame_vectors(s: StructureTensors, tangent, k: FrameCoefficients):
    """(N, W) from the tangent and frame coefficients."""
    T = np.asarray(tangent)
    P = apply_phi(s, T)
    xi = np.asarray(s.xi)

    def comb(x, y, z):
        x, y, z = (np.asarray(v)[..., None] if np.ndim(v) else v for v in (x, y, z))
        return x * xi + y * T + z * P

    return comb(k.lam, k.mu, k.nu), comb(k.alpha, k.beta, k.gamma)


def gram_residuals(g: Metric3, T, N, W) -> dict[str, float]:
    def worst(x, target):
        return float(np.max(np.abs(np.asarray(x, dtype=float) - target)))

    return {
        "g(C,N) = 1": worst(metric_eval(g, T, N), 1.0),
        "g(W,W) = 1": worst(metric_eval(g, W, W), 1.0),
        "g(N,N) = 0": worst(metric_eval(g, N, N), 0.0),
        "g(N,W) = 0": worst(metric_eval(g, N, W), 0.0),
        "g(C,W) = 0": worst(metric_eval(g, T, W), 0.0),
    }


@dataclass(frozen=True)
class FrenetFrame:
    ts: np.ndarray
    tangent: np.ndarray
    N: np.ndarray
    W: np.ndarray
    coeffs: FrameCoefficients
    a: float
    b: np.ndarray
    metric: Metric3 = field(repr=False)
    fields: Callable[[np.ndarray], tuple] = field(repr=False)
    distinguished: bool = False

    def gram_residuals(self) -> dict[str, float]:
        return gram_residuals(self.metric, self.tangent, self.N, self.W)

    @property
    def max_gram_residual(self) -> float:
        return max(self.gram_residuals().values())

    @property
    def orientation(self) -> np.ndarray:
        """Sign of det[C', N, W] relative to det[C', xi, phi C'] (coefficient form)."""
        k = self.coeffs
        return np.sign(np.asarray(k.lam * k.gamma - k.nu * k.alpha, dtype=float))

    @property
    def gamma_positive(self) -> bool:
        return bool(np.all(np.asarray(self.coeffs.gamma, dtype=float) > 0))


def _require_slant_null(c, model, tol) -> SlantNullCertificate:
    cert = slant_null_check(c, model, tol)
    if not cert.valid:
        raise NotSlantNull(
            f"not a slant null curve: null residual {cert.max_null_residual:.3g}, "
            f"slant residual {cert.max_slant_residual:.3g} (tol {tol:g})"
        )
    if cert.a == 0:
        raise ZeroSlant("Legendre curve (a = 0) has no frame of this form")
    return cert


def general_frame(c: CurveRep, model: ManifoldModel, beta: Beta, tol: float = NULL_TOL) -> FrenetFrame:
    """Frame for an arbitrary choice of beta (constant or callable of t).

    ``beta=None`` selects the distinguished member.
    """
    s = model.structure
    a = _require_slant_null(c, model, tol).a
    bf = _b_fn(c, s)

    def coeffs(t):
        b = bf(t)
        if beta is None:
            return distinguished_coefficients(a, b)
        bt = beta(t) if callable(beta) else np.full_like(b, float(beta))
        return general_frame_coefficients(a, b, bt)

    def fields(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return frame_vectors(s, c.tangent(t), coeffs(t))

    ts = c.ts
    N, W = fields(ts)
    return FrenetFrame(ts, c.tangent(ts), N, W, coeffs(ts), a, bf(ts), s.g, fields, beta is None)


def unique_distinguished_frame(c: CurveRep, model: ManifoldModel, tol: float = GEODESIC_TOL,
                               null_tol: float = NULL_TOL) -> FrenetFrame:
    """The unique frame in which the curve's own parameter is distinguished (h = 0).

    Raises GeodesicCurve if k1 vanishes at any sample.
    """
    frame = general_frame(c, model, None, null_tol)
    k1 = curvatures(c, model, frame).k1
    if np.any(np.abs(k1) < tol):
        raise GeodesicCurve(f"k1 vanishes (min |k1| = {np.min(np.abs(k1)):.3g}); curve is geodesic")
    return frame


# ---------------------------------------------------------------------------
# curvatures


@dataclass(frozen=True)
class CurvatureData:
    ts: np.ndarray
    h: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    h_closed: np.ndarray
    k1_closed: np.ndarray
    acceleration: np.ndarray = field(repr=False)
    dN: np.ndarray = field(repr=False)
    dW: np.ndarray = field(repr=False)

    @property
    def tau(self) -> float:
        return float(np.mean(self.k2))


def curvatures_closed_form_F1(a, b, db_dt, theta_C, theta_phiC, gamma, nu):
    """(h, k1) on an F1-manifold from b, its derivative and the Lee form."""
    bracket = db_dt + a**2 * theta_C - b * theta_phiC
    return nu / 2 * bracket, gamma / 2 * bracket


def curvatures(c: CurveRep, model: ManifoldModel, frame: FrenetFrame) -> CurvatureData:
    """h, k1, k2 from inner products of covariant derivatives with the frame.

    Also evaluates the F1 closed form for h and k1 as a cross-check.
    """
    s = model.structure
    conn = model.connection
    T = c.tangent()
    acc = c.ddt(c.tangent) + conn.nabla(T, T)
    dN = c.ddt(lambda t: frame.fields(t)[0]) + conn.nabla(T, frame.N)
    dW = c.ddt(lambda t: frame.fields(t)[1]) + conn.nabla(T, frame.W)
    h = metric_eval(s.g, acc, frame.N)
    k1 = metric_eval(s.g, acc, frame.W)
    k2 = metric_eval(s.g, dN, frame.W)

    theta = np.asarray(lee_forms(model).theta, dtype=float)
    bf = _b_fn(c, s)
    h_cf, k1_cf = curvatures_closed_form_F1(
        frame.a, bf(c.ts), c.ddt(bf), T @ theta, apply_phi(s, T) @ theta,
        np.asarray(frame.coeffs.gamma, dtype=float), np.asarray(frame.coeffs.nu, dtype=float),
    )
    return CurvatureData(c.ts, h, k1, k2, h_cf, k1_cf, acc, dN, dW)


@dataclass(frozen=True)
class GeodesicResult:
    geodesic: bool
    residual: float
    residuals: np.ndarray = field(repr=False)


def geodesic_test(c: CurveRep, model: ManifoldModel, tol: float = GEODESIC_TOL) -> GeodesicResult:
    """Geodesic iff db/dt = b theta(phi C') - a^2 theta(C') along the curve."""
    s = model.structure
    a = slant_null_check(c, model).a
    theta = np.asarray(lee_forms(model).theta, dtype=float)
    T = c.tangent()
    sb = compute_b(c, model)
    r = sb.db - sb.b * (apply_phi(s, T) @ theta) + a**2 * (T @ theta)
    worst = float(np.max(np.abs(r)))
    return GeodesicResult(worst < tol, worst, r)


@dataclass
class CartanReport:
    residuals: dict[str, float]
    tau: float
    tol: float = CARTAN_EQ_TOL
    curvature_tol: float = CARTAN_CURVATURE_TOL

    @property
    def passed(self) -> bool:
        eq = ("nabla_C C - W", "nabla_C N - tau W", "nabla_C W + tau C + N")
        return all(self.residuals[k] < self.tol for k in eq) and all(
            v < self.curvature_tol for k, v in self.residuals.items() if k not in eq
        )


def verify_cartan(
    c: CurveRep,
    model: ManifoldModel,
    frame: FrenetFrame,
    curv: CurvatureData,
    tol: float = CARTAN_EQ_TOL,
    curvature_tol: float = CARTAN_CURVATURE_TOL,
) -> CartanReport:
    """Residuals of the Cartan Frenet equations with tau taken as k2."""
    g = model.structure.g
    tau = curv.k2[:, None]
    T = frame.tangent

    def worst(x):
        return float(np.max(np.abs(x)))

    res = {
        "nabla_C C - W": worst(curv.acceleration - frame.W),
        "nabla_C N - tau W": worst(curv.dN - tau * frame.W),
        "nabla_C W + tau C + N": worst(curv.dW + tau * T + frame.N),
        "k1 - 1": worst(curv.k1 - 1),
        "h": worst(curv.h),
        "g(C'',C'') - 1": worst(metric_eval(g, curv.acceleration, curv.acceleration) - 1),
    }
    return CartanReport(res, curv.tau, tol, curvature_tol)
