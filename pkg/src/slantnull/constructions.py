"""Closed-form Cartan framed slant null curves on the two models.

* ``C1``/``C2``: the two branches of slant null curves in the flat model whose
  own parameter gives a Cartan frame.
* ``lie``: the one-parameter subgroup exp(tX) on the Lie group with
  c1 = c2 = c, for the unique null X with eta(X) = a solving the Cartan
  condition.  Everything there is rational in (c, a) and is computed with
  :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import CurveRep, analytic_curve, left_invariant_curve
from .errors import ConfigError, DegenerateB, NotProjectiveFamily, OrientationDomain, TraceZero, ZeroSlant
from .models import LieGroupModel

PROJECTIVE_TOL = 1e-10


def to_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string, or float (via its repr)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x).strip())


# ---------------------------------------------------------------------------
# flat model


@dataclass(frozen=True)
class MinkowskiCartanCurve:
    branch: str
    a: float
    u: float = 0.0
    offsets: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def sign(self) -> float:
        return 1.0 if self.branch == "C1" else -1.0

    def E(self, t):
        return np.exp((np.asarray(t, dtype=float) + self.u) / self.a)

    def position(self, t):
        e, a, s = self.E(t), self.a, self.sign
        c = self.offsets
        return np.stack([
            s * a / 2 * (e - a**2 / e) + c[0],
            s * a / 2 * (e + a**2 / e) + c[1],
            a * np.asarray(t, dtype=float) + c[2],
        ], axis=-1)

    def tangent(self, t):
        e, a, s = self.E(t), self.a, self.sign
        return np.stack([s / 2 * (e + a**2 / e), s / 2 * (e - a**2 / e), np.full_like(e, a)], axis=-1)

    def phi_tangent(self, t):
        T = self.tangent(t)
        return np.stack([-T[..., 1], T[..., 0], np.zeros_like(T[..., 2])], axis=-1)

    def b(self, t):
        T = self.tangent(t)
        return 2 * T[..., 0] * T[..., 1]

    def _e2_minus(self, t):
        # E^2 - a^4 E^-2, factored to avoid cancellation
        e, a = self.E(t), self.a
        return (e - a**2 / e) * (e + a**2 / e)

    def _e2_plus(self, t):
        e, a = self.E(t), self.a
        return e**2 + a**4 / e**2

    def rho(self, t):
        return self._e2_minus(t) / self._e2_plus(t)

    def as_curve(self, t0=-1.0, t1=1.0, n=201, fd_step=None) -> CurveRep:
        return analytic_curve(self.tangent, t0, t1, n, position=self.position, fd_step=fd_step)


def make_minkowski_curve(branch: str, a: float, u: float = 0.0, offsets=(0.0, 0.0, 0.0)) -> MinkowskiCartanCurve:
    branch = branch.upper()
    if branch not in ("C1", "C2"):
        raise ConfigError(f"branch must be C1 or C2, got {branch!r}")
    if a == 0:
        raise ZeroSlant("slant constant a must be nonzero")
    if len(offsets) != 3:
        raise ConfigError("need three offsets")
    return MinkowskiCartanCurve(branch, float(a), float(u), tuple(float(o) for o in offsets))


def minkowski_cartan_frame(curve: MinkowskiCartanCurve, t, singular_tol: float = 1e-8):
    """(N, W) of the Cartan frame in closed form.

    The rho-form of W divides by b; within ``singular_tol`` (relative) of a
    zero of b the equivalent alpha/gamma form is used instead.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = curve.a
    T = curve.tangent(t)
    P = curve.phi_tangent(t)
    xi = np.array([0.0, 0.0, 1.0])
    N = xi / a - T / (2 * a**2)

    minus, plus = curve._e2_minus(t), curve._e2_plus(t)
    regular = np.abs(minus) > singular_tol * plus
    safe = np.where(regular, minus, 1.0)
    rho = (minus / plus)[:, None]
    W_rho = -rho * (xi - T / a - (2 * a / safe)[:, None] * P)

    # alpha = -b / sqrt(a^4 + b^2) = -rho, gamma = a / sqrt(a^4 + b^2) = 2a / (E^2 + a^4 E^-2)
    alpha = -rho
    gamma = (2 * a / plus)[:, None]
    W_reg = alpha * xi - alpha / a * T + gamma * P
    W = np.where(regular[:, None], W_rho, W_reg)
    return N, W


# ---------------------------------------------------------------------------
# Lie group model


def _fvec(*xs):
    return np.array([Fraction(x) for x in xs], dtype=object)


@dataclass(frozen=True)
class LieSlantVector:
    c: Fraction
    a: Fraction
    p: Fraction
    q: Fraction
    r: Fraction
    X: np.ndarray
    phiX: np.ndarray
    N1: np.ndarray
    W1: np.ndarray

    @property
    def b(self) -> Fraction:
        return -2 * self.q * self.r

    @property
    def sqrt_a4_b2(self) -> Fraction:
        s = self.c**2 * self.a**4
        return (s**2 + 1) / (2 * self.c**2 * self.a**2)

    @property
    def cartan_residual(self) -> Fraction:
        """c a sqrt(a^2 + q^2) - (1 + c a q), with sqrt(a^2 + q^2) = r."""
        return self.c * self.a * self.r - (1 + self.c * self.a * self.q)

    @property
    def null_residual(self) -> Fraction:
        return self.p**2 + self.q**2 - self.r**2

    def model(self, exact: bool = False) -> LieGroupModel:
        return LieGroupModel(self.c, self.c, exact=exact)

    def as_curve(self, t0=0.0, t1=1.0, n=3) -> CurveRep:
        return left_invariant_curve(self.X.astype(float), t0, t1, n)


def make_lie_slant_vector(c, a) -> LieSlantVector:
    """Null X = (a, q, r) with eta(X) = a satisfying the Cartan condition for c1 = c2 = c."""
    c, a = to_fraction(c), to_fraction(a)
    if a == 0:
        raise ZeroSlant("slant constant a must be nonzero")
    if c * a <= 0:
        raise OrientationDomain(f"need c*a > 0, got c={c}, a={a}")
    s = c**2 * a**4
    if s == 1:
        raise DegenerateB(f"c = +-1/a^2 gives b = 0 (c={c}, a={a})")
    q = (s - 1) / (2 * c * a)
    r = (s + 1) / (2 * c * a)
    X = _fvec(a, q, r)
    phiX = _fvec(0, -r, q)
    xi = _fvec(1, 0, 0)
    N1 = xi / a - X / (2 * a**2)
    rho = (s**2 - 1) / (s**2 + 1)
    W1 = rho * (xi - X / a + (2 * c**2 * a**3 / (s**2 - 1)) * phiX)
    return LieSlantVector(c, a, a, q, r, X, phiX, N1, W1)


@dataclass(frozen=True)
class MatrixRep:
    pi_E0: np.ndarray
    pi_E1: np.ndarray
    pi_E2: np.ndarray
    pi_X: np.ndarray
    pi_phiX: np.ndarray
    pi_N1: np.ndarray
    pi_W1: np.ndarray
    a: Fraction

    def pi(self, v) -> np.ndarray:
        """pi of a vector with components in {E0, E1, E2}, by linearity."""
        return v[0] * self.pi_E0 + v[1] * self.pi_E1 + v[2] * self.pi_E2

    def Pi_C(self, t: float) -> np.ndarray:
        return group_curve_from_pi(self.pi_X, t)


def pi_generators(c1, c2):
    """3x3 representation of E0, E1, E2 for [E1, E2] = c1 E1 + c2 E2."""
    z = Fraction(0)
    E0 = np.full((3, 3), z, dtype=object)
    E1 = E0.copy()
    E2 = E0.copy()
    E1[2, 1], E1[2, 2] = -Fraction(c1), -Fraction(c2)
    E2[1, 1], E2[1, 2] = Fraction(c1), Fraction(c2)
    return E0, E1, E2


def commutator(A, B):
    return A @ B - B @ A


def lie_matrix_rep(v: LieSlantVector) -> MatrixRep:
    E0, E1, E2 = pi_generators(v.c, v.c)

    def pi(w):
        return w[0] * E0 + w[1] * E1 + w[2] * E2

    return MatrixRep(E0, E1, E2, pi(v.X), pi(v.phiX), pi(v.N1), pi(v.W1), v.a)


def group_exponential(A, tol: float = PROJECTIVE_TOL) -> np.ndarray:
    """exp(A) = I + (exp(tr A) - 1) / tr A * A, valid when A @ A = tr(A) A."""
    A = np.asarray(A, dtype=float)
    tr = float(np.trace(A))
    if abs(tr) < 1e-12:
        raise TraceZero("trace of A vanishes")
    scale = max(1.0, float(np.max(np.abs(A))) ** 2)
    if np.max(np.abs(A @ A - tr * A)) > tol * scale:
        raise NotProjectiveFamily("A @ A != trace(A) * A")
    return np.eye(3) + math.expm1(tr) / tr * A


def group_curve_from_pi(pi_X, t: float) -> np.ndarray:
    if t == 0:
        return np.eye(3)
    return group_exponential(float(t) * np.asarray(pi_X, dtype=float))


def group_curve(v: LieSlantVector, t: float) -> np.ndarray:
    """Matrix of C(t) = exp(tX) in the group representation."""
    return group_curve_from_pi(lie_matrix_rep(v).pi_X, t)
