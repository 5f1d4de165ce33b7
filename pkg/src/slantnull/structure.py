"""Tangent-space linear algebra and almost contact B-metric structures in dimension 3.

Vectors are plain length-3 arrays holding components in the model's fixed
basis (coordinate basis for the flat model, left-invariant basis
``{E0, E1, E2}`` for the Lie group).  Arrays may be float or ``object``
arrays of :class:`fractions.Fraction`; every operation here is written so
that exact rational inputs give exact rational outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateMetric

COORDINATE = "coordinate"
LEFT_INVARIANT = "left-invariant"

STRUCTURE_TOL = 1e-10


def _as_array(x, exact=False):
    if exact:
        return np.array([[Fraction(v) for v in row] for row in x], dtype=object) \
            if np.ndim(x) == 2 else np.array([Fraction(v) for v in x], dtype=object)
    return np.asarray(x, dtype=float)


def _maxabs(x) -> float:
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return float(max(abs(v) for v in x.ravel()))


def identity3(exact: bool = False):
    return _as_array(np.eye(3, dtype=int).tolist(), exact)


def inverse3(m):
    """Closed-form inverse of a 3x3 matrix via the adjugate.

    Works on float and Fraction arrays alike.
    """
    m = np.asarray(m)
    cof = np.empty((3, 3), dtype=m.dtype)
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = m[r[0], c[0]] * m[r[1], c[1]] - m[r[0], c[1]] * m[r[1], c[0]]
            cof[i, j] = minor if (i + j) % 2 == 0 else -minor
    det = sum(m[0, j] * cof[0, j] for j in range(3))
    if det == 0:
        raise DegenerateMetric("matrix is singular")
    return cof.T / det


def signature(m) -> tuple[int, int]:
    """Return (number of positive, number of negative) eigenvalues."""
    ev = np.linalg.eigvalsh(np.asarray(m, dtype=float))
    scale = max(1.0, float(np.max(np.abs(ev))))
    return int(np.sum(ev > 1e-12 * scale)), int(np.sum(ev < -1e-12 * scale))


@dataclass(frozen=True)
class Metric3:
    """Symmetric 3x3 Gram matrix of signature (2, 1)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.shape != (3, 3):
            raise DegenerateMetric(f"metric must be 3x3, got {m.shape}")
        mf = m.astype(float)
        if np.max(np.abs(mf - mf.T)) > 1e-12:
            raise DegenerateMetric("metric is not symmetric")
        if signature(mf) != (2, 1):
            raise DegenerateMetric(f"metric signature {signature(mf)} is not (2, 1)")
        object.__setattr__(self, "matrix", m)

    def __call__(self, u, v):
        return metric_eval(self, u, v)

    @property
    def exact(self) -> bool:
        return self.matrix.dtype == object

    def inverse(self):
        return inverse3(self.matrix)


def metric_eval(g: Metric3, u, v):
    """g(u, v) for single vectors or stacks of shape (m, 3)."""
    u = np.asarray(u)
    v = np.asarray(v)
    return np.sum((u @ g.matrix) * v, axis=-1)


@dataclass(frozen=True)
class StructureTensors:
    """The quadruple (phi, xi, eta, g) in a fixed basis.

    ``phi`` acts on column vectors, so its j-th column is the image of the
    j-th basis vector.
    """

    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    g: Metric3
    basis: str = COORDINATE

    @property
    def exact(self) -> bool:
        return self.g.exact


def apply_phi(s: StructureTensors, v):
    """phi(v); accepts a single vector or a stack of shape (m, 3)."""
    return np.asarray(v) @ s.phi.T


def eta_of(s: StructureTensors, v):
    return np.asarray(v) @ s.eta


@dataclass
class StructureReport:
    residuals: dict[str, float]
    tol: float = STRUCTURE_TOL
    failures: list[str] = field(init=False)

    def __post_init__(self):
        self.failures = [k for k, r in self.residuals.items() if not r < self.tol]

    @property
    def passed(self) -> bool:
        return not self.failures


def check_structure(s: StructureTensors, tol: float = STRUCTURE_TOL) -> StructureReport:
    """Max absolute residual of every almost contact B-metric axiom on the basis."""
    E = identity3(s.exact)
    G = s.g.matrix
    phi, xi, eta = s.phi, s.xi, s.eta
    phi2 = phi @ phi
    eta_xi = eta @ xi
    res = {
        "phi^2 = -id + eta(x)xi": _maxabs(phi2 + E - np.outer(xi, eta)),
        "eta(xi) = 1": _maxabs([eta_xi - 1]),
        "eta o phi = 0": _maxabs(eta @ phi),
        "phi xi = 0": _maxabs(phi @ xi),
        "rank(phi) = 2": float(abs(np.linalg.matrix_rank(phi.astype(float)) - 2)),
        "g(phi u, phi v) = -g(u, v) + eta(u)eta(v)": _maxabs(phi.T @ G @ phi + G - np.outer(eta, eta)),
        "eta(v) = g(v, xi)": _maxabs(G @ xi - eta),
        "g(xi, xi) = 1": _maxabs([xi @ G @ xi - 1]),
    }
    return StructureReport(res, tol)


def associated_metric(s: StructureTensors, tol: float = STRUCTURE_TOL) -> Metric3:
    """The associated B-metric  g~(u, v) = g(u, phi v) + eta(u) eta(v)."""
    m = s.g.matrix @ s.phi + np.outer(s.eta, s.eta)
    asym = _maxabs(m - m.T)
    if asym > tol:
        raise DegenerateMetric(f"associated metric is not symmetric (residual {asym:.3g})")
    return Metric3(m)


def flat_structure(exact: bool = False) -> StructureTensors:
    """Cosymplectic B-metric structure on R^3 with g = -dx1^2 + dx2^2 + dx3^2."""
    phi = [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
    return StructureTensors(
        phi=_as_array(phi, exact),
        xi=_as_array([0, 0, 1], exact),
        eta=_as_array([0, 0, 1], exact),
        g=Metric3(_as_array(np.diag([-1, 1, 1]).tolist(), exact)),
        basis=COORDINATE,
    )


def lie_structure(exact: bool = False) -> StructureTensors:
    """Left-invariant structure on {E0, E1, E2}: xi = E0, phi E1 = E2, phi E2 = -E1."""
    phi = [[0, 0, 0], [0, 0, -1], [0, 1, 0]]
    return StructureTensors(
        phi=_as_array(phi, exact),
        xi=_as_array([1, 0, 0], exact),
        eta=_as_array([1, 0, 0], exact),
        g=Metric3(_as_array(np.diag([1, 1, -1]).tolist(), exact)),
        basis=LEFT_INVARIANT,
    )
