"""Concrete 3-manifolds carrying an almost contact B-metric structure.

Both models are globally framed and homogeneous, so the Levi-Civita
connection has constant coefficients in the fixed basis.  It is computed
once, from the Koszul formula for a constant metric,

    2 g(nabla_{E_i} E_j, E_k) = g([E_i,E_j],E_k) - g([E_j,E_k],E_i) + g([E_k,E_i],E_j),

which also covers the flat model (coordinate fields commute, so every
coefficient vanishes).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import ConfigError
from .structure import (
    StructureTensors,
    _maxabs,
    apply_phi,
    flat_structure,
    identity3,
    lie_structure,
    metric_eval,
)

CLASSIFY_TOL = 1e-8


def _bilinear(gamma, u, v):
    """sum_ij u^i v^j gamma[i, j, :] for vectors or stacks of vectors."""
    uv = np.tensordot(np.asarray(u), gamma, axes=([-1], [0]))  # (..., j, k)
    return (uv * np.asarray(v)[..., :, None]).sum(axis=-2)


@dataclass(frozen=True)
class ConnectionModel:
    """Constant connection coefficients; ``gamma[i, j]`` holds nabla_{E_i} E_j."""

    gamma: np.ndarray

    def nabla(self, u, v):
        """nabla_u v for fields with constant components."""
        return _bilinear(self.gamma, u, v)


def covariant_derivative(conn: ConnectionModel, along, field_values, field_derivative):
    """Covariant derivative of a field along a direction.

    ``field_derivative`` is the directional derivative of the field's
    components; the result is field_derivative^k + Gamma^k_ij along^i field^j.
    """
    return np.asarray(field_derivative) + conn.nabla(along, field_values)


@dataclass(frozen=True)
class ManifoldModel:
    """A structure plus Lie brackets of the basis fields.

    ``brackets[i, j]`` holds the components of [E_i, E_j].  The connection
    is derived at construction.
    """

    structure: StructureTensors
    brackets: np.ndarray
    name: str = "custom"
    connection: ConnectionModel = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray(self.brackets)
        if c.shape != (3, 3, 3):
            raise ConfigError("brackets must have shape (3, 3, 3)")
        if _maxabs(c + c.transpose(1, 0, 2)) > 0:
            raise ConfigError("brackets must be antisymmetric")
        object.__setattr__(self, "connection", koszul_connection(self))

    @property
    def exact(self) -> bool:
        return self.structure.exact

    @property
    def basis(self) -> np.ndarray:
        return identity3(self.exact)


class FlatCosymplecticModel(ManifoldModel):
    """R^3 as a Minkowski space with the cosymplectic (F0) structure."""

    def __init__(self, exact: bool = False):
        s = flat_structure(exact)
        zero = np.zeros((3, 3, 3), dtype=object if exact else float)
        if exact:
            zero[...] = Fraction(0)
        super().__init__(s, zero, "flat")


class LieGroupModel(ManifoldModel):
    """Lie group with [E0,E1] = [E0,E2] = 0, [E1,E2] = c1 E1 + c2 E2."""

    def __init__(self, c1, c2, exact: bool = False):
        if c1 == 0 and c2 == 0:
            raise ConfigError("(c1,c2) must be nonzero")
        conv = Fraction if exact else float
        c1, c2 = conv(c1), conv(c2)
        b = np.zeros((3, 3, 3), dtype=object if exact else float)
        if exact:
            b[...] = Fraction(0)
        b[1, 2] = [conv(0), c1, c2]
        b[2, 1] = -b[1, 2]
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        super().__init__(lie_structure(exact), b, "lie")


def koszul_connection(m: ManifoldModel) -> ConnectionModel:
    """Levi-Civita connection of a constant metric with constant brackets."""
    G = m.structure.g.matrix
    Ginv = m.structure.g.inverse()
    C = np.asarray(m.brackets)
    half = Fraction(1, 2) if m.exact else 0.5
    # CG[i, j, k] = g([E_i, E_j], E_k)
    CG = np.tensordot(C, G, axes=([2], [0]))
    gamma = np.empty((3, 3, 3), dtype=C.dtype)
    for i, j in itertools.product(range(3), repeat=2):
        low = np.array([half * (CG[i, j, k] - CG[j, k, i] + CG[k, i, j]) for k in range(3)], dtype=C.dtype)
        gamma[i, j] = Ginv @ low
    return ConnectionModel(gamma)


def metric_compatibility_residual(m: ManifoldModel) -> float:
    low = np.tensordot(m.connection.gamma, m.structure.g.matrix, axes=([2], [0]))
    return _maxabs(low + low.transpose(0, 2, 1))


def torsion_residual(m: ManifoldModel) -> float:
    g = m.connection.gamma
    return _maxabs(g - g.transpose(1, 0, 2) - m.brackets)


def nabla_xi_residual(m: ManifoldModel) -> float:
    """max_i |nabla_{E_i} xi|."""
    return _maxabs(m.connection.nabla(m.basis, m.structure.xi))


def F_components(m: ManifoldModel) -> np.ndarray:
    """F[i, j, k] = g((nabla_{E_i} phi) E_j, E_k) on the basis."""
    s = m.structure
    E = m.basis
    out = np.empty((3, 3, 3), dtype=E.dtype)
    for i, j in itertools.product(range(3), repeat=2):
        d = m.connection.nabla(E[i], apply_phi(s, E[j])) - apply_phi(s, m.connection.nabla(E[i], E[j]))
        out[i, j] = d @ s.g.matrix
    return out


def tensor_F(m: ManifoldModel, u, v, w):
    """F(u, v, w) = g(nabla_u(phi v) - phi(nabla_u v), w) for constant-component fields."""
    s = m.structure
    conn = m.connection
    d = conn.nabla(u, apply_phi(s, v)) - apply_phi(s, conn.nabla(u, v))
    return metric_eval(s.g, d, w)


@dataclass(frozen=True)
class LeeForms:
    theta: np.ndarray
    theta_star: np.ndarray
    omega: np.ndarray


def lee_forms(m: ManifoldModel) -> LeeForms:
    """Traces of F against the inverse metric, as covector components."""
    s = m.structure
    F = F_components(m)
    Ginv = s.g.inverse()
    theta = np.tensordot(Ginv, F, axes=([0, 1], [0, 1]))
    # F(E_i, phi E_j, E_k) = sum_l phi[l, j] F[i, l, k]
    F_phi = np.tensordot(F, s.phi, axes=([1], [0])).transpose(0, 2, 1)
    theta_star = np.tensordot(Ginv, F_phi, axes=([0, 1], [0, 1]))
    omega = np.tensordot(np.tensordot(s.xi, F, axes=([0], [0])), s.xi, axes=([0], [0]))
    return LeeForms(theta, theta_star, omega)


def f1_rhs(m: ManifoldModel, theta) -> np.ndarray:
    """Right-hand side of the F1 identity on basis triples, for a given theta."""
    s = m.structure
    G, phi = s.g.matrix, s.phi
    A = G @ phi            # g(E_i, phi E_j)
    B = phi.T @ G @ phi    # g(phi E_i, phi E_j)
    tp = np.asarray(theta) @ phi
    tpp = np.asarray(theta) @ phi @ phi
    half = Fraction(1, 2) if m.exact else 0.5
    return half * (
        A[:, :, None] * tp[None, None, :]
        + B[:, :, None] * tpp[None, None, :]
        + A[:, None, :] * tp[None, :, None]
        + B[:, None, :] * tpp[None, :, None]
    )


@dataclass
class Classification:
    label: str
    max_F: float
    f1_residual: float
    nabla_xi_residual: float
    tol: float


def classify(m: ManifoldModel, tol: float = CLASSIFY_TOL) -> Classification:
    """Decide F0 / F1 / neither on the deterministic grid of basis triples."""
    F = F_components(m)
    max_F = _maxabs(F)
    theta = lee_forms(m).theta
    f1 = _maxabs(F - f1_rhs(m, theta))
    nx = nabla_xi_residual(m)
    if max_F < tol:
        label = "F0"
    elif f1 < tol and nx < tol:
        label = "F1"
    else:
        label = "neither"
    return Classification(label, max_F, f1, nx, tol)


def parse_key_value(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip().lower().replace("_", "-")] = v.strip()
    return out


def model_from_config(cfg: Mapping[str, object]) -> ManifoldModel:
    kind = str(cfg.get("model", "flat")).lower()
    if kind == "flat":
        return FlatCosymplecticModel()
    if kind == "lie":
        try:
            c1 = float(cfg.get("c1", 1.0))
            c2 = float(cfg.get("c2", c1))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad Lie parameters: {exc}") from None
        return LieGroupModel(c1, c2)
    raise ConfigError(f"unknown model {kind!r} (expected flat or lie)")
