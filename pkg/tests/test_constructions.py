import math
from fractions import Fraction as F

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracles import (
    displayed_Pi_C,
    displayed_pi_N1,
    displayed_pi_phiX,
    displayed_pi_W1,
    displayed_pi_X,
    series_expm,
)
from slantnull.bsolver import analytic_b_F0
from slantnull.constructions import (
    commutator,
    group_curve,
    group_exponential,
    lie_matrix_rep,
    make_lie_slant_vector,
    make_minkowski_curve,
    minkowski_cartan_frame,
    pi_generators,
)
from slantnull.curves import unique_distinguished_frame
from slantnull.errors import (
    ConfigError,
    DegenerateB,
    NotProjectiveFamily,
    OrientationDomain,
    TraceZero,
    ZeroSlant,
)
from slantnull.models import FlatCosymplecticModel
from slantnull.structure import flat_structure, metric_eval

FLAT = FlatCosymplecticModel()
G = flat_structure().g


def exact_equal(A, B):
    A, B = np.asarray(A, dtype=object), np.asarray(B, dtype=object)
    return A.shape == B.shape and all(F(x) == F(y) for x, y in zip(A.ravel(), B.ravel()))


# --- Minkowski curves --------------------------------------------------------

def test_c1_at_zero():
    c = make_minkowski_curve("C1", 1.0)
    assert_allclose(c.position(0.0), [0, 1, 0], atol=1e-15)
    assert_allclose(c.tangent(0.0), [1, 0, 1], atol=1e-15)
    assert_allclose(make_minkowski_curve("C2", 1.0).tangent(0.0), [-1, 0, 1], atol=1e-15)


def test_offsets_shift_position():
    c = make_minkowski_curve("c2", 2.0, 0.3, (1.0, -2.0, 0.5))
    ref = make_minkowski_curve("C2", 2.0, 0.3)
    assert_allclose(c.position(0.4) - ref.position(0.4), [1.0, -2.0, 0.5])


def test_minkowski_errors():
    with pytest.raises(ZeroSlant):
        make_minkowski_curve("C1", 0.0)
    with pytest.raises(ConfigError):
        make_minkowski_curve("C3", 1.0)


@pytest.mark.parametrize("branch", ["C1", "C2"])
@pytest.mark.parametrize("a,u", [(1.0, 0.0), (2.0, 0.3), (-1.0, 0.0), (0.5, -0.4)])
def test_minkowski_null_slant_and_b(branch, a, u):
    c = make_minkowski_curve(branch, a, u)
    ts = np.linspace(-1, 1, 101)
    T = c.tangent(ts)
    assert np.max(np.abs(metric_eval(G, T, T))) < 1e-12 * np.max(T**2)
    assert_allclose(T[:, 2], a)
    assert_allclose(c.b(ts), analytic_b_F0(a, u, ts), rtol=1e-12, atol=1e-12)
    # the position evaluator differentiates to the tangent
    h = 1e-5
    assert_allclose((c.position(ts + h) - c.position(ts - h)) / (2 * h), T, atol=1e-7)


def test_rho_value():
    # E^2 = 4 with a = 1, u = 0 at t = ln 2
    c = make_minkowski_curve("C1", 1.0)
    assert c.rho(math.log(2)) == pytest.approx(15 / 17, abs=1e-15)


def test_cartan_frame_at_singular_point():
    c = make_minkowski_curve("C1", 1.0)
    N, W = minkowski_cartan_frame(c, 0.0)
    assert_allclose(N[0], [-0.5, 0, 0.5], atol=1e-15)
    assert_allclose(W[0], [0, 1, 0], atol=1e-15)


@pytest.mark.parametrize("branch", ["C1", "C2"])
@pytest.mark.parametrize("a,u", [(1.0, 0.0), (2.0, 0.3), (-1.0, 0.0)])
def test_cartan_frame_matches_unique_frame(branch, a, u):
    mc = make_minkowski_curve(branch, a, u)
    c = mc.as_curve(-1, 1, 201)
    fr = unique_distinguished_frame(c, FLAT)
    N, W = minkowski_cartan_frame(mc, c.ts)
    assert np.max(np.abs(N - fr.N)) < 1e-9
    assert np.max(np.abs(W - fr.W)) < 1e-9
    T = mc.tangent(c.ts)
    assert np.max(np.abs(metric_eval(G, W, W) - 1)) < 1e-10
    assert np.max(np.abs(metric_eval(G, T, N) - 1)) < 1e-10


def test_cartan_frame_forms_agree_near_singularity():
    mc = make_minkowski_curve("C1", 1.0)
    ts = np.array([1e-3, -1e-3, 0.05])
    N, W_default = minkowski_cartan_frame(mc, ts)
    _, W_rho = minkowski_cartan_frame(mc, ts, singular_tol=0.0)
    assert_allclose(W_default, W_rho, atol=1e-12)


# --- Lie slant vector -------------------------------------------------------

def test_lie_vector_values():
    v = make_lie_slant_vector(1, 2)
    assert exact_equal(v.X, [2, F(15, 4), F(17, 4)])
    assert exact_equal(v.phiX, [0, F(-17, 4), F(15, 4)])
    assert v.b == F(-255, 8)
    assert v.sqrt_a4_b2 == F(257, 8)
    assert v.sqrt_a4_b2**2 == v.a**4 + v.b**2
    assert v.cartan_residual == 0 and v.null_residual == 0


def test_lie_vector_exact_connection():
    v = make_lie_slant_vector(1, 2)
    conn = v.model(exact=True).connection
    assert exact_equal(conn.nabla(v.X, v.X), v.W1)
    assert exact_equal(conn.nabla(v.X, v.N1), -v.W1 / (2 * v.a**2))
    assert exact_equal(conn.nabla(v.X, v.W1), -(-1 / (2 * v.a**2)) * v.X - v.N1)


@pytest.mark.parametrize("c,a", [(1, 2), (F(1, 3), F(5, 2)), (-2, -1), (3, F(1, 2))])
def test_lie_vector_identities(c, a):
    v = make_lie_slant_vector(c, a)
    assert v.null_residual == 0 and v.cartan_residual == 0
    assert v.sqrt_a4_b2**2 == v.a**4 + v.b**2
    assert exact_equal(v.model(exact=True).connection.nabla(v.X, v.X), v.W1)


def test_lie_vector_errors():
    with pytest.raises(DegenerateB):
        make_lie_slant_vector(1, 1)
    with pytest.raises(DegenerateB):
        make_lie_slant_vector(F(1, 4), 2)
    with pytest.raises(OrientationDomain):
        make_lie_slant_vector(-1, 2)
    with pytest.raises(ZeroSlant):
        make_lie_slant_vector(1, 0)


def test_float_parameters_are_exact():
    v = make_lie_slant_vector(0.5, 2.0)
    assert v.c == F(1, 2) and v.a == 2


# --- matrix representation --------------------------------------------------

def test_generators_homomorphism():
    for c1, c2 in [(1, 1), (2, -3), (0, 1)]:
        E0, E1, E2 = pi_generators(c1, c2)
        assert exact_equal(commutator(E1, E2), c1 * E1 + c2 * E2)
        assert exact_equal(commutator(E0, E1), np.zeros((3, 3)))
        assert exact_equal(commutator(E0, E2), np.zeros((3, 3)))


@pytest.mark.parametrize("c,a", [(1, 2), (F(1, 3), F(5, 2)), (2, 3)])
def test_representation_matches_displays(c, a):
    c, a = F(c), F(a)
    rep = lie_matrix_rep(make_lie_slant_vector(c, a))
    assert exact_equal(rep.pi_X, displayed_pi_X(c, a))
    assert exact_equal(rep.pi_phiX, displayed_pi_phiX(c, a))
    assert exact_equal(rep.pi_N1, displayed_pi_N1(c, a))
    assert exact_equal(rep.pi_W1, displayed_pi_W1(c, a))
    assert exact_equal(rep.pi_N1, rep.pi_E0 / a - rep.pi_X / (2 * a**2))


def test_pi_X_block():
    rep = lie_matrix_rep(make_lie_slant_vector(1, 2))
    assert exact_equal(rep.pi_X[1:, 1:], [[F(17, 4), F(17, 4)], [F(-15, 4), F(-15, 4)]])


def test_pi_X_projective_and_trace():
    rep = lie_matrix_rep(make_lie_slant_vector(1, 2))
    P = rep.pi_X
    assert exact_equal(P @ P, np.trace(P) * P)
    for t in (F(-3), F(1, 7), F(5)):
        assert np.trace(t * P) == t / rep.a


def test_group_exponential_diagonal():
    assert_allclose(group_exponential(np.diag([0.0, 1.0, 0.0])), np.diag([1, math.e, 1]), rtol=1e-15)


def test_group_exponential_errors():
    with pytest.raises(TraceZero):
        group_exponential(np.zeros((3, 3)))
    with pytest.raises(NotProjectiveFamily):
        group_exponential(np.diag([1.0, 2.0, 0.0]))


@pytest.mark.parametrize("t", [-1.0, 0.5, 3.0])
def test_group_exponential_vs_series(t):
    rep = lie_matrix_rep(make_lie_slant_vector(1, 2))
    A = t * rep.pi_X.astype(float)
    assert np.max(np.abs(group_exponential(A) - series_expm(A))) < 1e-10


def test_group_curve_examples():
    v = make_lie_slant_vector(1, 2)
    assert np.array_equal(group_curve(v, 0.0), np.eye(3))
    assert group_curve(v, 2.0)[1, 1] == pytest.approx(1 + (math.e - 1) * 17 / 2, rel=1e-14)
    for t in (-1.0, 0.5, 2.0):
        Pi = group_curve(v, t)
        assert_allclose(Pi, displayed_Pi_C(1, 2, t), rtol=1e-14, atol=1e-14)
        # Pi(C(t)) = I + a (exp(t/a) - 1) pi(X)
        assert_allclose(Pi, np.eye(3) + 2 * math.expm1(t / 2) * lie_matrix_rep(v).pi_X.astype(float), atol=1e-13)


def test_one_parameter_subgroup():
    v = make_lie_slant_vector(1, 2)
    rng = np.random.default_rng(5)
    for _ in range(100):
        s, t = rng.uniform(-2, 2, size=2)
        lhs = group_curve(v, s) @ group_curve(v, t)
        assert np.max(np.abs(lhs - group_curve(v, s + t))) < 1e-10
