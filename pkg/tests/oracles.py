"""Independent reference computations used to check the library.

None of these call into the code paths they are used to verify.
"""

import itertools
import math

import numpy as np
from scipy.optimize import fsolve


def koszul_by_linear_solve(G, C):
    """Levi-Civita coefficients from the 27 torsion + 27 compatibility equations.

    Unknown gamma[i, j, k] (k-component of nabla_{E_i} E_j) solved by least squares.
    """
    G = np.asarray(G, dtype=float)
    C = np.asarray(C, dtype=float)
    idx = {ijk: n for n, ijk in enumerate(itertools.product(range(3), repeat=3))}
    rows, rhs = [], []
    for i, j, k in itertools.product(range(3), repeat=3):
        r = np.zeros(27)
        r[idx[i, j, k]] += 1
        r[idx[j, i, k]] -= 1
        rows.append(r)
        rhs.append(C[i, j, k])
    for i, j, k in itertools.product(range(3), repeat=3):
        r = np.zeros(27)
        for l in range(3):
            r[idx[i, j, l]] += G[l, k]
            r[idx[i, k, l]] += G[l, j]
        rows.append(r)
        rhs.append(0.0)
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return sol.reshape(3, 3, 3)


def gram_system_frame(a, b, beta):
    """Solve the Gram relations numerically for (alpha, gamma, lambda, mu, nu).

    Works over the basis (xi, C', phi C') whose Gram matrix is fixed by
    g(xi,xi)=1, g(xi,C')=a, g(C',C')=0, g(C',phi C')=b, g(phi C',phi C')=a^2,
    g(xi,phi C')=0.  Among the roots, the one with det[C', N, W] of the same
    sign as det[C', xi, phi C'] is returned.
    """
    B = np.array([[1.0, a, 0.0], [a, 0.0, b], [0.0, b, a * a]])
    C = np.array([0.0, 1.0, 0.0])

    def eqs(x):
        al, ga, la, mu, nu = x
        W = np.array([al, beta, ga])
        N = np.array([la, mu, nu])
        return [C @ B @ N - 1, W @ B @ W - 1, N @ B @ N, N @ B @ W, C @ B @ W]

    ref = np.linalg.det(np.column_stack([C, [1, 0, 0], [0, 0, 1]]))
    rng = np.random.default_rng(0)
    for _ in range(200):
        x0 = rng.normal(scale=2.0, size=5)
        x, info, ier, _ = fsolve(eqs, x0, full_output=True, xtol=1e-14)
        if ier != 1 or np.max(np.abs(eqs(x))) > 1e-11:
            continue
        al, ga, la, mu, nu = x
        det = np.linalg.det(np.column_stack([C, [la, mu, nu], [al, beta, ga]]))
        if det * ref > 0:
            return x
    raise RuntimeError("no positively oriented root found")


def series_expm(A, terms=30, squarings=None):
    """Truncated Taylor series with scaling and squaring."""
    A = np.asarray(A, dtype=float)
    norm = np.max(np.sum(np.abs(A), axis=1))
    s = squarings if squarings is not None else max(0, int(math.ceil(math.log2(norm))) + 4 if norm > 0 else 0)
    X = A / 2.0**s
    out = np.eye(len(A))
    term = np.eye(len(A))
    for k in range(1, terms):
        term = term @ X / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def flat_null_tangent(a, b):
    """A null tangent (x1, x2, a) in the flat model with 2 x1 x2 = b."""
    x1 = math.sqrt((a * a + math.sqrt(a**4 + b * b)) / 2)
    return np.array([x1, b / (2 * x1), a])


# closed-form matrix displays, written out entry by entry

def displayed_pi_X(c, a):
    s = c**2 * a**4
    return [[0, 0, 0], [0, (s + 1) / (2 * a), (s + 1) / (2 * a)], [0, (1 - s) / (2 * a), (1 - s) / (2 * a)]]


def displayed_pi_phiX(c, a):
    s = c**2 * a**4
    return [[0, 0, 0], [0, (s - 1) / (2 * a), (s - 1) / (2 * a)], [0, (s + 1) / (2 * a), (s + 1) / (2 * a)]]


def displayed_pi_N1(c, a):
    s = c**2 * a**4
    return [[0, 0, 0], [0, -(s + 1) / (4 * a**3), -(s + 1) / (4 * a**3)], [0, (s - 1) / (4 * a**3), (s - 1) / (4 * a**3)]]


def displayed_pi_W1(c, a):
    s = c**2 * a**4
    return [[0, 0, 0], [0, (1 - s) / (2 * a**2), (1 - s) / (2 * a**2)], [0, (1 + s) / (2 * a**2), (1 + s) / (2 * a**2)]]


def displayed_Pi_C(c, a, t):
    """Group matrix of exp(tX), with the exponential factor read as exp(t/a) - 1."""
    s = c**2 * a**4
    f = math.expm1(t / a)
    return np.array([
        [1, 0, 0],
        [0, 1 + f * (s + 1) / 2, f * (s + 1) / 2],
        [0, f * (1 - s) / 2, 1 + f * (1 - s) / 2],
    ], dtype=float)
