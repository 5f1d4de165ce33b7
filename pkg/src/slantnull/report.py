"""End-to-end self check used by ``slantnull report``."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import bsolver, constructions, curves, models, structure


def _line(ok: bool, name: str, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"


def run_report() -> tuple[list[str], bool]:
    lines = []
    ok_all = True

    def record(ok, name, detail):
        nonlocal ok_all
        ok_all &= bool(ok)
        lines.append(_line(ok, name, detail))

    flat = models.FlatCosymplecticModel()
    lie = models.LieGroupModel(1.0, 1.0)
    for m, want in ((flat, "F0"), (lie, "F1")):
        rep = structure.check_structure(m.structure)
        cls = models.classify(m)
        worst = max(rep.residuals.values())
        record(rep.passed and cls.label == want, f"structure/{m.name}",
               f"max axiom residual {worst:.1e}, class {cls.label}")

    for branch in ("C1", "C2"):
        for a, u in ((1.0, 0.0), (2.0, 0.3), (-1.0, 0.0)):
            mc = constructions.make_minkowski_curve(branch, a, u)
            c = mc.as_curve(-1.0, 1.0, 201)
            fr = curves.unique_distinguished_frame(c, flat)
            cv = curves.curvatures(c, flat, fr)
            rep = curves.verify_cartan(c, flat, fr, cv)
            tau_err = float(np.max(np.abs(cv.k2 + 1 / (2 * a * a))))
            record(rep.passed and tau_err < 1e-6, f"cartan/{branch}(a={a:g}, u={u:g})",
                   f"tau={cv.tau:.9f}, max residual {max(rep.residuals.values()):.1e}")

    v = constructions.make_lie_slant_vector(1, 2)
    m = v.model(exact=True)
    acc = m.connection.nabla(v.X, v.X)
    k1 = structure.metric_eval(m.structure.g, acc, v.W1)
    tau = structure.metric_eval(m.structure.g, m.connection.nabla(v.X, v.N1), v.W1)
    record(all(acc == v.W1) and k1 == 1 and tau == -Fraction(1, 8),
           "lie/exact(c=1, a=2)", f"X={[str(x) for x in v.X]}, k1={k1}, tau={tau}")

    worst = 0.0
    for a in (1.0, 2.0, -1.0, 0.5):
        sol = bsolver.solve_b_numeric(bsolver.BOdeProblem(a=a, b0=0.0, t0=0.0, t1=1.0, step=1e-3))
        ref = bsolver.analytic_b_F0(a, bsolver.invert_b_for_u(a, 0.0, 0.0), sol.t)
        worst = max(worst, float(np.max(np.abs(sol.b - ref))))
    record(worst < 1e-7, "b-ode/rk4-vs-closed-form", f"max |diff| {worst:.1e}")
    return lines, ok_all
