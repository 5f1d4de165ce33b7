"""Command-line front end.

Exit codes::

    0  success
    1  a verification failed (residual above tolerance, curve not slant null)
    2  bad configuration or arguments
    3  curve is geodesic (no distinguished frame)
    4  slant constant a = 0
    5  b-ODE solution overflowed
    6  Lie example outside its domain (c*a <= 0 or c = +-1/a^2)

Options may be given before or after the subcommand, or as ``key = value``
lines in a ``--config`` file; command-line flags take precedence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bsolver, constructions, curves, models, structure
from .errors import (
    ConfigError,
    DegenerateB,
    GeodesicCurve,
    NonFinite,
    OrientationDomain,
    SlantNullError,
    ZeroSlant,
)

COMMANDS = ("verify-structure", "frame", "curvatures", "solve-b", "lie-rep", "report")

EXIT_CODES = [
    (ConfigError, 2),
    (GeodesicCurve, 3),
    (ZeroSlant, 4),
    (NonFinite, 5),
    (OrientationDomain, 6),
    (DegenerateB, 6),
    (SlantNullError, 1),
]

DEFAULT_FORMAT = {
    "verify-structure": "text",
    "frame": "csv",
    "curvatures": "csv",
    "solve-b": "csv",
    "lie-rep": "json",
    "report": "text",
}


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    c1: float = 1.0
    c2: float | None = None
    curve: str = "c1"
    samples_file: str | None = None
    a: float = 1.0
    u: float = 0.0
    offsets: tuple[float, float, float] = (0.0, 0.0, 0.0)
    t0: float | None = None
    t1: float = 1.0
    samples: int = 201
    beta: float | None = None
    b0: float = 0.0
    step: float = 1e-3
    theta_c: float = 0.0
    theta_phic: float = 0.0
    t: list[float] = field(default_factory=lambda: [0.0, 1.0])
    tol_structure: float = structure.STRUCTURE_TOL
    tol_classify: float = models.CLASSIFY_TOL
    tol_null: float = curves.NULL_TOL
    tol_gram: float = curves.GRAM_TOL
    tol_cartan: float = curves.CARTAN_EQ_TOL
    tol_curvature: float = curves.CARTAN_CURVATURE_TOL
    output: str | None = None
    out_path: str | None = None

    def __post_init__(self):
        if self.t0 is None:
            self.t0 = 0.0 if self.command == "solve-b" else -1.0
        if self.output is None:
            self.output = DEFAULT_FORMAT[self.command]
        if not self.t0 < self.t1:
            raise ConfigError("need t0 < t1")
        if self.samples < 3:
            raise ConfigError("need samples >= 3")
        for name in ("tol_structure", "tol_classify", "tol_null", "tol_gram", "tol_cartan", "tol_curvature"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name.replace('_', '-')} must be positive")

    def resolved_c2(self) -> float:
        return self.c1 if self.c2 is None else self.c2


def _common_options(parser: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    add = parser.add_argument
    add("--config", default=S, help="key=value configuration file")
    add("--model", choices=("flat", "lie"), default=S)
    add("--c1", type=float, default=S, help="Lie parameter c1 (also c for the lie curve)")
    add("--c2", type=float, default=S)
    add("--curve", default=S, help="c1, c2, lie or custom-samples-file")
    add("--samples-file", default=S, help="CSV with columns t,x1,x2,x3")
    add("--a", type=float, default=S, help="slant constant")
    add("--u", type=float, default=S)
    add("--offsets", type=float, nargs=3, default=S)
    add("--t0", type=float, default=S)
    add("--t1", type=float, default=S)
    add("--samples", type=int, default=S)
    add("--beta", type=float, default=S, help="use the general frame with this constant beta")
    add("--b0", type=float, default=S)
    add("--step", type=float, default=S)
    add("--theta-c", type=float, default=S)
    add("--theta-phic", type=float, default=S)
    add("--t", type=float, action="append", default=S, help="group parameter (repeatable)")
    for tol in ("structure", "classify", "null", "gram", "cartan", "curvature"):
        add(f"--tol-{tol}", type=float, default=S)
    add("--format", dest="output", choices=("csv", "json", "text"), default=S)
    add("--out", dest="out_path", default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slantnull", description=__doc__.split("\n\n")[0])
    _common_options(parser)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common_options(p)
        if name in ("frame", "curvatures"):
            p.add_argument("positional_samples_file", nargs="?", default=None, metavar="SAMPLES_FILE")
    return parser


_FIELD_TYPES = {
    "c1": float, "c2": float, "a": float, "u": float, "t0": float, "t1": float, "samples": int,
    "beta": float, "b0": float, "step": float, "theta_c": float, "theta_phic": float,
}


def _from_config_file(path: str) -> dict:
    try:
        raw = models.parse_key_value(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    for k, v in raw.items():
        key = k.replace("-", "_")
        try:
            if key == "offsets":
                out[key] = tuple(float(x) for x in v.replace(",", " ").split())
            elif key == "t":
                out[key] = [float(x) for x in v.replace(",", " ").split()]
            elif key.startswith("tol_"):
                out[key] = float(v)
            elif key == "format":
                out["output"] = v
            elif key == "out":
                out["out_path"] = v
            else:
                out[key] = _FIELD_TYPES.get(key, str)(v)
        except ValueError:
            raise ConfigError(f"config key {k}: bad value {v!r}") from None
    return out


def make_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    merged = {}
    if "config" in ns:
        merged.update(_from_config_file(ns.pop("config")))
    pos = ns.pop("positional_samples_file", None)
    if pos is not None:
        ns.setdefault("samples_file", pos)
    merged.update(ns)
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "offsets" in merged:
        if len(merged["offsets"]) != 3:
            raise ConfigError("offsets needs three values")
        merged["offsets"] = tuple(merged["offsets"])
    return RunConfig(**merged)


# ---------------------------------------------------------------------------
# output helpers


def _num(x) -> str:
    return f"{float(x):.17g}"


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else _num(v) for v in r])
    return buf.getvalue()


def _summary_text(summary: dict) -> str:
    lines = []
    for k, v in summary.items():
        if isinstance(v, dict):
            lines.append(f"{k}:")
            lines.extend(f"  {kk}: {vv}" for kk, vv in v.items())
        else:
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def emit(cfg: RunConfig, header, rows, summary: dict, stdout, stderr) -> None:
    """Write rows plus summary in the configured format."""
    if cfg.output == "json":
        payload = {"columns": list(header), "rows": [[float(v) if not isinstance(v, str) else v for v in r] for r in rows],
                   "summary": summary}
        text = json.dumps(payload, indent=2) + "\n"
        extra = ""
    elif cfg.output == "csv":
        text = write_csv(header, rows)
        extra = _summary_text(summary)
    else:
        body = write_csv(header, rows).replace(",", "\t")
        text = body + "\n" + _summary_text(summary)
        extra = ""
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        stdout.write(text)
    if extra:
        stderr.write(extra)


# ---------------------------------------------------------------------------
# commands


def _model(cfg: RunConfig) -> models.ManifoldModel:
    kind = cfg.model or "flat"
    if kind == "lie":
        return models.LieGroupModel(cfg.c1, cfg.resolved_c2())
    return models.FlatCosymplecticModel()


def cmd_verify_structure(cfg: RunConfig, stdout, stderr) -> int:
    m = _model(cfg)
    rep = structure.check_structure(m.structure, cfg.tol_structure)
    cls = models.classify(m, cfg.tol_classify)
    ok = rep.passed and cls.label != "neither"
    summary = {
        "model": m.name,
        "axioms": {k: f"{v:.3e} (tol {cfg.tol_structure:g})" for k, v in rep.residuals.items()},
        "class": cls.label,
        "max |F|": f"{cls.max_F:.3e}",
        "F1 identity residual": f"{cls.f1_residual:.3e}",
        "nabla xi residual": f"{cls.nabla_xi_residual:.3e}",
        "status": "PASS" if ok else "FAIL",
    }
    if cfg.output == "json":
        text = json.dumps(summary, indent=2) + "\n"
    else:
        text = _summary_text(summary)
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        stdout.write(text)
    return 0 if ok else 1


def read_samples_file(path: str) -> curves.CurveRep:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise ConfigError(f"cannot read samples file {path}: {exc}") from None
    try:
        float(rows[0][0])
    except (ValueError, IndexError):
        rows = rows[1:]
    try:
        data = np.array([[float(x) for x in r] for r in rows])
    except ValueError as exc:
        raise ConfigError(f"samples file {path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 4:
        raise ConfigError(f"samples file {path}: expected 4 columns t,x1,x2,x3")
    return curves.sampled_curve(data[:, 0], data[:, 1:])


def resolve_curve(cfg: RunConfig):
    """(curve, model) for the configured curve name."""
    name = cfg.curve.lower()
    if name in ("c1", "c2"):
        if cfg.model == "lie":
            raise ConfigError(f"curve {name} lives on the flat model")
        mc = constructions.make_minkowski_curve(name.upper(), cfg.a, cfg.u, cfg.offsets)
        return mc.as_curve(cfg.t0, cfg.t1, cfg.samples), models.FlatCosymplecticModel()
    if name == "lie":
        if cfg.model == "flat":
            raise ConfigError("curve lie lives on the lie model")
        if cfg.c2 is not None and cfg.c2 != cfg.c1:
            raise ConfigError("the lie curve needs c1 == c2")
        v = constructions.make_lie_slant_vector(cfg.c1, cfg.a)
        return v.as_curve(cfg.t0, cfg.t1, cfg.samples), v.model()
    if name in ("custom", "custom-samples-file"):
        if not cfg.samples_file:
            raise ConfigError("custom curve needs a samples file")
        if cfg.model == "lie":
            raise ConfigError("sampled curves are coordinate curves on the flat model")
        return read_samples_file(cfg.samples_file), models.FlatCosymplecticModel()
    raise ConfigError(f"unknown curve {cfg.curve!r}")


def _frame_for(cfg, c, m):
    if cfg.beta is None:
        return curves.unique_distinguished_frame(c, m, null_tol=cfg.tol_null)
    return curves.general_frame(c, m, cfg.beta, cfg.tol_null)


def cmd_frame(cfg: RunConfig, stdout, stderr) -> int:
    c, m = resolve_curve(cfg)
    cert = curves.slant_null_check(c, m, cfg.tol_null)
    frame = _frame_for(cfg, c, m)
    cv = curves.curvatures(c, m, frame)
    cartan = curves.verify_cartan(c, m, frame, cv, cfg.tol_cartan, cfg.tol_curvature)
    gram = frame.gram_residuals()
    g = m.structure.g
    per_sample_gram = np.max(np.abs(np.stack([
        structure.metric_eval(g, frame.tangent, frame.N) - 1,
        structure.metric_eval(g, frame.W, frame.W) - 1,
        structure.metric_eval(g, frame.N, frame.N),
        structure.metric_eval(g, frame.N, frame.W),
        structure.metric_eval(g, frame.tangent, frame.W),
    ])), axis=0)
    header = ["t", "C_0", "C_1", "C_2", "N_0", "N_1", "N_2", "W_0", "W_1", "W_2", "b", "h", "k1", "k2", "gram_residual"]
    rows = [
        [t, *frame.tangent[i], *frame.N[i], *frame.W[i], frame.b[i], cv.h[i], cv.k1[i], cv.k2[i], per_sample_gram[i]]
        for i, t in enumerate(frame.ts)
    ]
    gram_ok = max(gram.values()) < cfg.tol_gram
    summary = {
        "curve": cfg.curve,
        "a": cert.a,
        "null_residual": cert.max_null_residual,
        "slant_residual": cert.max_slant_residual,
        "distinguished": frame.distinguished,
        "tau": cv.tau,
        "k1_max_err": cartan.residuals["k1 - 1"],
        "h_max": cartan.residuals["h"],
        "gram": gram,
        "gram_pass": gram_ok,
        "cartan": cartan.residuals,
        "cartan_pass": cartan.passed,
        "orientation_positive": bool(np.all(frame.orientation > 0)),
        "gamma_positive": frame.gamma_positive,
        "status": "PASS" if (gram_ok and cartan.passed) else "FAIL",
    }
    emit(cfg, header, rows, summary, stdout, stderr)
    return 0 if summary["status"] == "PASS" else 1


def cmd_curvatures(cfg: RunConfig, stdout, stderr) -> int:
    c, m = resolve_curve(cfg)
    geo = curves.geodesic_test(c, m)
    frame = _frame_for(cfg, c, m)
    cv = curves.curvatures(c, m, frame)
    sb = curves.compute_b(c, m)
    header = ["t", "b", "db", "h", "k1", "k2", "h_closed", "k1_closed", "geodesic_residual"]
    rows = [
        [t, sb.b[i], sb.db[i], cv.h[i], cv.k1[i], cv.k2[i], cv.h_closed[i], cv.k1_closed[i], geo.residuals[i]]
        for i, t in enumerate(cv.ts)
    ]
    summary = {
        "curve": cfg.curve,
        "geodesic": geo.geodesic,
        "geodesic_residual": geo.residual,
        "tau": cv.tau,
        "max |h - h_closed|": float(np.max(np.abs(cv.h - cv.h_closed))),
        "max |k1 - k1_closed|": float(np.max(np.abs(cv.k1 - cv.k1_closed))),
    }
    emit(cfg, header, rows, summary, stdout, stderr)
    return 0


def cmd_solve_b(cfg: RunConfig, stdout, stderr) -> int:
    p = bsolver.BOdeProblem(
        a=cfg.a, b0=cfg.b0, t0=cfg.t0, t1=cfg.t1, step=cfg.step,
        theta_C=lambda t: cfg.theta_c, theta_phiC=lambda t: cfg.theta_phic,
    )
    sol = bsolver.solve_b_numeric(p)
    flat = cfg.theta_c == 0 and cfg.theta_phic == 0
    summary = {"a": cfg.a, "b0": cfg.b0, "steps": len(sol.t) - 1}
    if flat:
        ana = bsolver.solve_b_analytic(cfg.a, cfg.b0, cfg.t0, sol.t)
        diff = sol.b - ana.b
        rows = [[t, sol.b[i], ana.b[i], diff[i]] for i, t in enumerate(sol.t)]
        summary.update(u=ana.u, max_abs_diff=float(np.max(np.abs(diff))))
    else:
        rows = [[t, sol.b[i], "", ""] for i, t in enumerate(sol.t)]
    emit(cfg, ["t", "b_numeric", "b_analytic", "diff"], rows, summary, stdout, stderr)
    return 0


def _matrix_json(M) -> dict:
    return {"exact": [[_frac(x) for x in row] for row in M], "float": [[float(x) for x in row] for row in M]}


def _vector_json(v) -> dict:
    return {"exact": [_frac(x) for x in v], "float": [float(x) for x in v]}


def cmd_lie_rep(cfg: RunConfig, stdout, stderr) -> int:
    if cfg.c2 is not None and cfg.c2 != cfg.c1:
        raise ConfigError("the lie example needs c1 == c2")
    v = constructions.make_lie_slant_vector(cfg.c1, cfg.a)
    rep = constructions.lie_matrix_rep(v)
    payload = {
        "c": _frac(v.c),
        "a": _frac(v.a),
        "b": {"exact": _frac(v.b), "float": float(v.b)},
        "vectors": {name: _vector_json(getattr(v, name)) for name in ("X", "phiX", "N1", "W1")},
        "matrices": {
            name: _matrix_json(getattr(rep, name))
            for name in ("pi_E0", "pi_E1", "pi_E2", "pi_X", "pi_phiX", "pi_N1", "pi_W1")
        },
        "Pi_C": [{"t": float(t), "matrix": rep.Pi_C(t).tolist()} for t in cfg.t],
        "checks": {
            "null_residual": _frac(v.null_residual),
            "cartan_condition_residual": _frac(v.cartan_residual),
            "trace_pi_X": _frac(np.trace(rep.pi_X)),
        },
    }
    text = json.dumps(payload, indent=2) + "\n"
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        stdout.write(text)
    return 0


def cmd_report(cfg: RunConfig, stdout, stderr) -> int:
    from .report import run_report

    lines, ok = run_report()
    text = "\n".join(lines) + "\n"
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        stdout.write(text)
    return 0 if ok else 1


HANDLERS = {
    "verify-structure": cmd_verify_structure,
    "frame": cmd_frame,
    "curvatures": cmd_curvatures,
    "solve-b": cmd_solve_b,
    "lie-rep": cmd_lie_rep,
    "report": cmd_report,
}


def exit_code_for(exc: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    raise exc


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = make_config(argv)
        return HANDLERS[cfg.command](cfg, stdout, stderr)
    except SlantNullError as exc:
        stderr.write(f"error: {exc}\n")
        return exit_code_for(exc)


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
