"""Batch front-end for the spectral and contour computations.

Commands
    spectra     dispersion tables over (n, b) grids
    universal   samples of phi_n, phi_{n,b} and Psi_b (figure data)
    threshold   per-b symmetry threshold and velocity-gap table
    verify      identity suites (series vs closed forms, Jacobian checks)
    branch      bifurcation-branch continuation plus boundary curves

Configuration is flat INI-style text; every key has a matching command-line
flag and flags override file values.  Output is plain CSV with '#'-prefixed
metadata lines, 15 significant digits, deterministic across reruns.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

import numpy as np

from . import models, dispersion, contour, universal

__all__ = ["main", "RunConfig", "build_parser"]


class UsageError(Exception):
    """Bad configuration or flags; maps to exit code 2."""


class RunConfig:
    """Merged view of config-file values and command-line flags."""

    def __init__(self, file_values: dict, flag_values: dict):
        merged = dict(file_values)
        for key, val in flag_values.items():
            if val is not None:
                merged[key] = val
        self.values = merged

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def require(self, key: str):
        if key not in self.values or self.values[key] in (None, ""):
            raise UsageError(f"missing required option '{key}'")
        return self.values[key]

    def model(self) -> models.KernelModel:
        variant = self.require("model")
        spec = {"variant": variant}
        spec.update(self.values.get("params", {}))
        try:
            return models.model_from_dict(spec)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad model spec: {exc}") from exc

    def b_values(self) -> list[float]:
        return _parse_float_list(str(self.require("b")), "b")

    def n_range(self) -> list[int]:
        txt = str(self.require("n"))
        values = _parse_int_list(txt, "n")
        if not values:
            raise UsageError("empty n range")
        return values


def _parse_float_list(text: str, name: str) -> list[float]:
    """'0.5' | '0.2,0.3' | 'lo:hi:count' (inclusive linspace)."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            count = int(count)
            if count < 1:
                raise ValueError
            return [float(v) for v in np.linspace(float(lo), float(hi), count)]
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse {name} specification {text!r}") from exc


def _parse_int_list(text: str, name: str) -> list[int]:
    """'4' | '1,2,5' | 'lo:hi' (inclusive)."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse {name} specification {text!r}") from exc


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    if not os.path.exists(path):
        raise UsageError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    with open(path) as fh:
        text = fh.read()
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    parser.read_string(text)
    out: dict = {}
    params: dict = {}
    for section in parser.sections():
        for key, val in parser.items(section):
            if key.startswith("param."):
                params[key[len("param."):]] = val
            else:
                out[key] = val
    if params:
        out["params"] = params
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.15g}"
    return str(value)


def write_csv(path: str, metadata: dict, header: list[str],
              rows: list[list]) -> None:
    with open(path, "w") as fh:
        for key in metadata:
            fh.write(f"# {key} = {metadata[key]}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _out_dir(cfg: RunConfig) -> str:
    out = str(cfg.get("out", "."))
    os.makedirs(out, exist_ok=True)
    return out


def _model_metadata(cfg: RunConfig) -> dict:
    meta = {"model": cfg.get("model", "")}
    params = cfg.get("params", {})
    for key in sorted(params):
        meta[f"param.{key}"] = params[key]
    return meta


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_spectra(cfg: RunConfig) -> int:
    model = cfg.model()
    bs = cfg.b_values()
    ns = cfg.n_range()
    header = ["n", "b", "lambda_nb", "lambda_n1", "lambda_tilde_nb",
              "p_nb", "p_n1", "p_tilde_nb", "c_b", "c_tilde_b", "source",
              "a_nb", "b_nb", "delta", "omega_plus", "omega_minus",
              "classification"]
    rows = []
    for b in bs:
        for n in ns:
            pt = dispersion.dispersion_point(model, n, b)
            r = pt.row
            source = "closed-form" if r.source.get("lambda") == "closed" \
                else r.source.get("lambda", "")
            rows.append([n, b, r.lam_nb, r.lam_n1, r.lamt_nb, r.p_nb,
                         r.p_n1, r.pt_nb, r.c_b, r.ct_b, source, pt.a_nb,
                         pt.b_nb, pt.delta, pt.omega_plus, pt.omega_minus,
                         pt.classification])
    path = os.path.join(_out_dir(cfg), "spectra.csv")
    meta = {"command": "spectra", **_model_metadata(cfg),
            "b": cfg.get("b"), "n": cfg.get("n")}
    write_csv(path, meta, header, rows)
    print(path)
    return 0


def cmd_universal(cfg: RunConfig) -> int:
    n = int(cfg.get("fold", 1))
    bs = _parse_float_list(str(cfg.get("b", "0.5")), "b")
    x_max = float(cfg.get("x_max", 20.0))
    points = int(cfg.get("x_points", 201))
    if points < 2 or x_max <= 0:
        raise UsageError("universal needs x_max > 0 and x_points >= 2")
    xs = np.linspace(0.0, x_max, points)
    out = _out_dir(cfg)
    header = ["x", f"phi_{n}", f"phi_{n}_b", "psi_b"]
    for b in bs:
        if not 0.0 < b < 1.0:
            raise UsageError("universal needs b in (0, 1)")
        rows = []
        for x in xs:
            rows.append([float(x), universal.phi_n(n, x),
                         universal.phi_nb(n, b, x), universal.psi_b(b, x)])
        path = os.path.join(out, f"universal_b{b:g}.csv")
        write_csv(path, {"command": "universal", "fold": n, "b": f"{b:g}",
                         "x_max": f"{x_max:g}", "x_points": points},
                  header, rows)
        print(path)
    return 0


def cmd_threshold(cfg: RunConfig) -> int:
    model = cfg.model()
    bs = cfg.b_values()
    k_max = int(cfg.get("k_max", 10))
    header = ["b", "min_fold", "delta_inf", "v1", "v2", "in_s", "found"]
    closed_check = model.variant in ("EulerAnnulus", "EulerExterior")
    if closed_check:
        header.append("closed_threshold")
    rows = []
    for b in bs:
        v1, v2 = dispersion.v_constants(model, b)
        dinf = dispersion.delta_inf(model, b)
        in_s = dispersion.s_membership(model, b)
        try:
            fold = dispersion.min_fold(model, b, k_max=k_max)
            found = True
        except dispersion.FoldNotFound:
            fold, found = None, False
        row = [b, fold, dinf, v1, v2, in_s, found]
        if closed_check:
            row.append(_closed_threshold(model, b))
        rows.append(row)
    path = os.path.join(_out_dir(cfg), "threshold.csv")
    meta = {"command": "threshold", **_model_metadata(cfg), "b": cfg.get("b")}
    write_csv(path, meta, header, rows)
    print(path)
    return 0


def _closed_threshold(model: models.KernelModel, b: float) -> int | None:
    test = (dispersion.annulus_fold_inequality
            if model.variant == "EulerAnnulus"
            else dispersion.exterior_fold_inequality)
    for n in range(1, 201):
        if test(model, b, n):
            return n
    return None


def cmd_verify(cfg: RunConfig) -> int:
    suites = []

    # Bessel-zero summation identity for the shifted kernel on the disc
    samples = [(0.9, 0.4, 1.0), (0.7, 0.7, 2.0), (0.5, 0.2, 0.5),
               (0.95, 0.9, 3.0), (0.8, 0.6, 1.0)]
    err = max(abs(s - c) for s, c in
              (models.qgsw_disc_identity(x, y, e, truncation=500)
               for x, y, e in samples))
    suites.append(("qgsw-summation-identity", err, 1e-6))

    # closed forms vs measure quadrature for the flat-measure kernel
    from .cmkernel import euler_flat
    closed = models.euler_plane()
    custom = models.custom_convolution(euler_flat())
    err = 0.0
    for n in range(1, 8):
        rc = dispersion.spectral_row(closed, n, 0.5)
        rq = dispersion.spectral_row(custom, n, 0.5)
        err = max(err, abs(rc.lam_nb - rq.lam_nb), abs(rc.lam_n1 - rq.lam_n1),
                  abs(rc.lamt_nb - rq.lamt_nb))
    suites.append(("closed-vs-quadrature", err, 1e-7))

    # dual-Bessel summation against the hypergeometric-plus-integral form
    sets = [(1, 1, 1, 1.5, 0.6, 0.6), (2, 2, 2, 1.5, 0.8, 0.8),
            (1, 1, 1, 1.25, 0.4, 0.9)]
    err = max(abs(models.sneddon_series(bi, gi, n, q, a, bb, truncation=2000)
                  - models.sneddon_integral(bi, gi, n, q, a, bb))
              for bi, gi, n, q, a, bb in sets)
    suites.append(("dual-bessel-summation", err, 1e-5))

    # finite-difference Jacobian of the contour functional vs dispersion
    from dataclasses import replace
    model = models.euler_plane()
    b, m, n_modes, omega = 0.5, 4, 4, 0.3
    state = contour.trivial_state(b, m, n_modes, omega)
    eps = 1e-5
    err = 0.0
    for k in range(1, n_modes + 1):
        n = k * m
        target = -n * dispersion.q_matrix(model, n, b, omega)
        block = np.zeros((2, 2))
        for col in range(2):
            coeffs = [state.a1.copy(), state.a2.copy()]
            coeffs[col][k - 1] = eps
            rp = contour.eval_f(model, replace(state, a1=coeffs[0],
                                               a2=coeffs[1]))
            coeffs[col][k - 1] = -eps
            rm = contour.eval_f(model, replace(state, a1=coeffs[0],
                                               a2=coeffs[1]))
            block[0, col] = (rp.s1[k - 1] - rm.s1[k - 1]) / (2 * eps)
            block[1, col] = (rp.s2[k - 1] - rm.s2[k - 1]) / (2 * eps)
        err = max(err, float(np.max(np.abs(block - target))
                             / np.max(np.abs(target))))
    suites.append(("contour-jacobian", err, 1e-4))

    rows = []
    failed = False
    for name, err, tol in suites:
        ok = err < tol
        failed = failed or not ok
        rows.append([name, err, tol, ok])
        print(f"{name}: {'PASS' if ok else 'FAIL'} "
              f"(max error {err:.3e}, tolerance {tol:g})")
    path = os.path.join(_out_dir(cfg), "verify.csv")
    write_csv(path, {"command": "verify"},
              ["suite", "max_error", "tolerance", "passed"], rows)
    print(path)
    return 1 if failed else 0


def cmd_branch(cfg: RunConfig) -> int:
    model = cfg.model()
    bs = cfg.b_values()
    if len(bs) != 1:
        raise UsageError("branch expects a single b value")
    b = bs[0]
    m = int(cfg.require("m"))
    branch = str(cfg.get("branch", "+"))
    if branch not in ("+", "-"):
        raise UsageError("branch selector must be '+' or '-'")
    s_max = float(cfg.get("s_max", 1e-3))
    steps = int(cfg.get("steps", 8))
    n_modes = int(cfg.get("modes", 8))
    out = _out_dir(cfg)
    point = dispersion.dispersion_point(model, m, b)
    if point.delta <= dispersion.DEGENERACY_TOL:
        raise UsageError(f"Delta at fold {m} is not positive; no branch")
    omega0 = point.omega_plus if branch == "+" else point.omega_minus

    partial = None
    try:
        pts = contour.branch_continue(model, b, m, branch=branch,
                                      s_max=s_max, steps=steps,
                                      n_modes=n_modes)
    except contour.BranchError as exc:
        pts = exc.points
        partial = str(exc)

    table = [(0.0, contour.trivial_state(b, m, n_modes, omega0))] + pts
    header = (["s", "omega"]
              + [f"a1_{k}" for k in range(1, n_modes + 1)]
              + [f"a2_{k}" for k in range(1, n_modes + 1)])
    rows = [[s, st.omega, *st.a1, *st.a2] for s, st in table]
    meta = {"command": "branch", **_model_metadata(cfg), "b": f"{b:g}",
            "m": m, "branch": branch, "s_max": f"{s_max:g}", "steps": steps,
            "modes": n_modes}
    if partial:
        meta["warning"] = (f"continuation stopped early: last converged "
                          f"s = {table[-1][0]:g}")
    write_csv(os.path.join(out, "branch.csv"), meta, header, rows)
    print(os.path.join(out, "branch.csv"))
    for idx, (s, st) in enumerate(table):
        inner, outer = contour.boundary_export(st)
        theta = st.theta_grid()
        rows = [[t, z1.real, z1.imag, z2.real, z2.imag]
                for t, z1, z2 in zip(theta, inner, outer)]
        path = os.path.join(out, f"boundary_{idx:03d}.csv")
        write_csv(path, {"command": "branch", "s": _fmt(float(s))},
                  ["theta", "x_inner", "y_inner", "x_outer", "y_outer"], rows)
    if partial:
        print(partial, file=sys.stderr)
        return 1
    return 0


_COMMANDS = {
    "spectra": cmd_spectra,
    "universal": cmd_universal,
    "threshold": cmd_threshold,
    "verify": cmd_verify,
    "branch": cmd_branch,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vstate",
        description="Spectral tables, thresholds and bifurcation branches "
                    "for doubly connected rotating patches.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="INI config file")
        p.add_argument("--model", default=None, help="model variant name")
        p.add_argument("--param", action="append", default=None,
                       metavar="KEY=VAL", help="model parameter, repeatable")
        p.add_argument("--b", default=None,
                       help="b values: single, comma list, or lo:hi:count")
        p.add_argument("--n", default=None,
                       help="mode range: single, comma list, or lo:hi")
        p.add_argument("--m", default=None, type=int, help="fold symmetry")
        p.add_argument("--out", default=None, help="output directory")
        if name == "universal":
            p.add_argument("--fold", default=None, type=int)
            p.add_argument("--x-max", dest="x_max", default=None, type=float)
            p.add_argument("--x-points", dest="x_points", default=None,
                           type=int)
        if name == "threshold":
            p.add_argument("--k-max", dest="k_max", default=None, type=int)
        if name == "branch":
            p.add_argument("--branch", default=None, choices=["+", "-"])
            p.add_argument("--s-max", dest="s_max", default=None, type=float)
            p.add_argument("--steps", default=None, type=int)
            p.add_argument("--modes", default=None, type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flag_values = {k: v for k, v in vars(args).items()
                   if k not in ("command", "config", "param")}
    try:
        file_values = _load_config(args.config)
        if args.param:
            params = dict(file_values.get("params", {}))
            for item in args.param:
                if "=" not in item:
                    raise UsageError(f"--param needs KEY=VAL, got {item!r}")
                key, val = item.split("=", 1)
                params[key.strip()] = val.strip()
            flag_values["params"] = params
        cfg = RunConfig(file_values, flag_values)
        return _COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (dispersion.FoldNotFound, contour.GeometryError,
            contour.BranchError, np.linalg.LinAlgError, ArithmeticError,
            RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
