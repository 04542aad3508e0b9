"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bargmann import verify_bargmann_relation, verify_phi_identity
from .core import SampledSignal, standard_window
from .formats import FormatError, dumps_report, load_points, load_signal, mixture_to_dict
from .hrt import ShiftSystem, certify_independence, fat_tail_scan
from .stft import (
    STFTGrid,
    admissible_omegas,
    frequency_step,
    stft_grid,
    stft_values,
    x_truncation,
)
from .symplectic import verify_covariance
from .uncertainty import DEFAULT_TOL, bound_cylinder, bound_sphere, sharpness_sweep, verify_theorem

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

# residual thresholds for the identity checks when --tol is not given
BARGMANN_THRESHOLD = 1e-9
COVARIANCE_THRESHOLD = 1e-8
GRAM_TOLERANCE = 1e-8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    signal: str | None = None
    points: str | None = None
    R: float | None = None
    N: float | None = None
    lambdas: tuple = ()
    theta: float | None = None
    geometry: str | None = None
    tol: float = DEFAULT_TOL
    grid: tuple = (64, 64)
    x_range: tuple = (-3.0, 3.0)
    omega_range: tuple = (-3.0, 3.0)
    method: str = "closed"
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"--format must be json or csv, got {self.format!r}")


def _grid_arg(text: str) -> tuple:
    try:
        nx, nw = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <nx>x<nw>, got {text!r}") from None
    if nx < 2 or nw < 2:
        raise argparse.ArgumentTypeError("grid sizes must be at least 2")
    return nx, nw


def _range_arg(text: str) -> tuple:
    try:
        lo, hi = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <lo>,<hi>, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("range must satisfy lo < hi")
    return lo, hi


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tfuncertainty",
                                     description="Time-frequency uncertainty verification toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, signal=True):
        if signal:
            p.add_argument("--signal", required=True, help="signal JSON file")
        p.add_argument("--window", default="gaussian", choices=["gaussian"])
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", default="json", choices=["json", "csv"])
        return p

    p = common(sub.add_parser("stft", help="export |V_g f| on a grid"))
    p.add_argument("--grid", type=_grid_arg, default=(64, 64), help="<nx>x<nw>")
    p.add_argument("--x-range", type=_range_arg, default=(-3.0, 3.0))
    p.add_argument("--omega-range", type=_range_arg, default=(-3.0, 3.0))
    p.add_argument("--method", choices=["closed", "fft"], default="closed")
    p.set_defaults(format=None)

    p = common(sub.add_parser("bound", help="evaluate both radius bounds"), signal=False)
    p.add_argument("--N", type=float, required=True)

    p = common(sub.add_parser("verify", help="measure N_effective and test the radius bound"))
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--geometry", choices=["cylinder", "sphere"], required=True)

    p = common(sub.add_parser("sharpness", help="minimal cylinder radius of dilated Gaussians"),
               signal=False)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--lambdas", "--lambda", dest="lambdas", type=_float_list, required=True)

    p = common(sub.add_parser("bargmann-check", help="Bargmann and Phi identity residuals"))
    p.add_argument("--R", type=float, default=3.0, help="radius of the checked disc")
    p.add_argument("--grid", type=_grid_arg, default=(24, 48), help="<n_radii>x<n_angles>")

    p = common(sub.add_parser("gram", help="certify independence of a finite Gabor system"),
               signal=False)
    p.add_argument("--points", required=True, help="points JSON file")

    p = common(sub.add_parser("fat-tail", help="fat-tail condition over a region"))
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--geometry", choices=["cylinder", "sphere", "exterior"], default="exterior")

    p = common(sub.add_parser("covariance", help="rotation covariance residuals"))
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--grid", type=_grid_arg, default=(41, 41))
    p.add_argument("--x-range", type=_range_arg, default=(-3.0, 3.0))
    p.add_argument("--omega-range", type=_range_arg, default=(-3.0, 3.0))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    defaults = {"bargmann-check": BARGMANN_THRESHOLD, "covariance": COVARIANCE_THRESHOLD,
                "gram": GRAM_TOLERANCE}
    tol = ns.tol if ns.tol is not None else defaults.get(ns.subcommand, DEFAULT_TOL)
    fmt = ns.format if ns.format is not None else "csv"
    return RunConfig(
        subcommand=ns.subcommand, signal=getattr(ns, "signal", None),
        points=getattr(ns, "points", None), R=getattr(ns, "R", None), N=getattr(ns, "N", None),
        lambdas=getattr(ns, "lambdas", ()), theta=getattr(ns, "theta", None),
        geometry=getattr(ns, "geometry", None), tol=tol, grid=getattr(ns, "grid", (64, 64)),
        x_range=getattr(ns, "x_range", (-3.0, 3.0)),
        omega_range=getattr(ns, "omega_range", (-3.0, 3.0)),
        method=getattr(ns, "method", "closed"), out=ns.out, format=fmt)


# ----------------------------------------------------------------- commands

def _require_json(cfg: RunConfig) -> None:
    if cfg.format != "json":
        raise UsageError(f"{cfg.subcommand} only supports --format json")


def _positive(name: str, value) -> float:
    if value is None or not (value > 0 and math.isfinite(value)):
        raise UsageError(f"--{name} must be a positive number, got {value}")
    return float(value)


def _cmd_stft(cfg: RunConfig):
    f = load_signal(cfg.signal)
    if f.d != 1:
        raise UsageError("stft grids are implemented for d = 1")
    g = standard_window(1)
    nx, nw = cfg.grid
    x_axis = np.linspace(*cfg.x_range, nx)
    omega_axis = np.linspace(*cfg.omega_range, nw)
    params = {"method": cfg.method, "grid": list(cfg.grid), "x_range": list(cfg.x_range),
              "omega_range": list(cfg.omega_range)}
    if cfg.method == "fft":
        # sample far enough out that the truncated signal misses at most tol
        half = max(abs(cfg.x_range[0]), abs(cfg.x_range[1])) + x_truncation(f, g, cfg.tol) + 1.0
        dt = 1.0 / 64
        n = int(2 ** math.ceil(math.log2(2 * half / dt)))
        sampled = SampledSignal.from_signal(f, -n * dt / 2, dt, n)
        dw = frequency_step(sampled)
        omega_axis = np.unique(np.rint(omega_axis / dw)) * dw
        if np.abs(omega_axis).max() >= np.abs(admissible_omegas(sampled)).max():
            raise UsageError("omega range exceeds the Nyquist limit of the sampling")
        grid = stft_grid(sampled, g, x_axis, omega_axis)
        params.update(dt=dt, n=n, t0=sampled.t0, omega_step=dw, oversample=4)
    else:
        X, W = np.meshgrid(x_axis, omega_axis, indexing="ij")
        grid = STFTGrid(x_axis, omega_axis, stft_values(f, g, X, W))
    if cfg.format == "csv":
        buf = io.StringIO()
        grid.write_csv(buf)
        return buf.getvalue(), EXIT_OK
    report = {"command": "stft", **params, "tol": cfg.tol, "signal": mixture_to_dict(f),
              "x": grid.x_axis, "omega": grid.omega_axis,
              "abs": [list(row) for row in np.abs(grid.values)]}
    return dumps_report(report), EXIT_OK


def _cmd_bound(cfg: RunConfig):
    _require_json(cfg)
    N = _positive("N", cfg.N)
    if not N > 1:
        raise UsageError(f"--N must exceed 1, got {N}")
    return dumps_report({"command": "bound", "N": N, "cylinder": bound_cylinder(N),
                         "sphere": bound_sphere(N)}), EXIT_OK


def _cmd_verify(cfg: RunConfig):
    _require_json(cfg)
    f = load_signal(cfg.signal)
    rep = verify_theorem(f, _positive("R", cfg.R), cfg.geometry, cfg.tol)
    out = {"command": "verify", **rep.to_dict()}
    return dumps_report(out), EXIT_OK if rep.holds else EXIT_FAILED


def _cmd_sharpness(cfg: RunConfig):
    N = _positive("N", cfg.N)
    if not N > 1:
        raise UsageError(f"--N must exceed 1, got {N}")
    if not cfg.lambdas or any(not lam > 0 for lam in cfg.lambdas):
        raise UsageError("--lambdas must be positive numbers")
    rows = sharpness_sweep(N, cfg.lambdas, cfg.tol)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "R_min_numeric", "R_min_formula", "residual"])
        for r in rows:
            w.writerow([format(v, ".17g") for v in (r.lam, r.R_min_numeric, r.R_min_formula,
                                                    r.residual)])
        return buf.getvalue(), EXIT_OK
    out = {"command": "sharpness", "N": N, "tol": cfg.tol, "bound_cylinder": bound_cylinder(N),
           "rows": [{"lambda": r.lam, "R_min_numeric": r.R_min_numeric,
                     "R_min_formula": r.R_min_formula, "residual": r.residual} for r in rows]}
    return dumps_report(out), EXIT_OK


def _cmd_bargmann(cfg: RunConfig):
    _require_json(cfg)
    f = load_signal(cfg.signal)
    if f.d != 1:
        raise UsageError("bargmann-check is implemented for d = 1")
    R = _positive("R", cfg.R)
    n_r, n_a = cfg.grid
    radii = R * np.arange(n_r + 1) / n_r
    z = (radii[:, None] * np.exp(2j * math.pi * np.arange(n_a) / n_a)[None, :]).ravel()
    relation = verify_bargmann_relation(f, z)
    phi = verify_phi_identity(f, z)
    ok = relation <= cfg.tol and phi <= cfg.tol
    out = {"command": "bargmann-check", "R": R, "grid": list(cfg.grid), "threshold": cfg.tol,
           "bargmann_residual": relation, "phi_residual": phi, "holds": ok}
    return dumps_report(out), EXIT_OK if ok else EXIT_FAILED


def _cmd_gram(cfg: RunConfig):
    _require_json(cfg)
    pts = load_points(cfg.points)
    cert = certify_independence(ShiftSystem(pts), cfg.tol)
    out = {"command": "gram", "points": [list(p.as_array()) for p in pts], **cert.to_dict()}
    return dumps_report(out), EXIT_OK if cert.certified_independent else EXIT_FAILED


def _cmd_fat_tail(cfg: RunConfig):
    _require_json(cfg)
    f = load_signal(cfg.signal)
    rep = fat_tail_scan(f, _positive("R", cfg.R), _positive("N", cfg.N), cfg.geometry, cfg.tol)
    return dumps_report({"command": "fat-tail", **rep.to_dict()}), \
        EXIT_OK if rep.holds else EXIT_FAILED


def _cmd_covariance(cfg: RunConfig):
    _require_json(cfg)
    f = load_signal(cfg.signal)
    if cfg.theta is None or not math.isfinite(cfg.theta):
        raise UsageError("--theta must be a finite number")
    nx, nw = cfg.grid
    X, W = np.meshgrid(np.linspace(*cfg.x_range, nx), np.linspace(*cfg.omega_range, nw),
                       indexing="ij")
    res = verify_covariance(f, cfg.theta, np.stack([X, W], axis=-1))
    ok = res <= cfg.tol
    out = {"command": "covariance", "theta": cfg.theta, "grid": list(cfg.grid),
           "x_range": list(cfg.x_range), "omega_range": list(cfg.omega_range),
           "threshold": cfg.tol, "residual": res, "holds": ok}
    return dumps_report(out), EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "stft": _cmd_stft, "bound": _cmd_bound, "verify": _cmd_verify,
    "sharpness": _cmd_sharpness, "bargmann-check": _cmd_bargmann, "gram": _cmd_gram,
    "fat-tail": _cmd_fat_tail, "covariance": _cmd_covariance,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = config_from_args(ns)
        text, code = COMMANDS[cfg.subcommand](cfg)
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # domain errors from the library (zero signal, mismatched dimensions, ...)
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    if cfg.out:
        try:
            with open(cfg.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc.strerror}", file=stderr)
            return EXIT_USAGE
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
