"""Command-line interface.

Subcommands:

* charfn eval   -- characteristic function on a rho grid (CSV)
* ghat          -- characteristic difference of a pair on a rho grid (CSV)
* spectrum      -- eigenvalues by scan, shooting, or both (JSON)
* entire        -- indicator / density / support / cartwright diagnostics (CSV)
* bound         -- instability or zero-set inequality reports (JSON)
* oracle-compare -- scan vs shooting spectra with gap statistics (JSON)
* interp        -- sine-type sampling reconstruction demo (CSV)

A run configuration is a JSON file:

    {"problem":   {"frozen": [1.0, 2.0], "alpha": 0, "beta": 0},
     "potentials": [{"kind": "samples", "M": 64, "values": [...]},
                    {"kind": "fourier", "K": 8, "coeffs": [[re, im], ...]}],
     "numeric":   {"M_grid": 256, "K_fourier": 64, "quad_panels": 0,
                   "scan_step": 0.05, "rk4_step": 0.000767, "T_cutoff": 128.0,
                   "h_probe": 4.0},
     "output":    {"path": "out.csv", "format": "csv"}}

"numeric" and "output" are optional (--out overrides the path).  Exit
codes: 0 success, 1 configuration error, 2 numerical failure.  Outputs
are written atomically (temp file + rename) and are byte-identical for
identical config and flags; CSV headers record the resolved numeric
parameters.  FROZEN_SPECTRAL_THREADS caps the worker threads used for
grid evaluation (default: single-threaded).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .charfn import CharacteristicFunction, CharDifference
from .entire import (cartwright_product, collect_zeros, effective_support_width,
                     indicator)
from .instability import (BoundReport, instability_bound, sine_type_interpolate,
                          SineTypeSystem, zero_set_bound, zero_set_sweep)
from .model import (PI, NumericalError, Potential, ProblemConfig,
                    potential_from_fourier, potential_from_samples)
from .spectrum import (match_spectra, real_eigenvalues, shooting_eigenvalues)

NUMERIC_DEFAULTS = {
    "M_grid": 256,
    "K_fourier": 64,
    "quad_panels": 0,
    "scan_step": 0.05,
    "rk4_step": PI / 4096,
    "T_cutoff": 128.0,
    "h_probe": 4.0,
}


class ConfigError(ValueError):
    """Configuration problem, reported with the offending field path."""


def worker_count() -> int:
    raw = os.environ.get("FROZEN_SPECTRAL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"FROZEN_SPECTRAL_THREADS={raw!r} is not an integer")
    return max(1, n)


# ---------------------------------------------------------------------------
# configuration


def _expect_mapping(obj, path):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")


def _check_keys(obj, path, required, optional=()):
    _expect_mapping(obj, path)
    for key in required:
        if key not in obj:
            raise ConfigError(f"{path}.{key}: required field missing")
    for key in obj:
        if key not in required and key not in optional:
            raise ConfigError(f"{path}.{key}: unknown field")


def _parse_problem(obj) -> ProblemConfig:
    _check_keys(obj, "problem", ("frozen", "alpha", "beta"))
    frozen = obj["frozen"]
    if not isinstance(frozen, list) or not frozen:
        raise ConfigError("problem.frozen: expected a nonempty list")
    pts = []
    for i, a in enumerate(frozen):
        if not isinstance(a, (int, float)):
            raise ConfigError(f"problem.frozen[{i}]: expected a number")
        pts.append(float(a))
    for name in ("alpha", "beta"):
        if obj[name] not in (0, 1):
            raise ConfigError(f"problem.{name}: must be 0 or 1")
    try:
        return ProblemConfig(tuple(pts), obj["alpha"], obj["beta"])
    except ValueError as exc:
        raise ConfigError(f"problem.frozen: {exc}")


def _parse_potential(obj, path, m_grid: int) -> Potential:
    _expect_mapping(obj, path)
    kind = obj.get("kind")
    if kind == "samples":
        _check_keys(obj, path, ("kind", "M", "values"))
        M = obj["M"]
        if not isinstance(M, int) or M < 16:
            raise ConfigError(f"{path}.M: expected an integer >= 16")
        values = obj["values"]
        if not isinstance(values, list) or len(values) != M + 1:
            raise ConfigError(f"{path}.values: expected M+1 = {M + 1} numbers")
        try:
            return potential_from_samples([float(v) for v in values], M)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}.values: {exc}")
    if kind == "fourier":
        _check_keys(obj, path, ("kind", "K", "coeffs"))
        K = obj["K"]
        if not isinstance(K, int) or K < 0:
            raise ConfigError(f"{path}.K: expected a nonnegative integer")
        coeffs = obj["coeffs"]
        if not isinstance(coeffs, list) or len(coeffs) != 2 * K + 1:
            raise ConfigError(f"{path}.coeffs: expected 2K+1 = {2 * K + 1} pairs")
        parsed = []
        for i, pair in enumerate(coeffs):
            if (not isinstance(pair, list)) or len(pair) != 2:
                raise ConfigError(f"{path}.coeffs[{i}]: expected [re, im]")
            parsed.append(complex(float(pair[0]), float(pair[1])))
        try:
            return potential_from_fourier(parsed, K, M=m_grid)
        except ValueError as exc:
            raise ConfigError(f"{path}.coeffs: {exc}")
    raise ConfigError(f"{path}.kind: must be 'samples' or 'fourier'")


def _parse_numeric(obj) -> dict:
    numeric = dict(NUMERIC_DEFAULTS)
    if obj is None:
        return numeric
    _check_keys(obj, "numeric", (), tuple(NUMERIC_DEFAULTS))
    for key, value in obj.items():
        if not isinstance(value, (int, float)):
            raise ConfigError(f"numeric.{key}: expected a number")
        value = float(value) if isinstance(NUMERIC_DEFAULTS[key], float) else int(value)
        minimum = 0 if key == "quad_panels" else np.finfo(float).tiny
        if value < minimum:
            raise ConfigError(f"numeric.{key}: must be positive")
        numeric[key] = value
    return numeric


def _parse_output(obj) -> dict:
    if obj is None:
        return {"path": None, "format": None}
    _check_keys(obj, "output", ("path", "format"))
    if not isinstance(obj["path"], str) or not obj["path"]:
        raise ConfigError("output.path: expected a nonempty string")
    if obj["format"] not in ("csv", "json"):
        raise ConfigError("output.format: must be 'csv' or 'json'")
    return {"path": obj["path"], "format": obj["format"]}


class RunConfig:
    """Validated run configuration: problem, potentials, numeric, output."""

    def __init__(self, problem, potentials, numeric, output):
        self.problem = problem
        self.potentials = potentials
        self.numeric = numeric
        self.output = output

    @classmethod
    def load(cls, path: str, n_potentials: Optional[int] = None) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}")
        _check_keys(raw, "config", ("problem", "potentials"),
                    ("numeric", "output"))
        problem = _parse_problem(raw["problem"])
        numeric = _parse_numeric(raw.get("numeric"))
        pots = raw["potentials"]
        if not isinstance(pots, list) or not 1 <= len(pots) <= 2:
            raise ConfigError("potentials: expected a list of one or two entries")
        potentials = [_parse_potential(p, f"potentials[{i}]", numeric["M_grid"])
                      for i, p in enumerate(pots)]
        if n_potentials is not None and len(potentials) != n_potentials:
            raise ConfigError(
                f"potentials: this subcommand needs exactly {n_potentials}, "
                f"got {len(potentials)}")
        output = _parse_output(raw.get("output"))
        return cls(problem, potentials, numeric, output)

    def pair(self):
        if len(self.potentials) != 2:
            raise ConfigError("potentials: a potential pair is required here")
        return self.potentials[0], self.potentials[1]


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def emit_csv(path: str, header: dict, columns: dict):
    lines = [f"# {k}={header[k]}" for k in sorted(header)]
    names = list(columns)
    lines.append(",".join(names))
    rows = zip(*(columns[n] for n in names))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def emit_json(path: str, obj):
    _atomic_write(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def validate_csv(path: str, names, n_rows: int):
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    data = [ln for ln in lines if ln and not ln.startswith("#")]
    if not data or data[0].split(",") != list(names):
        raise NumericalError(f"{path}: column header mismatch on re-read")
    if len(data) - 1 != n_rows:
        raise NumericalError(f"{path}: expected {n_rows} rows, found {len(data) - 1}")
    for ln in data[1:]:
        for cell in ln.split(","):
            if not math.isfinite(float(cell)):
                raise NumericalError(f"{path}: non-finite value on re-read")


def validate_json(path: str, required):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    for key in required:
        if key not in obj:
            raise NumericalError(f"{path}: key {key!r} missing on re-read")
    return obj


def _parse_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid {spec!r}: expected start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid {spec!r}: expected start:stop:count")
    if count < 1:
        raise ConfigError(f"grid {spec!r}: count must be >= 1")
    return np.linspace(start, stop, count)


def _grid_eval(fn, rhos: np.ndarray) -> np.ndarray:
    """Evaluate fn over the grid, chunked across the worker pool."""
    workers = worker_count()
    if workers == 1 or rhos.size < 64:
        return np.asarray(fn(rhos), dtype=complex)
    chunks = np.array_split(rhos, workers * 4)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: np.asarray(fn(c), dtype=complex), chunks))
    return np.concatenate(parts)


def _resolve_out(args, cfg: Optional[RunConfig]) -> str:
    if getattr(args, "out", None):
        return args.out
    if cfg is not None and cfg.output["path"]:
        return cfg.output["path"]
    raise ConfigError("no output path: pass --out or set output.path in the config")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_charfn(args) -> int:
    cfg = RunConfig.load(args.config)
    rhos = _parse_grid(args.rho_grid) + 1j * args.imag
    fn = CharacteristicFunction(cfg.potentials[0], cfg.problem, method=args.method)
    values = _grid_eval(fn, rhos)
    out = _resolve_out(args, cfg)
    header = dict(cfg.numeric)
    header.update(subcommand="charfn-eval", method=args.method,
                  rho_grid=args.rho_grid, imag=_fmt(args.imag))
    cols = {"re_rho": rhos.real, "im_rho": rhos.imag,
            "re_value": values.real, "im_value": values.imag}
    emit_csv(out, header, cols)
    if args.validate:
        validate_csv(out, cols, rhos.size)
    return 0


def _cmd_ghat(args) -> int:
    cfg = RunConfig.load(args.config, n_potentials=2)
    q1, q2 = cfg.pair()
    rhos = _parse_grid(args.rho_grid) + 1j * args.imag
    fn = CharDifference(q1, q2, cfg.problem)
    values = _grid_eval(fn, rhos)
    out = _resolve_out(args, cfg)
    header = dict(cfg.numeric)
    header.update(subcommand="ghat", rho_grid=args.rho_grid, imag=_fmt(args.imag))
    cols = {"re_rho": rhos.real, "im_rho": rhos.imag,
            "re_value": values.real, "im_value": values.imag}
    emit_csv(out, header, cols)
    if args.validate:
        validate_csv(out, cols, rhos.size)
    return 0


def _spectrum_obj(spec) -> dict:
    return {"rhos": [float(v) for v in spec.rhos],
            "lambdas": [float(v) for v in spec.lambdas],
            "residuals": [float(v) for v in spec.residuals],
            "method": spec.method}


def _cmd_spectrum(args) -> int:
    cfg = RunConfig.load(args.config, n_potentials=1)
    q = cfg.potentials[0]
    out = _resolve_out(args, cfg)
    if args.method in ("scan", "both"):
        scan = real_eigenvalues(q, cfg.problem, args.count,
                                scan_step=cfg.numeric["scan_step"])
    if args.method in ("shoot", "both"):
        shoot = shooting_eigenvalues(q, cfg.problem, args.count,
                                     step=cfg.numeric["rk4_step"],
                                     scan_step=cfg.numeric["scan_step"])
    if args.method == "scan":
        obj = _spectrum_obj(scan)
    elif args.method == "shoot":
        obj = _spectrum_obj(shoot)
    else:
        match = match_spectra(scan, shoot)
        obj = _spectrum_obj(scan)
        obj["method"] = "both"
        obj["shooting"] = _spectrum_obj(shoot)
        obj["match"] = {"max_gap": match.max_gap, "l2_distance": match.l2_distance,
                        "paired": match.paired}
    emit_json(out, obj)
    if args.validate:
        validate_json(out, ("rhos", "lambdas", "residuals", "method"))
    return 0


def _entire_target(cfg: RunConfig):
    if len(cfg.potentials) == 2:
        return CharDifference(cfg.potentials[0], cfg.potentials[1], cfg.problem)
    return CharacteristicFunction(cfg.potentials[0], cfg.problem)


def _cmd_entire(args) -> int:
    cfg = RunConfig.load(args.config)
    fn = _entire_target(cfg)
    out = _resolve_out(args, cfg)
    header = dict(cfg.numeric)
    header.update(subcommand=f"entire-{args.mode}")
    if args.mode == "indicator":
        thetas = PI / 2.0 + 2.0 * PI * np.arange(16) / 16.0
        fits = [indicator(fn, float(th), r_max=args.r_max) for th in thetas]
        cols = {"theta": [f.theta for f in fits],
                "h": [f.value for f in fits]}
        emit_csv(out, header, cols)
        n = len(thetas)
    elif args.mode == "density":
        zs = collect_zeros(fn, args.radius)
        radii = np.linspace(args.radius / 10.0, args.radius, 10)
        cols = {"r": radii,
                "count": [zs.count_within(r) for r in radii]}
        emit_csv(out, header, cols)
        n = radii.size
    elif args.mode == "support":
        est = effective_support_width(fn, args.r_max)
        cols = {"r": est.radii,
                "width": [PI * c / r for c, r in zip(est.counts, est.radii)]}
        header["fitted_width"] = _fmt(est.width)
        emit_csv(out, header, cols)
        n = len(est.radii)
    else:  # cartwright
        zs = collect_zeros(fn, args.radius * 1.0017)
        try:
            c0 = fn.at_zero()
        except AttributeError:
            c0 = complex(fn(0.0)).real
        rhos = _parse_grid(args.grid)
        ref = _grid_eval(fn, rhos.astype(complex))
        prod = cartwright_product(zs, c0, rhos.astype(complex), radius=args.radius)
        cols = {"re_rho": rhos, "im_rho": np.zeros_like(rhos),
                "re_f": ref.real, "im_f": ref.imag,
                "re_prod": np.asarray(prod).real, "im_prod": np.asarray(prod).imag}
        header["origin_value"] = _fmt(c0)
        emit_csv(out, header, cols)
        n = rhos.size
    if args.validate:
        validate_csv(out, cols, n)
    return 0


def _cmd_bound(args) -> int:
    cfg = RunConfig.load(args.config, n_potentials=2)
    q1, q2 = cfg.pair()
    h = args.h if args.h is not None else cfg.numeric["h_probe"]
    out = _resolve_out(args, cfg)
    if args.kind == "instability":
        rep = instability_bound(q1, q2, cfg.problem, h=h, x=args.x,
                                K=cfg.numeric["K_fourier"])
        obj = {"lhs": rep.lhs, "rhs": rep.rhs, "C": rep.C, "h": rep.h,
               "x": rep.x, "holds": rep.holds}
        emit_json(out, obj)
        if args.validate:
            validate_json(out, ("lhs", "rhs", "C", "h", "x", "holds"))
        return 0
    if args.sweep:
        ts = tuple(float(t) for t in args.sweep.split(","))
        sweep = zero_set_sweep(q1, q2, cfg.problem, ts=ts, h=h, x=args.x,
                               window=args.window, strip=args.strip)
        obj = {"ts": list(sweep.ts),
               "C": sweep.C,
               "monotone": sweep.monotone,
               "distances": [float(d) for d in sweep.distances],
               "reports": [{"lhs": r.lhs, "rhs": r.rhs, "C": r.C, "h": r.h,
                            "x": r.x, "holds": r.holds,
                            "zero_distance": r.zero_distance,
                            "paired": r.paired} for r in sweep.reports]}
        emit_json(out, obj)
        if args.validate:
            validate_json(out, ("ts", "C", "monotone", "distances", "reports"))
        return 0
    rep = zero_set_bound(q1, q2, cfg.problem, h=h, x=args.x,
                         window=args.window, strip=args.strip)
    obj = {"lhs": rep.lhs, "rhs": rep.rhs, "C": rep.C, "h": rep.h, "x": rep.x,
           "holds": rep.holds, "zero_distance": rep.zero_distance,
           "paired": rep.paired}
    emit_json(out, obj)
    if args.validate:
        validate_json(out, ("lhs", "rhs", "C", "h", "x", "holds"))
    return 0


def _cmd_oracle_compare(args) -> int:
    cfg = RunConfig.load(args.config, n_potentials=1)
    q = cfg.potentials[0]
    scan = real_eigenvalues(q, cfg.problem, args.count,
                            scan_step=cfg.numeric["scan_step"])
    shoot = shooting_eigenvalues(q, cfg.problem, args.count,
                                 step=cfg.numeric["rk4_step"],
                                 scan_step=cfg.numeric["scan_step"])
    match = match_spectra(scan, shoot)
    out = _resolve_out(args, cfg)
    obj = {"scan": _spectrum_obj(scan), "shoot": _spectrum_obj(shoot),
           "match": {"max_gap": match.max_gap, "max_gap_index": match.max_gap_index,
                     "l2_distance": match.l2_distance, "paired": match.paired}}
    emit_json(out, obj)
    if args.validate:
        validate_json(out, ("scan", "shoot", "match"))
    return 0


def _cmd_interp(args) -> int:
    if not 0.0 < args.band < 1.0:
        raise ConfigError("--band must lie in (0, 1)")
    if args.halfwidth < 2:
        raise ConfigError("--halfwidth must be >= 2")
    k = np.arange(-args.halfwidth, args.halfwidth + 1)
    nodes = k * PI
    system = SineTypeSystem.build(np.sin, nodes.astype(complex), 1.0)
    band = args.band

    def reference(z):
        z = np.asarray(z, dtype=complex)
        small = np.abs(z) < 1e-8
        safe = np.where(small, 1.0, band * z)
        return np.where(small, 1.0 - (band * z) ** 2 / 6.0, np.sin(safe) / safe)

    coeffs = reference(system.zeros)
    grid = _parse_grid(args.grid)
    recon = sine_type_interpolate(system, coeffs, grid.astype(complex))
    ref = reference(grid)
    out = _resolve_out(args, None) if not args.config else _resolve_out(
        args, RunConfig.load(args.config))
    header = {"subcommand": "interp", "band": _fmt(band),
              "halfwidth": args.halfwidth, "grid": args.grid}
    cols = {"x": grid,
            "re_recon": np.asarray(recon).real, "im_recon": np.asarray(recon).imag,
            "re_ref": np.asarray(ref).real,
            "abs_err": np.abs(np.asarray(recon) - np.asarray(ref))}
    emit_csv(out, header, cols)
    if args.validate:
        validate_csv(out, cols, grid.size)
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are configuration errors
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frozen-spectral",
                     description="Spectral analysis of frozen-argument "
                                 "Sturm-Liouville problems")
    parser.add_argument("--validate", action="store_true",
                        help="re-read and schema-check the written output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charfn", help="characteristic function values")
    psub = p.add_subparsers(dest="action", required=True)
    pe = psub.add_parser("eval", help="evaluate on a rho grid")
    pe.add_argument("--config", required=True)
    pe.add_argument("--rho-grid", required=True, help="start:stop:count")
    pe.add_argument("--imag", type=float, default=0.0)
    pe.add_argument("--method", choices=("closed", "det"), default="closed")
    pe.add_argument("--out")
    pe.set_defaults(fn=_cmd_charfn)

    p = sub.add_parser("ghat", help="characteristic difference of a pair")
    p.add_argument("--config", required=True)
    p.add_argument("--rho-grid", required=True, help="start:stop:count")
    p.add_argument("--imag", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_ghat)

    p = sub.add_parser("spectrum", help="eigenvalues")
    p.add_argument("--config", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--method", choices=("scan", "shoot", "both"), default="scan")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("entire", help="entire-function diagnostics")
    esub = p.add_subparsers(dest="mode", required=True)
    for mode in ("indicator", "density", "support", "cartwright"):
        pm = esub.add_parser(mode)
        pm.add_argument("--config", required=True)
        pm.add_argument("--out")
        if mode == "indicator":
            pm.add_argument("--r-max", type=float, default=50.0)
        elif mode == "density":
            pm.add_argument("--radius", type=float, default=50.0)
        elif mode == "support":
            pm.add_argument("--r-max", type=float, default=200.0)
        else:
            pm.add_argument("--radius", type=float, default=200.0)
            pm.add_argument("--grid", default="-10:10:81")
        pm.set_defaults(fn=_cmd_entire)

    p = sub.add_parser("bound", help="instability inequalities")
    p.add_argument("kind", choices=("instability", "zero-set"))
    p.add_argument("--config", required=True)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--sweep", help="comma-separated scale factors (zero-set)")
    p.add_argument("--window", type=float, default=25.37,
                   help="zero-collection half width (zero-set)")
    p.add_argument("--strip", type=float, default=6.0,
                   help="zero-collection strip half height (zero-set)")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_bound)

    p = sub.add_parser("oracle-compare", help="scan vs shooting spectra")
    p.add_argument("--config", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_oracle_compare)

    p = sub.add_parser("interp", help="sine-type sampling reconstruction")
    p.add_argument("--config", default=None)
    p.add_argument("--band", type=float, default=0.9)
    p.add_argument("--halfwidth", type=int, default=60)
    p.add_argument("--grid", default="-5:5:201")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_interp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ValueError) as exc:
        kind = "configuration" if isinstance(exc, ValueError) \
            and not isinstance(exc, NumericalError) else "numerical"
        print(f"{kind} error: {exc}", file=sys.stderr)
        return 1 if kind == "configuration" else 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
