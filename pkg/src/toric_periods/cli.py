"""Batch front end: ``toric-period <command> --config job.json [--out DIR] [--threads K]``.

Exit status is 0 when every check passes, 2 when a verification fails and
1 on invalid input or a numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .bessel import p1_closed_form
from .errors import ConfigError, ToricError
from .operator_algebra import gkz_operator, verify_annihilator
from .pde_check import GridSpec, verify_system
from .quadrature import QuadratureSettings, evaluate_matrix_element, evaluate_period
from .reduction import SpectralParams
from .series import build_series, series_eval
from .toric_data import ToricData, build_toric_data

SCHEMA_VERSION = 1
COMMANDS = ("kernel", "eval", "series", "emit-ops", "verify-annihilator", "verify-pde", "bessel-check")
EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2


def fmt(v: float) -> str:
    return format(float(v), ".17g")


@dataclass
class JobConfig:
    charge_matrix: List[List[int]]
    lam: Tuple
    c: object = 1
    x_points: Optional[List[Tuple[float, ...]]] = None
    y_points: Optional[List[Tuple[float, ...]]] = None
    dmax: Optional[Tuple[int, ...]] = None
    settings: QuadratureSettings = field(default_factory=QuadratureSettings)
    pde_grid: Optional[GridSpec] = None
    pde_tolerance: float = 1e-4
    bessel_tolerance: float = 1e-6
    output: Optional[str] = None


def _number(v, where: str):
    if isinstance(v, bool):
        raise ConfigError("expected a number", where)
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ConfigError("non-finite number", where)
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            pass
    raise ConfigError(f"expected a number or a rational string, got {v!r}", where)


def _float_list(v, length: int, where: str) -> Tuple[float, ...]:
    if not isinstance(v, list) or len(v) != length:
        raise ConfigError(f"expected a list of {length} numbers", where)
    return tuple(float(_number(e, f"{where}[{i}]")) for i, e in enumerate(v))


def _grid_points(block, n: int, where: str) -> List[Tuple[float, ...]]:
    if not isinstance(block, list) or len(block) != n:
        raise ConfigError(f"expected one {{min, max, step}} object per axis ({n})", where)
    axes = []
    for k, ax in enumerate(block):
        w = f"{where}[{k}]"
        try:
            lo, hi, step = (float(_number(ax[key], f"{w}.{key}")) for key in ("min", "max", "step"))
        except (KeyError, TypeError):
            raise ConfigError("axis needs min, max and step", w) from None
        if step <= 0 or hi < lo:
            raise ConfigError("need step > 0 and max >= min", w)
        count = int(round((hi - lo) / step)) + 1
        axes.append([lo + i * step for i in range(count)])
    pts = [()]
    for ax in axes:
        pts = [p + (v,) for p in pts for v in ax]
    return pts


def parse_config(text: str) -> JobConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {raw.get('schema_version')!r}", "schema_version")
    m = raw.get("charge_matrix")
    if not isinstance(m, list) or not m or not all(isinstance(r, list) for r in m):
        raise ConfigError("expected a nonempty list of rows", "charge_matrix")
    n, N = len(m), len(m[0])
    lam = raw.get("lambda", [0] * N)
    if not isinstance(lam, list) or len(lam) != N:
        raise ConfigError(f"expected {N} entries", "lambda")
    cfg = JobConfig(m, tuple(_number(v, f"lambda[{i}]") for i, v in enumerate(lam)),
                    _number(raw.get("c", 1), "c"))
    if "x" in raw:
        xb = raw["x"]
        if not isinstance(xb, dict):
            raise ConfigError("expected an object with 'grid' or 'points'", "x")
        if "grid" in xb:
            cfg.x_points = _grid_points(xb["grid"], n, "x.grid")
        elif "points" in xb:
            cfg.x_points = [_float_list(p, n, f"x.points[{i}]") for i, p in enumerate(xb["points"])]
        else:
            raise ConfigError("expected 'grid' or 'points'", "x")
    if "y" in raw:
        pts = raw["y"].get("points") if isinstance(raw["y"], dict) else None
        if not isinstance(pts, list):
            raise ConfigError("expected an object with 'points'", "y")
        cfg.y_points = [_float_list(p, N, f"y.points[{i}]") for i, p in enumerate(pts)]
    if "dmax" in raw:
        d = raw["dmax"]
        if not isinstance(d, list) or len(d) != n or not all(isinstance(v, int) and v >= 0 for v in d):
            raise ConfigError(f"expected {n} nonnegative integers", "dmax")
        cfg.dmax = tuple(d)
    if "tolerances" in raw:
        t = raw["tolerances"]
        if not isinstance(t, dict):
            raise ConfigError("expected an object", "tolerances")
        known = {"abs_tol", "rel_tol", "truncation_margin", "max_subdivisions"}
        extra = set(t) - known
        if extra:
            raise ConfigError(f"unknown keys {sorted(extra)}", "tolerances")
        try:
            cfg.settings = QuadratureSettings(**t)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), "tolerances") from None
    if "pde" in raw:
        p = raw["pde"]
        if not isinstance(p, dict) or "grid" not in p or "h" not in p:
            raise ConfigError("expected an object with 'grid' and 'h'", "pde")
        grid = p["grid"]
        if not isinstance(grid, list) or len(grid) != n:
            raise ConfigError(f"expected one {{min, max}} object per axis ({n})", "pde.grid")
        try:
            lo = tuple(float(_number(a["min"], f"pde.grid[{k}].min")) for k, a in enumerate(grid))
            hi = tuple(float(_number(a["max"], f"pde.grid[{k}].max")) for k, a in enumerate(grid))
            cfg.pde_grid = GridSpec(lo, hi, float(_number(p["h"], "pde.h")))
        except (KeyError, TypeError):
            raise ConfigError("axis needs min and max", "pde.grid") from None
        except ToricError as exc:
            raise ConfigError(str(exc), "pde") from None
        cfg.pde_tolerance = float(_number(p.get("tolerance", 1e-4), "pde.tolerance"))
    if "bessel" in raw:
        cfg.bessel_tolerance = float(_number(raw["bessel"].get("tolerance", 1e-6), "bessel.tolerance"))
    if "output" in raw:
        cfg.output = str(raw["output"])
    return cfg


def _require(value, field_name: str, command: str):
    if value is None:
        raise ConfigError(f"required by '{command}'", field_name)
    return value


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _parallel_map(fn, items, threads: int):
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def run(command: str, cfg: JobConfig, out: Path, threads: int = 1, corrupt_sign: bool = False,
        stdout=None) -> int:
    stdout = stdout or sys.stdout
    data: ToricData = build_toric_data(cfg.charge_matrix)
    params = SpectralParams(cfg.lam, cfg.c)
    n, N = data.n, data.N

    if command == "kernel":
        obj = {"charge_matrix": [list(r) for r in data.charge.entries],
               "kernel": [list(r) for r in data.kernel.rows],
               "jacobian": data.jacobian, "integrable": data.integrable}
        text = _json(obj)
        stdout.write(text)
        _write(out / "kernel.json", text)
        return EXIT_OK

    if command == "eval":
        if cfg.y_points is not None:
            vals = _parallel_map(lambda y: evaluate_matrix_element(data, params, y, cfg.settings),
                                 cfg.y_points, threads)
            header = [f"y{j + 1}" for j in range(N)] + [f"x{a + 1}" for a in range(n)] + ["re", "im", "error"]
            rows = [list(y) + list(data.charge.apply(y)) + [v.value.real, v.value.imag, float(v.error_estimate)]
                    for y, v in zip(cfg.y_points, vals)]
        else:
            pts = _require(cfg.x_points, "x", command)
            vals = _parallel_map(lambda x: evaluate_period(data, params, x, cfg.settings), pts, threads)
            header = [f"x{a + 1}" for a in range(n)] + ["re", "im", "error"]
            rows = [list(x) + [v.value.real, v.value.imag, float(v.error_estimate)] for x, v in zip(pts, vals)]
        _write(out / "eval.csv", _csv(header, rows))
        stdout.write(f"wrote {len(rows)} rows to {out / 'eval.csv'}\n")
        return EXIT_OK

    if command == "series":
        coeffs = build_series(data, params, _require(cfg.dmax, "dmax", command))
        evals = []
        for x in cfg.x_points or []:
            val, tail = series_eval(coeffs, x)
            evals.append({"x": list(x), "re": val.real, "im": val.imag, "tail": tail})
        obj = {"dmax": list(coeffs.dmax),
               "coefficients": [{"d": list(d), "re": a.real, "im": a.imag} for d, a in sorted(coeffs.coeffs.items())],
               "evaluations": evals}
        _write(out / "series.json", _json(obj))
        stdout.write(f"wrote {len(coeffs.coeffs)} coefficients to {out / 'series.json'}\n")
        return EXIT_OK

    if command == "emit-ops":
        obj = {"schema_version": SCHEMA_VERSION,
               "operators": [gkz_operator(data, params, a).to_json() for a in range(n)]}
        _write(out / "ops.json", _json(obj))
        stdout.write(f"wrote {n} operators to {out / 'ops.json'}\n")
        return EXIT_OK

    if command == "verify-annihilator":
        results = [verify_annihilator(data, params, a, corrupt=corrupt_sign) for a in range(n)]
        for a, ok in enumerate(results):
            stdout.write(f"alpha={a + 1} {'true' if ok else 'false'}\n")
        _write(out / "annihilator.json", _json({"results": results, "corrupt_sign": corrupt_sign}))
        return EXIT_OK if all(results) else EXIT_FAIL

    if command == "verify-pde":
        spec = _require(cfg.pde_grid, "pde", command)
        reports = verify_system(data, params, spec, cfg.settings, threads)
        header = ["alpha"] + [f"x{a + 1}" for a in range(n)] + ["h", "re_residual", "im_residual",
                                                                 "normalizer", "normalized_residual"]
        rows = [[r.alpha + 1] + list(r.x0) + [r.h, r.residual.real, r.residual.imag, r.normalizer,
                                               r.normalized_residual] for r in reports]
        _write(out / "pde.csv", _csv(header, rows))
        worst = max(r.normalized_residual for r in reports)
        ok = worst <= cfg.pde_tolerance
        stdout.write(f"max normalized residual {worst:.3e} (tolerance {cfg.pde_tolerance:.1e}): "
                     f"{'pass' if ok else 'fail'}\n")
        return EXIT_OK if ok else EXIT_FAIL

    if command == "bessel-check":
        if [list(r) for r in data.charge.entries] != [[1, 1]]:
            raise ConfigError("bessel-check needs charge_matrix [[1, 1]]", "charge_matrix")
        pts = cfg.x_points or [(0.0,)]
        l1, l2 = (float(v) for v in params.lam)
        vals = _parallel_map(lambda x: evaluate_period(data, params, x, cfg.settings), pts, threads)
        rows, ok = [], True
        for x, v in zip(pts, vals):
            ref = p1_closed_form(l1, l2, x[0])
            rel = abs(v.value - ref) / abs(ref)
            ok &= rel <= cfg.bessel_tolerance
            rows.append([x[0], v.value.real, v.value.imag, ref.real, ref.imag, rel])
        header = ["x", "quad_re", "quad_im", "oracle_re", "oracle_im", "rel_err"]
        text = _csv(header, rows)
        _write(out / "bessel.csv", text)
        stdout.write(text)
        return EXIT_OK if ok else EXIT_FAIL

    raise ConfigError(f"unknown command {command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    p = argparse.ArgumentParser(prog="toric-period", description="Toric periods and their differential equations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON job description")
    p.add_argument("--out", default=None, help="output directory (default: config 'output' or '.')")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--corrupt-sign", action="store_true",
                   help="debug: flip the annihilator sign (verify-annihilator negative control)")
    args = p.parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
        cfg = parse_config(text)
        out = Path(args.out or cfg.output or ".")
        return run(args.command, cfg, out, max(1, args.threads), args.corrupt_sign)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ToricError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
