"""Command-line front end.

    focusfocus verify    --config cfg.json --out report.json
    focusfocus add       --x "0.9,0;0.1,0" --y "0.9,0;0.1,0"
    focusfocus inverse   --x "0.9,0;0.1,0"
    focusfocus locate    --x ... --y ... [--z ...]
    focusfocus sample    --count 10 --out points.csv
    focusfocus figure    --kind pq-projection --fibers 0.06,0.15 --out fig.csv [--svg fig.svg]
    focusfocus recover-s --b "0.05,0.02"   |   --grid 10

Points are written "re,im;re,im" (p then q); numbers use '.' decimals.
Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import figures, sampling
from .core import InvariantPolynomial, ModelParams, PointC2
from .errors import ConfigError, FocusFocusError
from .graph import GraphPoint, locate
from .group import add, inverse, recover_partials, select_branch
from .neighborhood import normalize
from .verify import CHECK_IDS, ToleranceConfig, run_suite, suite_passed

log = logging.getLogger("focusfocus")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CONFIG_KEYS = {"S", "epsilon", "delta", "samples", "seed", "tolerances", "strict"}

_NUM = {"type": ["number", "null"]}
_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_POINT = {"type": "string", "pattern": "^[^;]+,[^;]+;[^;]+,[^;]+$"}

SCHEMAS: dict[str, dict] = {
    "verify": {
        "type": "object",
        "required": ["suite", "pass"],
        "properties": {
            "suite": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["check", "samples", "max_error", "threshold", "pass", "worst_input"],
                    "properties": {
                        "check": {"type": "string", "enum": list(CHECK_IDS)},
                        "samples": {"type": "integer", "minimum": 0},
                        "max_error": _NUM,
                        "threshold": {"type": "number"},
                        "pass": {"type": "boolean"},
                        "worst_input": {"type": "array", "items": _NUM},
                        "details": {"type": "object"},
                    },
                },
            },
            "pass": {"type": "boolean"},
        },
    },
    "add": {
        "type": "object",
        "required": ["x", "y", "result", "fiber"],
        "properties": {"x": _POINT, "y": _POINT, "result": _POINT, "fiber": _PAIR, "branch": {"type": ["string", "null"]}},
    },
    "inverse": {
        "type": "object",
        "required": ["x", "result", "fiber"],
        "properties": {"x": _POINT, "result": _POINT, "fiber": _PAIR},
    },
    "locate": {
        "type": "object",
        "required": ["point", "charts"],
        "properties": {
            "point": {"type": "array", "items": _POINT, "minItems": 3, "maxItems": 3},
            "charts": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["chart", "coords"],
                    "properties": {
                        "chart": {"type": "string", "enum": ["E1", "E2", "E3", "E4", "E5", "E6"]},
                        "coords": {"type": "array", "items": _PAIR, "minItems": 3, "maxItems": 3},
                    },
                },
            },
        },
    },
    "sample": {
        "type": "object",
        "required": ["rows", "columns", "seed"],
        "properties": {"rows": {"type": "integer"}, "columns": {"type": "array"}, "seed": {"type": "integer"}},
    },
    "figure": {
        "type": "object",
        "required": ["kind", "rows", "curves"],
        "properties": {
            "kind": {"type": "string"},
            "rows": {"type": "integer"},
            "curves": {"type": "array", "items": {"type": "string"}},
        },
    },
    "recover-s": {
        "type": "object",
        "required": ["points", "max_error", "threshold", "pass"],
        "properties": {
            "points": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["b", "measured", "expected"],
                    "properties": {"b": _PAIR, "measured": _PAIR, "expected": _PAIR},
                },
            },
            "max_error": {"type": "number"},
            "threshold": {"type": "number"},
            "pass": {"type": "boolean"},
        },
    },
}

SAMPLE_COLUMNS = ("fiber_re", "fiber_im", "p_re", "p_im", "q_re", "q_im")


@dataclass
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    tol: ToleranceConfig = field(default_factory=ToleranceConfig)
    out: Optional[Path] = None


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    S = InvariantPolynomial.zero()
    if "S" in raw:
        s_cfg = raw["S"]
        if not isinstance(s_cfg, dict) or set(s_cfg) - {"coeffs"}:
            raise ConfigError('S must be {"coeffs": [[i, j, value], ...]}')
        S = InvariantPolynomial.from_triples(s_cfg.get("coeffs", []))
    tol_raw = raw.get("tolerances", {})
    if not isinstance(tol_raw, dict):
        raise ConfigError("tolerances must be an object")
    bad = set(tol_raw) - (ToleranceConfig.field_names() - {"samples", "seed"})
    if bad:
        raise ConfigError(f"unknown tolerance keys: {sorted(bad)}")
    tol_kw = dict(tol_raw)
    for key in ("samples", "seed"):
        if key in raw:
            tol_kw[key] = raw[key]
    try:
        params = ModelParams(
            epsilon=raw.get("epsilon", 0.1),
            delta=raw.get("delta", 0.3),
            invariant=S,
            strict=bool(raw.get("strict", True)),
        )
        tol = ToleranceConfig(**tol_kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(params, tol)


def fmt_real(x: float) -> str:
    x = float(x)
    if x == 0:
        return "0"
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def fmt_complex(z: complex) -> str:
    return f"{fmt_real(z.real)},{fmt_real(z.imag)}"


def fmt_point(pt: PointC2) -> str:
    return f"{fmt_complex(pt.p)};{fmt_complex(pt.q)}"


def parse_complex(text: str) -> complex:
    parts = text.strip().split(",")
    if len(parts) != 2:
        raise ConfigError(f"expected 're,im', got {text!r}")
    try:
        re_, im_ = (float(v) for v in parts)
    except ValueError as exc:
        raise ConfigError(f"bad number in {text!r}") from exc
    if not (math.isfinite(re_) and math.isfinite(im_)):
        raise ConfigError(f"non-finite number in {text!r}")
    return complex(re_, im_)


def parse_point(text: str) -> PointC2:
    parts = text.split(";")
    if len(parts) != 2:
        raise ConfigError(f"expected 're,im;re,im', got {text!r}")
    return PointC2(parse_complex(parts[0]), parse_complex(parts[1]))


def _emit(doc: dict, out: Optional[Path], echo: bool = True) -> None:
    text = json.dumps(doc, indent=2)
    if out is not None:
        out.write_text(text + "\n")
    elif echo:
        print(text)


def cmd_verify(args, cfg: RunConfig) -> int:
    tol = cfg.tol if args.samples is None else replace(cfg.tol, samples=args.samples)
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in checks if c not in CHECK_IDS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; known: {', '.join(CHECK_IDS)}")
    reports = run_suite(cfg.params, tol, checks)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.check_id:26s} max_error={r.max_error:.3e} threshold={r.threshold:.1e}", file=sys.stderr)
    ok = suite_passed(reports)
    _emit({"suite": [r.to_dict() for r in reports], "pass": ok}, cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_add(args, cfg: RunConfig) -> int:
    x, y = parse_point(args.x), parse_point(args.y)
    z = add(x, y, cfg.params)
    b = z.fiber
    branch = None if b == 0 else select_branch(x, y, cfg.params).value
    print(fmt_point(z))
    if cfg.out is not None:
        doc = {"x": fmt_point(x), "y": fmt_point(y), "result": fmt_point(z), "fiber": [b.real, b.imag], "branch": branch}
        _emit(doc, cfg.out)
    return EXIT_OK


def cmd_inverse(args, cfg: RunConfig) -> int:
    x = parse_point(args.x)
    z = inverse(x, cfg.params)
    print(fmt_point(z))
    if cfg.out is not None:
        b = z.fiber
        _emit({"x": fmt_point(x), "result": fmt_point(z), "fiber": [b.real, b.imag]}, cfg.out)
    return EXIT_OK


def cmd_locate(args, cfg: RunConfig) -> int:
    x, y = parse_point(args.x), parse_point(args.y)
    z = parse_point(args.z) if args.z else add(x, y, cfg.params)
    gp = GraphPoint(*(normalize(pt, cfg.params) for pt in (x, y, z)))
    hits = locate(gp, cfg.params)
    doc = {
        "point": [fmt_point(pt) for pt in (gp.x, gp.y, gp.z)],
        "charts": [{"chart": c.value, "coords": [[v.real, v.imag] for v in coords]} for c, coords in hits],
    }
    _emit(doc, cfg.out)
    return EXIT_OK


def sample_table(params: ModelParams, count: int, seed: int) -> list[tuple[float, ...]]:
    """Rows of the sample CSV; consecutive pairs share a regular fiber."""
    rng = np.random.default_rng(seed)
    rows = []
    for pt in sampling.sample_rows(rng, params, count, per_fiber=2):
        b = pt.fiber
        rows.append((b.real, b.imag, pt.p.real, pt.p.imag, pt.q.real, pt.q.imag))
    return rows


def cmd_sample(args, cfg: RunConfig, seed: int) -> int:
    if args.count < 0:
        raise ConfigError("--count must be non-negative")
    rows = sample_table(cfg.params, args.count, seed)
    fh = open(cfg.out, "w", newline="") if cfg.out is not None else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(SAMPLE_COLUMNS)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()
    if cfg.out is not None:
        print(json.dumps({"rows": len(rows), "columns": list(SAMPLE_COLUMNS), "seed": seed}))
    return EXIT_OK


def cmd_figure(args, cfg: RunConfig) -> int:
    kind = figures.FigureKind(args.kind)
    fibers = None
    if args.fibers:
        try:
            fibers = [float(v) for v in args.fibers.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad --fibers {args.fibers!r}") from exc
        if any(not (m > 0 and math.isfinite(m)) for m in fibers):
            raise ConfigError("fiber moduli must be positive")
    lines = figures.make_figure(kind, cfg.params, fibers)
    out = cfg.out or Path(f"{kind.value}.csv")
    rows = figures.write_csv(lines, out)
    if args.svg:
        figures.write_svg(lines, args.svg, title=kind.value)
    print(json.dumps({"kind": kind.value, "rows": rows, "curves": [ln.curve_id for ln in lines]}))
    return EXIT_OK


def cmd_recover(args, cfg: RunConfig) -> int:
    params = cfg.params
    if args.b is not None:
        fibers = [parse_complex(args.b)]
    else:
        grid = np.linspace(-0.6 * params.epsilon, 0.6 * params.epsilon, args.grid)
        fibers = [complex(u, v) for u in grid for v in grid if complex(u, v) != 0]
    points, worst = [], 0.0
    for b in fibers:
        got = recover_partials(b, params)
        want = params.s_partials(b)
        worst = max(worst, abs(got[0] - want[0]), abs(got[1] - want[1]))
        points.append({"b": [b.real, b.imag], "measured": list(got), "expected": list(want)})
    ok = worst <= cfg.tol.recover_tol
    _emit({"points": points, "max_error": worst, "threshold": cfg.tol.recover_tol, "pass": ok}, cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output path (JSON report or CSV)")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="focusfocus", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--checks", help="comma-separated subset of check ids")
    p.add_argument("--samples", type=int, help="override the configured sample count")

    p = sub.add_parser("add", parents=[common], help="add two points of one fiber")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = sub.add_parser("inverse", parents=[common], help="group inverse of a point")
    p.add_argument("--x", required=True)

    p = sub.add_parser("locate", parents=[common], help="charts containing a graph point")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", help="third point (default x + y)")

    p = sub.add_parser("sample", parents=[common], help="random canonical points as CSV")
    p.add_argument("--count", type=int, required=True)

    p = sub.add_parser("figure", parents=[common], help="(|p|, |q|) figure polylines")
    p.add_argument("--kind", required=True, choices=[k.value for k in figures.FigureKind])
    p.add_argument("--fibers", help="comma-separated fiber moduli")
    p.add_argument("--svg", help="also render an SVG to this path")

    p = sub.add_parser("recover-s", parents=[common], help="recover (S1, S2) from measured periods")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--b", help="one fiber 're,im'")
    g.add_argument("--grid", type=int, help="n x n fiber grid on [-0.6 eps, 0.6 eps]^2")
    return ap


_POINT_FLAGS = ("--x", "--y", "--z", "--b")


def _glue_point_args(argv: Sequence[str]) -> list[str]:
    """Rewrite '--x VALUE' as '--x=VALUE' so values such as '-0.3,0;...' are not read as flags."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _POINT_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def cli_run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(_glue_point_args(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        seed = cfg.tol.seed if args.seed is None else args.seed
        cfg.tol = replace(cfg.tol, seed=seed)
        cfg.out = Path(args.out) if args.out else None
        handlers = {
            "verify": lambda: cmd_verify(args, cfg),
            "add": lambda: cmd_add(args, cfg),
            "inverse": lambda: cmd_inverse(args, cfg),
            "locate": lambda: cmd_locate(args, cfg),
            "sample": lambda: cmd_sample(args, cfg, seed),
            "figure": lambda: cmd_figure(args, cfg),
            "recover-s": lambda: cmd_recover(args, cfg),
        }
        return handlers[args.command]()
    except FocusFocusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
