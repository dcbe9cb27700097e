"""Command-line front end.

Exit codes: 0 certified / verified, 1 refuted or not verified, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from mmcheck import __version__
from mmcheck.classify import (
    CERTIFIED,
    CertificationRequest,
    certify_convex,
    certify_monotone,
    definition_oracle_convex,
    definition_oracle_monotone,
)
from mmcheck.errors import MmcheckError, ParseError
from mmcheck.expr import ExpressionFunction
from mmcheck.kernels import weight_i, weight_j
from mmcheck.matrices import hankel_k, hankel_m, kraus, loewner, psd_verdict
from mmcheck.quadrature import QuadratureRule
from mmcheck.represent import verify_kraus_representation, verify_loewner_representation
from mmcheck.validation import check_interval, check_order, check_positive_int, check_tolerance

SCHEMA_VERSION = 1
SCHEMA_PATH = Path(__file__).with_name("schema") / "report.schema.json"

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2


class UsageError(MmcheckError, ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    function: str | None = None
    interval: tuple | None = None
    n: int | None = None
    property: str | None = None
    tolerance: float = 1e-9
    grid_size: int = 256
    random_tuples: int = 64
    trials: int = 200
    seed: int = 0
    nodes: int = 48
    points: tuple | None = None
    lambda0: float | None = None
    t: float | None = None
    which: str | None = None
    threshold: float = 1e-7
    format: str = "text"
    output: str | None = None
    extra: dict = field(default_factory=dict)


def _floats(text, name):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--{name} expects comma-separated numbers, got {text!r}") from exc


def _interval(text):
    vals = _floats(text, "interval")
    if len(vals) != 2:
        raise UsageError(f"--interval expects 'a,b', got {text!r}")
    return check_interval(vals)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mmcheck",
        description="Certify matrix monotonicity / convexity of order n.",
    )
    parser.add_argument("--version", action="version", version=f"mmcheck {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--tol", type=float, default=1e-9, dest="tolerance")

    def func(p, required=True):
        p.add_argument("--function", required=required, help="expression in x, e.g. 'sqrt(x)'")

    p = sub.add_parser("classify", help="certify or refute a property on an interval")
    common(p)
    func(p)
    p.add_argument("--property", choices=("monotone", "convex"), required=True)
    p.add_argument("--interval", required=True, help="a,b")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=int, default=256, dest="grid_size")
    p.add_argument("--tuples", type=int, default=64, dest="random_tuples")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("oracle", help="definition check on random matrix pairs")
    common(p)
    func(p)
    p.add_argument("--property", choices=("monotone", "convex"), required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("loewner", help="Loewner matrix and its PSD verdict")
    common(p)
    func(p)
    p.add_argument("--points", required=True)
    p.add_argument("--interval")

    p = sub.add_parser("kraus", help="Kraus matrix and its PSD verdict")
    common(p)
    func(p)
    p.add_argument("--points", required=True)
    p.add_argument("--lambda0", type=float, required=True)
    p.add_argument("--interval")

    p = sub.add_parser("hankel", help="Hankel matrix M(t) or K(t) and its PSD verdict")
    common(p)
    func(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=("M", "K"), default="M")
    p.add_argument("--interval")

    p = sub.add_parser("kernel", help="dump the weight kernel I or J as JSON")
    common(p)
    p.add_argument("--which", choices=("I", "J"), default="I")
    p.add_argument("--points", required=True)
    p.add_argument("--lambda0", type=float)

    p = sub.add_parser("verify-representation", help="quadrature check of an integral identity")
    common(p)
    func(p)
    p.add_argument("--which", choices=("loewner", "kraus"), default="loewner")
    p.add_argument("--points", required=True)
    p.add_argument("--lambda0", type=float)
    p.add_argument("--nodes", type=int, default=48)
    p.add_argument("--threshold", type=float, default=1e-7)
    p.add_argument("--interval")
    return parser


def _config(ns):
    cfg = RunConfig(subcommand=ns.subcommand)
    for key, value in vars(ns).items():
        if key in ("subcommand",):
            continue
        if key == "interval" and value is not None:
            value = _interval(value)
        elif key == "points" and value is not None:
            value = _floats(value, "points")
        setattr(cfg, key, value)
    cfg.tolerance = check_tolerance(cfg.tolerance, "tol")
    if cfg.n is not None:
        cfg.n = check_order(cfg.n)
    for name in ("grid_size", "nodes"):
        check_positive_int(getattr(cfg, name), name)
    for name in ("random_tuples", "trials"):
        check_positive_int(getattr(cfg, name), name, min_val=0)
    return cfg


def _function(cfg):
    domain = cfg.interval if cfg.interval is not None else (-math.inf, math.inf)
    return ExpressionFunction(cfg.function, domain=domain)


def _matrix_result(M, tol):
    v = psd_verdict(M, tol)
    status = "psd" if v.is_psd else "not-psd"
    return status, {"matrix": np.asarray(M).tolist(), "psd": v.to_dict()}


def execute(cfg):
    """Run one subcommand; returns ``(exit_code, status, result)``."""
    cmd = cfg.subcommand
    if cmd == "classify":
        req = CertificationRequest(
            f=_function(cfg),
            interval=cfg.interval,
            n=cfg.n,
            property=cfg.property,
            grid_size=cfg.grid_size,
            random_tuples=cfg.random_tuples,
            trials=cfg.trials,
            seed=cfg.seed,
            tol=cfg.tolerance,
        )
        report = (certify_monotone if cfg.property == "monotone" else certify_convex)(req)
        code = EXIT_OK if report.verdict == CERTIFIED else EXIT_REFUTED
        return code, report.verdict, report.to_dict()
    if cmd == "oracle":
        oracle = definition_oracle_monotone if cfg.property == "monotone" else definition_oracle_convex
        report = oracle(_function(cfg), cfg.interval, cfg.n, cfg.trials, cfg.seed, cfg.tolerance)
        code = EXIT_OK if report.verdict == CERTIFIED else EXIT_REFUTED
        return code, report.verdict, report.to_dict()
    if cmd in ("loewner", "kraus", "hankel"):
        f = _function(cfg)
        if cmd == "loewner":
            M = loewner(f, cfg.points)
        elif cmd == "kraus":
            M = kraus(f, cfg.lambda0, cfg.points)
        else:
            M = (hankel_m if cfg.which == "M" else hankel_k)(f, cfg.t, cfg.n)
        status, result = _matrix_result(M, cfg.tolerance)
        return (EXIT_OK if status == "psd" else EXIT_REFUTED), status, result
    if cmd == "kernel":
        if cfg.which == "I":
            kernel = weight_i(cfg.points)
        else:
            if cfg.lambda0 is None:
                raise UsageError("--which J needs --lambda0")
            kernel = weight_j(cfg.lambda0, cfg.points)
        result = kernel.to_dict()
        result["which"] = cfg.which
        result["integral"] = kernel.integral()
        return EXIT_OK, "ok", result
    if cmd == "verify-representation":
        f = _function(cfg)
        rule = QuadratureRule(cfg.nodes)
        if cfg.which == "loewner":
            rep = verify_loewner_representation(f, cfg.points, rule, cfg.tolerance)
        else:
            if cfg.lambda0 is None:
                raise UsageError("--which kraus needs --lambda0")
            rep = verify_kraus_representation(f, cfg.lambda0, cfg.points, rule, cfg.tolerance)
        ok = rep.max_rel_defect < cfg.threshold
        return (EXIT_OK if ok else EXIT_REFUTED), ("verified" if ok else "failed"), rep.to_dict()
    raise UsageError(f"unknown subcommand {cmd!r}")


def _config_echo(cfg):
    out = asdict(cfg)
    out.pop("extra")
    out.pop("output")
    for key in ("interval", "points"):
        if out[key] is not None:
            out[key] = list(out[key])
    return out


def _plain(obj):
    # strict JSON: non-finite floats become null
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def make_document(cfg, code, status, result):
    return _plain({
        "schema_version": SCHEMA_VERSION,
        "tool": "mmcheck",
        "version": __version__,
        "command": cfg.subcommand if cfg is not None else None,
        "config": _config_echo(cfg) if cfg is not None else None,
        "exit_code": code,
        "status": status,
        "result": result,
    })


def _text(cfg, status, result):
    cmd = cfg.subcommand
    if cmd in ("classify", "oracle"):
        methods = ", ".join(result["methods_agreeing"])
        line = (
            f"{status}: {cfg.property} of order {cfg.n} on ({cfg.interval[0]:g}, {cfg.interval[1]:g});"
            f" worst margin {result['worst_margin']:.3e}; agreeing: {methods}"
        )
        lines = [line]
        for w in result["witnesses"][:1]:
            lines.append(
                f"  witness [{w['method']}] {json.dumps(w['location'])} min eigenvalue {w['min_eigenvalue']:.6g}"
            )
        return "\n".join(lines)
    if cmd in ("loewner", "kraus", "hankel"):
        psd = result["psd"]
        return f"{status}: min eigenvalue {psd['min_eigenvalue']:.6g}, margin {psd['margin']:.3e}\n" + "\n".join(
            "  " + " ".join(f"{x: .10g}" for x in row) for row in result["matrix"]
        )
    if cmd == "kernel":
        return json.dumps(result, indent=2)
    return (
        f"{status}: max relative defect {result['max_rel_defect']:.3e},"
        f" max absolute defect {result['max_abs_defect']:.3e}, pieces {result['pieces_used']}"
    )


def emit_report(document, fmt="text", path=None, text=None):
    """Write a report as text or JSON to ``path`` (stdout when ``None``)."""
    if fmt == "json":
        payload = json.dumps(_plain(document), indent=2, allow_nan=False) + "\n"
    else:
        payload = (text if text is not None else json.dumps(document)) + "\n"
    if path is None:
        sys.stdout.write(payload)
    else:
        Path(path).write_text(payload)


#: Flags whose values may start with "-" (negative numbers, "-1/x").
VALUE_FLAGS = ("--function", "--interval", "--points", "--lambda0", "--t")


def _attach_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None):
    parser = build_parser()
    argv = _attach_values(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = None
    try:
        cfg = _config(ns)
        code, status, result = execute(cfg)
    except ParseError as exc:
        return _fail(ns, cfg, f"parse error in --function: {exc}")
    except (MmcheckError, ValueError) as exc:
        return _fail(ns, cfg, str(exc))
    doc = make_document(cfg, code, status, result)
    try:
        emit_report(doc, cfg.format, cfg.output, _text(cfg, status, result))
    except OSError as exc:
        print(f"mmcheck: error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


def _fail(ns, cfg, message):
    print(f"mmcheck: error: {message}", file=sys.stderr)
    if getattr(ns, "format", "text") == "json":
        doc = make_document(cfg, EXIT_USAGE, "error", {"message": message})
        try:
            emit_report(doc, "json", getattr(ns, "output", None))
        except OSError:
            pass
    return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
