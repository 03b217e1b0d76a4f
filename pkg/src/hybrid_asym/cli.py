"""Command-line front end.

Verbs: ``coeffs``, ``constants``, ``compare``, ``expand``, ``asym``, ``report``.
Exit codes: 0 success, 2 usage, 3 I/O failure, 4 numeric validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .cases import constant, named_gf, case_report
from .numerics import RootOfUnity
from .pipeline import ValidationError, assemble, error_profile, radial_expansion

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4
MIN_PREC = 20
MAX_N = 4096
CSV_DIGITS = 30


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    gf: str | None
    n_max: int
    depth: Fraction
    roots: int
    prec: int
    fmt: str
    out: str | None

    def __post_init__(self):
        if self.prec < MIN_PREC:
            raise UsageError(f"--prec must be >= {MIN_PREC}")
        if not 0 <= self.n_max <= MAX_N:
            raise UsageError(f"--n-max must lie in [0, {MAX_N}]")
        if self.roots < 1:
            raise UsageError("--roots must be >= 1")


def _default_prec() -> int:
    raw = os.environ.get("HYBRID_ASYM_PREC")
    if raw is None:
        return 50
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"HYBRID_ASYM_PREC must be an integer, got {raw!r}") from None


def _num(x, digits: int = CSV_DIGITS) -> str:
    if x is None:
        return "nan"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        x = mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, mpmath.mpc) and x.imag == 0:
        x = x.real
    if isinstance(x, mpmath.mpc):
        return f"{mpmath.nstr(x.real, digits)}{'+' if x.imag >= 0 else '-'}{mpmath.nstr(abs(x.imag), digits)}j"
    return mpmath.nstr(x, digits)


def _exact(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return _num(x)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _table(header: list, rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_coeffs(cfg: RunConfig, numeric: bool) -> str:
    gf = named_gf(cfg.gf)
    coeffs = gf.coefficients(cfg.n_max)
    counts = gf.counts(cfg.n_max) if gf.counts is not None else None
    header = ["n", "coefficient"] + (["count"] if counts is not None else [])
    rows = []
    for n in range(cfg.n_max + 1):
        c = _num(coeffs[n]) if numeric else _exact(coeffs[n])
        rows.append([n, c] + ([str(counts[n])] if counts is not None else []))
    return _table(header, rows, cfg.fmt)


def cmd_constants(name: str, digits: int, fmt: str) -> str:
    try:
        c = constant(name)
    except KeyError:
        raise UsageError(f"unknown constant {name!r}") from None
    if fmt == "json":
        return json.dumps(c.as_dict(digits), indent=2) + "\n"
    return mpmath.nstr(c.value, digits) + "\n"


def _spec(cfg: RunConfig):
    gf = named_gf(cfg.gf)
    if gf.spec is None:
        raise UsageError(f"{cfg.gf} has no exp-log specification for the hybrid pipeline")
    return gf.spec()


def cmd_compare(cfg: RunConfig, scaling: str) -> str:
    spec = _spec(cfg)
    e = assemble(spec, cfg.roots, cfg.depth)
    rows = error_profile(spec, e, cfg.n_max, scaling, n_min=1) if cfg.n_max >= 1 else []
    table = [[r.n, _num(r.exact), _num(r.approx), _num(r.scaled)] for r in rows]
    return _table(["n", "exact", "approx", "scaled_residual"], table, "csv" if cfg.fmt == "text" else cfg.fmt)


def _lps_json(lps) -> dict:
    return {
        "center": str(lps.center),
        "order": str(lps.order),
        "terms": [
            {"alpha": str(a), "log_power": k, "re": _num(c.real if isinstance(c, mpmath.mpc) else c),
             "im": _num(c.imag if isinstance(c, mpmath.mpc) else 0)}
            for (a, k), c in lps.sorted_terms()
        ],
    }


def cmd_expand(cfg: RunConfig, root: str) -> str:
    spec = _spec(cfg)
    try:
        zeta = RootOfUnity.parse(root)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lps = radial_expansion(spec, zeta, cfg.depth)
    if cfg.fmt == "json":
        return json.dumps(_lps_json(lps), indent=2) + "\n"
    lines = [f"# {spec.name} at {zeta}: X = 1 - z/zeta, Lam = log(1/X), error O(X^{lps.order})"]
    for (a, k), c in lps.sorted_terms():
        lines.append(f"{_num(c, 20)} * X^({a}) * Lam^{k}")
    return "\n".join(lines) + "\n"


def cmd_asym(cfg: RunConfig) -> str:
    spec = _spec(cfg)
    e = assemble(spec, cfg.roots, cfg.depth)
    terms = e.sorted_terms()
    if cfg.fmt == "json":
        payload = {
            "gf": spec.name,
            "error_order": str(e.error_order),
            "terms": [
                {"root": str(z), "beta": str(b), "log_power": j,
                 "re": _num(mpmath.mpc(a).real), "im": _num(mpmath.mpc(a).imag)}
                for (z, b, j), a in terms
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = [f"# [z^n] {spec.name} = sum amp * zeta^-n * n^-beta * log(n)^j + o(n^-{e.error_order})"]
    for (z, b, j), a in terms:
        lines.append(f"{z}\t{b}\t{j}\t{_num(a, 20)}")
    return "\n".join(lines) + "\n"


def cmd_report(cfg: RunConfig) -> str:
    try:
        rep = case_report(cfg.gf, cfg.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return json.dumps(rep.as_dict(), indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybrid-asym", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="working precision in decimal digits")
    common.add_argument("--format", choices=("csv", "json", "text"), default="text")
    common.add_argument("--out", default=None, help="write output to this file")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", parents=[common], help="exact coefficient dump")
    c.add_argument("gf")
    c.add_argument("--n-max", type=int, default=20)
    c.add_argument("--float", action="store_true", help="render coefficients as decimals")

    k = sub.add_parser("constants", parents=[common], help="a named constant by two routes")
    k.add_argument("name")
    k.add_argument("--digits", type=int, default=15)

    cmp_ = sub.add_parser("compare", parents=[common], help="exact versus asymptotic coefficients")
    cmp_.add_argument("gf")
    cmp_.add_argument("--n-max", type=int, default=1000)
    cmp_.add_argument("--depth", default="3", help="keep n^-beta with beta <= depth")
    cmp_.add_argument("--roots", type=int, default=1, help="largest root-of-unity order")
    cmp_.add_argument("--scaling", choices=("n3", "n4log3", "none"), default="n3")

    e = sub.add_parser("expand", parents=[common], help="radial expansion at a root of unity")
    e.add_argument("gf")
    e.add_argument("--root", default="1/0", help="'l/j' for exp(2 i pi j / l)")
    e.add_argument("--order", default="1", help="error order t")

    a = sub.add_parser("asym", parents=[common], help="assembled asymptotic expansion")
    a.add_argument("gf")
    a.add_argument("--depth", default="3")
    a.add_argument("--roots", type=int, default=1)

    r = sub.add_parser("report", parents=[common], help="case-study report as JSON")
    r.add_argument("gf")
    r.add_argument("--n-max", type=int, default=1000)
    return p


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def run(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        prec = args.prec if args.prec is not None else _default_prec()
        depth = _fraction(getattr(args, "depth", None) or getattr(args, "order", "1"))
        cfg = RunConfig(
            command=args.command,
            gf=getattr(args, "gf", None),
            n_max=getattr(args, "n_max", 0),
            depth=depth,
            roots=getattr(args, "roots", 1),
            prec=prec,
            fmt=args.format,
            out=args.out,
        )
        with mpmath.workdps(cfg.prec):
            if cfg.command == "coeffs":
                text = cmd_coeffs(cfg, args.float)
            elif cfg.command == "constants":
                text = cmd_constants(args.name, args.digits, cfg.fmt)
            elif cfg.command == "compare":
                text = cmd_compare(cfg, args.scaling)
            elif cfg.command == "expand":
                text = cmd_expand(cfg, args.root)
            elif cfg.command == "asym":
                text = cmd_asym(cfg)
            else:
                text = cmd_report(cfg)
    except UsageError as exc:
        print(f"hybrid-asym: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"hybrid-asym: validation failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"hybrid-asym: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _emit(text, cfg.out)
    except OSError as exc:
        print(f"hybrid-asym: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
