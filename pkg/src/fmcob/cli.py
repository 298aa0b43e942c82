"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
parse or model errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .beauville_model import BeauvilleAlgebra, ModelError, ell_rk1, ext_oracle, taut, tensor_product
from .checks import run_check
from .cobordism import (
    beauville_decompose,
    fourier_via_kernel,
    fourier_via_psi,
    format_omega,
    parse_class,
    within_bounds,
)
from .coeff_ring import DEFAULT_ORDER, TPoly, format_tpoly
from .expr import ExprError
from .formal_series import compose, exp_of_u, format_series, kernel_series, lambda_t, log_t
from .motives import canonical_projectors, format_correspondence, projector_suite
from .report import Report

BUILTINS = "taut:g, ext:g, ell-rk1, product:g1,g2"


class UsageError(Exception):
    pass


def _positive(text: str, what: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None
    if value < 1:
        raise UsageError(f"{what} must be positive, got {value}")
    return value


def resolve_model(spec: str) -> BeauvilleAlgebra:
    """Built-in name or path to a model file."""
    if spec == "ell-rk1":
        return ell_rk1()
    head, sep, rest = spec.partition(":")
    if sep and head in ("taut", "ext", "product") and not Path(spec).exists():
        if head == "taut":
            return taut(_positive(rest, "g"))
        if head == "ext":
            return ext_oracle(_positive(rest, "g"))
        parts = rest.split(",")
        if len(parts) != 2:
            raise UsageError(f"product needs two dimensions, got {rest!r}")
        return tensor_product(taut(_positive(parts[0], "g1")), taut(_positive(parts[1], "g2")))
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"unknown model {spec!r} (built-ins: {BUILTINS}, or a model file)")
    from .model_io import load_model

    return load_model(path)


def _order(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer, got {text!r}") from None
    if not 1 <= value <= 12:
        raise argparse.ArgumentTypeError(f"order must be between 1 and 12, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_order, default=DEFAULT_ORDER,
                        help="truncation order D of the t-ring and series (1..12)")
    common.add_argument("--model", help="model name or file (alternative to the positional)")
    common.add_argument("--format", choices=("text", "tsv"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(
        prog="fmcob",
        description="Fourier transform on cobordism of abelian varieties over finite models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check model invariants")
    p.add_argument("model_pos", nargs="?", metavar="MODEL")

    p = sub.add_parser("fourier", parents=[common], help="Fourier transform of a class")
    p.add_argument("model_pos", nargs="?", metavar="MODEL")
    p.add_argument("expr", nargs="?", metavar="EXPR")
    p.add_argument("--route", choices=("psi", "kernel", "both"), default="psi")

    p = sub.add_parser("decompose", parents=[common], help="Beauville components of a class")
    p.add_argument("model_pos", nargs="?", metavar="MODEL")
    p.add_argument("expr", nargs="?", metavar="EXPR")

    p = sub.add_parser("projectors", parents=[common], help="canonical projectors and their identities")
    p.add_argument("model_pos", nargs="?", metavar="MODEL")

    p = sub.add_parser("check", parents=[common], help="run every identity suite")
    p.add_argument("model_pos", nargs="?", metavar="MODEL")

    sub.add_parser("series", parents=[common], help="print lambda_(t), l_(t), G and the collapse table")
    return parser


def _fix_positionals(args) -> None:
    # with --model given, a lone positional is the expression
    if getattr(args, "model", None) and hasattr(args, "expr") and args.model_pos is not None:
        if args.expr is None:
            args.expr, args.model_pos = args.model_pos, None


def _expr_arg(args) -> str:
    if not args.expr:
        raise UsageError("no class expression given")
    return args.expr


def _model_arg(args) -> BeauvilleAlgebra:
    spec = args.model or args.model_pos
    if args.model and args.model_pos and args.model != args.model_pos:
        raise UsageError("give the model either positionally or with --model, not both")
    if not spec:
        raise UsageError("no model given")
    return resolve_model(spec)


def _emit(out, report: Report, fmt: str) -> None:
    if report:
        out.write(report.render(fmt) + "\n")


def cmd_validate(args, out) -> int:
    from .beauville_model import validate

    report = validate(_model_arg(args))
    _emit(out, report, args.format)
    return 0 if report.ok else 1


def cmd_fourier(args, out) -> int:
    B = _model_arg(args)
    x = parse_class(_expr_arg(args), B, args.order)
    results = {}
    if args.route in ("psi", "both"):
        results["psi"] = fourier_via_psi(x)
    if args.route in ("kernel", "both"):
        results["kernel"] = fourier_via_kernel(x)
    for route, y in results.items():
        text = format_omega(y)
        out.write(f"{route}\t{text}\n" if args.format == "tsv" else f"{route}: {text}\n")
    if args.route == "both":
        if results["psi"] == results["kernel"]:
            out.write("routes agree\n")
            return 0
        out.write(f"routes differ: {format_omega(results['psi'] - results['kernel'])}\n")
        return 1
    return 0


def cmd_decompose(args, out) -> int:
    B = _model_arg(args)
    x = parse_class(_expr_arg(args), B, args.order)
    g = B.g
    ok = True
    if args.format == "tsv":
        out.write("p\ts\tlower\tupper\tstatus\tclass\n")
    for (p, s), part in beauville_decompose(x).items():
        lo, hi = 2 * p - 2 * g, min(2 * p, p)
        inside = within_bounds(p, s, g)
        ok &= inside
        status = "ok" if inside else "OUT-OF-BOUNDS"
        if args.format == "tsv":
            out.write(f"{p}\t{s}\t{lo}\t{hi}\t{status}\t{format_omega(part)}\n")
        else:
            out.write(f"p={p} s={s} bounds=[{lo},{hi}] {status}: {format_omega(part)}\n")
    return 0 if ok else 1


def cmd_projectors(args, out) -> int:
    B = _model_arg(args)
    report = Report()
    try:
        pis = canonical_projectors(B)
    except ModelError as exc:
        report.add(False, "perfect-pairing", B.name, str(exc))
        _emit(out, report, args.format)
        return 1
    for i, p in enumerate(pis):
        text = format_correspondence(p)
        out.write(f"pi_{i}\t{text}\n" if args.format == "tsv" else f"pi_{i} = {text}\n")
    report = projector_suite(B, args.order, args.seed)
    _emit(out, report, args.format)
    return 0 if report.ok else 1


def cmd_check(args, out) -> int:
    report = run_check(_model_arg(args), args.order, args.seed)
    _emit(out, report, args.format)
    return 0 if report.ok else 1


def cmd_series(args, out) -> int:
    D = args.order
    lam, log, G = lambda_t(D), log_t(D), kernel_series(D)
    for title, f in (("lambda_(t)", lam), ("l_(t)", log), ("G = exp(l_(t))", G)):
        out.write(f"# {title}\n{format_series(f)}\n")
    collapse = compose(G, lam)
    target = exp_of_u(D, TPoly.const(1, D))
    out.write("# G(lambda_(t)(u)) against exp(u)\n")
    ok = True
    for k in range(D + 1):
        left, right = collapse[k], target[k]
        equal = left == right
        ok &= equal
        cells = [f"u^{k}", format_tpoly(left), format_tpoly(right), "equal" if equal else "DIFFERENT"]
        out.write(("\t".join(cells) if args.format == "tsv" else " | ".join(cells)) + "\n")
    return 0 if ok else 1


COMMANDS = {
    "validate": cmd_validate,
    "fourier": cmd_fourier,
    "decompose": cmd_decompose,
    "projectors": cmd_projectors,
    "check": cmd_check,
    "series": cmd_series,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _fix_positionals(args)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ModelError, ExprError) as exc:
        sys.stderr.write(f"fmcob: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
