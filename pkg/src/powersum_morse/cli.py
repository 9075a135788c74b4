"""Command-line front end.

Exit codes: 0 success, 1 verification or cross-check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

from . import report
from .enumerator import SINGULAR, analyze
from .errors import DegenerateRegime, InconsistentTopology
from .surface import C_EDGE, C_SING, TOL_DISTINCT, TOL_SURFACE, Regime, SurfaceSpec
from .topology import component_count, genus, step_digits, sweep
from .verifier import local_extremum_probe, multistart_verify

_RADICAL = re.compile(r"^\s*([+-]?)\s*(\d+(?:\.\d*)?)\s*/\s*sqrt\(\s*(\d+(?:\.\d*)?)\s*\)\s*$")


def parse_c(text: str) -> float:
    """A real number, or a radical of the form ``[+-]a/sqrt(b)``."""
    m = _RADICAL.match(text)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        return sign * float(m.group(2)) / math.sqrt(float(m.group(3)))
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("c must be finite")
    return value


def snap_to_boundary(c: float, tol: float) -> tuple[float, str | None]:
    for b, name in ((C_SING, "1/sqrt(30)"), (C_EDGE, "3/sqrt(20)")):
        if abs(abs(c) - b) <= tol:
            exact = math.copysign(b, c)
            if exact != c:
                sign = "-" if c < 0 else ""
                return exact, f"c={c!r} snapped to {sign}{name} (within --boundary-tol {tol:g})"
            return c, None
    return c, None


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--tol-surface", type=_positive(float), default=TOL_SURFACE)
    common.add_argument("--tol-distinct", type=_positive(float), default=TOL_DISTINCT)
    common.add_argument("--format", choices=["json", "text"], default="json")

    with_c = argparse.ArgumentParser(add_help=False)
    with_c.add_argument(
        "--c", type=parse_c, required=True,
        help="value of p3; a float or a radical such as 1/sqrt(30) (write negative radicals as --c=-1/sqrt(30))",
    )
    with_c.add_argument(
        "--boundary-tol", type=float, default=5e-9,
        help=(
            "snap c to +-1/sqrt(30) or +-3/sqrt(20) when this close (default 5e-9, "
            "so 8-decimal inputs hit the boundary); the library itself compares "
            "with absolute tolerance 1e-12"
        ),
    )

    parser = argparse.ArgumentParser(
        prog="powersum-morse",
        description=(
            "Critical points of x^4+y^4+z^4+u^4+v^4 on the surface "
            "p1=0, p2=1, p3=c in R^5 and the topology of that surface."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common, with_c], help="enumerate and classify critical points")
    p.add_argument("--show-constants", action="store_true", help="print the regime boundaries")

    p = sub.add_parser("verify", parents=[common, with_c], help="multistart Newton cross-check")
    p.add_argument("--starts", type=int, default=1000)

    p = sub.add_parser("sweep", parents=[common], help="regime and count sweep over c, written as CSV")
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--step", type=_positive(float), required=True)
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    p.add_argument("--plot", help="also render critical values against c to this image file")

    p = sub.add_parser("topology", parents=[common, with_c], help="sampled component count and genus check")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--eps", type=_positive(float), default=0.15)
    return parser


def _spec(args) -> tuple[SurfaceSpec, list[str]]:
    c, note = snap_to_boundary(args.c, args.boundary_tol)
    return SurfaceSpec(c, args.tol_surface, args.tol_distinct), [note] if note else []


def _emit(doc, fmt):
    sys.stdout.write(report.dumps(doc) if fmt == "json" else report.render_text(doc))


def cmd_analyze(args, argv) -> int:
    spec, notes = _spec(args)
    rep = analyze(spec)
    probe = None
    extra = {}
    if args.show_constants:
        extra["constants"] = report.constants()
    if rep.regime is Regime.SINGULAR:
        sing = next(o for o in rep.orbits if o.morse_index == SINGULAR)
        probe = local_extremum_probe(sing.representative, spec, seed=args.seed)
        notes.append(
            f"local probe at the singular points: {probe.verdict} "
            f"(margin {probe.margin:.3e}); reference answer claims maxima"
        )
    _emit(report.build_document(argv, spec, rep, probe=probe, extra=extra, notes=notes), args.format)
    return 0


def cmd_verify(args, argv, parser) -> int:
    if args.starts < 1:
        parser.error("--starts must be at least 1")
    spec, notes = _spec(args)
    rep = analyze(spec)
    if rep.regime in (Regime.EMPTY, Regime.FIVE_POINTS):
        parser.error(f"no surface to verify on for c={spec.c} ({rep.regime.value})")
    ver = multistart_verify(spec, args.starts, args.seed)
    _emit(report.build_document(argv, spec, rep, verification=ver, notes=notes), args.format)
    return 0 if ver.ok else 1


def cmd_sweep(args, argv, parser) -> int:
    if not args.lo < args.hi:
        parser.error("empty range: need --lo < --hi")
    rows, transitions = sweep(args.lo, args.hi, args.step)
    digits = step_digits(args.step)
    try:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.sweep_csv(rows, digits))
        if args.plot:
            report.plot_sweep(rows, args.plot, args.lo, args.hi)
    except OSError as exc:
        parser.error(f"cannot write output: {exc}")
    if args.format == "json":
        doc = {
            "schema_version": report.SCHEMA_VERSION,
            "command": list(argv),
            "n_rows": len(rows),
            "output": args.output,
            "transitions": [
                {
                    "c_left": t.c_left,
                    "c_right": t.c_right,
                    "regime_left": t.regime_left.value,
                    "regime_right": t.regime_right.value,
                    "counts_left": list(t.counts_left),
                    "counts_right": list(t.counts_right),
                }
                for t in transitions
            ],
        }
        sys.stdout.write(report.dumps(doc))
    else:
        sys.stdout.write(f"{len(rows)} rows written to {args.output}\n")
        sys.stdout.write(report.transitions_text(transitions))
    return 0


def cmd_topology(args, argv, parser) -> int:
    if args.samples < 100:
        parser.error("--samples must be at least 100")
    spec, notes = _spec(args)
    rep = analyze(spec)
    if rep.regime is Regime.EMPTY:
        parser.error(f"surface is empty for c={spec.c}")
    try:
        est = component_count(spec, args.samples, args.eps, args.seed)
    except DegenerateRegime as exc:
        parser.error(str(exc))
    expected = rep.regime.components
    passed = est.n_components == expected
    if rep.euler_characteristic is not None:
        chi = rep.euler_characteristic
        try:
            g = genus(chi, est.n_components)
        except InconsistentTopology as exc:
            passed, g = False, None
            detail = str(exc)
        else:
            detail = (
                f"chi={chi} from Morse counts; components={est.n_components} "
                f"(expected {expected}); 2*components - 2*genus = "
                f"{2 * est.n_components - 2 * g} with genus={g}"
            )
            passed = passed and 2 * est.n_components - 2 * g == chi
            if est.n_components > 1 and g % est.n_components == 0:
                detail += f" ({g // est.n_components} per component)"
    else:
        g = None
        detail = f"components={est.n_components} (expected {expected}); no Morse-count chi in this regime"
    extra = {"cross_check": {"passed": passed, "genus": g, "detail": detail}}
    _emit(report.build_document(argv, spec, rep, components=est, extra=extra, notes=notes), args.format)
    return 0 if passed else 1


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze":
        return cmd_analyze(args, argv)
    if args.command == "verify":
        return cmd_verify(args, argv, parser)
    if args.command == "sweep":
        return cmd_sweep(args, argv, parser)
    return cmd_topology(args, argv, parser)


if __name__ == "__main__":
    sys.exit(main())
