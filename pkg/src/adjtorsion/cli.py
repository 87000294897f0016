"""Command-line interface.

Subcommands: verify, index, certify-grt, torsion, selftest.  Complex values
use the A+Bi literal format (decimal, no spaces), e.g. ``1.5+0.5i``.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

from .errors import AdjTorsionError
from .laurent import LaurentPoly
from .numerics import Context
from .presets import resolve_preset
from .verify import khovanskii_certify, twisted_index, verify_vanishing, _cnum


def parse_complex(text: str) -> complex:
    """Parse 'A+Bi' / 'A-Bi' literals, plus pure-real and pure-imaginary."""
    s = text.strip()
    if not s:
        raise ValueError("empty complex literal")
    if s.endswith("i"):
        body = s[:-1]
        m = re.match(r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                     r"(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)$",
                     body)
        if m:
            im = m.group("im")
            if im in ("+", "-"):
                im += "1"
            return complex(float(m.group("re")), float(im))
        if body in ("", "+", "-"):
            body += "1"
        return complex(0.0, float(body))
    return complex(float(s), 0.0)


def _slope(text: str):
    try:
        p_str, q_str = text.split(",")
        p, q = int(p_str), int(q_str)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"slope must be P,Q with integers, got {text!r}") from None
    if math.gcd(p, q) != 1:
        raise argparse.ArgumentTypeError(f"slope ({p},{q}) is not coprime")
    return p, q


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="adjtorsion",
        description="Adjoint Reidemeister torsions over trace-function "
                    "fibers of two-bridge knot exteriors")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_z=True):
        p.add_argument("--knot", required=True,
                       help="built-in preset name (4_1, 5_2, 7_4) or a "
                            "preset TOML file")
        p.add_argument("--slope", required=True, type=_slope,
                       metavar="P,Q", help="slope mu^P lambda^Q, coprime")
        if need_z:
            p.add_argument("--z", type=_complex_arg, default=None,
                           metavar="A+Bi", help="trace value z")
        p.add_argument("--x", type=_complex_arg, default=None,
                       metavar="A+Bi", help="holonomy value with x+1/x=z")
        p.add_argument("--precision", type=int, default=None, metavar="BITS",
                       help="working precision (default: preset choice)")
        p.add_argument("--json", default=None, metavar="PATH",
                       help="write the JSON report here")

    pv = sub.add_parser("verify", help="verify the vanishing sum at a fiber")
    common(pv)
    pv.add_argument("--tol", type=float, default=1e-6,
                    help="normalized vanishing tolerance (default 1e-6)")
    pv.add_argument("--plots", default=None, metavar="DIR",
                    help="render figures into this directory")

    pi = sub.add_parser("index", help="evaluate the genus-g twisted index")
    common(pi)
    pi.add_argument("--genus", type=int, required=True, metavar="G")

    pc = sub.add_parser("certify-grt",
                        help="certify the residue-theorem hypotheses (4_1)")
    pc.add_argument("--knot", default="4_1")
    pc.add_argument("--slope", required=True, type=_slope, metavar="P,Q")
    pc.add_argument("--x", type=_complex_arg, required=True, metavar="A+Bi")
    pc.add_argument("--precision", type=int, default=53, metavar="BITS")
    pc.add_argument("--json", default=None, metavar="PATH")
    pc.add_argument("--plots", default=None, metavar="DIR")

    pt = sub.add_parser("torsion",
                        help="print per-point torsions as CSV")
    common(pt)
    pt.add_argument("--plots", default=None, metavar="DIR")

    sub.add_parser("selftest", help="run the built-in invariant suite")
    return ap


def _need_z_or_x(args):
    if getattr(args, "z", None) is None and getattr(args, "x", None) is None:
        print("error: provide --z or --x", file=sys.stderr)
        return False
    return True


def cmd_verify(args) -> int:
    if not _need_z_or_x(args):
        return 2
    preset = resolve_preset(args.knot)
    p, q = args.slope
    report = verify_vanishing(preset, p, q, z=args.z, x=args.x,
                              prec=args.precision, tol=args.tol)
    print(report.summary())
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json() + "\n")
        print(f"json report: {args.json}")
    if args.plots:
        from .plots import render_report_figures
        for path in render_report_figures(report, args.plots):
            print(f"figure: {path}")
    return 0 if report.verdict == "PASS" else 1


def cmd_index(args) -> int:
    if not _need_z_or_x(args):
        return 2
    preset = resolve_preset(args.knot)
    p, q = args.slope
    value = twisted_index(preset, p, q, z=args.z, x=args.x, g=args.genus,
                          prec=args.precision)
    c = complex(float(value.real), float(value.imag))
    print(f"twisted index g={args.genus}: {c.real:.12g}"
          f"{c.imag:+.12g}i")
    if args.json:
        import json as _json
        doc = {"preset": preset.name, "slope": list(args.slope),
               "genus": args.genus, "value": _cnum(value)}
        with open(args.json, "w") as fh:
            fh.write(_json.dumps(doc, indent=2) + "\n")
        print(f"json report: {args.json}")
    return 0


def cmd_certify(args) -> int:
    preset = resolve_preset(args.knot)
    p, q = args.slope
    cert = khovanskii_certify(preset, p, q, args.x, prec=args.precision)
    status = "PASS" if cert["checks_pass"] else "FAIL"
    print(f"non-degenerate: {cert['nondegenerate']}")
    print(f"jacobian simple: {cert['jacobian_simple']} "
          f"(min |Jac|/scale = {cert['min_jacobian']:.3e})")
    print(f"strict containment: {cert['strict_containment']}")
    print(f"zeros: {cert['zero_count']}  residue metric: "
          f"{cert['residue_metric']:.3e}")
    if cert["torsion_cross_check_rel"] is not None:
        print(f"torsion cross-check: {cert['torsion_cross_check_rel']:.3e}")
    for w in cert["warnings"]:
        print(f"WARN: {w}")
    print(f"certification: {status}")
    if args.json:
        import json as _json
        with open(args.json, "w") as fh:
            fh.write(_json.dumps(cert, indent=2) + "\n")
        print(f"json report: {args.json}")
    if args.plots:
        import os
        from .plots import save_polytope_plot
        os.makedirs(args.plots, exist_ok=True)
        comp = preset.components[0]
        ctx = Context(args.precision)
        b = LaurentPoly.monomial(("m", "l"), (p, q)) - ctx.convert(args.x)
        path = save_polytope_plot(
            comp.apoly, b,
            os.path.join(args.plots, f"polytopes_{preset.name}_{p}_{q}.png"))
        print(f"figure: {path}")
    return 0 if cert["checks_pass"] else 1


def cmd_torsion(args) -> int:
    if not _need_z_or_x(args):
        return 2
    preset = resolve_preset(args.knot)
    p, q = args.slope
    report = verify_vanishing(preset, p, q, z=args.z, x=args.x,
                              prec=args.precision)
    print("component,re_y,im_y,re_m,im_m,re_l,im_l,re_torsion,im_torsion,"
          "residual")
    for comp in report.components:
        for pt in comp.points:
            t = pt.torsion_gamma

            def f(v):
                return f"{float(v):.17g}"
            print(",".join([
                str(comp.index),
                f(pt.y.real), f(pt.y.imag),
                f(pt.m.real), f(pt.m.imag),
                f(pt.l.real), f(pt.l.imag),
                f(t.real), f(t.imag),
                f"{max(pt.residuals):.3e}",
            ]))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json() + "\n")
    if args.plots:
        from .plots import render_report_figures
        for path in render_report_figures(report, args.plots):
            print(f"figure: {path}", file=sys.stderr)
    return 0


def cmd_selftest(_args) -> int:
    from .selftest import run_selftest
    return run_selftest()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "verify": cmd_verify,
        "index": cmd_index,
        "certify-grt": cmd_certify,
        "torsion": cmd_torsion,
        "selftest": cmd_selftest,
    }[args.command]
    try:
        return handler(args)
    except AdjTorsionError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
