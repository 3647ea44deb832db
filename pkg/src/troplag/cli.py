"""Command line front end.

Exit codes: 0 success, 2 validation failure (a report is still printed),
1 internal or input error.  Output is deterministic: canonical JSON by
default, a flat key/value table with --format table.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import topology
from .curve import betti_and_degree, toric_degree_of_ends, validate_curve
from .domain import (check_even_primitive, suitability_check,
                     validate_delzant, wavefront)
from .errors import VALIDATION_CODES, WorkbenchError
from .io_json import (canonical_json, curve_to_dict, load_curve, load_domain,
                      load_lines)
from .multiplicity import (enumerate_count, ev_matrix, mixed_h_product,
                           multiplicity_det)


def _parser():
    p = argparse.ArgumentParser(
        prog="troplag",
        description="Exact workbench for tropical curves in Delzant "
                    "domains and their Lagrangian invariants.")
    p.add_argument("command",
                   choices=["validate", "multiplicity", "h1", "surface",
                            "pieces", "lens", "enumerate", "wavefront",
                            "suitability"])
    p.add_argument("--curve", help="curve JSON file")
    p.add_argument("--domain", help="domain JSON file")
    p.add_argument("--lines", help="line configuration JSON file")
    p.add_argument("--root", help="root for the mixed product: end:<j> or "
                                  "a vertex id")
    p.add_argument("--relaxed", action="store_true",
                   help="allow weights > 1 away from the boundary")
    p.add_argument("--delta", help="offset for the wavefront, as p/q")
    p.add_argument("--kappa-cap", type=int, default=8,
                   help="end-count cap for the enumerator")
    p.add_argument("--format", choices=["json", "table"], default="json")
    return p


def _table(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            lines.extend(_table(obj[k], f"{prefix}{k}."))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.extend(_table(v, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix[:-1]}: {obj}")
    return lines


def _emit(report, fmt):
    if fmt == "table":
        return "\n".join(_table(report)) + "\n"
    return canonical_json(report)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise WorkbenchError("USAGE",
                                 f"--{name} is required for this command")


def _zs_from_lines(curve, lines):
    ends = curve.ends()
    if len(lines) != len(ends):
        raise WorkbenchError("LABEL_MISMATCH",
                             f"{len(lines)} lines for {len(ends)} ends")
    return [l.direction for l in lines.lines]


def _parse_root(value):
    if value is None:
        return None
    if value.startswith("end:"):
        return ("end", int(value[4:]))
    return value


def run_command(argv):
    """Run one command; returns (exit code, output text)."""
    args = _parser().parse_args(argv)
    fmt = args.format
    try:
        if args.command == "validate":
            _require(args, "curve")
            curve = load_curve(args.curve)
            report = {"curve": validate_curve(curve).as_dict()}
            ok = report["curve"]["ok"]
            if args.domain:
                dom = load_domain(args.domain)
                report["domain"] = validate_delzant(dom).as_dict()
                even = check_even_primitive(curve, dom, args.relaxed)
                report["evenPrimitive"] = even.as_dict()
                ok = ok and report["domain"]["ok"] and even.ok
            return (0 if ok else 2), _emit(report, fmt)

        if args.command == "multiplicity":
            _require(args, "curve", "lines")
            curve = load_curve(args.curve)
            lines = load_lines(args.lines)
            zs = _zs_from_lines(curve, lines)
            value = mixed_h_product(curve, zs, _parse_root(args.root))
            report = {"mixedHProduct": value, "method": "RECURSIVE"}
            if len(curve.ends()) >= 3:
                det = multiplicity_det(ev_matrix(curve, zs))
                report["determinant"] = det.value
                report["agree"] = det.value == value
            return 0, _emit(report, fmt)

        if args.command == "h1":
            _require(args, "curve")
            curve = load_curve(args.curve)
            if args.domain:
                rep = topology.h1_order(curve, domain=load_domain(args.domain))
            else:
                _require(args, "lines")
                lines = load_lines(args.lines)
                rep = topology.h1_order(curve,
                                        zs=_zs_from_lines(curve, lines))
            return 0, _emit(rep.as_dict(), fmt)

        if args.command == "surface":
            _require(args, "curve", "domain")
            curve = load_curve(args.curve)
            dom = load_domain(args.domain)
            rep = topology.surface_report(curve, dom, args.relaxed)
            return 0, _emit(rep.as_dict(), fmt)

        if args.command == "pieces":
            _require(args, "curve")
            curve = load_curve(args.curve)
            if args.domain:
                rep = topology.piece_decomposition(
                    curve, domain=load_domain(args.domain),
                    relaxed=args.relaxed)
            else:
                _require(args, "lines")
                lines = load_lines(args.lines)
                rep = topology.piece_decomposition(
                    curve, zs=_zs_from_lines(curve, lines))
            return 0, _emit(rep.as_dict(), fmt)

        if args.command == "lens":
            _require(args, "curve")
            curve = load_curve(args.curve)
            if args.domain:
                rep = topology.lens_parameters(curve,
                                               domain=load_domain(args.domain))
            else:
                _require(args, "lines")
                lines = load_lines(args.lines)
                rep = topology.lens_parameters(
                    curve, zs=_zs_from_lines(curve, lines))
            return 0, _emit(rep.as_dict(), fmt)

        if args.command == "enumerate":
            _require(args, "curve", "lines")
            curve = load_curve(args.curve)
            lines = load_lines(args.lines)
            degree = toric_degree_of_ends(curve)
            rep = enumerate_count(degree, lines, kappa_cap=args.kappa_cap)
            out = rep.as_dict()
            out["kappa"] = len(degree)
            return 0, _emit(out, fmt)

        if args.command == "wavefront":
            _require(args, "domain", "delta")
            dom = load_domain(args.domain)
            curve = wavefront(dom, Fraction(args.delta))
            report = curve_to_dict(curve)
            report["betti"] = betti_and_degree(curve).as_dict()
            return 0, _emit(report, fmt)

        if args.command == "suitability":
            _require(args, "curve", "lines")
            curve = load_curve(args.curve)
            lines = load_lines(args.lines)
            rep = suitability_check(curve, lines)
            return (0 if rep.ok else 2), _emit(rep.as_dict(), fmt)

        raise WorkbenchError("USAGE", f"unknown command {args.command}")
    except WorkbenchError as err:
        payload = {"error": err.code, "message": str(err)}
        code = 2 if err.code in VALIDATION_CODES else 1
        return code, _emit(payload, fmt)


def main(argv=None):
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
