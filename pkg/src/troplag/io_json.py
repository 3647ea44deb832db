"""JSON input/output for curves, domains and line configurations.

Rationals travel as "p/q" strings (plain integers are accepted);
floating point numbers are rejected everywhere.  Schema violations
report a JSON-pointer-style path.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .curve import TropicalCurve
from .domain import PolyhedralDomain, LineConfiguration
from .errors import WorkbenchError


def _schema_error(pointer, message):
    return WorkbenchError("SCHEMA_ERROR", message, pointer)


def parse_rational(value, pointer):
    if isinstance(value, bool):
        raise _schema_error(pointer, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise _schema_error(pointer,
                            "floating point numbers are not accepted")
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise WorkbenchError("PARSE_ERROR",
                                 f"bad rational {value!r}: {exc}", pointer)
    raise _schema_error(pointer, f"expected a rational, got {type(value).__name__}")


def parse_int(value, pointer):
    if isinstance(value, bool) or isinstance(value, float):
        raise _schema_error(pointer, "expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError as exc:
            raise WorkbenchError("PARSE_ERROR",
                                 f"bad integer {value!r}: {exc}", pointer)
    raise _schema_error(pointer, f"expected an integer, got {type(value).__name__}")


def _need(obj, key, pointer):
    if not isinstance(obj, dict) or key not in obj:
        raise _schema_error(f"{pointer}/{key}", "missing field")
    return obj[key]


def _int_vector(value, pointer, dim=None):
    if not isinstance(value, list):
        raise _schema_error(pointer, "expected a list of integers")
    if dim is not None and len(value) != dim:
        raise _schema_error(pointer, f"expected {dim} coordinates")
    return tuple(parse_int(v, f"{pointer}/{i}") for i, v in enumerate(value))


def _rational_vector(value, pointer, dim=None):
    if not isinstance(value, list):
        raise _schema_error(pointer, "expected a list of rationals")
    if dim is not None and len(value) != dim:
        raise _schema_error(pointer, f"expected {dim} coordinates")
    return tuple(parse_rational(v, f"{pointer}/{i}")
                 for i, v in enumerate(value))


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise WorkbenchError("PARSE_ERROR", str(exc), path)
    except json.JSONDecodeError as exc:
        raise WorkbenchError("PARSE_ERROR",
                             f"invalid JSON: {exc}", f"{path}:{exc.lineno}")


def curve_from_dict(data) -> TropicalCurve:
    dim = parse_int(_need(data, "dim", ""), "/dim")
    raw_vertices = _need(data, "vertices", "")
    raw_edges = _need(data, "edges", "")
    if not isinstance(raw_vertices, list) or not isinstance(raw_edges, list):
        raise _schema_error("/", "vertices and edges must be lists")
    vertices = []
    for i, v in enumerate(raw_vertices):
        vid = _need(v, "id", f"/vertices/{i}")
        pos = _rational_vector(_need(v, "pos", f"/vertices/{i}"),
                               f"/vertices/{i}/pos", dim)
        vertices.append((str(vid), pos))
    edges = []
    for i, e in enumerate(raw_edges):
        tail = str(_need(e, "tail", f"/edges/{i}"))
        head = e.get("head")
        head = None if head is None else str(head)
        direction = _int_vector(_need(e, "dir", f"/edges/{i}"),
                                f"/edges/{i}/dir", dim)
        weight = parse_int(e.get("weight", 1), f"/edges/{i}/weight")
        label = e.get("leaf_label")
        label = None if label is None else parse_int(label,
                                                     f"/edges/{i}/leaf_label")
        edges.append({"tail": tail, "head": head, "dir": direction,
                      "weight": weight, "leaf_label": label})
    return TropicalCurve(dim, vertices, edges)


def load_curve(path) -> TropicalCurve:
    return curve_from_dict(_load_json(path))


def curve_to_dict(c: TropicalCurve):
    return {
        "dim": c.dim,
        "vertices": [{"id": vid, "pos": [str(x) for x in pos]}
                     for vid, pos in c.vertices.items()],
        "edges": [{"tail": e.tail, "head": e.head,
                   "dir": list(e.direction), "weight": e.weight,
                   "leaf_label": e.leaf_label}
                  for e in c.edges],
    }


def domain_from_dict(data) -> PolyhedralDomain:
    dim = parse_int(_need(data, "dim", ""), "/dim")
    raw = _need(data, "facets", "")
    if not isinstance(raw, list):
        raise _schema_error("/facets", "expected a list")
    facets = []
    for i, f in enumerate(raw):
        normal = _int_vector(_need(f, "normal", f"/facets/{i}"),
                             f"/facets/{i}/normal", dim)
        offset = parse_rational(_need(f, "offset", f"/facets/{i}"),
                                f"/facets/{i}/offset")
        facets.append({"normal": normal, "offset": offset})
    return PolyhedralDomain(dim, facets)


def load_domain(path) -> PolyhedralDomain:
    return domain_from_dict(_load_json(path))


def domain_to_dict(d: PolyhedralDomain):
    return {"dim": d.dim,
            "facets": [{"normal": list(f.normal), "offset": str(f.offset)}
                       for f in d.facets]}


def lines_from_dict(data) -> LineConfiguration:
    raw = _need(data, "lines", "")
    if not isinstance(raw, list):
        raise _schema_error("/lines", "expected a list")
    lines = []
    for i, l in enumerate(raw):
        point = _rational_vector(_need(l, "point", f"/lines/{i}"),
                                 f"/lines/{i}/point")
        direction = _int_vector(_need(l, "dir", f"/lines/{i}"),
                                f"/lines/{i}/dir")
        lines.append({"point": point, "dir": direction})
    return LineConfiguration(lines)


def load_lines(path) -> LineConfiguration:
    return lines_from_dict(_load_json(path))


def lines_to_dict(lc: LineConfiguration):
    return {"lines": [{"point": [str(x) for x in l.point],
                       "dir": list(l.direction)} for l in lc.lines]}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
