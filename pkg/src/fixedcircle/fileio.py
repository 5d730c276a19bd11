"""Serialization: space/map documents, report rows, and the RunReport
envelope.

Input documents (space and map files) are JSON with a fixed shape:

  space: {"carrier": {"type": "finite", "labels": [...]}
                    | {"type": "analytic", "kind": "<kind>", "samples": [...]},
          "metric":  {"type": "matrix", "values": [[...]]}
                    | {"type": "named"}}
  map:   {"rule": {"type": "table", "images": {...}}
                 | {"type": "piecewise", "branches": [...], "default": ...}}

Finite carriers pair with a matrix metric, analytic carriers with the
named metric of their kind. Complex numbers ride as [re, im] pairs;
labels are opaque strings. Piecewise branches carry one predicate
({"on_circle": {"center": c, "radius": r}} or
{"at_points": {"points": [...]}}) and an image string ("identity",
"reciprocal", or "constant:<value>").

Input files keep full float precision so a parsed space is bit-equal to
the exported one. Report values instead pass through round12, which
pins every number to 12 significant digits; re-reading a serialized
report reproduces the RunReport exactly, because a 12-digit decimal
survives the float round trip.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

from .conditions import ConditionReport
from .errors import MalformedInputError
from .generators import SearchResult
from .metric_core import (ANALYTIC_KINDS, Branch, Circle, MetricSpace,
                          SelfMap, ValidationReport)
from .verifier import TheoremVerdict

SCHEMA_VERSION = 1


def round12(x) -> float:
    """Pin a float to 12 significant digits (report-value precision)."""
    return float(f"{float(x):.12g}")


# ---------------------------------------------------------------------------
# Point and image encoding


def point_to_json(p):
    if isinstance(p, str):
        return p
    if isinstance(p, complex) and not isinstance(p, float):
        return [p.real, p.imag]
    return float(p)


def point_from_json(v):
    if isinstance(v, str):
        return v
    if isinstance(v, list):
        if len(v) != 2:
            raise MalformedInputError(
                f"complex point must be a [re, im] pair, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise MalformedInputError(f"not a point encoding: {v!r}")
    return float(v)


def _image_to_str(image: tuple) -> str:
    op = image[0]
    if op in ("identity", "reciprocal"):
        return op
    v = image[1]
    if isinstance(v, str):
        return f"constant:{v}"
    if isinstance(v, complex) and not isinstance(v, float):
        return f"constant:{v.real!r},{v.imag!r}"
    return f"constant:{float(v)!r}"


def _image_from_str(text: str) -> tuple:
    if text in ("identity", "reciprocal"):
        return (text,)
    if not text.startswith("constant:"):
        raise MalformedInputError(f"unknown image rule {text!r}")
    body = text[len("constant:"):]
    if "," in body:
        re_s, im_s = body.split(",", 1)
        return ("constant", complex(float(re_s), float(im_s)))
    try:
        return ("constant", float(body))
    except ValueError:
        return ("constant", body)  # a finite-carrier label


# ---------------------------------------------------------------------------
# Space documents


def space_to_doc(space: MetricSpace) -> dict:
    if space.is_finite:
        return {"carrier": {"type": "finite",
                            "labels": list(space.carrier.labels)},
                "metric": {"type": "matrix",
                           "values": [[float(v) for v in row]
                                      for row in space.as_array]}}
    return {"carrier": {"type": "analytic", "kind": space.carrier.kind,
                        "samples": [point_to_json(s)
                                    for s in space.carrier.samples]},
            "metric": {"type": "named"}}


def _expect(doc, key, where):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedInputError(f"{where}: missing required key {key!r}")
    return doc[key]


def space_from_doc(doc: dict) -> MetricSpace:
    carrier = _expect(doc, "carrier", "space document")
    metric = _expect(doc, "metric", "space document")
    ctype = _expect(carrier, "type", "carrier")
    mtype = _expect(metric, "type", "metric")
    if ctype == "finite":
        if mtype != "matrix":
            raise MalformedInputError(
                "finite carriers take a matrix metric, got "
                f"{mtype!r}")
        labels = _expect(carrier, "labels", "carrier")
        values = _expect(metric, "values", "metric")
        return MetricSpace.finite(tuple(labels), values)
    if ctype == "analytic":
        if mtype != "named":
            raise MalformedInputError(
                f"analytic carriers take the named metric, got {mtype!r}")
        kind = _expect(carrier, "kind", "carrier")
        if kind not in ANALYTIC_KINDS:
            raise MalformedInputError(f"unknown analytic kind {kind!r}")
        samples = [point_from_json(s)
                   for s in _expect(carrier, "samples", "carrier")]
        return MetricSpace.analytic(kind, samples)
    raise MalformedInputError(f"unknown carrier type {ctype!r}")


# ---------------------------------------------------------------------------
# Map documents


def map_to_doc(tmap: SelfMap) -> dict:
    if tmap.kind == "table":
        pts = tmap.space.points()
        return {"rule": {"type": "table",
                         "images": {str(p): str(img)
                                    for p, img in zip(pts, tmap.table)}}}
    if tmap.kind == "rule":
        return {"rule": {"type": "piecewise", "branches": [],
                         "default": _image_to_str(tmap.rule)}}
    branches = []
    for b in tmap.branches:
        if b.predicate[0] == "on_circle":
            pred = {"on_circle": {"center": point_to_json(b.predicate[1]),
                                  "radius": float(b.predicate[2])}}
        else:
            pred = {"at_points": {"points": [point_to_json(p)
                                             for p in b.predicate[1]]}}
        branches.append({**pred, "image": _image_to_str(b.image)})
    return {"rule": {"type": "piecewise", "branches": branches,
                     "default": _image_to_str(tmap.default)}}


def map_from_doc(doc: dict, space: MetricSpace) -> SelfMap:
    rule = _expect(doc, "rule", "map document")
    rtype = _expect(rule, "type", "rule")
    if rtype == "table":
        if not space.is_finite:
            raise MalformedInputError(
                "table maps require a finite carrier")
        images = _expect(rule, "images", "rule")
        return SelfMap.from_table(space, dict(images))
    if rtype != "piecewise":
        raise MalformedInputError(f"unknown rule type {rtype!r}")
    default = _image_from_str(_expect(rule, "default", "rule"))
    branches = []
    for i, b in enumerate(rule.get("branches", ())):
        image = _image_from_str(_expect(b, "image", f"branch {i}"))
        if "on_circle" in b:
            node = b["on_circle"]
            pred = ("on_circle", point_from_json(_expect(node, "center",
                                                         f"branch {i}")),
                    float(_expect(node, "radius", f"branch {i}")))
        elif "at_points" in b:
            pts = _expect(b["at_points"], "points", f"branch {i}")
            pred = ("at_points", tuple(point_from_json(p) for p in pts))
        else:
            raise MalformedInputError(
                f"branch {i}: needs an on_circle or at_points predicate")
        branches.append(Branch(pred, image))
    if not branches:
        return SelfMap.from_rule(space, default)
    return SelfMap.piecewise(space, branches, default)


# ---------------------------------------------------------------------------
# Text round trip and digests


def loads_document(text: str, where: str = "document") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise MalformedInputError(
            f"{where}: parse error at line {err.lineno}, column "
            f"{err.colno}: {err.msg}") from None
    if not isinstance(doc, dict):
        raise MalformedInputError(f"{where}: top level must be an object")
    return doc


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def digest(doc: dict) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Report rows (engine dataclasses -> JSON-shaped dicts, floats at 12 digits)


def circle_row(circle: Circle) -> dict:
    # bool()/int() coercions: engine fields may be numpy scalars, which
    # json refuses (np.bool_ is not a bool subclass).
    return {"center": point_to_json(circle.center),
            "radius": round12(circle.radius),
            "members": [point_to_json(m) for m in circle.members],
            "resolution": circle.resolution,
            "degenerate": bool(circle.degenerate),
            "empty": bool(circle.empty)}


def condition_row(rep: ConditionReport) -> dict:
    return {"condition": rep.condition_id,
            "holds": bool(rep.holds),
            "margin": round12(rep.margin),
            "witness": None if rep.witness is None
            else [point_to_json(p) for p in rep.witness],
            "derived_param": None if rep.derived_param is None
            else round12(rep.derived_param),
            "checked_count": int(rep.checked_count),
            "resolution_caveat": bool(rep.resolution_caveat),
            "vacuous": bool(rep.vacuous),
            "notes": list(rep.notes)}


def verdict_row(verdict: TheoremVerdict) -> dict:
    return {"theorem": verdict.theorem_id,
            "hypotheses": [condition_row(r)
                           for r in verdict.hypothesis_reports],
            "hypotheses_hold": bool(verdict.hypotheses_hold),
            "conclusion_holds": bool(verdict.conclusion_holds),
            "consistent": bool(verdict.consistent),
            "caveats": list(verdict.caveats),
            "fixed_circles": None if verdict.fixed_circles is None
            else [circle_row(c) for c in verdict.fixed_circles]}


def validation_row(rep: ValidationReport) -> dict:
    return {"valid": bool(rep.valid),
            "point_count": int(rep.point_count),
            "violation_count": int(rep.violation_count),
            "violations": [{"axiom": v.axiom,
                            "witness": [point_to_json(p) for p in v.witness],
                            "magnitude": round12(v.magnitude)}
                           for v in rep.violations]}


def search_row(res: SearchResult) -> dict:
    return {"status": res.status,
            "target": res.target,
            "evaluated": int(res.evaluated),
            "map": None if res.found is None else map_to_doc(res.found)}


# ---------------------------------------------------------------------------
# RunReport envelope


@dataclass
class RunReport:
    """One CLI invocation's structured output.

    Every field is JSON-shaped (strings, numbers, bools, lists, dicts),
    so serialization is exact and parse(serialize(r)) == r.
    """

    command: str
    inputs: dict
    epsilon: float
    conditions: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    enumeration: list = field(default_factory=list)
    caveats: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    wall_time_seconds: float = 0.0
    schema: int = SCHEMA_VERSION


def serialize_report(report: RunReport) -> str:
    return dumps_document(asdict(report))


def parse_report(text: str) -> RunReport:
    doc = loads_document(text, "report")
    if doc.get("schema") != SCHEMA_VERSION:
        raise MalformedInputError(
            f"unsupported report schema {doc.get('schema')!r}")
    fields = {f: doc[f] for f in ("command", "inputs", "epsilon",
                                  "conditions", "verdicts", "enumeration",
                                  "caveats", "payload", "wall_time_seconds",
                                  "schema") if f in doc}
    missing = {"command", "inputs", "epsilon"} - fields.keys()
    if missing:
        raise MalformedInputError(f"report: missing {sorted(missing)}")
    return RunReport(**fields)


def _flat(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict):
        for k in sorted(value):
            _flat(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flat(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(value)))


def report_table(report: RunReport) -> str:
    """Flat two-column rendering: one dotted path and value per line."""
    rows: list[tuple[str, str]] = []
    _flat("", asdict(report), rows)
    return "\n".join(f"{path}\t{value}" for path, value in rows) + "\n"
