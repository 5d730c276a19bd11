"""Command-line entry point.

Every subcommand reads space/map documents (see fileio), runs the
corresponding engine call, and prints one RunReport to stdout, JSON by
default or the flat tabular form with --format table. Exit codes are a
stable contract:

  0  success / everything requested holds
  1  a negative result: a condition fails, a search exhausts, a gallery
     expectation mismatches, a metric is invalid
  2  input error: unparseable file, unknown id, off-carrier point
  3  theorem falsification (a verdict with consistent = false)

Identical invocations produce byte-identical reports except for the
wall_time_seconds field.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import fileio
from .conditions import CONDITION_IDS, check_condition, phi_canonical
from .errors import FixedCircleError, MalformedInputError
from .gallery import list_entries, load_entry, replay_all
from .generators import search_counterexample
from .metric_core import (DEFAULT_CIRCLE_SAMPLES, DEFAULT_EPSILON,
                          MetricSpace, _resolve_eps, circle_of,
                          validate_metric)
from .verifier import (THEOREM_IDS, enumerate_fixed_circles, verify_banach,
                       verify_caristi, verify_existence,
                       verify_identity_theorem, verify_uniqueness)

_EXIT_OK = 0
_EXIT_NEGATIVE = 1
_EXIT_INPUT = 2
_EXIT_FALSIFIED = 3

_EXISTENCE = {"T_EXIST_C1C2": "C1C2", "T_EXIST_STAR": "STAR",
              "T_EXIST_DSTAR": "DSTAR"}
_UNIQUENESS = {"T_UNIQUE_C3": "C3", "T_UNIQUE_C3_STARVARIANT": "C3_ON_STAR",
               "T_UNIQUE_C3_DSTAR": "C3_DSTAR"}

_EPILOG = f"""environment:
  FIXEDCIRCLE_EPSILON         default comparison tolerance
                              (currently {DEFAULT_EPSILON!r}; --epsilon wins)
  FIXEDCIRCLE_CIRCLE_SAMPLES  sample count for complex circles
                              (currently {DEFAULT_CIRCLE_SAMPLES})
"""


def _read_doc(path: str, where: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise MalformedInputError(f"{where}: cannot read {path}: "
                                  f"{err.strerror}") from None
    return fileio.loads_document(text, where)


def _load_space(path: str) -> tuple[MetricSpace, str]:
    doc = _read_doc(path, "space file")
    return fileio.space_from_doc(doc), fileio.digest(doc)


def _load_map(path: str, space: MetricSpace):
    doc = _read_doc(path, "map file")
    return fileio.map_from_doc(doc, space), fileio.digest(doc)


def _parse_point(text: str, space: MetricSpace):
    """A finite label, a real number, or 're,im' for complex carriers."""
    if space.is_finite:
        return text
    if space.kind == "complex_usual":
        if "," in text:
            re_s, im_s = text.split(",", 1)
            try:
                return complex(float(re_s), float(im_s))
            except ValueError:
                raise MalformedInputError(
                    f"bad complex point {text!r}") from None
        try:
            return complex(float(text), 0.0)
        except ValueError:
            raise MalformedInputError(f"bad complex point {text!r}") from None
    try:
        return float(text)
    except ValueError:
        raise MalformedInputError(
            f"bad point {text!r} for a real carrier") from None


def _circle_flag_caveats(circle) -> list[str]:
    out = []
    if circle.resolution == "sampled":
        out.append("sampled-resolution verdict")
    if circle.empty:
        out.append("empty circle: member-quantified conditions are vacuous")
    if circle.degenerate:
        out.append("degenerate circle (radius ~ 0)")
    return out


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (exit_code, RunReport)


def _cmd_validate(args) -> tuple[int, fileio.RunReport]:
    space, space_digest = _load_space(args.space)
    report = validate_metric(space, args.epsilon)
    run = fileio.RunReport(
        command="validate", inputs={"space": space_digest},
        epsilon=fileio.round12(_resolve_eps(args.epsilon)),
        payload={"validation": fileio.validation_row(report)})
    return (_EXIT_OK if report.valid else _EXIT_NEGATIVE), run


def _cmd_check(args) -> tuple[int, fileio.RunReport]:
    space, space_digest = _load_space(args.space)
    tmap, map_digest = _load_map(args.map, space)
    center = _parse_point(args.center, space)
    circle = circle_of(space, center, args.radius, args.epsilon)
    requested = [c.strip().upper() for c in args.conditions.split(",")
                 if c.strip()]
    if not requested:
        raise MalformedInputError("--conditions lists no condition ids")
    rows = [fileio.condition_row(
        check_condition(cid, space, tmap, circle=circle, eps=args.epsilon))
        for cid in requested]
    run = fileio.RunReport(
        command="check",
        inputs={"space": space_digest, "map": map_digest,
                "circle": fileio.circle_row(circle)},
        epsilon=fileio.round12(_resolve_eps(args.epsilon)),
        conditions=rows, caveats=_circle_flag_caveats(circle))
    all_hold = all(r["holds"] for r in rows)
    return (_EXIT_OK if all_hold else _EXIT_NEGATIVE), run


def _run_theorem(args, space, tmap):
    eps = args.epsilon
    if args.theorem == "T_BANACH":
        return verify_banach(space, tmap, eps)
    if args.center is None or args.radius is None:
        raise MalformedInputError(
            f"theorem {args.theorem} needs --center and --radius")
    center = _parse_point(args.center, space)
    circle = circle_of(space, center, args.radius, eps)
    if args.theorem in _EXISTENCE:
        return verify_existence(space, tmap, circle,
                                _EXISTENCE[args.theorem], eps)
    if args.theorem in _UNIQUENESS:
        return verify_uniqueness(space, tmap, circle,
                                 _UNIQUENESS[args.theorem], eps)
    if args.theorem == "T_IDENTITY":
        return verify_identity_theorem(space, tmap, circle, eps)
    # T_CARISTI: canonical weight at the requested center
    return verify_caristi(space, tmap, phi_canonical(space, center), eps)


def _cmd_verify(args) -> tuple[int, fileio.RunReport]:
    space, space_digest = _load_space(args.space)
    tmap, map_digest = _load_map(args.map, space)
    verdict = _run_theorem(args, space, tmap)
    inputs = {"space": space_digest, "map": map_digest}
    if args.center is not None and args.radius is not None:
        inputs["circle"] = {"center": fileio.point_to_json(
            _parse_point(args.center, space)),
            "radius": fileio.round12(args.radius)}
    run = fileio.RunReport(
        command="verify", inputs=inputs,
        epsilon=fileio.round12(_resolve_eps(args.epsilon)),
        verdicts=[fileio.verdict_row(verdict)],
        caveats=list(verdict.caveats))
    return (_EXIT_OK if verdict.consistent else _EXIT_FALSIFIED), run


def _cmd_enumerate(args) -> tuple[int, fileio.RunReport]:
    space, space_digest = _load_space(args.space)
    tmap, map_digest = _load_map(args.map, space)
    found = enumerate_fixed_circles(space, tmap,
                                    include_degenerate=args.include_degenerate,
                                    eps=args.epsilon)
    run = fileio.RunReport(
        command="enumerate",
        inputs={"space": space_digest, "map": map_digest},
        epsilon=fileio.round12(_resolve_eps(args.epsilon)),
        enumeration=[fileio.circle_row(c) for c in found])
    return _EXIT_OK, run


def _cmd_search(args) -> tuple[int, fileio.RunReport]:
    space, space_digest = _load_space(args.space)
    center = _parse_point(args.center, space)
    circle = circle_of(space, center, args.radius, args.epsilon)
    result = search_counterexample(space, circle, args.target,
                                   budget=args.budget, seed=args.seed,
                                   eps=args.epsilon)
    run = fileio.RunReport(
        command="search",
        inputs={"space": space_digest,
                "circle": fileio.circle_row(circle)},
        epsilon=fileio.round12(_resolve_eps(args.epsilon)),
        payload={"search": fileio.search_row(result)},
        caveats=_circle_flag_caveats(circle))
    return (_EXIT_OK if result.status == "found" else _EXIT_NEGATIVE), run


def _cmd_gallery(args) -> tuple[int, fileio.RunReport]:
    report = replay_all(args.filter)
    rows = [{"entry": r.entry_id, "index": r.index, "kind": r.kind,
             "passed": r.passed, "detail": r.detail}
            for r in report.results]
    payload = {"results": rows,
               "entries": [e for e in list_entries()
                           if args.filter is None
                           or args.filter.upper() in e.upper()]}
    if args.export is not None:
        import os
        os.makedirs(args.export, exist_ok=True)
        exported = []
        for entry_id in payload["entries"]:
            entry = load_entry(entry_id)
            for suffix, doc in (("space", fileio.space_to_doc(entry.space)),
                                ("map", fileio.map_to_doc(entry.tmap))):
                name = f"{entry_id}.{suffix}.json"
                with open(os.path.join(args.export, name), "w",
                          encoding="utf-8") as fh:
                    fh.write(fileio.dumps_document(doc))
                exported.append(name)
        payload["exported"] = exported
    run = fileio.RunReport(
        command="gallery", inputs={},
        epsilon=fileio.round12(_resolve_eps(args.epsilon)),
        payload=payload)
    return (_EXIT_OK if report.ok else _EXIT_NEGATIVE), run


# ---------------------------------------------------------------------------
# Parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fixedcircle",
        description="Check fixed-circle conditions and theorems on finite "
                    "and analytic metric spaces.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--epsilon", type=float, default=None,
                       help="comparison tolerance (overrides "
                            "FIXEDCIRCLE_EPSILON)")
        p.add_argument("--format", choices=("json", "table"), default="json",
                       help="report rendering (default json)")

    p = sub.add_parser("validate", help="check the metric axioms")
    p.add_argument("space", help="space file")
    common(p)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("check", help="run condition checks on one circle")
    p.add_argument("space")
    p.add_argument("map")
    p.add_argument("--center", required=True,
                   help="circle center (label, number, or re,im)")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--conditions", required=True,
                   help="comma-separated ids, e.g. C1,C2 "
                        f"(known: {','.join(sorted(CONDITION_IDS))})")
    common(p)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("verify", help="verify one theorem's verdict")
    p.add_argument("space")
    p.add_argument("map")
    p.add_argument("--theorem", required=True, choices=THEOREM_IDS)
    p.add_argument("--center", default=None)
    p.add_argument("--radius", type=float, default=None)
    common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("enumerate", help="list every fixed circle")
    p.add_argument("space")
    p.add_argument("map")
    p.add_argument("--include-degenerate", action="store_true")
    common(p)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("search",
                       help="search self-maps for a condition pattern")
    p.add_argument("space")
    p.add_argument("--target", required=True,
                   help="boolean expression over condition ids and "
                        "FIXED_CIRCLE, e.g. 'C1 & !C2'")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10 ** 6)
    common(p)
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("gallery", help="replay the example gallery")
    p.add_argument("--filter", default=None,
                   help="entry-id substring filter")
    p.add_argument("--export", default=None, metavar="DIR",
                   help="also write each entry's space/map files here")
    common(p)
    p.set_defaults(handler=_cmd_gallery)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code, report = args.handler(args)
    except FixedCircleError as err:
        print(f"error: {err}", file=sys.stderr)
        return _EXIT_INPUT
    report.wall_time_seconds = fileio.round12(time.perf_counter() - started)
    if args.format == "table":
        sys.stdout.write(fileio.report_table(report))
    else:
        sys.stdout.write(fileio.serialize_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
