"""Curated instance gallery with pinned expectations, replayable as a
regression suite.

Each entry bundles a space, a self-map, the circles of interest, and a
list of expectation records stating exactly what the condition checkers,
the fixed-circle test, and the theorem verdicts must report: verdict
booleans, margins, derived parameters, resolved member sets, and
fixed-circle enumerations. replay_all re-evaluates every expectation
through the public engine entry points and reports one pass/fail row
per expectation, so any behavioral drift in the checkers surfaces as a
named mismatch here.

Analytic entries carry sample sets holding every point their
expectations mention plus a 101-point uniform grid over the mentioned
range, so membership and enumeration claims are decidable on the
shipped data alone.

Entry ids are stable opaque tags (EX_* / PROP_*); replay order is
natural id order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .conditions import check_condition
from .errors import DomainError
from .generators import build_circle_fixing_map, build_multi_circle_map
from .metric_core import (Branch, Circle, MetricSpace, SelfMap, _resolve_eps,
                          circle_of, circle_samples, classify_images,
                          is_fixed_circle)
from .verifier import (TheoremVerdict, enumerate_fixed_circles,
                       verify_existence, verify_identity_theorem,
                       verify_uniqueness)

_VALUE_TOL = 1e-9


# ---------------------------------------------------------------------------
# Expectation records


@dataclass(frozen=True)
class ConditionExpectation:
    """A condition checker's verdict on one circle, with optional pinned
    margin and derived parameter."""

    condition_id: str
    circle_idx: int
    holds: bool
    margin: float | None = None
    derived_param: float | None = None


@dataclass(frozen=True)
class FixedCircleExpectation:
    circle_idx: int
    holds: bool


@dataclass(frozen=True)
class CircleMembersExpectation:
    """The resolved member set of a circle, matched with tolerance."""

    circle_idx: int
    members: tuple


@dataclass(frozen=True)
class FixedMembersExpectation:
    """Exactly which members of the circle the map leaves fixed."""

    circle_idx: int
    members: tuple


@dataclass(frozen=True)
class EnumerationExpectation:
    """(center, radius) pairs among the non-degenerate fixed circles;
    the whole set when exact, a subset claim otherwise."""

    pairs: tuple
    exact: bool = False


@dataclass(frozen=True)
class VerdictExpectation:
    """A theorem verdict's booleans; consistency is always demanded."""

    theorem_id: str
    circle_idx: int
    hypotheses_hold: bool
    conclusion_holds: bool
    fixed_circle_count: int | None = None


@dataclass(frozen=True)
class ClassificationExpectation:
    """Every member image lands in one region, optionally at one gap."""

    circle_idx: int
    region: str
    signed_gap: float | None = None


@dataclass(frozen=True)
class GalleryEntry:
    entry_id: str
    title: str
    space: MetricSpace
    tmap: SelfMap
    circles: tuple[Circle, ...]
    expectations: tuple
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExpectationResult:
    entry_id: str
    index: int
    kind: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class GalleryReport:
    results: tuple[ExpectationResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> tuple[ExpectationResult, ...]:
        return tuple(r for r in self.results if not r.passed)


# ---------------------------------------------------------------------------
# Entry construction helpers


def _grid(lo: float, hi: float) -> tuple:
    return tuple(float(v) for v in np.linspace(lo, hi, 101))


def _real(kind: str, mentioned, lo, hi) -> MetricSpace:
    return MetricSpace.analytic(kind, tuple(mentioned) + _grid(lo, hi))


_EXISTENCE_BY_THEOREM = {"T_EXIST_C1C2": "C1C2", "T_EXIST_STAR": "STAR",
                         "T_EXIST_DSTAR": "DSTAR"}
_UNIQUENESS_BY_THEOREM = {"T_UNIQUE_C3": "C3",
                          "T_UNIQUE_C3_STARVARIANT": "C3_ON_STAR",
                          "T_UNIQUE_C3_DSTAR": "C3_DSTAR"}


# ---------------------------------------------------------------------------
# Entries


def _entry_ex_2_4() -> GalleryEntry:
    space = _real("real_usual", (-1.0, 3.0, 1.0, 2.0), -1, 3)
    circle = circle_of(space, 1.0, 2.0)
    tmap = SelfMap.piecewise(
        space, (Branch(("on_circle", 1.0, 2.0), ("constant", 1.0)),),
        ("constant", 2.0))
    return GalleryEntry(
        entry_id="EX_2_4",
        title="Members sent to the center's level, everything else to 2",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            CircleMembersExpectation(0, (-1.0, 3.0)),
            ConditionExpectation("C1", 0, True, margin=0.0),
            ConditionExpectation("C2", 0, False, margin=-2.0),
            FixedCircleExpectation(0, False),
            EnumerationExpectation((), exact=True),
        ))


def _entry_ex_2_5() -> GalleryEntry:
    space = _real("real_usual", (-2.0, 2.0, 0.0, 5.0), -2, 5)
    circle = circle_of(space, 0.0, 2.0)
    tmap = build_circle_fixing_map(space, circle, anchor=5.0)
    return GalleryEntry(
        entry_id="EX_2_5",
        title="Identity on the circle, exterior constant elsewhere",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C1", 0, True, margin=0.0),
            ConditionExpectation("C2", 0, True, margin=0.0),
            FixedCircleExpectation(0, True),
            ClassificationExpectation(0, "on", signed_gap=0.0),
            VerdictExpectation("T_EXIST_C1C2", 0, True, True),
            ConditionExpectation("ID_COND", 0, False, margin=-2.0,
                                 derived_param=-1.0),
        ))


def _entry_ex_2_6() -> GalleryEntry:
    space = _real("real_usual", (-2.0, 2.0, 0.0), -2, 2)
    circle = circle_of(space, 0.0, 2.0)
    tmap = SelfMap.constant(space, 0.0)
    return GalleryEntry(
        entry_id="EX_2_6",
        title="Constant map onto the center",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C1", 0, True, margin=0.0),
            ConditionExpectation("C2", 0, False, margin=-2.0),
            FixedCircleExpectation(0, False),
            ConditionExpectation("ID_COND", 0, False, margin=0.0,
                                 derived_param=1.0),
            VerdictExpectation("T_EXIST_C1C2", 0, False, False),
        ))


def _entry_ex_2_7() -> GalleryEntry:
    space = _real("real_usual", (-1.0, 1.0, 0.0, 3.0), -1, 3)
    circle = circle_of(space, 0.0, 1.0)
    tmap = SelfMap.constant(space, 3.0)
    return GalleryEntry(
        entry_id="EX_2_7",
        title="Constant map onto an exterior point",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C2", 0, True, margin=2.0),
            ConditionExpectation("C1", 0, False, margin=-6.0),
            ClassificationExpectation(0, "exterior", signed_gap=2.0),
            FixedCircleExpectation(0, False),
        ))


def _entry_ex_2_8() -> GalleryEntry:
    mentioned = (complex(-1, 0), complex(1, 0), complex(0, 0))
    space = MetricSpace.analytic("complex_usual",
                                 mentioned + circle_samples(0, 1))
    circle = circle_of(space, complex(0, 0), 1.0)
    tmap = SelfMap.from_rule(space, ("reciprocal",))
    return GalleryEntry(
        entry_id="EX_2_8",
        title="Complex reciprocal on the sampled unit circle",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C2", 0, True, margin=0.0),
            ConditionExpectation("C1", 0, False, margin=-2.0),
            FixedCircleExpectation(0, False),
            FixedMembersExpectation(0, (complex(-1, 0), complex(1, 0))),
        ),
        notes=("unit-circle membership is sample-resolved; the fixed "
               "members are exact because -1 and 1 sit in the sample set",))


def _entry_ex_2_11() -> GalleryEntry:
    space = _real("real_usual", (-2.0, 2.0, 0.0, 1.0), -2, 2)
    circle = circle_of(space, 0.0, 2.0)
    tmap = build_circle_fixing_map(space, circle, anchor=1.0)
    return GalleryEntry(
        entry_id="EX_2_11",
        title="Identity on the circle, interior constant elsewhere",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C1_STAR", 0, True, margin=0.0),
            ConditionExpectation("C2_STAR", 0, True, margin=0.0),
            FixedCircleExpectation(0, True),
            VerdictExpectation("T_EXIST_STAR", 0, True, True),
        ))


def _entry_ex_2_12() -> GalleryEntry:
    space = _real("real_usual", (-1.0, 1.0, 5.0, 0.0, 3.0, 2.0), -1, 5)
    circles = (circle_of(space, 0.0, 1.0), circle_of(space, 3.0, 2.0),
               circle_of(space, 2.0, 3.0))
    tmap = SelfMap.piecewise(
        space, (Branch(("on_circle", 0.0, 1.0), ("reciprocal",)),),
        ("constant", 5.0))
    rows = []
    for i in range(3):
        rows += [ConditionExpectation("C1_STAR", i, True, margin=0.0),
                 ConditionExpectation("C2_STAR", i, True, margin=0.0),
                 FixedCircleExpectation(i, True),
                 VerdictExpectation("T_EXIST_STAR", i, True, True)]
    rows.append(EnumerationExpectation(((0.0, 1.0), (3.0, 2.0), (2.0, 3.0)),
                                       exact=True))
    return GalleryEntry(
        entry_id="EX_2_12",
        title="Reciprocal on the unit circle, constant 5 elsewhere",
        space=space, tmap=tmap, circles=circles,
        expectations=tuple(rows),
        notes=("three distinct fixed circles; uniqueness is genuinely "
               "absent under the existence hypotheses alone",))


def _entry_ex_2_13() -> GalleryEntry:
    space = _real("real_usual", (-2.0, 2.0, 0.0, 1.0), -2, 2)
    circle = circle_of(space, 0.0, 2.0)
    tmap = SelfMap.constant(space, 1.0)
    return GalleryEntry(
        entry_id="EX_2_13",
        title="Constant map onto an interior point",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C2_STAR", 0, True, margin=1.0),
            ConditionExpectation("C1_STAR", 0, False, margin=-4.0),
            ClassificationExpectation(0, "interior", signed_gap=-1.0),
            FixedCircleExpectation(0, False),
            VerdictExpectation("T_EXIST_STAR", 0, False, False),
        ))


def _entry_ex_2_14() -> GalleryEntry:
    space = _real("real_usual", (-1.0, 1.0, 0.0, -5.0, 5.0, 10.0), -5, 10)
    circle = circle_of(space, 0.0, 1.0)
    tmap = SelfMap.piecewise(
        space,
        (Branch(("at_points", (-1.0,)), ("constant", -5.0)),
         Branch(("at_points", (1.0,)), ("constant", 5.0))),
        ("constant", 10.0))
    return GalleryEntry(
        entry_id="EX_2_14",
        title="Members pushed radially outward fivefold",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C1_STAR", 0, True, margin=0.0),
            ConditionExpectation("C2_STAR", 0, False, margin=-4.0),
            FixedCircleExpectation(0, False),
        ),
        notes=("the default branch (everything else to 10) never enters "
               "the member-quantified verdicts on this circle",))


def _entry_ex_2_16() -> GalleryEntry:
    ln2 = math.log(2.0)
    space = _real("real_exp", (ln2, 0.0, 1.0), 0, 1)
    circle = circle_of(space, 0.0, 1.0)
    tmap = SelfMap.piecewise(
        space, (Branch(("on_circle", 0.0, 1.0), ("constant", ln2)),),
        ("constant", 1.0))
    return GalleryEntry(
        entry_id="EX_2_16",
        title="Exponential-gap metric with a one-point unit circle",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            CircleMembersExpectation(0, (ln2,)),
            ConditionExpectation("C1_DSTAR", 0, True, margin=0.0),
            ConditionExpectation("C2_DSTAR", 0, True, margin=0.0,
                                 derived_param=0.0),
            FixedCircleExpectation(0, True),
            VerdictExpectation("T_EXIST_DSTAR", 0, True, True),
        ))


def _entry_ex_2_18() -> GalleryEntry:
    space = _real("real_usual", (-2.0, 6.0, 2.0), -2, 6)
    circle = circle_of(space, 2.0, 4.0)
    tmap = SelfMap.piecewise(
        space, (Branch(("on_circle", 2.0, 4.0), ("constant", 2.0)),),
        ("constant", 6.0))
    return GalleryEntry(
        entry_id="EX_2_18",
        title="Members collapsed to the center, the rest to a member value",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            CircleMembersExpectation(0, (-2.0, 6.0)),
            ConditionExpectation("C1_DSTAR", 0, True, margin=0.0),
            ConditionExpectation("C2_DSTAR", 0, False, margin=0.0,
                                 derived_param=1.0),
            FixedCircleExpectation(0, False),
            EnumerationExpectation((), exact=True),
        ),
        notes=("the weighted displacement condition fails exactly at the "
               "h -> 1 boundary: no admissible h below 1 exists",))


def _entry_ex_2_19() -> GalleryEntry:
    space = _real("real_abs_sum", (-1.0, 1.0, 0.5, 0.0, 2.0, 3.0), -1, 3)
    circles = (circle_of(space, 1.0, 2.0), circle_of(space, 1.0, 1.0),
               circle_of(space, 2.0, 2.0), circle_of(space, 3.0, 3.0))
    tmap = SelfMap.piecewise(
        space, (Branch(("at_points", (-1.0, 1.0)), ("constant", 0.5)),),
        ("constant", 0.0))
    return GalleryEntry(
        entry_id="EX_2_19",
        title="Magnitude-sum metric where equal center and radius pin {0}",
        space=space, tmap=tmap, circles=circles,
        expectations=(
            CircleMembersExpectation(0, (-1.0,)),
            ConditionExpectation("C1_STAR", 0, False, margin=-2.0),
            ConditionExpectation("C2_STAR", 0, True, margin=0.5),
            FixedCircleExpectation(0, False),
            CircleMembersExpectation(1, (0.0,)),
            ConditionExpectation("C1_STAR", 1, True, margin=0.0),
            ConditionExpectation("C2_STAR", 1, True, margin=0.0),
            FixedCircleExpectation(1, True),
            CircleMembersExpectation(2, (0.0,)),
            FixedCircleExpectation(2, True),
            CircleMembersExpectation(3, (0.0,)),
            FixedCircleExpectation(3, True),
            EnumerationExpectation(((1.0, 1.0), (2.0, 2.0), (3.0, 3.0))),
        ),
        notes=("every circle whose radius equals the center's magnitude "
               "resolves to the single point 0, which the map fixes",))


def _entry_ex_2_19b() -> GalleryEntry:
    space = _real("real_usual", (-2.0, 2.0, 0.0), -2, 2)
    circle = circle_of(space, 0.0, 2.0)
    tmap = SelfMap.constant(space, 2.0)
    return GalleryEntry(
        entry_id="EX_2_19B",
        title="Constant map onto one member of the circle",
        space=space, tmap=tmap, circles=(circle,),
        expectations=(
            ConditionExpectation("C2_DSTAR", 0, True, margin=0.0,
                                 derived_param=0.0),
            ConditionExpectation("C1_DSTAR", 0, False, margin=-4.0),
            FixedCircleExpectation(0, False),
            EnumerationExpectation((), exact=True),
            VerdictExpectation("T_EXIST_DSTAR", 0, False, False),
        ))


def _entry_ex_3_4() -> GalleryEntry:
    space = _real("real_usual",
                  (-1.0, 1.0, 2.0, 6.0, 7.0, 13.0, 0.0, 4.0, 10.0, 20.0),
                  -1, 20)
    circles = (circle_of(space, 0.0, 1.0), circle_of(space, 4.0, 2.0),
               circle_of(space, 10.0, 3.0))
    tmap = build_multi_circle_map(space, circles, anchor=20.0)
    rows = []
    for i in range(3):
        rows += [ConditionExpectation("C1", i, True, margin=0.0),
                 ConditionExpectation("C2", i, True, margin=0.0),
                 FixedCircleExpectation(i, True),
                 VerdictExpectation("T_EXIST_C1C2", i, True, True)]
    rows.append(EnumerationExpectation(((0.0, 1.0), (4.0, 2.0), (10.0, 3.0))))
    return GalleryEntry(
        entry_id="EX_3_4",
        title="One map fixing three prescribed circles at once",
        space=space, tmap=tmap, circles=circles,
        expectations=tuple(rows))


def _entry_prop_3_1() -> GalleryEntry:
    labels = ("x0", "x1", "a", "b", "c", "e", "alpha")
    near = {("x0", "a"), ("x0", "b"), ("x1", "c"), ("x1", "e")}
    n = len(labels)
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            pair = (labels[i], labels[j])
            matrix[i][j] = matrix[j][i] = 2.0 if pair in near else 3.0
    space = MetricSpace.finite(labels, matrix)
    circles = (circle_of(space, "x0", 2.0), circle_of(space, "x1", 2.0))
    tmap = build_multi_circle_map(space, circles, anchor="alpha")
    return GalleryEntry(
        entry_id="PROP_3_1",
        title="Two prescribed fixed circles on a seven-point space",
        space=space, tmap=tmap, circles=circles,
        expectations=(
            CircleMembersExpectation(0, ("a", "b")),
            CircleMembersExpectation(1, ("c", "e")),
            ConditionExpectation("C1", 0, True, margin=0.0),
            ConditionExpectation("C2", 0, True, margin=0.0),
            ConditionExpectation("C1", 1, True, margin=0.0),
            ConditionExpectation("C2", 1, True, margin=0.0),
            FixedCircleExpectation(0, True),
            FixedCircleExpectation(1, True),
            ConditionExpectation("C3", 0, False, margin=-1.0,
                                 derived_param=1.5),
            VerdictExpectation("T_UNIQUE_C3", 0, False, False,
                               fixed_circle_count=2),
            EnumerationExpectation((("x0", 2.0), ("x1", 2.0)), exact=True),
        ),
        notes=("the two-circle construction cannot be a contraction: the "
               "uniqueness hypotheses fail while both circles stay fixed",))


_BUILDERS = {
    "EX_2_4": _entry_ex_2_4, "EX_2_5": _entry_ex_2_5, "EX_2_6": _entry_ex_2_6,
    "EX_2_7": _entry_ex_2_7, "EX_2_8": _entry_ex_2_8,
    "EX_2_11": _entry_ex_2_11, "EX_2_12": _entry_ex_2_12,
    "EX_2_13": _entry_ex_2_13, "EX_2_14": _entry_ex_2_14,
    "EX_2_16": _entry_ex_2_16, "EX_2_18": _entry_ex_2_18,
    "EX_2_19": _entry_ex_2_19, "EX_2_19B": _entry_ex_2_19b,
    "EX_3_4": _entry_ex_3_4, "PROP_3_1": _entry_prop_3_1,
}


def _natural_key(entry_id: str):
    return tuple(int(part) if part.isdigit() else part
                 for part in re.split(r"(\d+)", entry_id))


def list_entries() -> tuple[str, ...]:
    """Known entry ids in replay order."""
    return tuple(sorted(_BUILDERS, key=_natural_key))


def load_entry(entry_id: str) -> GalleryEntry:
    """Build the named entry from scratch; deterministic per id."""
    try:
        builder = _BUILDERS[entry_id]
    except KeyError:
        raise DomainError(f"unknown gallery entry {entry_id!r}; "
                          f"known: {', '.join(list_entries())}") from None
    return builder()


# ---------------------------------------------------------------------------
# Replay


def _close(got: float, want: float) -> bool:
    return abs(got - want) <= _VALUE_TOL


def _match_point_sets(space, got, want) -> bool:
    if len(got) != len(want):
        return False
    remaining = list(got)
    for w in want:
        for i, g in enumerate(remaining):
            if space.distance(g, w) <= _VALUE_TOL:
                del remaining[i]
                break
        else:
            return False
    return True


def _run_verdict(entry: GalleryEntry, exp: VerdictExpectation) -> TheoremVerdict:
    circle = entry.circles[exp.circle_idx]
    if exp.theorem_id in _EXISTENCE_BY_THEOREM:
        return verify_existence(entry.space, entry.tmap, circle,
                                _EXISTENCE_BY_THEOREM[exp.theorem_id])
    if exp.theorem_id in _UNIQUENESS_BY_THEOREM:
        return verify_uniqueness(entry.space, entry.tmap, circle,
                                 _UNIQUENESS_BY_THEOREM[exp.theorem_id])
    if exp.theorem_id == "T_IDENTITY":
        return verify_identity_theorem(entry.space, entry.tmap, circle)
    raise DomainError(f"no verdict runner for {exp.theorem_id!r}")


def _evaluate(entry: GalleryEntry, exp) -> tuple[bool, str]:
    space, tmap = entry.space, entry.tmap
    if isinstance(exp, ConditionExpectation):
        rep = check_condition(exp.condition_id, space, tmap,
                              circle=entry.circles[exp.circle_idx])
        ok = rep.holds == exp.holds
        if exp.margin is not None:
            ok = ok and _close(rep.margin, exp.margin)
        if exp.derived_param is not None:
            ok = ok and rep.derived_param is not None \
                and _close(rep.derived_param, exp.derived_param)
        return ok, (f"{exp.condition_id} holds={rep.holds} "
                    f"margin={rep.margin:.6g} derived={rep.derived_param}")
    if isinstance(exp, FixedCircleExpectation):
        rep = is_fixed_circle(tmap, entry.circles[exp.circle_idx])
        return rep.holds == exp.holds, f"fixed={rep.holds}"
    if isinstance(exp, CircleMembersExpectation):
        got = entry.circles[exp.circle_idx].members
        return (_match_point_sets(space, got, exp.members),
                f"members={list(got)!r}")
    if isinstance(exp, FixedMembersExpectation):
        rep = is_fixed_circle(tmap, entry.circles[exp.circle_idx])
        eps = _resolve_eps(None)
        got = tuple(w.point for w in rep.witnesses if w.displacement <= eps)
        return (_match_point_sets(space, got, exp.members),
                f"fixed members={list(got)!r}")
    if isinstance(exp, EnumerationExpectation):
        found = enumerate_fixed_circles(space, tmap)
        got = tuple((c.center, c.radius) for c in found)
        ok = all(any(space.distance(gc, wc) <= _VALUE_TOL
                     and _close(gr, wr) for gc, gr in got)
                 for wc, wr in exp.pairs)
        if exp.exact:
            ok = ok and len(got) == len(exp.pairs)
        return ok, f"fixed circles={got!r}"
    if isinstance(exp, VerdictExpectation):
        verdict = _run_verdict(entry, exp)
        ok = (verdict.hypotheses_hold == exp.hypotheses_hold
              and verdict.conclusion_holds == exp.conclusion_holds
              and verdict.consistent)
        if exp.fixed_circle_count is not None:
            ok = ok and verdict.fixed_circles is not None \
                and len(verdict.fixed_circles) == exp.fixed_circle_count
        return ok, (f"{exp.theorem_id} hyp={verdict.hypotheses_hold} "
                    f"concl={verdict.conclusion_holds} "
                    f"consistent={verdict.consistent}")
    if isinstance(exp, ClassificationExpectation):
        rep = classify_images(tmap, entry.circles[exp.circle_idx])
        ok = all(c.region == exp.region for c in rep.classifications)
        if exp.signed_gap is not None:
            ok = ok and all(_close(c.signed_gap, exp.signed_gap)
                            for c in rep.classifications)
        regions = sorted({c.region for c in rep.classifications})
        return ok, f"regions={regions}"
    raise DomainError(f"unknown expectation record {exp!r}")


def replay_entry(entry: GalleryEntry) -> tuple[ExpectationResult, ...]:
    out = []
    for i, exp in enumerate(entry.expectations):
        try:
            passed, detail = _evaluate(entry, exp)
        except Exception as err:  # a crash is a failed expectation, not a crash of the replay
            passed, detail = False, f"error: {err}"
        out.append(ExpectationResult(entry_id=entry.entry_id, index=i,
                                     kind=type(exp).__name__,
                                     passed=bool(passed), detail=detail))
    return tuple(out)


def replay_all(filter_substring: str | None = None) -> GalleryReport:
    """Re-evaluate every expectation of every (matching) entry.

    The filter is a case-insensitive substring over entry ids; an empty
    match set yields an empty, successful report.
    """
    results = []
    for entry_id in list_entries():
        if filter_substring is not None \
                and filter_substring.upper() not in entry_id.upper():
            continue
        results.extend(replay_entry(load_entry(entry_id)))
    return GalleryReport(results=tuple(results))
