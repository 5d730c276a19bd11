"""Carrier, metric validation, circle resolution, and self-map tests.

Closed-form circle solvers are checked against brute scans computed
first in each test, so the expected member sets never come from the
code under test.
"""

import math
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixedcircle.errors import DomainError, MalformedInputError
from fixedcircle.generators import GenConfig, random_metric_space
from fixedcircle.metric_core import (Branch, MetricSpace, SelfMap, circle_of,
                                     circle_samples, classify_images,
                                     enumerate_circles, fixed_points,
                                     is_fixed_circle, validate_metric)

EPS = 1e-9


def _square(labels, entries):
    return MetricSpace.finite(labels, entries)


@pytest.fixture
def path_space():
    # three points on a line: q between p and s
    return _square(("p", "q", "s"),
                   [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


# ---------------------------------------------------------------------------
# Construction and validation


def test_finite_rejects_nonsquare():
    with pytest.raises(MalformedInputError):
        _square(("p", "q"), [[0, 1], [1, 0, 2]])


def test_finite_rejects_negative_and_nan():
    with pytest.raises(MalformedInputError):
        _square(("p", "q"), [[0, -1], [-1, 0]])
    with pytest.raises(MalformedInputError):
        _square(("p", "q"), [[0, float("nan")], [float("nan"), 0]])


def test_finite_rejects_duplicate_labels():
    with pytest.raises(MalformedInputError):
        _square(("p", "p"), [[0, 1], [1, 0]])


def test_validate_flags_each_axiom():
    asym = _square(("p", "q"), [[0, 1], [2, 0]])
    rep = validate_metric(asym)
    assert not rep.valid
    assert {v.axiom for v in rep.violations} == {"symmetry"}

    self_dist = _square(("p", "q"), [[1, 1], [1, 0]])
    rep = validate_metric(self_dist)
    assert any(v.axiom == "identity" for v in rep.violations)

    indisc = _square(("p", "q"), [[0, 0], [0, 0]])
    rep = validate_metric(indisc)
    assert any(v.axiom == "identity" for v in rep.violations)

    tri = _square(("p", "q", "s"), [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    rep = validate_metric(tri)
    bad = [v for v in rep.violations if v.axiom == "triangle"]
    assert bad and bad[0].magnitude == pytest.approx(3.0)


def test_validate_accepts_valid_matrix(path_space):
    rep = validate_metric(path_space)
    assert rep.valid and rep.violation_count == 0
    assert rep.point_count == 3


def test_validate_counts_beyond_detail_cap():
    # every off-diagonal pair violates symmetry; the report keeps a
    # bounded sample but the count stays honest
    n = 30
    m = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                m[i][j] = 1.0 + 0.1 * (i > j)
    space = _square(tuple(f"p{i}" for i in range(n)), m)
    rep = validate_metric(space)
    assert not rep.valid
    assert rep.violation_count >= len(rep.violations)


def test_analytic_dedupes_indistinguishable_samples():
    space = MetricSpace.analytic("real_usual", (1.0, 1.0 + 1e-12, 2.0))
    assert space.points() == (1.0, 2.0)


def test_analytic_rejects_empty_and_unknown_kind():
    with pytest.raises(MalformedInputError):
        MetricSpace.analytic("real_usual", ())
    with pytest.raises(MalformedInputError):
        MetricSpace.analytic("real_squared", (1.0,))


def test_abs_sum_distance_definition():
    space = MetricSpace.analytic("real_abs_sum", (-1.0, 0.0, 1.0, 2.0))
    assert space.distance(-1.0, 1.0) == 2.0
    assert space.distance(1.0, 1.0) == 0.0
    assert space.distance(0.0, 2.0) == 2.0
    rep = validate_metric(space)
    assert rep.valid


def test_exp_metric_overflow_is_malformed():
    with pytest.raises(MalformedInputError):
        MetricSpace.analytic("real_exp", (0.0, 1e6)).as_array


def test_epsilon_env_override(monkeypatch, path_space):
    monkeypatch.setenv("FIXEDCIRCLE_EPSILON", "0.5")
    c = circle_of(path_space, "p", 1.2)
    # within the loosened tolerance, distance-1 points join the circle
    assert c.members == ("q",)


# ---------------------------------------------------------------------------
# Circle resolution


def test_circle_of_finite_scan(path_space):
    c = circle_of(path_space, "p", 1.0)
    assert c.members == ("q",)
    assert c.resolution == "exact"
    assert not c.degenerate and not c.empty
    assert circle_of(path_space, "p", 7.0).empty
    assert circle_of(path_space, "q", 0.0).members == ("q",)
    assert circle_of(path_space, "q", 0.0).degenerate


def test_circle_center_and_radius_guards(path_space):
    with pytest.raises(DomainError):
        circle_of(path_space, "z", 1.0)
    with pytest.raises(MalformedInputError):
        circle_of(path_space, "p", -1.0)
    with pytest.raises(MalformedInputError):
        circle_of(path_space, "p", float("inf"))


@given(center=st.floats(-50, 50), radius=st.floats(1e-6, 50))
@settings(max_examples=200, deadline=None)
def test_real_usual_circle_always_two_points(center, radius):
    space = MetricSpace.analytic("real_usual", (center, 0.0))
    c = circle_of(space, center, radius)
    assert c.members == (center - radius, center + radius)
    for m in c.members:
        assert space.distance(m, center) == pytest.approx(radius, abs=1e-6)


def test_real_exp_circle_against_scan():
    # oracle first: scan a dense grid for |e^x - e^c| = r crossings
    center, radius = 0.0, 1.0
    grid = np.linspace(-5, 5, 2_000_001)
    vals = np.abs(np.exp(grid) - math.exp(center)) - radius
    crossings = grid[np.abs(vals) < 2e-5]
    # the scan localizes exactly one root, near ln 2
    assert crossings.size and np.ptp(crossings) < 1e-3
    assert abs(crossings.mean() - math.log(2)) < 1e-4

    space = MetricSpace.analytic("real_exp", (0.0, 1.0))
    c = circle_of(space, center, radius)
    assert c.members == (math.log(2.0),)
    assert c.resolution == "exact"


def test_real_exp_circle_two_sided():
    # e^c - r > 0 gives the second, lower member
    space = MetricSpace.analytic("real_exp", (0.0,))
    c = circle_of(space, 0.0, 0.5)
    assert c.members == (math.log(0.5), math.log(1.5))


def _abs_sum_roots(center, radius):
    """Oracle: members of the |x|+|y| circle by sign-change bisection.

    d(y, center) is |y| + |center| away from the center and 0 at it, so
    the members are the roots of |y| + |center| - radius on each open
    half-line, plus 0 when |center| = radius, minus the center itself.
    Root isolation by sign change needs no tolerance.
    """
    g = lambda y: abs(y) + abs(center) - radius
    roots = []
    for lo, hi in ((-20.0, -1e-12), (1e-12, 20.0)):
        if g(lo) * g(hi) < 0:
            a, b = lo, hi
            for _ in range(100):
                mid = (a + b) / 2
                if g(a) * g(mid) <= 0:
                    b = mid
                else:
                    a = mid
            roots.append((a + b) / 2)
    if abs(center) == radius:
        roots.append(0.0)
    # drop the root that is the center itself (bisection localizes it
    # only to float precision, so compare with a buffer)
    return sorted(r for r in roots if abs(r - center) > 1e-6)


@pytest.mark.parametrize("center,radius", [
    (1.0, 2.0), (1.0, 1.0), (2.0, 2.0), (-3.0, 1.0), (0.5, 3.0),
])
def test_real_abs_sum_circle_against_scan(center, radius):
    oracle = _abs_sum_roots(center, radius)
    space = MetricSpace.analytic("real_abs_sum", (center, 0.0))
    c = circle_of(space, center, radius)
    assert len(c.members) == len(oracle)
    for got, want in zip(sorted(c.members), oracle):
        assert got == pytest.approx(want, abs=1e-9)


def test_real_abs_sum_circle_shapes():
    space = MetricSpace.analytic("real_abs_sum", (1.0, 0.0))
    assert circle_of(space, 1.0, 0.5).empty          # radius < |center|
    assert circle_of(space, 1.0, 1.0).members == (0.0,)
    assert circle_of(space, 1.0, 3.0).members == (-2.0, 2.0)
    # the center never belongs to its own positive-radius circle
    assert 1.0 not in circle_of(space, 1.0, 2.0).members


def test_complex_circle_is_sample_intersection():
    pts = (complex(-1, 0), complex(1, 0), complex(0, 2))
    space = MetricSpace.analytic("complex_usual", pts + circle_samples(0, 1))
    c = circle_of(space, complex(0, 0), 1.0)
    assert c.resolution == "sampled"
    assert complex(-1, 0) in c.members and complex(1, 0) in c.members
    assert complex(0, 2) not in c.members


def test_circle_samples_count_and_env(monkeypatch):
    assert len(circle_samples(0, 1)) == 360
    assert len(circle_samples(0, 1, count=7)) == 7
    monkeypatch.setenv("FIXEDCIRCLE_CIRCLE_SAMPLES", "12")
    assert len(circle_samples(0, 1)) == 12
    with pytest.raises(MalformedInputError):
        circle_samples(0, 1, count=0)
    for z in circle_samples(complex(1, 1), 2.0, count=16):
        assert abs(abs(z - complex(1, 1)) - 2.0) < 1e-12


def test_enumerate_circles_covers_realized_radii(path_space):
    pairs = enumerate_circles(path_space)
    assert ("p", 0.0) in pairs and ("p", 1.0) in pairs and ("p", 2.0) in pairs
    # every listed pair resolves to a nonempty circle
    for center, radius in pairs:
        assert not circle_of(path_space, center, radius).empty


def test_enumerate_circles_dedupes_within_eps():
    space = _square(("p", "q", "s"),
                    [[0, 1, 1 + 1e-12], [1, 0, 1], [1 + 1e-12, 1, 0]])
    radii = [r for c, r in enumerate_circles(space) if c == "p" and r > 0]
    assert radii == [1.0]


# ---------------------------------------------------------------------------
# Self-maps


def test_from_table_requires_total_on_carrier(path_space):
    with pytest.raises(MalformedInputError):
        SelfMap.from_table(path_space, {"p": "q"})
    with pytest.raises(DomainError):
        SelfMap.from_table(path_space, {"p": "z", "q": "p", "s": "p"})


def test_table_maps_reject_analytic_carriers():
    space = MetricSpace.analytic("real_usual", (0.0, 1.0))
    with pytest.raises(MalformedInputError):
        SelfMap.from_table(space, {0.0: 1.0, 1.0: 0.0})


def test_piecewise_materializes_on_finite(path_space):
    m = SelfMap.piecewise(
        path_space, (Branch(("on_circle", "p", 1.0), ("identity",)),),
        ("constant", "p"))
    assert m.kind == "table"
    assert m.apply("q") == "q"
    assert m.apply("s") == "p"


def test_piecewise_branch_order_is_first_match():
    space = MetricSpace.analytic("real_usual", (0.0, 1.0, 2.0))
    m = SelfMap.piecewise(
        space,
        (Branch(("at_points", (1.0,)), ("constant", 0.0)),
         Branch(("on_circle", 0.0, 1.0), ("identity",))),
        ("constant", 2.0))
    assert m.apply(1.0) == 0.0      # first branch wins
    assert m.apply(-1.0) == -1.0    # second branch catches the other member
    assert m.apply(0.5) == 2.0


def test_reciprocal_needs_analytic_carrier(path_space):
    with pytest.raises(MalformedInputError):
        SelfMap.from_rule(path_space, ("reciprocal",))
    space = MetricSpace.analytic("real_usual", (0.0, 2.0))
    m = SelfMap.from_rule(space, ("reciprocal",))
    assert m.apply(2.0) == 0.5
    assert m.apply(0.0) == 0       # guarded pole
    assert m.apply(-4.0) == -0.25


def test_constant_image_must_be_on_carrier(path_space):
    with pytest.raises(MalformedInputError):
        SelfMap.piecewise(path_space, (), ("constant", "z"))


def test_off_sample_images_are_exact_not_snapped():
    space = MetricSpace.analytic("real_usual", (0.0, 3.0))
    m = SelfMap.from_rule(space, ("reciprocal",))
    # 1/3 is not a sample; the image must be the exact value
    assert m.apply(3.0) == pytest.approx(1 / 3, abs=0)


def test_fixed_points_and_fixed_circle(path_space):
    ident = SelfMap.identity(path_space)
    assert fixed_points(ident) == ("p", "q", "s")
    c = circle_of(path_space, "p", 1.0)
    assert is_fixed_circle(ident, c).holds

    swap = SelfMap.from_table(path_space, {"p": "s", "q": "q", "s": "p"})
    rep = is_fixed_circle(swap, circle_of(path_space, "q", 1.0))
    assert not rep.holds
    moved = [w for w in rep.witnesses if w.displacement > EPS]
    assert {w.point for w in moved} == {"p", "s"}


def test_empty_circle_is_vacuous_not_true(path_space):
    rep = is_fixed_circle(SelfMap.identity(path_space),
                          circle_of(path_space, "p", 9.0))
    assert rep.holds and rep.vacuous


def test_fixed_set_equals_degenerate_circle_union(path_space):
    # the fixed-point set is exactly the union of members of degenerate
    # circles centered at fixed points
    for tab in ({"p": "p", "q": "p", "s": "s"},
                {"p": "q", "q": "p", "s": "s"},
                {"p": "p", "q": "q", "s": "s"}):
        m = SelfMap.from_table(path_space, tab)
        fixed = set(fixed_points(m))
        union = set()
        for x in fixed:
            union.update(circle_of(path_space, x, 0.0).members)
        assert union == fixed


def test_classify_images_regions(path_space):
    m = SelfMap.from_table(path_space, {"p": "p", "q": "p", "s": "p"})
    c = circle_of(path_space, "p", 1.0)
    rep = classify_images(m, c)
    assert rep.interior == 1 and rep.on == 0 and rep.exterior == 0
    assert rep.classifications[0].signed_gap == pytest.approx(-1.0)


@given(st.integers(2, 8), st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_generated_spaces_validate(size, seed):
    space = random_metric_space(GenConfig(seed=seed, size=size))
    assert validate_metric(space).valid
