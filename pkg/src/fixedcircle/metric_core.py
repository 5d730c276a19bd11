"""Metric spaces, circles, and self-maps.

A space is either finite (point labels plus a distance matrix) or
analytic: one of four named metrics observed through a finite sample
set. The named kinds are

    real_usual     d(x, y) = |x - y|            on the reals
    real_exp       d(x, y) = |e^x - e^y|        on the reals
    real_abs_sum   d(x, y) = 0 if x == y else |x| + |y|
    complex_usual  d(z, w) = |z - w|            on the complex plane

A circle is the set of carrier points at a fixed distance from a
center. Circles resolve to explicit member tuples: by matrix scan on
finite carriers, by closed-form solving on the real analytic kinds
(resolution "exact"), and by intersecting the sample set on the complex
plane (resolution "sampled").

All types are immutable; every operation is a pure function of its
inputs plus the tolerance. One absolute tolerance governs circle
membership, fixed-point tests, and axiom checks. The default is 1e-9
and can be overridden with the FIXEDCIRCLE_EPSILON environment
variable or per call.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, MalformedInputError

DEFAULT_EPSILON = 1e-9
DEFAULT_CIRCLE_SAMPLES = 360

ANALYTIC_KINDS = ("real_usual", "real_exp", "real_abs_sum", "complex_usual")

# Cap on the number of detailed violation records kept per report; the
# total count is tracked separately so validity is never misjudged.
_VIOLATION_CAP = 256


def default_epsilon() -> float:
    raw = os.environ.get("FIXEDCIRCLE_EPSILON")
    return float(raw) if raw else DEFAULT_EPSILON


def default_circle_samples() -> int:
    raw = os.environ.get("FIXEDCIRCLE_CIRCLE_SAMPLES")
    return int(raw) if raw else DEFAULT_CIRCLE_SAMPLES


def _resolve_eps(eps) -> float:
    if eps is None:
        return default_epsilon()
    eps = float(eps)
    if eps < 0 or not math.isfinite(eps):
        raise MalformedInputError(f"tolerance must be finite and >= 0, got {eps}")
    return eps


@dataclass(frozen=True)
class FiniteCarrier:
    """A finite point set; points are opaque string labels."""

    labels: tuple[str, ...]


@dataclass(frozen=True)
class AnalyticCarrier:
    """One of the named metrics, observed through finitely many samples.

    The carrier itself is the whole real line (or complex plane); the
    samples are the points that scans and enumerations range over.
    Off-sample points remain legal arguments everywhere.
    """

    kind: str
    samples: tuple


@dataclass(frozen=True)
class MetricSpace:
    """A metric space with either a finite or an analytic carrier.

    ``matrix`` holds the distance table for finite carriers and is None
    for analytic ones, where the distance comes from the carrier kind.
    Use the ``finite`` / ``analytic`` constructors rather than the raw
    dataclass: they normalize input and catch malformed data early.
    """

    carrier: FiniteCarrier | AnalyticCarrier
    matrix: tuple[tuple[float, ...], ...] | None = None

    @classmethod
    def finite(cls, labels: Iterable[str], matrix) -> "MetricSpace":
        labels = tuple(str(l) for l in labels)
        rows = [tuple(float(v) for v in row) for row in matrix]
        n = len(rows)
        if n != len(labels):
            raise MalformedInputError(
                f"{len(labels)} labels but {n} matrix rows")
        for row in rows:
            if len(row) != n:
                raise MalformedInputError("distance matrix is not square")
            for v in row:
                if not math.isfinite(v) or v < 0:
                    raise MalformedInputError(
                        f"distance entries must be finite and >= 0, got {v}")
        if len(set(labels)) != n:
            raise MalformedInputError("duplicate point labels")
        return cls(carrier=FiniteCarrier(labels), matrix=tuple(rows))

    @classmethod
    def analytic(cls, kind: str, samples: Iterable, eps=None) -> "MetricSpace":
        if kind not in ANALYTIC_KINDS:
            raise MalformedInputError(f"unknown analytic kind {kind!r}")
        eps = _resolve_eps(eps)
        if kind == "complex_usual":
            pts = [complex(s) for s in samples]
        else:
            pts = [float(s) for s in samples]
        if not pts:
            raise MalformedInputError("analytic carrier needs a nonempty sample set")
        fn = _METRIC_FNS[kind]
        # Drop samples that are metrically indistinguishable from an
        # earlier one; keeping both would break identity of
        # indiscernibles at the declared tolerance.
        kept: list = []
        for p in pts:
            if all(fn(p, q) > eps for q in kept):
                kept.append(p)
        return cls(carrier=AnalyticCarrier(kind, tuple(kept)))

    @property
    def is_finite(self) -> bool:
        return isinstance(self.carrier, FiniteCarrier)

    @property
    def kind(self) -> str | None:
        return None if self.is_finite else self.carrier.kind

    def points(self) -> tuple:
        """Carrier labels, or the sample set for analytic carriers."""
        if self.is_finite:
            return self.carrier.labels
        return self.carrier.samples

    @cached_property
    def _index(self) -> dict:
        return {p: i for i, p in enumerate(self.points())}

    def index_of(self, point) -> int:
        try:
            return self._index[point]
        except (KeyError, TypeError):
            raise DomainError(f"point {point!r} is not a carrier point") from None

    @cached_property
    def as_array(self) -> np.ndarray:
        """Distance matrix over points() as a float array (any carrier)."""
        if self.is_finite:
            return np.asarray(self.matrix, dtype=float)
        return _sample_matrix(self.carrier.kind, self.carrier.samples)

    def contains(self, point) -> bool:
        """Membership in the carrier (not the sample set)."""
        if self.is_finite:
            return point in self._index
        if self.carrier.kind == "complex_usual":
            return isinstance(point, (int, float, complex))
        return isinstance(point, (int, float)) and not isinstance(point, bool)

    def distance(self, x, y) -> float:
        if self.is_finite:
            return self.as_array[self.index_of(x), self.index_of(y)]
        return _METRIC_FNS[self.carrier.kind](x, y)


def _d_real_usual(x, y):
    return abs(x - y)


def _d_real_exp(x, y):
    try:
        return abs(math.exp(x) - math.exp(y))
    except OverflowError:
        raise MalformedInputError(
            f"exp metric overflows at x={x!r}, y={y!r}") from None


def _d_real_abs_sum(x, y):
    return 0.0 if x == y else abs(x) + abs(y)


def _d_complex_usual(x, y):
    return abs(x - y)


_METRIC_FNS = {
    "real_usual": _d_real_usual,
    "real_exp": _d_real_exp,
    "real_abs_sum": _d_real_abs_sum,
    "complex_usual": _d_complex_usual,
}


def _sample_matrix(kind: str, samples: tuple) -> np.ndarray:
    if kind == "complex_usual":
        z = np.asarray(samples, dtype=complex)
        return np.abs(z[:, None] - z[None, :])
    x = np.asarray(samples, dtype=float)
    if kind == "real_usual":
        return np.abs(x[:, None] - x[None, :])
    if kind == "real_exp":
        e = np.exp(x)
        if not np.all(np.isfinite(e)):
            raise MalformedInputError("exp metric overflows on the sample set")
        return np.abs(e[:, None] - e[None, :])
    # real_abs_sum: |x| + |y| off the diagonal of equal values
    a = np.abs(x)
    m = a[:, None] + a[None, :]
    m[x[:, None] == x[None, :]] = 0.0
    return m


@dataclass(frozen=True)
class Violation:
    """One metric-axiom failure.

    ``axiom`` is one of "identity", "symmetry", "triangle". The witness
    is the offending point tuple; for "triangle" it reads (x, y, z)
    with magnitude d(x,z) - d(x,y) - d(y,z).
    """

    axiom: str
    witness: tuple
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[Violation, ...]
    violation_count: int
    point_count: int


def validate_metric(space: MetricSpace, eps=None) -> ValidationReport:
    """Check the three metric axioms over the carrier/sample points.

    Returns an empty violation list iff zero-self-distance, identity of
    indiscernibles, symmetry, and the triangle inequality all hold
    within the tolerance. Raises MalformedInputError for structurally
    bad input (non-square or negative matrix).
    """
    eps = _resolve_eps(eps)
    if space.is_finite and space.matrix is not None:
        n = len(space.carrier.labels)
        if len(space.matrix) != n or any(len(r) != n for r in space.matrix):
            raise MalformedInputError("distance matrix is not square")
        for row in space.matrix:
            for v in row:
                if v < 0 or not math.isfinite(v):
                    raise MalformedInputError(
                        f"distance entries must be finite and >= 0, got {v}")
    return _validate(space, eps)


def _validate(space: MetricSpace, eps: float) -> ValidationReport:
    D = space.as_array
    pts = space.points()
    n = len(pts)
    found: list[Violation] = []
    count = 0

    def push(axiom, witness, magnitude):
        nonlocal count
        count += 1
        if len(found) < _VIOLATION_CAP:
            found.append(Violation(axiom, witness, float(magnitude)))

    for i in np.flatnonzero(np.abs(np.diag(D)) > eps):
        push("identity", (pts[i],), abs(D[i, i]))
    off = ~np.eye(n, dtype=bool)
    for i, j in zip(*np.nonzero((D <= eps) & off)):
        if i < j:
            push("identity", (pts[i], pts[j]), D[i, j])
    asym = np.abs(D - D.T)
    for i, j in zip(*np.nonzero(asym > eps)):
        if i < j:
            push("symmetry", (pts[i], pts[j]), asym[i, j])
    # Triangle: chunk over the middle point to keep memory at O(n^2).
    for j in range(n):
        excess = D - (D[:, j:j + 1] + D[j:j + 1, :])
        bad = excess > eps
        bad[j, :] = False
        bad[:, j] = False
        np.fill_diagonal(bad, False)
        for i, k in zip(*np.nonzero(bad)):
            push("triangle", (pts[i], pts[j], pts[k]), excess[i, k])
    return ValidationReport(valid=count == 0, violations=tuple(found),
                            violation_count=count, point_count=n)


@dataclass(frozen=True)
class Circle:
    """The set of carrier points at distance ``radius`` from ``center``.

    ``members`` is the resolved point tuple in deterministic order.
    ``resolution`` is "exact" (finite scan or closed-form solve) or
    "sampled" (intersection with the sample set; verdicts built on it
    carry a caveat). Degenerate circles (radius within tolerance of 0)
    and empty circles are legal and flagged, never errors.
    """

    center: object
    radius: float
    members: tuple
    resolution: str
    degenerate: bool
    empty: bool


def circle_of(space: MetricSpace, center, radius, eps=None) -> Circle:
    """Resolve the circle with the given center and radius.

    The center must lie in the carrier (for analytic kinds that is the
    whole line/plane, not just the samples). The radius must be a
    finite nonnegative real.
    """
    eps = _resolve_eps(eps)
    radius = float(radius)
    if radius < 0 or not math.isfinite(radius):
        raise MalformedInputError(f"radius must be finite and >= 0, got {radius}")
    if not space.contains(center):
        raise DomainError(f"center {center!r} is not in the carrier")

    if space.is_finite:
        D = space.as_array
        ci = space.index_of(center)
        members = tuple(p for i, p in enumerate(space.points())
                        if abs(D[ci, i] - radius) <= eps)
        return _mk_circle(center, radius, members, "exact", eps)

    kind = space.carrier.kind
    if kind == "complex_usual":
        center = complex(center)
        members = tuple(s for s in space.carrier.samples
                        if abs(abs(s - center) - radius) <= eps)
        return _mk_circle(center, radius, members, "sampled", eps)

    center = float(center)
    if radius <= eps:
        return _mk_circle(center, radius, (center,), "exact", eps)
    if kind == "real_usual":
        members = (center - radius, center + radius)
    elif kind == "real_exp":
        ec = math.exp(center)
        members = [math.log(ec + radius)]
        if ec - radius > 0:
            members.insert(0, math.log(ec - radius))
        members = tuple(members)
    else:  # real_abs_sum: solve |center| + |y| = radius with y != center
        t = radius - abs(center)
        if t < -eps:
            members = ()
        elif abs(t) <= eps:
            members = (0.0,)
        else:
            members = (-t, t)
        members = tuple(y for y in members if y != center)
    return _mk_circle(center, radius, members, "exact", eps)


def _mk_circle(center, radius, members, resolution, eps) -> Circle:
    return Circle(center=center, radius=radius, members=members,
                  resolution=resolution, degenerate=radius <= eps,
                  empty=len(members) == 0)


def enumerate_circles(space: MetricSpace, eps=None) -> tuple:
    """All (center, radius) pairs with realized, nonempty circles.

    Centers run over the carrier/sample points in order; for each, the
    radii are the distances the center actually attains, ascending,
    deduplicated within the tolerance (the representative is the
    smallest of each cluster). The zero radius is included; it yields
    the degenerate one-point circle.
    """
    eps = _resolve_eps(eps)
    D = space.as_array
    out = []
    for ci, c in enumerate(space.points()):
        radii = np.sort(D[ci])
        anchor = None
        for r in radii:
            if anchor is None or r - anchor > eps:
                anchor = r
                out.append((c, float(r)))
    return tuple(out)


def circle_samples(center, radius, count=None) -> tuple:
    """Equally spaced points on a complex circle, for carrier building.

    The default count is 360, overridable per call or with the
    FIXEDCIRCLE_CIRCLE_SAMPLES environment variable.
    """
    count = default_circle_samples() if count is None else int(count)
    if count < 1:
        raise MalformedInputError(f"sample count must be >= 1, got {count}")
    center = complex(center)
    radius = float(radius)
    return tuple(center + radius * cmath.exp(2j * cmath.pi * k / count)
                 for k in range(count))


# ---------------------------------------------------------------------------
# Self-maps


@dataclass(frozen=True)
class Branch:
    """One piecewise branch: if ``predicate`` matches, apply ``image``.

    predicate: ("on_circle", center, radius) or ("at_points", points)
    image:     ("identity",) | ("constant", value) | ("reciprocal",)
    """

    predicate: tuple
    image: tuple


@dataclass(frozen=True)
class SelfMap:
    """A total self-mapping of the carrier.

    Finite carriers use a positional lookup table (image of points()[i]
    at slot i). Analytic carriers use a closed-form rule or a piecewise
    rule; images are computed exactly from the rule even at points
    outside the sample set, so sampled carriers never snap images to
    the nearest sample.
    """

    space: MetricSpace
    kind: str                      # "table" | "rule" | "piecewise"
    table: tuple | None = None
    rule: tuple | None = None
    branches: tuple[Branch, ...] = ()
    default: tuple | None = None

    @classmethod
    def from_table(cls, space: MetricSpace, images: Mapping) -> "SelfMap":
        if not space.is_finite:
            raise MalformedInputError("lookup tables require a finite carrier")
        pts = space.points()
        missing = [p for p in pts if p not in images]
        if missing:
            raise MalformedInputError(f"map is not total, missing {missing[:5]}")
        tab = []
        for p in pts:
            img = images[p]
            if img not in space._index:
                raise DomainError(f"image {img!r} of {p!r} is off the carrier")
            tab.append(img)
        return cls(space=space, kind="table", table=tuple(tab))

    @classmethod
    def from_indices(cls, space: MetricSpace, indices) -> "SelfMap":
        """Table map from image indices into points(); finite only."""
        pts = space.points()
        return cls.from_table(space, {pts[i]: pts[j] for i, j in enumerate(indices)})

    @classmethod
    def from_rule(cls, space: MetricSpace, rule: tuple) -> "SelfMap":
        _check_image(space, rule)
        if space.is_finite:
            pts = space.points()
            return cls.from_table(space, {p: _apply_image(space, rule, p) for p in pts})
        return cls(space=space, kind="rule", rule=tuple(rule))

    @classmethod
    def piecewise(cls, space: MetricSpace, branches: Iterable[Branch],
                  default: tuple) -> "SelfMap":
        branches = tuple(branches)
        for b in branches:
            if b.predicate[0] not in ("on_circle", "at_points"):
                raise MalformedInputError(f"unknown predicate {b.predicate[0]!r}")
            _check_image(space, b.image)
        _check_image(space, default)
        if space.is_finite:
            m = cls(space=space, kind="piecewise", branches=branches,
                    default=tuple(default))
            return cls.from_table(space, {p: m.apply(p) for p in space.points()})
        return cls(space=space, kind="piecewise", branches=branches,
                   default=tuple(default))

    @classmethod
    def identity(cls, space: MetricSpace) -> "SelfMap":
        return cls.from_rule(space, ("identity",))

    @classmethod
    def constant(cls, space: MetricSpace, value) -> "SelfMap":
        return cls.from_rule(space, ("constant", value))

    def apply(self, x, eps=None):
        if self.kind == "table":
            return self.table[self.space.index_of(x)]
        if self.kind == "rule":
            return _apply_image(self.space, self.rule, x)
        eps = _resolve_eps(eps)
        for b in self.branches:
            if _matches(self.space, b.predicate, x, eps):
                return _apply_image(self.space, b.image, x)
        return _apply_image(self.space, self.default, x)


def _check_image(space, image):
    if not image or image[0] not in ("identity", "constant", "reciprocal"):
        raise MalformedInputError(f"unknown image rule {image!r}")
    if image[0] == "constant":
        if len(image) != 2 or not space.contains(image[1]):
            raise MalformedInputError(f"constant image {image!r} is off the carrier")
    if image[0] == "reciprocal" and space.is_finite:
        raise MalformedInputError("reciprocal images need an analytic carrier")


def _apply_image(space, image, x):
    op = image[0]
    if op == "identity":
        return x
    if op == "constant":
        return image[1]
    return 0 if x == 0 else 1 / x


def _matches(space, predicate, x, eps):
    if predicate[0] == "on_circle":
        _, center, radius = predicate
        return abs(space.distance(x, center) - radius) <= eps
    return x in predicate[1]


# ---------------------------------------------------------------------------
# Fixed-circle test and image classification


@dataclass(frozen=True)
class PointWitness:
    point: object
    image: object
    displacement: float


@dataclass(frozen=True)
class FixedCircleReport:
    """Verdict of the fixed-circle test with one witness per member."""

    holds: bool
    vacuous: bool
    resolution: str
    witnesses: tuple[PointWitness, ...]


def is_fixed_circle(tmap: SelfMap, circle: Circle, eps=None) -> FixedCircleReport:
    """True iff the map moves no member of the circle beyond tolerance.

    An empty circle yields a vacuous-true verdict with the ``vacuous``
    flag set, so callers can tell vacuity from content.
    """
    eps = _resolve_eps(eps)
    witnesses = []
    holds = True
    for x in circle.members:
        tx = tmap.apply(x, eps=eps)
        disp = tmap.space.distance(x, tx)
        witnesses.append(PointWitness(x, tx, disp))
        if disp > eps:
            holds = False
    return FixedCircleReport(holds=holds, vacuous=circle.empty,
                             resolution=circle.resolution,
                             witnesses=tuple(witnesses))


@dataclass(frozen=True)
class PointClassification:
    """Where a member's image lands relative to the circle."""

    point: object
    image: object
    region: str            # "interior" | "on" | "exterior"
    signed_gap: float      # d(image, center) - radius


@dataclass(frozen=True)
class ClassificationReport:
    classifications: tuple[PointClassification, ...]
    interior: int
    on: int
    exterior: int


def classify_images(tmap: SelfMap, circle: Circle, eps=None) -> ClassificationReport:
    """Classify each member's image as interior, on, or exterior."""
    eps = _resolve_eps(eps)
    rows = []
    counts = {"interior": 0, "on": 0, "exterior": 0}
    for x in circle.members:
        tx = tmap.apply(x, eps=eps)
        gap = tmap.space.distance(tx, circle.center) - circle.radius
        region = "on" if abs(gap) <= eps else ("interior" if gap < 0 else "exterior")
        counts[region] += 1
        rows.append(PointClassification(x, tx, region, gap))
    return ClassificationReport(classifications=tuple(rows),
                                interior=counts["interior"], on=counts["on"],
                                exterior=counts["exterior"])


def fixed_points(tmap: SelfMap, eps=None) -> tuple:
    """Carrier/sample points the map leaves in place, in carrier order."""
    eps = _resolve_eps(eps)
    out = []
    for x in tmap.space.points():
        tx = tmap.apply(x, eps=eps)
        if tmap.space.distance(x, tx) <= eps:
            out.append(x)
    return tuple(out)
