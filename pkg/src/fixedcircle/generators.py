"""Instance construction: random valid spaces, circle-fixing maps, searches.

Random spaces are built on a dyadic integer lattice. Entries are drawn
as integers in [1049, 2**20], repaired to a shortest-path closure while
still integers (min-plus Floyd-Warshall is exact on ints), and scaled
by distance_scale / 2**20 at the very end. With the default scale the
resulting floats are dyadic rationals, so every comparison downstream
is exact and the smallest distance (~1e-3) sits far above the default
epsilon. Zero off-diagonal entries cannot be sampled at all, which is
how identity of indiscernibles is enforced.

The map builders reproduce the standard constructive shape: identity on
the designated circle(s), a constant anchor value elsewhere. Anchor
admissibility is a strict slack test; when no anchor is given one is
chosen by maximizing the minimum slack, ties broken by carrier order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .conditions import check_condition
from .errors import (AnchorSearchError, ConstraintViolationError, DomainError,
                     MalformedInputError)
from .metric_core import (Branch, Circle, MetricSpace, SelfMap, _resolve_eps,
                          is_fixed_circle)

_LATTICE_BITS = 20
_LATTICE_MIN = 1049
_RELATION_OPS = {"ne": "!=", "gt": ">", "lt": "<"}


@dataclass(frozen=True)
class GenConfig:
    seed: int
    size: int
    distance_scale: float = 1.0
    repair: str = "shortest_path"

    def __post_init__(self):
        if self.size < 1:
            raise MalformedInputError(f"size must be >= 1, got {self.size}")
        if not self.distance_scale > 0:
            raise MalformedInputError(
                f"distance_scale must be positive, got {self.distance_scale}")
        if self.repair != "shortest_path":
            raise MalformedInputError(f"unknown repair mode {self.repair!r}")


def random_metric_space(config: GenConfig) -> MetricSpace:
    """Seeded random finite metric space, always valid.

    Symmetric integer entries, zero diagonal, then the shortest-path
    closure: the repaired matrix satisfies the triangle inequality by
    construction and keeps every off-diagonal entry positive.
    """
    n = config.size
    rng = np.random.default_rng(config.seed)
    grid = rng.integers(_LATTICE_MIN, 2 ** _LATTICE_BITS, size=(n, n),
                        endpoint=True, dtype=np.int64)
    grid = np.minimum(grid, grid.T)
    np.fill_diagonal(grid, 0)
    for k in range(n):
        grid = np.minimum(grid, grid[:, k][:, None] + grid[k, :][None, :])
    matrix = grid * (config.distance_scale / 2.0 ** _LATTICE_BITS)
    labels = tuple(f"p{i}" for i in range(n))
    return MetricSpace.finite(labels, matrix.tolist())


@dataclass(frozen=True)
class AnchorConstraint:
    """One requirement on the anchor's distance to a circle center."""

    center: object
    radius: float
    relation: str  # "ne" | "gt" | "lt"
    distance: float
    slack: float

    def describe(self) -> str:
        return f"d(alpha, {self.center!r}) {_RELATION_OPS[self.relation]} {self.radius}"


@dataclass(frozen=True)
class AnchorPoint:
    value: object
    distances_to_centers: tuple[AnchorConstraint, ...]


def _constraint_slack(distance: float, radius: float, relation: str) -> float:
    if relation == "ne":
        return abs(distance - radius)
    if relation == "gt":
        return distance - radius
    if relation == "lt":
        return radius - distance
    raise MalformedInputError(f"unknown anchor relation {relation!r}")


def _bind_anchor(space, value, wanted, eps) -> AnchorPoint:
    """Measure the candidate against every constraint; strict slack only."""
    bound = []
    for center, radius, relation in wanted:
        distance = space.distance(value, center)
        slack = _constraint_slack(distance, radius, relation)
        if slack <= eps:
            raise ConstraintViolationError(
                f"anchor {value!r} violates "
                f"d(alpha, {center!r}) {_RELATION_OPS[relation]} {radius} "
                f"(distance {distance}, slack {slack})")
        bound.append(AnchorConstraint(center=center, radius=radius,
                                      relation=relation, distance=distance,
                                      slack=slack))
    return AnchorPoint(value=value, distances_to_centers=tuple(bound))


def choose_anchor(space: MetricSpace, wanted, eps=None) -> AnchorPoint:
    """Pick the carrier point maximizing the minimum constraint slack.

    ``wanted`` is a sequence of (center, radius, relation) triples with
    relation one of "ne", "gt", "lt". Ties go to the earliest carrier
    point. Raises AnchorSearchError listing how many candidates each
    constraint admitted when nothing qualifies.
    """
    eps = _resolve_eps(eps)
    wanted = tuple(wanted)
    best = None
    best_score = -np.inf
    admitted = [0] * len(wanted)
    for candidate in space.points():
        slacks = []
        ok = True
        for j, (center, radius, relation) in enumerate(wanted):
            slack = _constraint_slack(space.distance(candidate, center),
                                      radius, relation)
            if slack > eps:
                admitted[j] += 1
            else:
                ok = False
            slacks.append(slack)
        if ok and min(slacks, default=np.inf) > best_score:
            best = candidate
            best_score = min(slacks, default=np.inf)
    if best is None:
        blocked = tuple(
            f"{AnchorConstraint(c, r, rel, 0.0, 0.0).describe()}"
            f" admits {admitted[j]} of {len(space.points())} candidates"
            for j, (c, r, rel) in enumerate(wanted))
        raise AnchorSearchError("no admissible anchor in carrier", blocked)
    return _bind_anchor(space, best, wanted, eps)


def _covers_carrier(space, circles, eps) -> bool:
    if not space.is_finite:
        return False
    for x in space.points():
        if all(abs(space.distance(x, c.center) - c.radius) > eps
               for c in circles):
            return False
    return True


def _resolve_anchor(space, circles, anchor, relations, eps) -> AnchorPoint:
    wanted = tuple((c.center, c.radius, rel)
                   for c, rel in zip(circles, relations))
    if anchor is None:
        return choose_anchor(space, wanted, eps)
    if isinstance(anchor, AnchorPoint):
        return _bind_anchor(space, anchor.value, wanted, eps)
    return _bind_anchor(space, anchor, wanted, eps)


def build_circle_fixing_map(space: MetricSpace, circle: Circle, anchor=None,
                            eps=None) -> SelfMap:
    """Identity on the circle, constant anchor elsewhere.

    An exterior anchor (distance to center above the radius) yields a
    map satisfying C1 and C2 on the circle; an interior one satisfies
    the starred pair instead. The anchor may be an AnchorPoint, a raw
    carrier point, or None to auto-select; it must sit strictly off the
    circle. When the circle exhausts a finite carrier the map is the
    identity and no anchor is involved.
    """
    eps = _resolve_eps(eps)
    if _covers_carrier(space, (circle,), eps):
        return SelfMap.identity(space)
    bound = _resolve_anchor(space, (circle,), anchor, ("ne",), eps)
    branches = (Branch(predicate=("on_circle", circle.center, circle.radius),
                       image=("identity",)),)
    return SelfMap.piecewise(space, branches,
                             default=("constant", bound.value))


def build_multi_circle_map(space: MetricSpace, circles, anchor=None,
                           eps=None) -> SelfMap:
    """Identity on every listed circle, constant anchor elsewhere.

    The anchor must sit strictly off each circle; with one circle this
    reduces to build_circle_fixing_map. Auto-selection raises
    AnchorSearchError when the circles blanket the carrier.
    """
    eps = _resolve_eps(eps)
    circles = tuple(circles)
    if not circles:
        raise MalformedInputError("need at least one circle")
    if _covers_carrier(space, circles, eps):
        return SelfMap.identity(space)
    bound = _resolve_anchor(space, circles, anchor, ("ne",) * len(circles), eps)
    branches = tuple(Branch(predicate=("on_circle", c.center, c.radius),
                            image=("identity",)) for c in circles)
    return SelfMap.piecewise(space, branches,
                             default=("constant", bound.value))


# ---------------------------------------------------------------------------
# Counterexample search

_SEARCH_ATOMS = ("C1", "C2", "C1_STAR", "C2_STAR", "C1_DSTAR", "C2_DSTAR",
                 "ID_COND", "C3", "C3_DSTAR", "BANACH", "CARISTI", "RHOADES",
                 "FIXED_CIRCLE")


class _Tokens:
    def __init__(self, text: str):
        self.items = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "!&|()":
                self.items.append(ch)
                i += 1
            elif ch.isalpha():
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(text[i:j])
                i = j
            else:
                raise MalformedInputError(
                    f"bad character {ch!r} in target at offset {i}")
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok


def _parse_target(text: str):
    """Parse !,&,| over condition-id atoms into a lazy evaluator tree.

    Returns (eval_fn, atoms_used). eval_fn takes an atom->bool lookup
    and short-circuits, so expensive atoms are only computed on demand.
    """
    toks = _Tokens(text)
    atoms: set[str] = set()

    def parse_or():
        node = parse_and()
        while toks.peek() == "|":
            toks.take()
            left, right = node, parse_and()
            node = (lambda l, r: (lambda look: l(look) or r(look)))(left, right)
        return node

    def parse_and():
        node = parse_not()
        while toks.peek() == "&":
            toks.take()
            left, right = node, parse_not()
            node = (lambda l, r: (lambda look: l(look) and r(look)))(left, right)
        return node

    def parse_not():
        if toks.peek() == "!":
            toks.take()
            inner = parse_not()
            return lambda look: not inner(look)
        if toks.peek() == "(":
            toks.take()
            node = parse_or()
            if toks.take() != ")":
                raise MalformedInputError(f"unbalanced parens in {text!r}")
            return node
        tok = toks.take()
        if tok is None:
            raise MalformedInputError(f"target {text!r} ends mid-expression")
        name = tok.upper()
        if name not in _SEARCH_ATOMS:
            raise MalformedInputError(f"unknown condition atom {tok!r}")
        atoms.add(name)
        return lambda look: look(name)

    tree = parse_or()
    if toks.peek() is not None:
        raise MalformedInputError(
            f"trailing tokens in target {text!r}: {toks.items[toks.pos:]}")
    return tree, frozenset(atoms)


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" | "exhausted"
    target: str
    found: SelfMap | None
    evaluated: int

    @property
    def exhausted(self) -> bool:
        return self.status == "exhausted"


def _atom_lookup(space, tmap, circle, eps):
    cache: dict[str, bool] = {}

    def look(name: str) -> bool:
        if name not in cache:
            if name == "FIXED_CIRCLE":
                cache[name] = is_fixed_circle(tmap, circle, eps).holds
            else:
                cache[name] = check_condition(name, space, tmap,
                                              circle=circle, eps=eps).holds
        return cache[name]

    return look


def search_counterexample(space: MetricSpace, circle: Circle, target: str,
                          budget: int = 10 ** 6, seed: int = 0,
                          eps=None) -> SearchResult:
    """Hunt for a table map meeting a boolean combination of conditions.

    Atoms are condition ids plus FIXED_CIRCLE, all interpreted against
    the given circle; operators are !, &, | and parentheses. Candidate
    maps are exhausted in index order when |X|**|X| fits the budget,
    otherwise drawn seeded-random up to the budget. Either way the
    first hit in evaluation order wins, so results are reproducible.
    """
    eps = _resolve_eps(eps)
    if not space.is_finite:
        raise DomainError("counterexample search needs a finite carrier")
    tree, _ = _parse_target(target)
    pts = space.points()
    n = len(pts)

    def candidates():
        if n ** n <= budget:
            for images in itertools.product(range(n), repeat=n):
                yield images
        else:
            rng = np.random.default_rng(seed)
            for _ in range(budget):
                yield tuple(int(v) for v in rng.integers(0, n, size=n))

    evaluated = 0
    for images in candidates():
        tmap = SelfMap.from_indices(space, images)
        evaluated += 1
        if tree(_atom_lookup(space, tmap, circle, eps)):
            return SearchResult(status="found", target=target, found=tmap,
                                evaluated=evaluated)
    return SearchResult(status="exhausted", target=target, found=None,
                        evaluated=evaluated)
