"""Constructive clique-minor search inside an expanding graph.

The search has three layers:

* :func:`grow_ball_path` connects two vertex sets by a shortest path
  that avoids a forbidden set;
* :func:`find_hubs_or_balls` either finds ``t`` high-degree vertices or
  ``t`` disjoint expanding balls of moderate size;
* :func:`assemble_minor_hubs` / :func:`assemble_minor_balls` join the
  pieces pairwise with internally disjoint paths.

:func:`find_small_minor` runs the whole pipeline on an arbitrary graph:
extract a dense expander, then search it, then verify the model in the
input graph.  Every threshold is a field of :class:`MinorSearchParams`;
the asymptotic defaults are usually vacuous on small graphs, so the
pipeline falls back to desk-scale regimes and records which one fired.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, islice

from ._rational import log2_lower, log2_upper, loglog2_lower, parse_fraction
from .expansion import ExpansionProfile, ProfileKind, required_ratio, scale_of_size
from .extraction import ExtractionTrace, PipelineConfig, extract_expander
from .graph import Graph, average_degree, induced_subgraph, iter_ball_layers
from .model import MinorModel
from .oracle import brute_force_minor, check_minor_model

__all__ = [
    "SearchFailed",
    "ExpandingBall",
    "HubsOrBalls",
    "MinorSearchParams",
    "MinorSearchResult",
    "DEFAULT_C_OF_T",
    "grow_ball_path",
    "path_length_bound",
    "findpath_precondition",
    "check_expanding_ball",
    "find_hubs_or_balls",
    "assemble_minor_hubs",
    "assemble_minor_balls",
    "find_small_minor",
]

# Known extremal densities for small t; any value can be passed explicitly.
DEFAULT_C_OF_T = {3: Fraction(1), 4: Fraction(2), 5: Fraction(3)}


class SearchFailed(RuntimeError):
    """A search step could not complete; ``state`` records where it got stuck."""

    def __init__(self, reason: str, state: dict | None = None) -> None:
        super().__init__(reason)
        self.reason = reason
        self.state = state or {}


# ---------------------------------------------------------------------------
# shortest connecting paths


def _without(g: Graph, forbidden: frozenset[int]) -> tuple[Graph, tuple[int, ...]]:
    if not forbidden:
        return g, tuple(g.vertices())
    return induced_subgraph(g, frozenset(g.vertices()) - forbidden)


def findpath_precondition(g: Graph, u: Iterable[int], profile: ExpansionProfile) -> bool:
    """Whether the ball around ``u`` keeps growing fast enough to reach half the graph.

    For every radius ``k`` with ``|B_k(u)| <= m/2`` the layer ``N(B_k(u))``
    must hold at least a tenth of the profile's required ratio (at the
    tightest scale for ``|B_k(u)|``) times ``|B_k(u)|``.  The comparison
    uses the rational upper bound of the ratio, so ``True`` is sound.
    """
    m = g.n
    if profile.scale_cap(m) < 0:
        return False
    size = 0
    layers = iter_ball_layers(g, u)
    layer = next(layers)
    while True:
        size += len(layer)
        d = scale_of_size(profile, m, size)
        if d is None:
            return True
        nxt = next(layers, frozenset())
        _, bound = required_ratio(profile, d, m)
        if len(nxt) < bound / 10 * size:
            return False
        layer = nxt


def path_length_bound(profile: ExpansionProfile, m: int) -> float:
    """Length bound for a connecting path when the growth precondition holds."""
    delta = float(profile.delta)
    if profile.kind is ProfileKind.DELTA:
        lg = math.log2(m)
        return 20 / delta * lg * math.log2(lg) ** 3
    ln = math.log2(profile.ambient_n)
    return 20 / delta * ln * math.log2(ln)


def grow_ball_path(
    g: Graph,
    u: Iterable[int],
    v: Iterable[int],
    forbidden: Iterable[int] = (),
    profile: ExpansionProfile | None = None,
) -> tuple[int, ...] | None:
    """Shortest path from ``u`` to ``v`` in ``g`` minus ``forbidden``.

    The path starts in ``u``, ends in ``v`` and has no other vertex in
    either set.  Ties are broken towards smaller vertex ids.  With a
    ``profile``, if both ends satisfy :func:`findpath_precondition` in the
    reduced graph, the length is asserted against :func:`path_length_bound`.
    """
    u, v, forbidden = frozenset(u), frozenset(v), frozenset(forbidden)
    if not u or not v:
        raise ValueError("endpoint sets must be non-empty")
    if u & v or u & forbidden or v & forbidden:
        raise ValueError("u, v and forbidden must be pairwise disjoint")
    parent: dict[int, int | None] = {x: None for x in u}
    frontier = sorted(u)
    end = None
    while frontier and end is None:
        nxt = []
        for x in frontier:
            for y in sorted(g.neighbors(x)):
                if y in parent or y in forbidden:
                    continue
                parent[y] = x
                if y in v:
                    end = y
                    break
                nxt.append(y)
            if end is not None:
                break
        frontier = nxt
    if end is None:
        return None
    path = [end]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    if profile is not None:
        sub, remap = _without(g, forbidden)
        index = {x: i for i, x in enumerate(remap)}
        if sub.n >= 4 and all(
            findpath_precondition(sub, (index[x] for x in side), profile) for side in (u, v)
        ):
            bound = path_length_bound(profile, sub.n)
            assert len(path) - 1 <= bound, f"path length {len(path) - 1} exceeds {bound:.1f}"
    return tuple(path)


# ---------------------------------------------------------------------------
# expanding balls


@dataclass(frozen=True)
class ExpandingBall:
    """``B_radius(center)`` in the subgraph induced on ``member_set``.

    ``layer_sizes[i]`` is ``|B_i(center)|`` (cumulative).
    """

    center: int
    radius: int
    gamma: Fraction
    layer_sizes: tuple[int, ...]
    member_set: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.member_set)

    def is_expanding(self) -> bool:
        s = self.layer_sizes
        return all(s[i + 1] >= (1 + self.gamma) * s[i] for i in range(1, self.radius))

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "radius": self.radius,
            "gamma": f"{self.gamma.numerator}/{self.gamma.denominator}",
            "layer_sizes": list(self.layer_sizes),
            "members": sorted(self.member_set),
        }


def _ball_from(g: Graph, center: int, radius: int, gamma: Fraction, removed: frozenset[int]) -> ExpandingBall:
    sizes, members = [], set()
    for layer in _layers_avoiding(g, center, removed):
        if len(sizes) > radius:
            break
        members |= layer
        sizes.append(len(members))
    return ExpandingBall(center, len(sizes) - 1, gamma, tuple(sizes), frozenset(members))


def _layers_avoiding(g: Graph, center: int, removed: frozenset[int]):
    frontier = frozenset([center])
    seen = {center}
    while frontier:
        yield frontier
        nxt = set()
        for x in frontier:
            for y in g.neighbors(x):
                if y not in seen and y not in removed:
                    nxt.add(y)
        seen |= nxt
        frontier = frozenset(nxt)


def check_expanding_ball(g: Graph, ball: ExpandingBall) -> bool:
    """Recompute the layers inside ``member_set`` and compare everything."""
    s = ball.member_set
    if ball.center not in s or any(not 0 <= x < g.n for x in s):
        return False
    outside = frozenset(g.vertices()) - s
    again = _ball_from(g, ball.center, ball.radius, ball.gamma, outside)
    return (
        again.radius == ball.radius
        and again.layer_sizes == tuple(ball.layer_sizes)
        and again.member_set == s
        and ball.is_expanding()
    )


# ---------------------------------------------------------------------------
# parameters


def _iroot_ceil(m: int, k: int) -> int:
    r = max(1, int(round(m ** (1 / k))))
    while r**k < m:
        r += 1
    while r > 1 and (r - 1) ** k >= m:
        r -= 1
    return r


def _iroot_floor(m: int, k: int) -> int:
    r = max(1, int(round(m ** (1 / k))))
    while r**k > m:
        r -= 1
    while (r + 1) ** k <= m:
        r += 1
    return r


def _asymptotic_fields(profile: ExpansionProfile, t: int, m: int) -> dict:
    if m < 4:
        raise ValueError("search parameters need m >= 4")
    lg = math.log2(m)
    if profile.kind is ProfileKind.DELTA:
        budget = math.ceil(lg**2)
        gamma = profile.delta / (5 * loglog2_lower(m) ** 2)
    else:
        budget = math.ceil(math.log2(profile.ambient_n) ** 2)
        gamma = profile.delta * log2_upper(m) / (5 * log2_lower(profile.ambient_n))
    return dict(
        profile=profile,
        t=t,
        degree_threshold=math.ceil(lg**4),
        ball_size_lo=_iroot_ceil(m, 5),
        ball_size_hi=_iroot_floor(m, 4),
        core_size_lo=math.ceil(lg**4),
        core_size_hi=math.floor(lg**8),
        path_budget=budget,
        gamma=gamma,
    )


@dataclass(frozen=True)
class MinorSearchParams:
    """Every threshold the hubs/balls search uses.

    :meth:`asymptotic_defaults` fills in the asymptotic formulas; tests and the
    desk-scale fallbacks override individual fields with
    :func:`dataclasses.replace`.  ``regime`` is a free-form label that
    ends up in reports.
    """

    profile: ExpansionProfile
    t: int
    degree_threshold: int
    ball_size_lo: int
    ball_size_hi: int
    core_size_lo: int
    core_size_hi: int
    path_budget: int
    gamma: Fraction
    regime: str = "asymptotic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", parse_fraction(self.gamma))
        for name in ("degree_threshold", "ball_size_lo", "ball_size_hi",
                     "core_size_lo", "core_size_hi", "path_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.ball_size_lo > self.ball_size_hi:
            raise ValueError("ball window is empty")
        if self.core_size_lo > self.core_size_hi:
            raise ValueError("core window is empty")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    @classmethod
    def asymptotic_defaults(cls, profile: ExpansionProfile, t: int, m: int) -> MinorSearchParams:
        """Asymptotic thresholds for an ``m``-vertex graph (``m >= 4``).

        Raises ``ValueError`` when a window is empty.  The ball window
        ``ceil(m**(1/5))..floor(m**(1/4))`` is empty for ``m <= 15``,
        ``33 <= m <= 80`` and ``244 <= m <= 255``.
        """
        return cls(**_asymptotic_fields(profile, t, m))

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "t", "degree_threshold", "ball_size_lo", "ball_size_hi",
            "core_size_lo", "core_size_hi", "path_budget", "regime")}
        out["gamma"] = f"{self.gamma.numerator}/{self.gamma.denominator}"
        out["profile"] = self.profile.to_dict()
        return out


# ---------------------------------------------------------------------------
# hubs or balls


@dataclass(frozen=True)
class HubsOrBalls:
    hubs: tuple[int, ...] | None = None
    balls: tuple[ExpandingBall, ...] | None = None

    def __post_init__(self) -> None:
        if (self.hubs is None) == (self.balls is None):
            raise ValueError("exactly one of hubs and balls must be set")

    @property
    def branch(self) -> str:
        return "hubs" if self.hubs is not None else "balls"

    def check(self, g: Graph, params: MinorSearchParams) -> bool:
        """Re-derive the degree, window, disjointness and expansion conditions."""
        thr = params.degree_threshold
        if self.hubs is not None:
            return (
                len(self.hubs) == params.t
                and len(set(self.hubs)) == params.t
                and all(g.degree(v) >= thr for v in self.hubs)
            )
        seen: set[int] = set()
        for b in self.balls:
            if seen & b.member_set:
                return False
            seen |= b.member_set
            if not params.ball_size_lo <= b.size <= params.ball_size_hi:
                return False
            if any(g.degree(x) > thr for x in b.member_set):
                return False
            if not check_expanding_ball(g, b):
                return False
        return len(self.balls) == params.t


def _grow_nice_ball(
    g: Graph, v: int, removed: frozenset[int], params: MinorSearchParams
) -> tuple[ExpandingBall | None, frozenset[int]]:
    """Grow from ``v``; return a ball in the window or the stalled ball to discard."""
    lo, hi, gamma = params.ball_size_lo, params.ball_size_hi, params.gamma
    sizes: list[int] = []
    members: set[int] = set()
    for k, layer in enumerate(_layers_avoiding(g, v, removed)):
        if k >= 2 and len(members) + len(layer) < (1 + gamma) * sizes[-1]:
            return None, frozenset(members)
        members |= layer
        sizes.append(len(members))
        if sizes[-1] > hi:
            return None, frozenset()
        if sizes[-1] >= lo:
            return ExpandingBall(v, k, gamma, tuple(sizes), frozenset(members)), frozenset()
    return None, frozenset(members)


def find_hubs_or_balls(g: Graph, params: MinorSearchParams, order: Sequence[int] | None = None) -> HubsOrBalls:
    """Return ``t`` high-degree hubs, or ``t`` disjoint expanding balls.

    Balls are grown in ``g`` minus the high-degree vertices and the balls
    chosen so far.  A growth that stalls before reaching the size window
    is discarded together with its vertices; one that overshoots the
    window only retires its center.  ``order`` fixes the sequence of
    centers tried (ascending ids by default).
    """
    t = params.t
    if t < 2:
        raise ValueError("t must be at least 2")
    thr = params.degree_threshold
    ranked = sorted(g.vertices(), key=lambda x: (-g.degree(x), x))
    heavy = [x for x in ranked if g.degree(x) >= thr]
    if len(heavy) >= t:
        return HubsOrBalls(hubs=tuple(heavy[:t]))
    removed = frozenset(x for x in heavy if g.degree(x) > thr)
    balls: list[ExpandingBall] = []
    stalled = 0
    discarded = 0
    for v in order if order is not None else g.vertices():
        if v in removed:
            continue
        ball, dead = _grow_nice_ball(g, v, removed, params)
        if ball is not None:
            balls.append(ball)
            removed |= ball.member_set
            if len(balls) == t:
                return HubsOrBalls(balls=tuple(balls))
        elif dead:
            stalled += 1
            discarded += len(dead)
            removed |= dead
    raise SearchFailed(
        "no further nice ball",
        {
            "balls_found": len(balls),
            "balls": [b.to_dict() for b in balls],
            "high_degree": len(heavy),
            "stalled_growths": stalled,
            "discarded_vertices": discarded,
            "removed": len(removed),
        },
    )


# ---------------------------------------------------------------------------
# assembly


def assemble_minor_hubs(g: Graph, hubs: Sequence[int], params: MinorSearchParams) -> MinorModel:
    """Topological ``K_t`` model on ``hubs`` with pairwise internally disjoint paths."""
    hubs = tuple(hubs)
    t = len(hubs)
    if len(set(hubs)) != t:
        raise ValueError("hubs must be distinct")
    used: set[int] = set()
    paths = {}
    for i, j in combinations(range(t), 2):
        forbidden = frozenset(used) | (frozenset(hubs) - {hubs[i], hubs[j]})
        if len(forbidden) > params.path_budget:
            raise SearchFailed("path budget exceeded",
                               {"pair": (i, j), "forbidden": len(forbidden), "paths": len(paths)})
        path = grow_ball_path(g, {hubs[i]}, {hubs[j]}, forbidden, params.profile)
        if path is None:
            raise SearchFailed("pair disconnected", {"pair": (i, j), "forbidden": len(forbidden),
                                                     "paths": len(paths)})
        paths[(i, j)] = path
        used.update(path[1:-1])
    model = MinorModel(t, tuple(frozenset([h]) for h in hubs), paths)
    reason = check_minor_model(g, model)
    assert reason is None, reason
    return model


def _tree_paths(g: Graph, center: int, members: frozenset[int]) -> dict[int, int | None]:
    """BFS parent pointers from ``center`` inside ``members``, smallest parent first."""
    parent: dict[int, int | None] = {center: None}
    frontier = [center]
    while frontier:
        nxt = []
        for x in frontier:
            for y in sorted(g.neighbors(x)):
                if y in members and y not in parent:
                    parent[y] = x
                    nxt.append(y)
        frontier = nxt
    return parent


def assemble_minor_balls(g: Graph, balls: Sequence[ExpandingBall], params: MinorSearchParams) -> MinorModel:
    """``K_t`` model from disjoint expanding balls.

    Each ball is trimmed to the smallest concentric core reaching
    ``core_size_lo`` vertices; cores are joined pairwise by shortest
    paths avoiding the other cores and earlier path interiors, and each
    branch set is the union of tree paths from the center to its entry
    points.
    """
    t = len(balls)
    cores = []
    for idx, b in enumerate(balls):
        if b.layer_sizes[-1] < params.core_size_lo:
            raise SearchFailed("ball too small to trim", {"ball": idx, "size": b.size,
                                                          "core_size_lo": params.core_size_lo})
        k = next(i for i, s in enumerate(b.layer_sizes) if s >= params.core_size_lo)
        if b.layer_sizes[k] > params.core_size_hi:
            raise SearchFailed("no core radius in window", {"ball": idx, "sizes": list(b.layer_sizes)})
        outside = frozenset(g.vertices()) - b.member_set
        cores.append(_ball_from(g, b.center, k, b.gamma, outside).member_set)
    for a, b in combinations(range(t), 2):
        if cores[a] & cores[b]:
            raise ValueError("balls must be disjoint")
    used: set[int] = set()
    paths = {}
    for i, j in combinations(range(t), 2):
        if len(used) > params.path_budget:
            raise SearchFailed("path budget exceeded", {"pair": (i, j), "used": len(used),
                                                        "paths": len(paths)})
        forbidden = frozenset(used).union(*(cores[x] for x in range(t) if x not in (i, j)))
        path = grow_ball_path(g, cores[i], cores[j], forbidden, params.profile)
        if path is None:
            raise SearchFailed("pair disconnected", {"pair": (i, j), "used": len(used),
                                                     "paths": len(paths)})
        paths[(i, j)] = path
        used.update(path[1:-1])
    branch = []
    for i, b in enumerate(balls):
        parent = _tree_paths(g, b.center, cores[i])
        members = {b.center}
        for (a, c), p in paths.items():
            if i not in (a, c):
                continue
            x = p[0] if a == i else p[-1]
            while x is not None and x not in members:
                members.add(x)
                x = parent[x]
        branch.append(frozenset(members))
    model = MinorModel(t, tuple(branch), paths)
    reason = check_minor_model(g, model)
    assert reason is None, reason
    return model


# ---------------------------------------------------------------------------
# top-level pipeline


@dataclass
class MinorSearchResult:
    """Outcome of :func:`find_small_minor`; the model uses the input graph's ids."""

    model: MinorModel
    regime: str
    n: int
    t: int
    epsilon: Fraction
    c_of_t: Fraction
    delta: Fraction
    expander_order: int
    trace: ExtractionTrace
    attempts: list[dict] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.model.order

    @property
    def scale(self) -> float:
        """``(c t^2 / eps) log2 n log2 log2 n``, the log-log factor floored at 1."""
        ln = math.log2(self.n)
        return float(self.c_of_t) * self.t**2 / float(self.epsilon) * ln * max(1.0, math.log2(ln))

    @property
    def normalized_order(self) -> float:
        return self.order / self.scale

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "regime": self.regime,
            "order": self.order,
            "n": self.n,
            "t": self.t,
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
            "expander_order": self.expander_order,
            "normalized_order": self.normalized_order,
            "attempts": self.attempts,
        }


def _desk_hub_sets(h: Graph, t: int, attempts: int):
    ranked = sorted(h.vertices(), key=lambda x: (-h.degree(x), x))
    pool = ranked[: min(len(ranked), t + 3)]
    return islice(combinations(pool, t), attempts)


def _search_expander(h: Graph, profile: ExpansionProfile, t: int, hub_attempts: int, log: list[dict]):
    """Try the asymptotic thresholds, then desk-scale hubs, then desk-scale balls."""
    m = h.n
    fields = _asymptotic_fields(profile, t, m)
    try:
        base = MinorSearchParams(**fields)
        hb = find_hubs_or_balls(h, base)
        if hb.hubs is not None:
            return assemble_minor_hubs(h, hb.hubs, base), "asymptotic-hubs"
        return assemble_minor_balls(h, hb.balls, base), "asymptotic-balls"
    except SearchFailed as exc:
        log.append({"regime": "asymptotic", "reason": exc.reason})
    except ValueError as exc:
        # empty window at this m: the regime does not apply
        log.append({"regime": "asymptotic", "reason": str(exc)})

    hubs_params = MinorSearchParams(**{**fields, "degree_threshold": 1, "path_budget": m,
                                       "ball_size_lo": 1, "ball_size_hi": m, "regime": "desk-hubs"})
    for k, hubs in enumerate(_desk_hub_sets(h, t, hub_attempts)):
        try:
            return assemble_minor_hubs(h, hubs, hubs_params), "desk-hubs"
        except SearchFailed as exc:
            log.append({"regime": "desk-hubs", "attempt": k, "reason": exc.reason})

    hi = max(2, math.isqrt(m))
    balls_params = replace(hubs_params, degree_threshold=h.max_degree() + 1, ball_size_lo=2, ball_size_hi=hi,
                           core_size_lo=1, core_size_hi=hi, path_budget=m, regime="desk-balls")
    try:
        hb = find_hubs_or_balls(h, balls_params)
        return assemble_minor_balls(h, hb.balls, balls_params), "desk-balls"
    except SearchFailed as exc:
        log.append({"regime": "desk-balls", "reason": exc.reason})
        raise SearchFailed("no regime produced a minor", {"attempts": log, "expander_order": m}) from None


def find_small_minor(
    g: Graph,
    t: int,
    epsilon,
    c_of_t=None,
    cfg: PipelineConfig | None = None,
    hub_attempts: int = 20,
) -> MinorSearchResult:
    """Find a small ``K_t`` minor in a graph of density at least ``c(t) + epsilon``.

    Extracts a ``(delta, n)``-expander with ``delta = epsilon / 8 c(t)``,
    then searches it (brute force when it has at most ``cfg.brute_cap``
    vertices).  Raises :class:`SearchFailed` when no regime succeeds.
    """
    cfg = cfg or PipelineConfig()
    if t < 3:
        raise ValueError("t must be at least 3")
    epsilon = parse_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if c_of_t is None:
        if t not in DEFAULT_C_OF_T:
            raise ValueError(f"no default c(t) for t={t}; pass c_of_t")
        c_of_t = DEFAULT_C_OF_T[t]
    c_of_t = parse_fraction(c_of_t)
    if g.n == 0 or average_degree(g) < c_of_t + epsilon:
        raise ValueError("density below c(t)+ε")
    delta = epsilon / (8 * c_of_t)
    profile = ExpansionProfile.delta_n_expander(delta, g.n)
    h, trace = extract_expander(g, profile, cfg)
    log: list[dict] = []
    if h.n <= cfg.brute_cap:
        local = brute_force_minor(h, t, cfg.brute_cap)
        if local is None:
            raise SearchFailed("expander has no such minor", {"expander_order": h.n})
        regime = "brute-force"
    else:
        local, regime = _search_expander(h, profile, t, hub_attempts, log)
    model = local.relabel(trace.remap)
    reason = check_minor_model(g, model)
    assert reason is None, reason
    return MinorSearchResult(model, regime, g.n, t, epsilon, c_of_t, delta, h.n, trace, log)
