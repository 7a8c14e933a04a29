"""Multi-scale vertex expansion: profiles, exact certification, violation search.

Two expansion requirements share one code path.  For an ``m``-vertex
graph and every scale ``0 <= d <= floor(log2 log2 m) - 1``, each set
``S`` with ``|S| <= m / 2**(2**d)`` must satisfy ``|N(S)| >= psi(d, m) |S|``
where

* ``ProfileKind.DELTA``:   ``psi = delta 2**d / (log2 m (log2 log2 m)**2)``
* ``ProfileKind.DELTA_N``: ``psi = delta 2**d / log2 n`` for a fixed ambient ``n``.

Every comparison uses a rational upper bound of ``psi`` (see
:mod:`minorlab._rational`), recorded alongside each violation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._rational import floor_loglog, fmt_fraction, log2_lower, loglog2_lower, parse_fraction
from .graph import Graph, connected_components, iter_ball_layers, neighborhood

__all__ = [
    "ProfileKind",
    "ExpansionProfile",
    "ExpansionViolation",
    "ExpanderCertificate",
    "ScaleRangeEmpty",
    "required_ratio",
    "scale_of_size",
    "check_expander_exact",
    "find_violation_heuristic",
    "SCHEMA",
]

SCHEMA = "minorlab/expansion-v1"
DEFAULT_EXACT_CAP = 20
DEFAULT_PROBE_CAP = 64


class ScaleRangeEmpty(ValueError):
    """The graph is too small to have any expansion scale."""

    def __init__(self, m: int) -> None:
        super().__init__(f"scale range empty (m={m})")
        self.m = m


class ProfileKind(str, enum.Enum):
    DELTA = "delta"
    DELTA_N = "delta_n"


@dataclass(frozen=True)
class ExpansionProfile:
    """Required-expansion function ``psi(d, m)``.

    ``ambient_n`` is mandatory for ``DELTA_N`` and ignored otherwise.
    Any ``delta > 0`` is accepted; :attr:`in_hypothesis` tells whether
    the density-floor accounting applies.
    """

    kind: ProfileKind
    delta: Fraction
    ambient_n: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ProfileKind(self.kind))
        object.__setattr__(self, "delta", parse_fraction(self.delta))
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.kind is ProfileKind.DELTA_N:
            if self.ambient_n is None or self.ambient_n < 4:
                raise ValueError("delta_n profile needs ambient_n >= 4")
        else:
            object.__setattr__(self, "ambient_n", None)

    @classmethod
    def delta_expander(cls, delta) -> ExpansionProfile:
        return cls(ProfileKind.DELTA, parse_fraction(delta))

    @classmethod
    def delta_n_expander(cls, delta, n: int) -> ExpansionProfile:
        return cls(ProfileKind.DELTA_N, parse_fraction(delta), n)

    @property
    def in_hypothesis(self) -> bool:
        if self.kind is ProfileKind.DELTA:
            return self.delta <= Fraction(1, 256)
        return self.delta < Fraction(1, 4)

    @property
    def floor_factor(self) -> Fraction:
        """Guaranteed fraction of the starting density kept by extraction."""
        if self.kind is ProfileKind.DELTA:
            return 1 - self.delta
        return 1 - 2 * self.delta

    def scale_cap(self, m: int) -> int:
        """Largest admissible scale for an ``m``-vertex graph, or -1."""
        if m < 2:
            return -1
        return max(floor_loglog(m) - 1, -1)

    def required_ratio(self, d: int, m: int) -> tuple[float, Fraction]:
        return required_ratio(self, d, m)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "delta": fmt_fraction(self.delta)}
        if self.ambient_n is not None:
            out["ambient_n"] = self.ambient_n
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ExpansionProfile:
        return cls(ProfileKind(data["kind"]), parse_fraction(data["delta"]), data.get("ambient_n"))


def required_ratio(profile: ExpansionProfile, d: int, m: int) -> tuple[float, Fraction]:
    """Expansion threshold at scale ``d`` for an ``m``-vertex graph.

    Returns the floating value and a rational that is at least as large.
    Raises :class:`ScaleRangeEmpty` if no scale exists for ``m`` and
    ``ValueError`` if ``d`` is outside ``0..scale_cap(m)``.
    """
    cap = profile.scale_cap(m)
    if cap < 0:
        raise ScaleRangeEmpty(m)
    if not 0 <= d <= cap:
        raise ValueError(f"scale {d} outside 0..{cap} for m={m}")
    delta = profile.delta
    if profile.kind is ProfileKind.DELTA:
        lg = math.log2(m)
        value = float(delta) * 2**d / (lg * math.log2(lg) ** 2)
        bound = delta * 2**d / (log2_lower(m) * loglog2_lower(m) ** 2)
    else:
        n = profile.ambient_n
        value = float(delta) * 2**d / math.log2(n)
        bound = delta * 2**d / log2_lower(n)
    return value, bound


def scale_of_size(profile: ExpansionProfile, m: int, size: int) -> int | None:
    """Tightest scale that applies to a set of ``size`` vertices, if any."""
    cap = profile.scale_cap(m)
    if cap < 0 or size < 1 or 2 * size > m:
        return None
    d = 0
    while d < cap and size << (1 << (d + 1)) <= m:
        d += 1
    return d


@dataclass(frozen=True)
class ExpansionViolation:
    """A set ``S`` whose neighborhood is too small at scale ``scale``."""

    witness: frozenset[int]
    scale: int
    observed_ratio: Fraction
    required_ratio_bound: Fraction
    order: int

    @property
    def size(self) -> int:
        return len(self.witness)

    @property
    def neighborhood_size(self) -> int:
        return int(self.observed_ratio * len(self.witness))

    def sort_key(self) -> tuple:
        return (self.scale, len(self.witness), tuple(sorted(self.witness)))

    def recheck(self, g: Graph, profile: ExpansionProfile) -> bool:
        """Re-derive every field from the live graph."""
        s = self.witness
        m = g.n
        if not s or m != self.order or any(not 0 <= v < m for v in s):
            return False
        cap = profile.scale_cap(m)
        if not 0 <= self.scale <= cap:
            return False
        if len(s) << (1 << self.scale) > m:
            return False
        _, bound = required_ratio(profile, self.scale, m)
        if bound != self.required_ratio_bound:
            return False
        observed = Fraction(len(neighborhood(g, s)), len(s))
        return observed == self.observed_ratio and observed < bound

    def to_dict(self, profile: ExpansionProfile | None = None) -> dict:
        out = {
            "schema": SCHEMA,
            "mode": "Violation",
            "scale": self.scale,
            "witness": sorted(self.witness),
            "observed": fmt_fraction(self.observed_ratio),
            "required_bound": fmt_fraction(self.required_ratio_bound),
            "order": self.order,
        }
        if profile is not None:
            out["kind"] = profile.kind.value
            out["delta"] = fmt_fraction(profile.delta)
            if profile.ambient_n is not None:
                out["ambient_n"] = profile.ambient_n
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ExpansionViolation:
        return cls(
            frozenset(data["witness"]),
            int(data["scale"]),
            parse_fraction(data["observed"]),
            parse_fraction(data["required_bound"]),
            int(data["order"]),
        )


@dataclass(frozen=True)
class ExpanderCertificate:
    """No violation was found: exhaustively (``Exact``) or by probing."""

    mode: str  # "Exact" | "HeuristicNoViolationFound"
    profile: ExpansionProfile
    order: int
    scales_checked: tuple[int, ...]
    count: int
    vacuous: bool = False

    @property
    def exact(self) -> bool:
        return self.mode == "Exact"

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "mode": self.mode,
            **self.profile.to_dict(),
            "order": self.order,
            "scales_checked": list(self.scales_checked),
            "count": self.count,
            "vacuous": self.vacuous,
        }


def _make_violation(g: Graph, profile: ExpansionProfile, s: frozenset[int], d: int) -> ExpansionViolation:
    _, bound = required_ratio(profile, d, g.n)
    observed = Fraction(len(neighborhood(g, s)), len(s))
    return ExpansionViolation(s, d, observed, bound, g.n)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def check_expander_exact(
    g: Graph, profile: ExpansionProfile, exact_cap: int = DEFAULT_EXACT_CAP
) -> ExpanderCertificate | ExpansionViolation:
    """Decide expansion by enumerating every set of at most ``m/2`` vertices.

    The violation returned is the first under the order
    (scale ascending, size ascending, sorted members lexicographic).
    """
    m = g.n
    cap = profile.scale_cap(m)
    if cap < 0:
        raise ScaleRangeEmpty(m)
    if m > exact_cap:
        raise ValueError(f"graph has {m} > {exact_cap} vertices: use heuristic finder")

    full = (1 << m) - 1
    subsets = np.arange(1 << m, dtype=np.int64)
    union = np.zeros(1 << m, dtype=np.int64)
    for b, nb in enumerate(g.masks):
        lo, hi = 1 << b, 1 << (b + 1)
        union[lo:hi] = union[:lo] | nb
    nsize = _popcount(union & ~subsets & full)
    ssize = _popcount(subsets)

    bounds = [required_ratio(profile, d, m)[1] for d in range(cap + 1)]
    # scale of each size: sizes in (m / 2**2**(d+1), m / 2**2**d] map to d
    scale_by_size = np.full(m + 1, -1, dtype=np.int64)
    for s in range(1, m // 2 + 1):
        scale_by_size[s] = scale_of_size(profile, m, s)
    scale = scale_by_size[ssize]
    checked = int(np.count_nonzero(scale >= 0))

    for d, bound in enumerate(bounds):
        sel = scale == d
        num, den = bound.numerator, bound.denominator
        if den * m < 2**62 and num * m < 2**62:
            bad = sel & (nsize * den < ssize * num)
            idx = np.flatnonzero(bad)
        else:
            idx = [i for i in np.flatnonzero(sel) if int(nsize[i]) * den < int(ssize[i]) * num]
        if len(idx) == 0:
            continue
        idx = np.asarray(idx, dtype=np.int64)
        sizes = ssize[idx]
        idx = idx[sizes == sizes.min()]
        # same size: lexicographically first member tuple == largest bit-reversed mask
        rev = np.zeros(len(idx), dtype=np.int64)
        for v in range(m):
            rev |= ((idx >> v) & 1) << (m - 1 - v)
        best = int(idx[int(np.argmax(rev))])
        s = frozenset(v for v in range(m) if best >> v & 1)
        viol = _make_violation(g, profile, s, d)
        assert viol.recheck(g, profile)
        return viol
    return ExpanderCertificate("Exact", profile, m, tuple(range(cap + 1)), checked)


def find_violation_heuristic(
    g: Graph,
    profile: ExpansionProfile,
    probe_cap: int = DEFAULT_PROBE_CAP,
    seed: int = 0,
) -> ExpansionViolation | None:
    """Look for a genuine violation without exhaustive search.

    Small components are tried first (they have empty neighborhood).
    Then balls are grown from every vertex, or from ``probe_cap``
    sampled vertices on larger graphs, and the first ball whose next
    layer is too thin at its own scale is returned.  ``None`` does not
    prove expansion.
    """
    m = g.n
    if profile.scale_cap(m) < 0:
        return None
    comps = connected_components(g)
    if len(comps) > 1:
        for c in comps:
            d = scale_of_size(profile, m, len(c))
            if d is not None:
                viol = _make_violation(g, profile, c, d)
                if viol.observed_ratio < viol.required_ratio_bound:
                    return viol

    if m <= probe_cap:
        starts = list(range(m))
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        starts = sorted(int(v) for v in rng.choice(m, size=probe_cap, replace=False))
    bounds = {}
    for v in starts:
        members: set[int] = set()
        layers = iter_ball_layers(g, [v])
        layer = next(layers)
        while layer:
            members |= layer
            d = scale_of_size(profile, m, len(members))
            if d is None:
                break
            if d not in bounds:
                bounds[d] = required_ratio(profile, d, m)[1]
            layer = next(layers, frozenset())
            thin = len(layer)
            if thin * bounds[d].denominator < bounds[d].numerator * len(members):
                viol = ExpansionViolation(
                    frozenset(members), d, Fraction(thin, len(members)), bounds[d], m
                )
                assert viol.recheck(g, profile)
                return viol
    return None
