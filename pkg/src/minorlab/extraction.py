"""Density-preserving extraction of an expander subgraph.

Starting from ``G``, repeatedly find a set ``S`` with ``|N(S)| < gamma |S|``
and either drop ``S`` (if the rest is at least as dense) or restrict to
``S + N(S)``, which keeps density ``>= (1 - gamma)`` times the current one.
The process stops at an expander or at a small graph, and every step is
logged so that :func:`verify_extraction_trace` can replay it exactly.
"""

from __future__ import annotations

import enum
import io
import json
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from ._rational import ceil_loglog, fmt_fraction, parse_fraction
from .expansion import (
    DEFAULT_EXACT_CAP,
    DEFAULT_PROBE_CAP,
    ExpanderCertificate,
    ExpansionProfile,
    ExpansionViolation,
    ProfileKind,
    check_expander_exact,
    find_violation_heuristic,
)
from .graph import Graph, average_degree, densest_component, induced_subgraph, neighborhood

__all__ = [
    "Case",
    "Outcome",
    "PipelineConfig",
    "ExtractionStep",
    "ExtractionTrace",
    "StaleViolation",
    "split_on_violation",
    "extract_expander",
    "verify_extraction_trace",
    "default_finder",
]

TRACE_SCHEMA = "minorlab/extraction-trace-v1"
_MAGIC = b"MLXT\x01"

Finder = Callable[[Graph, ExpansionProfile], "ExpansionViolation | ExpanderCertificate | None"]


class StaleViolation(ValueError):
    def __init__(self) -> None:
        super().__init__("stale violation")


class Case(str, enum.Enum):
    CASE1 = "Case1Removal"
    CASE2 = "Case2Restriction"
    FALLBACK = "Fallback"


class Outcome(str, enum.Enum):
    EXPANDER_CERTIFIED = "ExpanderCertified"
    NO_VIOLATION_FOUND = "HeuristicNoViolationFound"
    SMALL_GRAPH_STOP = "SmallGraphStop"
    COMPONENT_FALLBACK = "ComponentFallback"


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for extraction and the minor pipeline.

    ``m0``, ``n0`` and ``n1`` stand in for the asymptotic size thresholds;
    they only decide which branch of :func:`minorlab.minors.find_small_minor`
    runs and default to desk-scale values.
    """

    exact_cap: int = DEFAULT_EXACT_CAP
    probe_cap: int = DEFAULT_PROBE_CAP
    stop_order_delta: int = 256
    stop_order_delta_n: int = 4
    rng_seed: int = 0
    brute_cap: int = 12
    m0: int = 12
    n0: int = 16
    n1: int = 16

    def stop_order(self, profile: ExpansionProfile) -> int:
        if profile.kind is ProfileKind.DELTA:
            return self.stop_order_delta
        return self.stop_order_delta_n

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ExtractionStep:
    """One iteration; ``witness`` holds original vertex ids."""

    iteration: int
    order: int
    density_before: Fraction
    witness: tuple[int, ...]
    scale: int
    observed_ratio: Fraction
    gamma: Fraction
    case: Case
    order_after: int
    density_after: Fraction

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "order": self.order,
            "density_before": fmt_fraction(self.density_before),
            "witness": list(self.witness),
            "scale": self.scale,
            "observed": fmt_fraction(self.observed_ratio),
            "gamma": fmt_fraction(self.gamma),
            "case": self.case.value,
            "order_after": self.order_after,
            "density_after": fmt_fraction(self.density_after),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ExtractionStep:
        return cls(
            int(d["iteration"]),
            int(d["order"]),
            parse_fraction(d["density_before"]),
            tuple(d["witness"]),
            int(d["scale"]),
            parse_fraction(d["observed"]),
            parse_fraction(d["gamma"]),
            Case(d["case"]),
            int(d["order_after"]),
            parse_fraction(d["density_after"]),
        )


def interval_tallies(steps) -> dict[int, dict[int, int]]:
    """Count restriction steps per (size interval ``k``, scale ``d``).

    A graph of order ``m`` belongs to interval ``k = ceil(log2 log2 m)``,
    i.e. ``2**2**(k-1) < m <= 2**2**k``.
    """
    out: dict[int, dict[int, int]] = {}
    for s in steps:
        if s.case is Case.CASE2:
            row = out.setdefault(ceil_loglog(s.order), {})
            row[s.scale] = row.get(s.scale, 0) + 1
    return {k: dict(sorted(v.items())) for k, v in sorted(out.items())}


@dataclass
class ExtractionTrace:
    """Replayable log of one extraction run."""

    n: int
    edge_count: int
    density: Fraction
    profile: ExpansionProfile
    config: PipelineConfig
    steps: list[ExtractionStep] = field(default_factory=list)
    outcome: Outcome | None = None
    final_vertices: tuple[int, ...] = ()
    final_density: Fraction | None = None
    tallies: dict[int, dict[int, int]] = field(default_factory=dict)
    finder: str = "default"
    final_probe_seed: int = 0

    @property
    def in_hypothesis(self) -> bool:
        """Whether the interval tallies and the density floor must hold."""
        if not self.profile.in_hypothesis:
            return False
        if self.profile.kind is ProfileKind.DELTA:
            return self.config.stop_order_delta >= 256
        return True

    @property
    def remap(self) -> tuple[int, ...]:
        return self.final_vertices

    def counts(self) -> dict[str, int]:
        out = {c.value: 0 for c in Case}
        for s in self.steps:
            out[s.case.value] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "schema": TRACE_SCHEMA,
            "input": {"n": self.n, "edges": self.edge_count, "density": fmt_fraction(self.density)},
            "profile": self.profile.to_dict(),
            "in_hypothesis": self.in_hypothesis,
            "config": self.config.to_dict(),
            "finder": self.finder,
            "final_probe_seed": self.final_probe_seed,
            "steps": [s.to_dict() for s in self.steps],
            "outcome": self.outcome.value if self.outcome else None,
            "final_vertices": list(self.final_vertices),
            "final_density": fmt_fraction(self.final_density) if self.final_density is not None else None,
            "tallies": {str(k): {str(d): a for d, a in v.items()} for k, v in self.tallies.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> ExtractionTrace:
        if d.get("schema") != TRACE_SCHEMA:
            raise ValueError(f"unknown trace schema {d.get('schema')!r}")
        inp = d["input"]
        return cls(
            n=int(inp["n"]),
            edge_count=int(inp["edges"]),
            density=parse_fraction(inp["density"]),
            profile=ExpansionProfile.from_dict(d["profile"]),
            config=PipelineConfig(**d["config"]),
            steps=[ExtractionStep.from_dict(s) for s in d["steps"]],
            outcome=Outcome(d["outcome"]) if d["outcome"] else None,
            final_vertices=tuple(d["final_vertices"]),
            final_density=parse_fraction(d["final_density"]) if d["final_density"] else None,
            tallies={int(k): {int(dd): int(a) for dd, a in v.items()} for k, v in d["tallies"].items()},
            finder=d.get("finder", "default"),
            final_probe_seed=int(d.get("final_probe_seed", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> ExtractionTrace:
        return cls.from_dict(json.loads(text))

    def to_bytes(self) -> bytes:
        """Compact binary log: LEB128 varints, sorted id lists delta-coded."""
        w = _Writer()
        w.raw(_MAGIC)
        w.uint(self.n)
        w.uint(self.edge_count)
        w.frac(self.density)
        w.uint(0 if self.profile.kind is ProfileKind.DELTA else 1)
        w.frac(self.profile.delta)
        w.uint(self.profile.ambient_n or 0)
        cfg = self.config
        for name in _CONFIG_FIELDS:
            w.uint(getattr(cfg, name))
        w.text(self.finder)
        w.uint(self.final_probe_seed)
        w.uint(len(self.steps))
        for s in self.steps:
            w.uint(s.iteration)
            w.uint(s.order)
            w.frac(s.density_before)
            w.ids(s.witness)
            w.uint(s.scale)
            w.frac(s.observed_ratio)
            w.frac(s.gamma)
            w.uint(_CASES.index(s.case))
            w.uint(s.order_after)
            w.frac(s.density_after)
        w.uint(_OUTCOMES.index(self.outcome) + 1 if self.outcome else 0)
        w.ids(self.final_vertices)
        w.frac(self.final_density if self.final_density is not None else Fraction(0))
        flat = [(k, d, a) for k, row in self.tallies.items() for d, a in row.items()]
        w.uint(len(flat))
        for k, d, a in flat:
            w.uint(k)
            w.uint(d)
            w.uint(a)
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> ExtractionTrace:
        r = _Reader(data)
        if r.raw(len(_MAGIC)) != _MAGIC:
            raise ValueError("not a minorlab trace log")
        n, e, dens = r.uint(), r.uint(), r.frac()
        kind = ProfileKind.DELTA if r.uint() == 0 else ProfileKind.DELTA_N
        delta = r.frac()
        amb = r.uint() or None
        profile = ExpansionProfile(kind, delta, amb)
        config = PipelineConfig(**{name: r.uint() for name in _CONFIG_FIELDS})
        finder = r.text()
        seed = r.uint()
        steps = []
        for _ in range(r.uint()):
            steps.append(
                ExtractionStep(
                    iteration=r.uint(),
                    order=r.uint(),
                    density_before=r.frac(),
                    witness=r.ids(),
                    scale=r.uint(),
                    observed_ratio=r.frac(),
                    gamma=r.frac(),
                    case=_CASES[r.uint()],
                    order_after=r.uint(),
                    density_after=r.frac(),
                )
            )
        o = r.uint()
        outcome = _OUTCOMES[o - 1] if o else None
        final_vertices = r.ids()
        final_density = r.frac()
        tallies: dict[int, dict[int, int]] = {}
        for _ in range(r.uint()):
            k, d, a = r.uint(), r.uint(), r.uint()
            tallies.setdefault(k, {})[d] = a
        return cls(n, e, dens, profile, config, steps, outcome, final_vertices,
                   final_density if outcome else None, tallies, finder, seed)


_CASES = list(Case)
_OUTCOMES = list(Outcome)
_CONFIG_FIELDS = ("exact_cap", "probe_cap", "stop_order_delta", "stop_order_delta_n",
                  "rng_seed", "brute_cap", "m0", "n0", "n1")


class _Writer:
    def __init__(self) -> None:
        self._buf = io.BytesIO()

    def raw(self, b: bytes) -> None:
        self._buf.write(b)

    def uint(self, x: int) -> None:
        if x < 0:
            raise ValueError("negative value in unsigned field")
        while True:
            byte = x & 0x7F
            x >>= 7
            if x:
                self._buf.write(bytes((byte | 0x80,)))
            else:
                self._buf.write(bytes((byte,)))
                return

    def sint(self, x: int) -> None:
        self.uint(2 * x if x >= 0 else -2 * x - 1)

    def frac(self, f: Fraction) -> None:
        self.sint(f.numerator)
        self.uint(f.denominator)

    def ids(self, ids) -> None:
        ids = sorted(ids)
        self.uint(len(ids))
        prev = 0
        for v in ids:
            self.uint(v - prev)
            prev = v

    def text(self, s: str) -> None:
        b = s.encode()
        self.uint(len(b))
        self.raw(b)

    def getvalue(self) -> bytes:
        return self._buf.getvalue()


class _Reader:
    def __init__(self, data: bytes) -> None:
        self._data = data
        self._pos = 0

    def raw(self, k: int) -> bytes:
        out = self._data[self._pos : self._pos + k]
        if len(out) != k:
            raise ValueError("truncated trace log")
        self._pos += k
        return out

    def uint(self) -> int:
        x = shift = 0
        while True:
            if self._pos >= len(self._data):
                raise ValueError("truncated trace log")
            byte = self._data[self._pos]
            self._pos += 1
            x |= (byte & 0x7F) << shift
            shift += 7
            if not byte & 0x80:
                return x

    def sint(self) -> int:
        z = self.uint()
        return z // 2 if z % 2 == 0 else -(z + 1) // 2

    def frac(self) -> Fraction:
        return Fraction(self.sint(), self.uint())

    def ids(self) -> tuple[int, ...]:
        out, prev = [], 0
        for _ in range(self.uint()):
            prev += self.uint()
            out.append(prev)
        return tuple(out)

    def text(self) -> str:
        return self.raw(self.uint()).decode()


def _edges_within(g: Graph, s: frozenset[int]) -> int:
    return sum(len(g.neighbors(v) & s) for v in s) // 2


def split_on_violation(
    g: Graph, violation: ExpansionViolation, profile: ExpansionProfile
) -> tuple[Graph, tuple[int, ...], Case]:
    """Apply one step of the removal/restriction dichotomy.

    Returns the next graph, its remap into ``g`` and the case taken.
    Removal is preferred whenever it does not lower the density.
    """
    if not violation.recheck(g, profile):
        raise StaleViolation()
    c = average_degree(g)
    s = violation.witness
    everything = frozenset(g.vertices())
    rest = everything - s
    if Fraction(_edges_within(g, rest), len(rest)) >= c:
        sub, remap = induced_subgraph(g, rest)
        return sub, remap, Case.CASE1
    closed = s | neighborhood(g, s)
    if closed == everything:
        # only reachable when gamma > 1: S + N(S) would not shrink the graph
        v = min(g.vertices(), key=lambda x: (g.degree(x), x))
        sub, remap = induced_subgraph(g, everything - {v})
        return sub, remap, Case.FALLBACK
    sub, remap = induced_subgraph(g, closed)
    gamma = violation.required_ratio_bound
    assert average_degree(sub) >= (1 - gamma) * c, "removal/restriction dichotomy failed"
    return sub, remap, Case.CASE2


def default_finder(cfg: PipelineConfig, iteration: int = 0) -> Finder:
    """Exact search up to ``cfg.exact_cap`` vertices, ball probing beyond."""

    def find(g: Graph, profile: ExpansionProfile):
        if g.n <= cfg.exact_cap:
            return check_expander_exact(g, profile, cfg.exact_cap)
        return find_violation_heuristic(g, profile, cfg.probe_cap, cfg.rng_seed + iteration)

    return find


def extract_expander(
    g: Graph,
    profile: ExpansionProfile,
    cfg: PipelineConfig | None = None,
    finder: Finder | None = None,
) -> tuple[Graph, ExtractionTrace]:
    """Run the extraction process on ``g``.

    ``finder`` may be replaced (e.g. by an adversarial chooser); it must
    return a genuine violation, a certificate, or ``None``.
    """
    cfg = cfg or PipelineConfig()
    if g.n == 0:
        raise ValueError("empty graph")
    c = average_degree(g)
    trace = ExtractionTrace(g.n, g.edge_count, c, profile, cfg,
                            finder="default" if finder is None else "custom")
    cur, remap = g, tuple(g.vertices())
    stop = cfg.stop_order(profile)
    iteration = 0
    while True:
        m = cur.n
        if m <= stop or profile.scale_cap(m) < 0:
            trace.outcome = Outcome.SMALL_GRAPH_STOP if m <= stop else Outcome.COMPONENT_FALLBACK
            cur, sub = densest_component(cur)
            remap = tuple(remap[i] for i in sub)
            break
        find = finder or default_finder(cfg, iteration)
        trace.final_probe_seed = cfg.rng_seed + iteration
        res = find(cur, profile)
        if not isinstance(res, ExpansionViolation):
            exact = isinstance(res, ExpanderCertificate) and res.exact
            trace.outcome = Outcome.EXPANDER_CERTIFIED if exact else Outcome.NO_VIOLATION_FOUND
            break
        before = average_degree(cur)
        nxt, sub, case = split_on_violation(cur, res, profile)
        trace.steps.append(
            ExtractionStep(
                iteration=iteration,
                order=m,
                density_before=before,
                witness=tuple(sorted(remap[i] for i in res.witness)),
                scale=res.scale,
                observed_ratio=res.observed_ratio,
                gamma=res.required_ratio_bound,
                case=case,
                order_after=nxt.n,
                density_after=average_degree(nxt),
            )
        )
        cur, remap = nxt, tuple(remap[i] for i in sub)
        iteration += 1
    trace.final_vertices = remap
    trace.final_density = average_degree(cur)
    trace.tallies = interval_tallies(trace.steps)
    return cur, trace


class _Mismatch(Exception):
    pass


def _require(cond: bool) -> None:
    if not cond:
        raise _Mismatch


def verify_extraction_trace(original: Graph, trace: ExtractionTrace) -> bool:
    """Replay ``trace`` on ``original`` and re-check all arithmetic exactly.

    Checks each violation, each case inequality, the interval tallies,
    the final graph and the telescoped density floor.  Raises
    ``ValueError`` if a witness refers to a vertex that is no longer
    present (malformed remap chain).
    """
    try:
        _replay(original, trace)
    except _Mismatch:
        return False
    return True


def _replay(original: Graph, trace: ExtractionTrace) -> None:
    profile = trace.profile
    _require(original.n == trace.n and original.edge_count == trace.edge_count)
    c = Fraction(original.edge_count, original.n)
    _require(c == trace.density)
    alive = frozenset(original.vertices())
    fallback_factor = Fraction(1)

    def dens(s: frozenset[int]) -> Fraction:
        return Fraction(_edges_within(original, s), len(s))

    for i, step in enumerate(trace.steps):
        m = len(alive)
        d_before = dens(alive)
        _require(step.iteration == i and step.order == m and step.density_before == d_before)
        s = frozenset(step.witness)
        if not s or not s <= alive:
            raise ValueError(f"step {i}: witness outside the current graph (malformed remap chain)")
        nb = frozenset(w for v in s for w in original.neighbors(v) if w in alive) - s
        _require(0 <= step.scale <= profile.scale_cap(m))
        _require(len(s) * 2 ** (2**step.scale) <= m)
        _require(step.gamma == profile.required_ratio(step.scale, m)[1])
        _require(step.observed_ratio == Fraction(len(nb), len(s)))
        _require(len(nb) < step.gamma * len(s))
        rest = alive - s
        d_rest = dens(rest)
        if step.case is Case.CASE1:
            _require(d_rest >= d_before)
            nxt = rest
        elif step.case is Case.CASE2:
            _require(d_rest < d_before)
            nxt = s | nb
            _require(nxt != alive)
            _require(dens(nxt) >= (1 - step.gamma) * d_before)
        else:
            _require(d_rest < d_before and s | nb == alive)
            v = min(alive, key=lambda x: (len(original.neighbors(x) & alive), x))
            nxt = alive - {v}
            fallback_factor *= dens(nxt) / d_before if d_before else Fraction(1)
        d_after = dens(nxt)
        _require(step.order_after == len(nxt) and step.density_after == d_after)
        if step.case is Case.CASE1:
            _require(d_after >= d_before)
        alive = nxt

    tallies = interval_tallies(trace.steps)
    _require(tallies == trace.tallies)
    if trace.in_hypothesis:
        for k, row in tallies.items():
            _require(sum(a * 2**d for d, a in row.items()) <= 2**k)

    cur, remap = induced_subgraph(original, alive)
    stop = trace.config.stop_order(profile)
    if trace.outcome in (Outcome.SMALL_GRAPH_STOP, Outcome.COMPONENT_FALLBACK):
        if trace.outcome is Outcome.SMALL_GRAPH_STOP:
            _require(len(alive) <= stop)
        else:
            _require(len(alive) > stop and profile.scale_cap(len(alive)) < 0)
        cur, sub = densest_component(cur)
        remap = tuple(remap[i] for i in sub)
    elif trace.outcome in (Outcome.EXPANDER_CERTIFIED, Outcome.NO_VIOLATION_FOUND):
        _require(len(alive) > stop)
        cfg = trace.config
        if cur.n <= cfg.exact_cap:
            _require(isinstance(check_expander_exact(cur, profile, cfg.exact_cap), ExpanderCertificate))
        else:
            _require(trace.outcome is Outcome.NO_VIOLATION_FOUND)
            if trace.finder == "default":
                _require(find_violation_heuristic(cur, profile, cfg.probe_cap, trace.final_probe_seed) is None)
    else:
        raise _Mismatch
    _require(tuple(remap) == tuple(trace.final_vertices))
    final = average_degree(cur)
    _require(final == trace.final_density)
    if trace.in_hypothesis:
        _require(final >= profile.floor_factor * c * fallback_factor)
