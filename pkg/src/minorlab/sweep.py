"""Size sweeps: generate, extract, search, and tabulate.

The CSV is deterministic for a fixed configuration.  Wall-clock times
are only filled in when ``timings`` is on, since they would otherwise
break byte-for-byte reproducibility.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ._rational import fmt_fraction, parse_fraction
from .extraction import Case, PipelineConfig
from .generators import GenSpec, GraphModel, gen, girth, sub_seed
from .graph import average_degree
from .minors import SearchFailed, find_small_minor

__all__ = ["SweepConfig", "SweepReport", "experiment_sweep", "powers_of_two", "COLUMNS"]

COLUMNS = [
    "row", "n", "trial", "seed", "attempt", "edges", "density",
    "expander_order", "expander_density", "steps", "case1", "case2", "fallback", "outcome",
    "success", "regime", "order", "girth", "order_per_log2n", "order_per_log2n_loglog2n",
    "mean_order_per_log2n", "mean_order_per_log2n_loglog2n", "elapsed_ms", "note",
]


def powers_of_two(lo: int, hi: int) -> list[int]:
    """``[2**lo, ..., 2**hi]``."""
    return [2**k for k in range(lo, hi + 1)]


@dataclass(frozen=True)
class SweepConfig:
    """One sweep.  ``param="auto"`` with HighGirth means girth ``ceil(log2(n)/2)``."""

    ns: tuple[int, ...]
    model: GraphModel = GraphModel.GNP
    param: Fraction | str = Fraction(8)
    c: Fraction = Fraction(3)
    t: int = 4
    epsilon: Fraction = Fraction(1)
    c_of_t: Fraction = Fraction(2)
    trials: int = 5
    seed: int = 0
    condition_density: bool = True
    max_attempts: int = 100
    timings: bool = False
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    def __post_init__(self) -> None:
        object.__setattr__(self, "ns", tuple(self.ns))
        object.__setattr__(self, "model", GraphModel(self.model))
        if self.param != "auto":
            object.__setattr__(self, "param", parse_fraction(self.param))
        elif self.model is not GraphModel.HIGH_GIRTH:
            raise ValueError("param='auto' only applies to HighGirth")
        for name in ("c", "epsilon", "c_of_t"):
            object.__setattr__(self, name, parse_fraction(getattr(self, name)))
        if self.trials < 1 or not self.ns:
            raise ValueError("need at least one size and one trial")

    def param_for(self, n: int) -> Fraction:
        if self.param == "auto":
            return Fraction(math.ceil(math.log2(n) / 2))
        return self.param


def _ratio(order: int, n: int) -> tuple[float, float]:
    ln = math.log2(n)
    return order / ln, order / (ln * max(1.0, math.log2(ln)))


def _fmt(x: float) -> str:
    return f"{x:.6f}"


@dataclass
class SweepReport:
    config: SweepConfig
    rows: list[dict]
    aggregates: list[dict]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.rows + self.aggregates:
            w.writerow({k: r.get(k, "") for k in COLUMNS})
        return buf.getvalue()


def _trial(cfg: SweepConfig, n: int, trial: int) -> dict:
    threshold = cfg.c_of_t + cfg.epsilon
    param = cfg.param_for(n)
    for attempt in range(cfg.max_attempts):
        seed = sub_seed(cfg.seed, n, trial, attempt) if cfg.model is not GraphModel.DISJOINT_CLIQUES else cfg.seed
        g = gen(GenSpec(cfg.model, n, param, seed, cfg.c))
        if not cfg.condition_density or average_degree(g) >= threshold:
            break
    row = {
        "row": "trial", "n": n, "trial": trial, "seed": seed, "attempt": attempt,
        "edges": g.edge_count, "density": fmt_fraction(average_degree(g)),
    }
    if cfg.model is GraphModel.HIGH_GIRTH:
        row["girth"] = girth(g)
    start = time.perf_counter()
    try:
        res = find_small_minor(g, cfg.t, cfg.epsilon, cfg.c_of_t, cfg.pipeline)
    except ValueError as exc:
        row.update(success=0, note=str(exc))
    except SearchFailed as exc:
        row.update(success=0, note=exc.reason)
    else:
        counts = res.trace.counts()
        a, b = _ratio(res.order, n)
        row.update(
            expander_order=res.expander_order,
            expander_density=fmt_fraction(res.trace.final_density),
            steps=len(res.trace.steps),
            case1=counts.get(Case.CASE1.value, 0),
            case2=counts.get(Case.CASE2.value, 0),
            fallback=counts.get(Case.FALLBACK.value, 0),
            outcome=res.trace.outcome.value,
            success=1,
            regime=res.regime,
            order=res.order,
            order_per_log2n=_fmt(a),
            order_per_log2n_loglog2n=_fmt(b),
        )
        if cfg.model is GraphModel.HIGH_GIRTH and cfg.t == 3:
            # every K_3 model contains a cycle
            assert res.order >= row["girth"], "K_3 model shorter than the girth"
    if cfg.timings:
        row["elapsed_ms"] = _fmt(1000 * (time.perf_counter() - start))
    return row


def experiment_sweep(cfg: SweepConfig) -> SweepReport:
    """Run every ``(n, trial)`` of ``cfg`` and aggregate per ``n``."""
    rows, aggregates = [], []
    for n in cfg.ns:
        batch = [_trial(cfg, n, k) for k in range(cfg.trials)]
        rows.extend(batch)
        ok = [r for r in batch if r["success"] == 1]
        agg = {"row": "aggregate", "n": n, "trial": cfg.trials, "success": len(ok)}
        if ok:
            ratios = [_ratio(r["order"], n) for r in ok]
            agg.update(
                order=max(r["order"] for r in ok),
                order_per_log2n=_fmt(max(a for a, _ in ratios)),
                order_per_log2n_loglog2n=_fmt(max(b for _, b in ratios)),
                mean_order_per_log2n=_fmt(sum(a for a, _ in ratios) / len(ok)),
                mean_order_per_log2n_loglog2n=_fmt(sum(b for _, b in ratios) / len(ok)),
            )
        aggregates.append(agg)
    return SweepReport(cfg, rows, aggregates)
