"""Branch-set-and-paths certificates for clique minors."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

__all__ = ["MinorModel", "pair_key"]


def pair_key(i: int, j: int) -> str:
    return f"{i}-{j}"


@dataclass(frozen=True, eq=True)
class MinorModel:
    """A ``K_t`` minor: ``t`` branch sets and one path per pair of them.

    ``paths[(i, j)]`` (``i < j``, 0-based) is a vertex sequence starting
    in ``branch_sets[i]`` and ending in ``branch_sets[j]``.  A single edge
    between adjacent branch sets is a two-vertex path.
    """

    t: int
    branch_sets: tuple[frozenset[int], ...]
    paths: Mapping[tuple[int, int], tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "branch_sets", tuple(frozenset(b) for b in self.branch_sets))
        object.__setattr__(self, "paths", {tuple(k): tuple(p) for k, p in self.paths.items()})

    __hash__ = None  # type: ignore[assignment]

    @property
    def vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for b in self.branch_sets:
            out |= b
        for p in self.paths.values():
            out.update(p)
        return frozenset(out)

    @property
    def order(self) -> int:
        """Total number of distinct vertices used."""
        return len(self.vertices)

    @property
    def is_topological(self) -> bool:
        return all(len(b) == 1 for b in self.branch_sets)

    def relabel(self, remap: Sequence[int]) -> MinorModel:
        """Map vertex ids through ``remap`` (e.g. a subgraph's remap table)."""
        return MinorModel(
            self.t,
            tuple(frozenset(remap[v] for v in b) for b in self.branch_sets),
            {k: tuple(remap[v] for v in p) for k, p in self.paths.items()},
        )

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "branch_sets": [sorted(b) for b in self.branch_sets],
            "paths": {pair_key(i, j): list(p) for (i, j), p in sorted(self.paths.items())},
            "order": self.order,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> MinorModel:
        paths = {}
        for key, p in d["paths"].items():
            i, j = (int(x) for x in key.split("-"))
            paths[(i, j)] = tuple(p)
        model = cls(int(d["t"]), tuple(frozenset(b) for b in d["branch_sets"]), paths)
        if "order" in d and int(d["order"]) != model.order:
            raise ValueError("declared order does not match the model")
        return model

    @classmethod
    def from_json(cls, text: str) -> MinorModel:
        return cls.from_dict(json.loads(text))
