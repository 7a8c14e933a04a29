"""Seeded random graph models and a few named graphs.

All randomness comes from numpy's ``PCG64`` bit generator seeded with
the spec's 64-bit seed, so a ``GenSpec`` determines its graph on every
platform.
"""

from __future__ import annotations

import enum
import hashlib
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._rational import fmt_fraction, parse_fraction
from .graph import Graph

__all__ = [
    "GraphModel",
    "GenSpec",
    "gen",
    "girth",
    "sub_seed",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "petersen_graph",
    "barbell_graph",
    "octahedron_graph",
    "disjoint_union",
]


class GraphModel(str, enum.Enum):
    GNP = "Gnp"
    HIGH_GIRTH = "HighGirth"
    DISJOINT_CLIQUES = "DisjointCliques"
    RANDOM_REGULAR = "RandomRegular"


@dataclass(frozen=True)
class GenSpec:
    """What to generate.

    ``param`` means: the numerator ``c`` of ``p = c/n`` for ``Gnp``; the
    girth for ``HighGirth`` (whose base ``G(n, c/n)`` uses ``c``); the
    clique order for ``DisjointCliques``; the degree for ``RandomRegular``.
    """

    model: GraphModel
    n: int
    param: Fraction
    seed: int = 0
    c: Fraction = Fraction(3)

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", GraphModel(self.model))
        object.__setattr__(self, "param", parse_fraction(self.param))
        object.__setattr__(self, "c", parse_fraction(self.c))
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.param <= 0 or self.c <= 0:
            raise ValueError("parameters must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        out = {"model": self.model.value, "n": self.n, "param": fmt_fraction(self.param), "seed": self.seed}
        if self.model is GraphModel.HIGH_GIRTH:
            out["c"] = fmt_fraction(self.c)
        return out


def sub_seed(seed: int, *parts: int) -> int:
    """Stable 64-bit seed for a sub-task: ``seed`` xor a hash of ``parts``."""
    h = hashlib.blake2b(",".join(map(str, parts)).encode(), digest_size=8).digest()
    return seed ^ int.from_bytes(h, "little")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _gnp_edges(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    pairs = n * (n - 1) // 2
    if pairs == 0 or p <= 0:
        return []
    p = min(p, 1.0)
    count = int(rng.binomial(pairs, p))
    idx = np.sort(rng.choice(pairs, size=count, replace=False))
    # row u starts at offset u*(2n-u-1)/2 in the row-major upper triangle
    u_all = np.arange(n, dtype=np.int64)
    offsets = u_all * (2 * n - u_all - 1) // 2
    u = np.searchsorted(offsets, idx, side="right") - 1
    v = idx - offsets[u] + u + 1
    return list(zip(u.tolist(), v.tolist()))


def _short_cycle_through(adj: list[set[int]], u: int, v: int, limit: int) -> bool:
    """Is there a ``u``-``v`` path of length ``<= limit`` avoiding the edge ``uv``?"""
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if dist[x] == limit:
            continue
        for y in adj[x]:
            if y in dist or (x == u and y == v):
                continue
            if y == v:
                return True
            dist[y] = dist[x] + 1
            queue.append(y)
    return False


def _remove_short_cycles(n: int, edges: list[tuple[int, int]], g: int) -> list[tuple[int, int]]:
    # One lexicographic pass suffices: the last edge examined on any
    # surviving short cycle would have been deleted.
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    for a, b in sorted(edges):
        if _short_cycle_through(adj, a, b, g - 2):
            adj[a].discard(b)
            adj[b].discard(a)
    return [(a, b) for a in range(n) for b in sorted(adj[a]) if a < b]


def _regular_edges(n: int, d: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Uniform-ish simple ``d``-regular graph by sequential random pairing with restarts."""
    for _ in range(1000):
        points = np.repeat(np.arange(n), d).tolist()
        adj: list[set[int]] = [set() for _ in range(n)]
        edges = []
        ok = True
        while points:
            for _ in range(100):
                i, j = rng.integers(len(points), size=2).tolist()
                a, b = points[i], points[j]
                if a != b and b not in adj[a]:
                    break
            else:
                ok = False
                break
            for k in sorted((i, j), reverse=True):
                points[k] = points[-1]
                points.pop()
            adj[a].add(b)
            adj[b].add(a)
            edges.append((min(a, b), max(a, b)))
        if ok:
            return sorted(edges)
    raise RuntimeError("random regular generation did not converge")


def gen(spec: GenSpec) -> Graph:
    """Generate the graph described by ``spec``."""
    n, rng = spec.n, _rng(spec.seed)
    model = spec.model
    if model is GraphModel.GNP:
        return Graph(n, _gnp_edges(n, float(spec.param) / n, rng))
    if model is GraphModel.HIGH_GIRTH:
        if spec.param.denominator != 1 or spec.param < 3:
            raise ValueError("girth must be an integer >= 3")
        base = _gnp_edges(n, float(spec.c) / n, rng)
        out = Graph(n, _remove_short_cycles(n, base, int(spec.param)))
        assert girth(out) >= spec.param
        return out
    if model is GraphModel.DISJOINT_CLIQUES:
        if spec.param.denominator != 1:
            raise ValueError("clique order must be an integer")
        k = int(spec.param)
        if n % k:
            raise ValueError(f"n={n} is not a multiple of the clique order {k}")
        edges = [(b + i, b + j) for b in range(0, n, k) for i, j in combinations(range(k), 2)]
        return Graph(n, edges)
    if spec.param.denominator != 1:
        raise ValueError("degree must be an integer")
    d = int(spec.param)
    if d >= n or (n * d) % 2:
        raise ValueError(f"no {d}-regular graph on {n} vertices")
    return Graph(n, _regular_edges(n, d, rng))


def girth(g: Graph) -> float:
    """Length of the shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    for s in g.vertices():
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] >= best:
                break
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to ``1..leaves``."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def octahedron_graph() -> Graph:
    """``K_{2,2,2}``; antipodal pairs are ``(0,1)``, ``(2,3)``, ``(4,5)``."""
    return Graph(6, [(a, b) for a, b in combinations(range(6), 2) if a // 2 != b // 2])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, base = [], 0
    for g in graphs:
        edges.extend((base + u, base + v) for u, v in g.edges())
        base += g.n
    return Graph(base, edges)


def barbell_graph(k: int, bridge: int = 0) -> Graph:
    """Two ``K_k`` joined by a path with ``bridge`` interior vertices."""
    if k < 2:
        raise ValueError("cliques need at least 2 vertices")
    n = 2 * k + bridge
    edges = list(combinations(range(k), 2))
    edges += [(k + bridge + i, k + bridge + j) for i, j in combinations(range(k), 2)]
    chain = [k - 1, *range(k, k + bridge), k + bridge]
    edges += list(zip(chain, chain[1:]))
    return Graph(n, edges)
