"""Simple undirected graphs and the set primitives the rest of the package uses.

A :class:`Graph` has dense vertex ids ``0..n-1`` and is immutable once
built.  Vertex sets are plain ``frozenset`` objects over those ids; any
function that needs a deterministic order iterates them sorted.
Densities are exact :class:`fractions.Fraction` values ``|E| / |V|``.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction
from functools import cached_property
from pathlib import Path

VertexSet = frozenset

__all__ = [
    "Graph",
    "VertexSet",
    "average_degree",
    "neighborhood",
    "ball",
    "ball_layers",
    "iter_ball_layers",
    "induced_subgraph",
    "connected_components",
    "densest_component",
    "is_connected_set",
    "read_edgelist",
    "write_edgelist",
    "parse_edgelist",
]


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable of (int, int)
        Each unordered pair at most once; loops are rejected.
    """

    __slots__ = ("_adj", "_m", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise ValueError("negative vertex count")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self._adj = tuple(frozenset(s) for s in adj)
        self._m = m

    @classmethod
    def _from_adjacency(cls, adj: Sequence[frozenset[int]], m: int) -> Graph:
        g = cls.__new__(cls)
        g._adj = tuple(adj)
        g._m = m
        return g

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._m

    def __len__(self) -> int:
        return len(self._adj)

    def vertices(self) -> range:
        return range(len(self._adj))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        """All edges ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighborhood of each vertex as an integer bitmask."""
        out = []
        for a in self._adj:
            x = 0
            for w in a:
                x |= 1 << w
            out.append(x)
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"


def _check_vertices(g: Graph, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    n = g.n
    for v in s:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} out of range for n={n}")
    return s


def average_degree(g: Graph) -> Fraction:
    """``|E| / |V|`` as an exact fraction (half the mean degree)."""
    if g.n == 0:
        raise ValueError("empty graph")
    return Fraction(g.edge_count, g.n)


def neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """Vertices outside ``s`` adjacent to at least one vertex of ``s``."""
    s = _check_vertices(g, s)
    out: set[int] = set()
    adj = g._adj
    for u in s:
        out.update(adj[u])
    out.difference_update(s)
    return frozenset(out)


def iter_ball_layers(g: Graph, u: Iterable[int]) -> Iterator[frozenset[int]]:
    """Yield BFS layers from ``u`` lazily, starting with ``u`` itself."""
    frontier = _check_vertices(g, u)
    seen = set(frontier)
    adj = g._adj
    while frontier:
        yield frontier
        nxt: set[int] = set()
        for x in frontier:
            for y in adj[x]:
                if y not in seen:
                    nxt.add(y)
        seen.update(nxt)
        frontier = frozenset(nxt)


def ball_layers(g: Graph, u: Iterable[int], k: int | None = None) -> list[frozenset[int]]:
    """BFS layers from ``u``: ``layers[i]`` is the set at distance exactly ``i``.

    Stops after radius ``k`` or when the ball stops growing.
    """
    layers = []
    for layer in iter_ball_layers(g, u):
        if k is not None and len(layers) > k:
            break
        layers.append(layer)
    return layers


def ball(g: Graph, u: Iterable[int], k: int) -> frozenset[int]:
    """All vertices within distance ``k`` of the set ``u``."""
    if k < 0:
        raise ValueError("radius must be non-negative")
    out: set[int] = set()
    for layer in ball_layers(g, u, k):
        out |= layer
    return frozenset(out)


def induced_subgraph(g: Graph, u: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on ``u``, reindexed densely in ascending vertex order.

    Returns the subgraph and the remap table: ``remap[i]`` is the id in
    ``g`` of vertex ``i`` of the subgraph.
    """
    u = _check_vertices(g, u)
    if not u:
        raise ValueError("empty vertex set")
    remap = tuple(sorted(u))
    index = {v: i for i, v in enumerate(remap)}
    adj = g._adj
    new_adj = []
    twice_m = 0
    for v in remap:
        row = frozenset(index[w] for w in adj[v] if w in index)
        twice_m += len(row)
        new_adj.append(row)
    return Graph._from_adjacency(new_adj, twice_m // 2), remap


def connected_components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Components ordered by their smallest vertex.

    With ``within`` the components of the induced subgraph on that set
    are returned (in ``g``'s ids).
    """
    allowed = set(g.vertices()) if within is None else set(_check_vertices(g, within))
    adj = g._adj
    comps = []
    for s in sorted(allowed):
        if s not in allowed:
            continue
        allowed.discard(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in allowed:
                    allowed.discard(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(frozenset(comp))
    return comps


def is_connected_set(g: Graph, s: Iterable[int]) -> bool:
    s = frozenset(s)
    if not s:
        return False
    return len(connected_components(g, s)) == 1


def densest_component(g: Graph) -> tuple[Graph, tuple[int, ...]]:
    """Component of largest density, ties to the smallest minimum vertex."""
    if g.n == 0:
        raise ValueError("empty graph")
    comps = connected_components(g)
    if len(comps) == 1:
        return g, tuple(g.vertices())
    best, best_d = None, None
    for c in comps:
        e = sum(len(g._adj[v]) for v in c) // 2
        d = Fraction(e, len(c))
        if best_d is None or d > best_d:
            best, best_d = c, d
    return induced_subgraph(g, best)


def parse_edgelist(text: str) -> Graph:
    """Parse the edge-list format: optional ``p <n> <m>`` header, then ``u v`` lines."""
    n = None
    declared_m = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or pairs:
                raise ValueError(f"line {lineno}: header must come first")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: malformed header")
            n, declared_m = int(parts[1]), int(parts[2])
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if u < 0 or v < 0:
            raise ValueError(f"line {lineno}: negative vertex id")
        pairs.append((u, v))
    if n is None:
        n = 1 + max((max(e) for e in pairs), default=-1)
    seen = set()
    for u, v in pairs:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
    if declared_m is not None and declared_m != len(pairs):
        raise ValueError(f"header declares {declared_m} edges, found {len(pairs)}")
    return Graph(n, pairs)


def read_edgelist(path: str | Path) -> Graph:
    return parse_edgelist(Path(path).read_text())


def write_edgelist(g: Graph, path: str | Path | None = None) -> str:
    """Canonical text: header then edges sorted lexicographically."""
    lines = [f"p {g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
