"""Ground truth for clique minors on small graphs.

:func:`verify_minor_model` is the independent checker every emitted
model goes through.  :func:`brute_force_minor` decides ``K_t`` minor
containment exhaustively.  It relies on the fact that a model inside a
connected component can always be grown until its branch sets partition
that component, so only partitions into connected, pairwise adjacent
parts need to be enumerated.
"""

from __future__ import annotations

from collections.abc import Iterator
from itertools import combinations

from .graph import Graph, connected_components, is_connected_set
from .model import MinorModel

__all__ = ["check_minor_model", "verify_minor_model", "brute_force_minor", "hadwiger_number"]

DEFAULT_BRUTE_CAP = 12


def check_minor_model(g: Graph, model: MinorModel) -> str | None:
    """Return ``None`` if ``model`` is a valid ``K_t`` minor of ``g``, else a reason code."""
    t = model.t
    sets = model.branch_sets
    if t < 1 or len(sets) != t:
        return "wrong-branch-count"
    owner: dict[int, int] = {}
    for i, b in enumerate(sets):
        if not b:
            return "empty-branch-set"
        for v in b:
            if not 0 <= v < g.n:
                return "vertex-out-of-range"
            if v in owner:
                return "branch-sets-overlap"
            owner[v] = i
        if not is_connected_set(g, b):
            return "branch-set-disconnected"
    expected = {(i, j) for i in range(t) for j in range(i + 1, t)}
    if set(model.paths) != expected:
        return "path-keys-mismatch"
    used_by: dict[int, tuple[int, int]] = {}
    for (i, j), path in sorted(model.paths.items()):
        if len(path) < 2:
            return "path-too-short"
        if len(set(path)) != len(path):
            return "path-not-simple"
        for v in path:
            if not 0 <= v < g.n:
                return "vertex-out-of-range"
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                return "path-uses-non-edge"
        if path[0] not in sets[i] or path[-1] not in sets[j]:
            return "path-endpoints"
        for v in path[1:-1]:
            if v in owner and owner[v] not in (i, j):
                return "path-meets-other-branch-set"
        for v in path[1:-1]:
            if v in used_by:
                return "paths-share-internal-vertex"
            used_by[v] = (i, j)
    for (i, j), path in model.paths.items():
        for v in (path[0], path[-1]):
            if v in used_by and used_by[v] != (i, j):
                return "paths-share-internal-vertex"
    return None


def verify_minor_model(g: Graph, model: MinorModel) -> bool:
    return check_minor_model(g, model) is None


def _connected_subsets(masks: tuple[int, ...], v: int, allowed: int, max_size: int) -> Iterator[int]:
    """Every connected subset of ``allowed`` containing ``v`` with at most ``max_size`` vertices."""
    start = 1 << v

    def rec(s: int, size: int, ext: int, excluded: int) -> Iterator[int]:
        yield s
        if size == max_size:
            return
        e = ext
        while e:
            w = e & -e
            e ^= w
            new_s = s | w
            new_excl = excluded | (ext & ~e & ~w)
            new_ext = (e | masks[w.bit_length() - 1]) & allowed & ~new_s & ~new_excl
            yield from rec(new_s, size + 1, new_ext, new_excl)

    yield from rec(start, 1, masks[v] & allowed & ~start, 0)


def _partition_model(g: Graph, comp: frozenset[int], t: int) -> list[int] | None:
    masks = g.masks

    def nbrs(x: int) -> int:
        out = 0
        while x:
            low = x & -x
            out |= masks[low.bit_length() - 1]
            x ^= low
        return out

    def connected(x: int) -> bool:
        low = x & -x
        seen = low
        frontier = low
        while frontier:
            frontier = nbrs(frontier) & x & ~seen
            seen |= frontier
        return seen == x

    def search(remaining: int, chosen: list[int], chosen_nbrs: list[int]) -> list[int] | None:
        k = len(chosen)
        if k == t - 1:
            if connected(remaining) and all(nb & remaining for nb in chosen_nbrs):
                return chosen + [remaining]
            return None
        left = t - k - 1
        rem_count = remaining.bit_count()
        v = (remaining & -remaining).bit_length() - 1
        for s in _connected_subsets(masks, v, remaining, rem_count - left):
            ns = nbrs(s) & ~s
            if any(not ns & c for c in chosen):
                continue
            rest = remaining & ~s
            if any(not nb & rest for nb in chosen_nbrs) or not ns & rest:
                continue
            found = search(rest, chosen + [s], chosen_nbrs + [ns])
            if found:
                return found
        return None

    mask = 0
    for v in comp:
        mask |= 1 << v
    return search(mask, [], [])


def _prune(g: Graph, parts: list[frozenset[int]]) -> list[frozenset[int]]:
    """Drop vertices (largest id first) while the parts stay a valid contraction model."""
    parts = list(parts)
    changed = True
    while changed:
        changed = False
        for i in range(len(parts)):
            for v in sorted(parts[i], reverse=True):
                smaller = parts[i] - {v}
                if not smaller or not is_connected_set(g, smaller):
                    continue
                reach = set()
                for u in smaller:
                    reach |= g.neighbors(u)
                if all(reach & parts[j] for j in range(len(parts)) if j != i):
                    parts[i] = smaller
                    changed = True
    return parts


def _to_model(g: Graph, parts: list[frozenset[int]]) -> MinorModel:
    parts = _prune(g, parts)
    t = len(parts)
    paths = {}
    for i, j in combinations(range(t), 2):
        edge = min((u, w) for u in parts[i] for w in g.neighbors(u) if w in parts[j])
        paths[(i, j)] = edge
    return MinorModel(t, tuple(parts), paths)


def brute_force_minor(g: Graph, t: int, brute_cap: int = DEFAULT_BRUTE_CAP) -> MinorModel | None:
    """Exhaustive ``K_t`` minor search; ``None`` means no such minor exists."""
    if g.n > brute_cap:
        raise ValueError(f"graph has {g.n} > {brute_cap} vertices")
    if t < 1:
        raise ValueError("t must be positive")
    if t > g.n:
        return None
    for comp in connected_components(g):
        if len(comp) < t:
            continue
        if t == 1:
            parts = [comp]
        else:
            found = _partition_model(g, comp, t)
            if found is None:
                continue
            parts = [frozenset(v for v in range(g.n) if x >> v & 1) for x in found]
        model = _to_model(g, parts)
        assert verify_minor_model(g, model)
        return model
    return None


def hadwiger_number(g: Graph, brute_cap: int = DEFAULT_BRUTE_CAP) -> int:
    """Largest ``t`` such that ``g`` has a ``K_t`` minor."""
    if g.n == 0:
        raise ValueError("empty graph")
    if g.n > brute_cap:
        raise ValueError(f"graph has {g.n} > {brute_cap} vertices")
    t = 1
    while t < g.n and brute_force_minor(g, t + 1, brute_cap) is not None:
        t += 1
    return t
