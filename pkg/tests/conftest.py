from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import strategies as st

from minorlab.expansion import ExpansionViolation, required_ratio
from minorlab.graph import Graph


@st.composite
def graphs(draw, min_n=1, max_n=12, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    if p is None:
        edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    else:
        edges = [e for e in pairs if draw(st.floats(0, 1)) < p]
    return Graph(n, edges)


@st.composite
def graph_and_subset(draw, min_n=1, max_n=12):
    g = draw(graphs(min_n, max_n))
    s = draw(st.frozensets(st.integers(0, g.n - 1), min_size=1))
    return g, s


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def naive_violations(g: Graph, profile):
    """Every genuine violation, by a plain double loop over subsets and vertices.

    Scale and threshold come from first principles: the tightest ``d``
    with ``|S| * 2**2**d <= m`` inside ``0..floor(log2 log2 m) - 1``.
    """
    m = g.n
    top = 0
    while 2 ** (2 ** (top + 1)) <= m:
        top += 1
    top -= 1  # largest d with 2**2**(d+1) <= m, i.e. floor(loglog m) - 1
    out = []
    for mask in range(1, 1 << m):
        s = [v for v in range(m) if mask >> v & 1]
        if 2 * len(s) > m:
            continue
        d = 0
        while d < top and len(s) * 2 ** (2 ** (d + 1)) <= m:
            d += 1
        nb = set()
        for u in s:
            for w in range(m):
                if w not in s and g.has_edge(u, w):
                    nb.add(w)
        _, bound = required_ratio(profile, d, m)
        if Fraction(len(nb), len(s)) < bound:
            out.append(ExpansionViolation(frozenset(s), d, Fraction(len(nb), len(s)), bound, m))
    return out


@pytest.fixture
def petersen():
    from minorlab.generators import petersen_graph

    return petersen_graph()
