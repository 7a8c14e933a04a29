import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, naive_violations
from minorlab._rational import floor_loglog, log2_lower, log2_upper, loglog2_lower
from minorlab.expansion import (
    ExpanderCertificate,
    ExpansionProfile,
    ExpansionViolation,
    ScaleRangeEmpty,
    check_expander_exact,
    find_violation_heuristic,
    required_ratio,
)
from minorlab.generators import barbell_graph, complete_graph, disjoint_union
from minorlab.graph import Graph

D256 = ExpansionProfile.delta_expander("1/256")


def test_required_ratio_values():
    m = 2**16
    assert required_ratio(D256, 0, m)[1] == Fraction(1, 65536)
    assert required_ratio(D256, 3, m)[1] == Fraction(1, 8192)
    assert required_ratio(D256, 0, m)[0] == pytest.approx(1 / 65536)
    dn = ExpansionProfile.delta_n_expander("1/10", 2**20)
    assert required_ratio(dn, 0, 2**10)[1] == Fraction(1, 200)


def test_required_ratio_errors():
    with pytest.raises(ScaleRangeEmpty, match="scale range empty"):
        required_ratio(D256, 0, 2)
    with pytest.raises(ValueError):
        required_ratio(D256, 2, 16)  # only d = 0, 1 exist at m = 16
    with pytest.raises(ValueError):
        ExpansionProfile.delta_n_expander("1/10", 3)
    with pytest.raises(ValueError):
        ExpansionProfile.delta_expander(0)


@given(st.integers(4, 2**40), st.sampled_from(["delta", "delta_n"]))
def test_required_ratio_doubles_per_scale(m, kind):
    p = ExpansionProfile(kind, Fraction(1, 7), 1000)
    cap = p.scale_cap(m)
    vals = [required_ratio(p, d, m) for d in range(cap + 1)]
    for (f0, b0), (f1, b1) in zip(vals, vals[1:]):
        assert b1 == 2 * b0
        assert f1 == pytest.approx(2 * f0)
    for f, b in vals:
        assert b >= Fraction(f) * (1 - Fraction(1, 10**12))


@given(st.integers(2, 2**64))
def test_rational_log_bounds_bracket_truth(m):
    assert log2_lower(m) <= Fraction(math.log2(m)) * (1 + Fraction(1, 10**12)) and log2_lower(m) <= log2_upper(m)
    j = floor_loglog(m)
    assert 2 ** (2**j) <= m < 2 ** (2 ** (j + 1))
    if m >= 4:
        assert loglog2_lower(m) <= math.log2(math.log2(m)) + 1e-9


def test_complete_graphs_always_certified():
    for m in range(5, 257):
        assert required_ratio(D256, 0, m)[0] < 1
    cert = check_expander_exact(complete_graph(16), D256)
    assert isinstance(cert, ExpanderCertificate) and cert.exact
    assert cert.order == 16 and cert.scales_checked == (0, 1)


def test_two_cliques_violation():
    g = disjoint_union(complete_graph(8), complete_graph(8))
    v = check_expander_exact(g, D256)
    assert isinstance(v, ExpansionViolation)
    assert v.witness == frozenset(range(8)) and v.scale == 0 and v.observed_ratio == 0
    h = find_violation_heuristic(g, D256)
    assert h is not None and h.observed_ratio == 0
    assert find_violation_heuristic(complete_graph(16), D256) is None


def test_small_graph_scale_range_empty():
    with pytest.raises(ScaleRangeEmpty):
        check_expander_exact(Graph(2, [(0, 1)]), D256)
    with pytest.raises(ValueError, match="heuristic"):
        check_expander_exact(complete_graph(21), D256)


def test_barbell_violation_is_a_half():
    p = ExpansionProfile.delta_n_expander(1, 116)
    g = barbell_graph(8, 100)
    v = find_violation_heuristic(g, p)
    assert v is not None and v.recheck(g, p)
    small = barbell_graph(5, 6)
    exact = check_expander_exact(small, ExpansionProfile.delta_n_expander(1, 16))
    assert isinstance(exact, ExpansionViolation) and exact.observed_ratio == Fraction(1, len(exact.witness))


def test_first_violation_order():
    # two disjoint triangles plus a K_4: the smallest violating sets are triangles
    g = disjoint_union(complete_graph(3), complete_graph(4), complete_graph(3))
    v = check_expander_exact(g, D256)
    assert v.witness == {0, 1, 2}


def test_serialization_roundtrip():
    g = disjoint_union(complete_graph(8), complete_graph(8))
    v = check_expander_exact(g, D256)
    d = v.to_dict(D256)
    assert d["delta"] == "1/256" and d["kind"] == "delta" and d["observed"] == "0/1"
    assert ExpansionViolation.from_dict(d) == v
    assert ExpansionProfile.from_dict(D256.to_dict()) == D256


PROFILES = st.sampled_from(
    [
        D256,
        ExpansionProfile.delta_expander(4),
        ExpansionProfile.delta_expander(16),
        ExpansionProfile.delta_n_expander(1, 4),
        ExpansionProfile.delta_n_expander(Fraction(3, 2), 8),
    ]
)


@settings(max_examples=60, deadline=None)
@given(graphs(4, 10), PROFILES)
def test_exact_matches_naive_first_violation(g, profile):
    expected = naive_violations(g, profile)
    got = check_expander_exact(g, profile)
    if not expected:
        assert isinstance(got, ExpanderCertificate)
    else:
        assert got == min(expected, key=ExpansionViolation.sort_key)


@settings(max_examples=80, deadline=None)
@given(graphs(4, 12), PROFILES)
def test_heuristic_is_sound(g, profile):
    v = find_violation_heuristic(g, profile, probe_cap=6, seed=3)
    if v is not None:
        assert v.recheck(g, profile)
        assert isinstance(check_expander_exact(g, profile), ExpansionViolation)
