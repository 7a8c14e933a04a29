import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, naive_violations
from minorlab.expansion import ExpansionProfile, ExpansionViolation, required_ratio
from minorlab.extraction import (
    Case,
    ExtractionTrace,
    Outcome,
    PipelineConfig,
    StaleViolation,
    extract_expander,
    split_on_violation,
    verify_extraction_trace,
)
from minorlab.generators import complete_graph, disjoint_union, path_graph, star_graph
from minorlab.graph import average_degree, neighborhood


def violation(g, profile, s):
    s = frozenset(s)
    d = 0
    _, bound = required_ratio(profile, d, g.n)
    return ExpansionViolation(s, d, Fraction(len(neighborhood(g, s)), len(s)), bound, g.n)


def test_split_removes_sparse_clique():
    g = disjoint_union(complete_graph(8), complete_graph(4))
    p = ExpansionProfile.delta_n_expander("1/10", 12)
    nxt, remap, case = split_on_violation(g, violation(g, p, range(8, 12)), p)
    assert case is Case.CASE1 and nxt == complete_graph(8) and remap == tuple(range(8))
    assert average_degree(nxt) == Fraction(28, 8) >= Fraction(34, 12)


def test_split_restricts_star():
    g = star_graph(9)
    p = ExpansionProfile.delta_n_expander(1, 16)
    v = violation(g, p, range(1, 6))
    assert v.required_ratio_bound == Fraction(1, 4) and v.observed_ratio == Fraction(1, 5)
    nxt, remap, case = split_on_violation(g, v, p)
    assert case is Case.CASE2 and nxt == star_graph(5) and remap == tuple(range(6))
    assert average_degree(nxt) == Fraction(5, 6) >= Fraction(3, 4) * Fraction(9, 10)


def test_split_component_with_lower_density_is_removed():
    g = disjoint_union(path_graph(3), complete_graph(5))
    p = ExpansionProfile.delta_n_expander("1/10", 8)
    _, _, case = split_on_violation(g, violation(g, p, range(3)), p)
    assert case is Case.CASE1


def test_split_rejects_stale_violation():
    g = complete_graph(8)
    p = ExpansionProfile.delta_n_expander("1/10", 8)
    fake = ExpansionViolation(frozenset({0}), 0, Fraction(0), required_ratio(p, 0, 8)[1], 8)
    with pytest.raises(StaleViolation, match="stale violation"):
        split_on_violation(g, fake, p)


def test_extract_two_cliques():
    g = disjoint_union(complete_graph(8), complete_graph(4))
    p = ExpansionProfile.delta_n_expander("1/10", 12)
    h, trace = extract_expander(g, p)
    assert h == complete_graph(8)
    assert [s.case for s in trace.steps] == [Case.CASE1]
    assert trace.outcome is Outcome.EXPANDER_CERTIFIED
    assert average_degree(h) == Fraction(7, 2) >= Fraction(4, 5) * Fraction(17, 6)
    assert verify_extraction_trace(g, trace)


def test_extract_trivial_inputs():
    k16 = complete_graph(16)
    h, trace = extract_expander(k16, ExpansionProfile.delta_n_expander("1/10", 16))
    assert h == k16 and not trace.steps and trace.outcome is Outcome.EXPANDER_CERTIFIED
    h, trace = extract_expander(path_graph(3), ExpansionProfile.delta_expander("1/256"))
    assert h == path_graph(3) and trace.outcome is Outcome.SMALL_GRAPH_STOP
    assert verify_extraction_trace(path_graph(3), trace)


def test_trace_mutations_detected():
    g = disjoint_union(complete_graph(8), complete_graph(4), path_graph(5))
    p = ExpansionProfile.delta_n_expander("1/10", g.n)
    _, trace = extract_expander(g, p)
    assert verify_extraction_trace(g, trace)
    bad = dataclasses.replace(trace, steps=list(trace.steps))
    bad.steps[0] = dataclasses.replace(bad.steps[0], density_after=bad.steps[0].density_after + 1)
    assert not verify_extraction_trace(g, bad)
    worse = dataclasses.replace(trace, steps=list(trace.steps))
    worse.steps[-1] = dataclasses.replace(worse.steps[-1], witness=(0, 1, 2, 99))
    with pytest.raises(ValueError):
        verify_extraction_trace(g, worse)


def test_trace_serialization_roundtrips():
    g = disjoint_union(complete_graph(6), star_graph(9), complete_graph(3))
    p = ExpansionProfile.delta_n_expander(1, 32)
    _, trace = extract_expander(g, p)
    assert trace.steps
    again = ExtractionTrace.from_json(trace.to_json())
    assert again == trace and verify_extraction_trace(g, again)
    blob = trace.to_bytes()
    assert ExtractionTrace.from_bytes(blob) == trace
    assert len(blob) < len(trace.to_json())


def test_empty_step_trace_checks_finder():
    g = complete_graph(10)
    p = ExpansionProfile.delta_n_expander("1/10", 10)
    _, trace = extract_expander(g, p)
    assert not trace.steps and verify_extraction_trace(g, trace)
    lying = dataclasses.replace(trace, final_vertices=tuple(range(9)))
    assert not verify_extraction_trace(g, lying)


PROFILES = st.sampled_from(
    [
        ExpansionProfile.delta_n_expander("1/10", 16),
        ExpansionProfile.delta_n_expander("249/1000", 8),
        ExpansionProfile.delta_n_expander(1, 16),
        ExpansionProfile.delta_n_expander(3, 4),
        ExpansionProfile.delta_expander(8),
    ]
)


@settings(max_examples=80, deadline=None)
@given(graphs(1, 14), PROFILES)
def test_extraction_invariants(g, profile):
    h, trace = extract_expander(g, profile, PipelineConfig(stop_order_delta=4))
    assert verify_extraction_trace(g, trace)
    assert len(trace.steps) <= g.n
    for s in trace.steps:
        if s.case is Case.CASE1:
            assert s.density_after >= s.density_before
        elif s.case is Case.CASE2:
            assert s.density_after >= (1 - s.gamma) * s.density_before
            assert s.order_after < s.order
            assert s.order_after <= s.order // 2 ** (2**s.scale) + s.observed_ratio * len(s.witness)
    if trace.in_hypothesis:
        assert average_degree(h) >= profile.floor_factor * average_degree(g)


def adversarial_finder(rng):
    def find(g, profile):
        found = naive_violations(g, profile)
        return rng.choice(found) if found else None

    return find


@settings(max_examples=60, deadline=None)
@given(graphs(1, 10), PROFILES, st.integers(0, 2**32))
def test_floor_survives_any_genuine_violations(g, profile, seed):
    cfg = PipelineConfig(stop_order_delta=4)
    h, trace = extract_expander(g, profile, cfg, finder=adversarial_finder(random.Random(seed)))
    assert verify_extraction_trace(g, trace)
    if trace.in_hypothesis:
        assert average_degree(h) >= profile.floor_factor * average_degree(g)
