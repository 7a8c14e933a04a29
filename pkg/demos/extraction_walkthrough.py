# Peeling a dense expander out of a messy graph.
#
# A dense random core sits next to sparse debris and a few small cliques.
# Each extraction step either throws away a poorly expanding set or zooms
# in on it, and the trace records which.

import numpy as np

from minorlab import ExpansionProfile, extract_expander, verify_extraction_trace
from minorlab.generators import GenSpec, GraphModel, complete_graph, disjoint_union, gen
from minorlab.graph import average_degree

core = gen(GenSpec(GraphModel.GNP, 40, 12, seed=1))
debris = gen(GenSpec(GraphModel.GNP, 80, 1, seed=2))
g = disjoint_union(core, debris, complete_graph(4), complete_graph(3))
print("input:", g.n, "vertices", g.edge_count, "edges, density", average_degree(g))

profile = ExpansionProfile.delta_n_expander("1/10", g.n)
h, trace = extract_expander(g, profile)

for step in trace.steps[:8]:
    print(step.case.value, "|S| =", len(step.witness), "scale", step.scale,
          "density", step.density_before, "->", step.density_after)
print("...", len(trace.steps), "steps total", trace.counts())

# the floor: density never drops below (1 - 2 delta) of where it started
print("kept", h.n, "vertices, density", average_degree(h), "float:", float(average_degree(h)))
print("floor", (1 - 2 * profile.delta) * average_degree(g))
print("outcome:", trace.outcome.value)

# replay every step from the original graph
print("trace verifies:", verify_extraction_trace(g, trace))

# how much of the core survived?
kept = np.isin(np.array(trace.final_vertices), np.arange(40))
print("core vertices kept:", int(kept.sum()), "of 40; others:", int((~kept).sum()))
