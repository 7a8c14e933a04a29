# Why log n is the right order: high-girth graphs.
#
# Any K_3 minor contains a cycle, so in a graph of girth g every K_3 model
# uses at least g vertices.  Deleting short cycles from G(n, 3/n) keeps
# the density above 1 while pushing the girth up to about log2(n)/2.

import math

from minorlab import find_small_minor
from minorlab.generators import GenSpec, GraphModel, gen, girth
from minorlab.graph import average_degree

for n in (2**10, 2**12):
    g_req = math.ceil(math.log2(n) / 2)
    g = gen(GenSpec(GraphModel.HIGH_GIRTH, n, g_req, seed=3, c=3))
    d = average_degree(g)
    print(f"n={n} target girth {g_req}: girth {girth(g)}, density {float(d):.3f}")
    res = find_small_minor(g, t=3, epsilon="1/4", c_of_t=1)
    print(f"  K_3 model of order {res.order} (never below {girth(g)})")
    # the model is one cycle-ish structure; show its pieces
    print("  branch set sizes:", [len(b) for b in res.model.branch_sets],
          "path lengths:", [len(p) - 1 for p in res.model.paths.values()])
