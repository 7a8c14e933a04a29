# Small K_4 minors in sparse random graphs.
#
# G(n, 8/n) has density about 4, well above the K_4 threshold 2.  The
# question is how few vertices a K_4 model needs as n grows; the answer
# should track log n.

import math

import numpy as np

from minorlab import find_small_minor
from minorlab.generators import GenSpec, GraphModel, gen
from minorlab.oracle import verify_minor_model

sizes = [2**k for k in range(8, 14)]
orders = []
for n in sizes:
    g = gen(GenSpec(GraphModel.GNP, n, 8, seed=n))
    res = find_small_minor(g, t=4, epsilon=1, c_of_t=2)
    assert verify_minor_model(g, res.model)
    orders.append(res.order)
    print(f"n={n:5d}  order={res.order:3d}  order/log2(n)={res.order / math.log2(n):.2f}  regime={res.regime}")

# least squares fit of order against log2 n
x = np.log2(sizes)
slope, intercept = np.polyfit(x, orders, 1)
print("fit: order ~ %.2f * log2(n) + %.2f" % (slope, intercept))

# the branch sets and paths of the last model
m = res.model
print("branch sets:", [sorted(b) for b in m.branch_sets])
for (i, j), p in sorted(m.paths.items()):
    print(f"  path {i}-{j}: length {len(p) - 1}")
