"""
Stochastic streams through one node
===================================

Feed two random symbol streams into a constraint node.  When the input pair
is allowed, the node outputs the matching symbol; otherwise it repeats its
last output.  The long-run output mass is the sum-product message.
"""

import numpy as np

from stochdec import SatisfactionTable, StochasticNodeState, StreamSource, node_step, sum_product_update
from stochdec.mass import total_variation

rows = [(0, 0, 0), (0, 1, 1), (1, 3, 2), (1, 2, 3), (2, 2, 0), (2, 3, 1), (3, 1, 2), (3, 0, 3)]
table = SatisfactionTable((4, 4, 4), rows)

pa = np.array([0.1, 0.2, 0.3, 0.4])
pb = np.array([0.5, 0.1, 0.1, 0.3])
src_a = StreamSource(pa, seed=3, stream=0)
src_b = StreamSource(pb, seed=3, stream=1)

state = StochasticNodeState()
steps = 200_000
out = np.empty(steps, dtype=int)
for t in range(steps):
    out[t], state = node_step(table, "C", src_a.draw(), src_b.draw(), state)

emp = np.bincount(out, minlength=4) / steps
exact = sum_product_update(table, "C", pa, pb)
print("empirical  ", np.round(emp, 4))
print("sum-product", np.round(exact, 4))
print("total variation", total_variation(emp, exact))

# The error shrinks roughly as one over the square root of the stream length.
for n in (1_000, 10_000, 100_000):
    print(n, total_variation(np.bincount(out[:n], minlength=4) / n, exact))
