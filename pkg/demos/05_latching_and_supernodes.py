"""
Latching, and how supernodes break it
=====================================

Two parity checks share three bits, so the graph has cycles.  If every
internal stream starts at zero the parity nodes keep agreeing with each
other and the cycle never leaves the all-zero state.  Turning one parity
check into a supernode replaces its output with fresh draws from a
packet estimate, and the cycle starts moving after one packet.
"""

import numpy as np

from stochdec.stochastic import build_latching_demo, run_latching

rng = np.random.default_rng(5)
p0 = rng.uniform(0.05, 0.95, 3)
evidence = list(np.stack([p0, 1 - p0], 1))

graph, internal = build_latching_demo(supernode=False)
trace = run_latching(graph, internal, evidence, [0], steps=10_000)
print("plain cycle, nonzero symbols in 10000 steps:", int(trace.sum()))

l = 100
graph_s, internal_s = build_latching_demo(supernode=True)
trace = run_latching(graph_s, internal_s, evidence, [0], steps=3 * l, l=l)
first = int(np.argmax(trace[0, 1:].any(axis=1))) + 1
print("with a supernode, first nonzero internal symbol at step", first)
for k in range(3):
    block = trace[0, 1 + k * l : 1 + (k + 1) * l]
    print(f"packet {k}: share of ones {block.mean():.3f}")
