"""
A product code with equality supernodes
=======================================

The 256-bit product of the Hamming code with itself has a cyclic graph.
Every bit is an equality supernode, so every cycle is covered.  More packets
(iterations) help, and accumulation mode averages packet estimates.
"""

import numpy as np

from stochdec import ChannelConfig, StochasticDecoder, detect_cycles
from stochdec.sweep import code_setup, make_frames

setup = code_setup("product256_121")
g = setup.graph
print(f"{len(g.constraints)} constraints, {sum(c.supernode for c in g.constraints)} supernodes, "
      f"diameter {g.diameter}, uncovered cycles: {len(detect_cycles(g))}")

frames = make_frames(setup, ChannelConfig(3.0, setup.rate), root_seed=17, point=0, start=0, count=20)
dec = StochasticDecoder(g)
info = setup.info_positions
raw = int(((frames.evidence[..., 1] > 0.5) != frames.bits)[:, info].sum())
print("channel-only info bit errors:", raw)
for mode in ("replacement", "accumulation"):
    for it in (1, 2, 4, 8):
        d = dec.run(frames.evidence, frames.decoder_seeds, l=250, iterations=it, mode=mode).decisions
        print(f"{mode:12s} iterations={it}: info bit errors {int((d != frames.bits)[:, info].sum())}")
