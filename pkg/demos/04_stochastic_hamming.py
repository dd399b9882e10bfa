"""
Stochastic decoding of the Hamming code
=======================================

The trellis has no cycles, so the stochastic decoder needs no supernodes.
Longer streams bring its decisions closer to the sum-product ones.
"""

import numpy as np

from stochdec import ChannelConfig, FloodingDecoder, StochasticDecoder
from stochdec.sweep import code_setup, make_frames

setup = code_setup("hamming16_11")
ch = ChannelConfig(3.0, setup.rate)
frames = make_frames(setup, ch, root_seed=11, point=0, start=0, count=200)

sp, _ = FloodingDecoder(setup.graph).decode(frames.evidence)
dec = StochasticDecoder(setup.graph)
for l in (50, 250, 1000, 4000):
    st = dec.run(frames.evidence, frames.decoder_seeds, l=l).decisions
    print(f"l={l:5d}: bits differing from sum-product {np.mean(st != sp):.4f}, "
          f"bit errors {int((st != frames.bits).sum())} (sum-product {int((sp != frames.bits).sum())})")

# The histograms behind the decisions: counts of fresh symbols seen at each bit.
res = dec.run(frames.evidence[:1], frames.decoder_seeds[:1], l=250)
print(res.histograms[0, :, :2])
