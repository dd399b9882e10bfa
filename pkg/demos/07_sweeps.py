"""
BER sweeps
==========

A sweep decodes frames at each Eb/N0 point until enough bit errors pile up.
Frames, noise and decoder randomness all come from counters keyed on the
root seed, so the CSV does not depend on batch size or thread count.
The same runs are available from the shell as ``decode-sim sweep``.
"""

import numpy as np

from stochdec import SweepConfig, emit_asymptote, emit_csv, run_sweep

points = (2.0, 3.0, 4.0)
for decoder in ("sum_product", "stochastic"):
    cfg = SweepConfig("hamming16_11", decoder, points, stop_errors=30, root_seed=1)
    print(emit_csv(run_sweep(cfg)))

print(emit_asymptote("hamming16_11", np.arange(2.0, 7.0)))

a = emit_csv(run_sweep(SweepConfig("hamming16_11", "stochastic", (3.0,), stop_errors=30, root_seed=1, batch=7)))
b = emit_csv(run_sweep(SweepConfig("hamming16_11", "stochastic", (3.0,), stop_errors=30, root_seed=1, workers=4)))
print("identical:", a == b)
