import numpy as np
import pytest

from stochdec.channel import ChannelConfig
from stochdec.codes import hamming16_11
from stochdec.errors import ConfigInvalid
from stochdec.reference import FloodingDecoder, brute_force_map
from stochdec.stochastic import StochasticDecoder
from stochdec.sweep import (
    CSV_HEADER,
    BerRecord,
    SweepConfig,
    code_setup,
    emit_asymptote,
    emit_csv,
    make_frames,
    run_point,
    run_sweep,
)


@pytest.mark.parametrize("decoder", ["sum_product", "relaxation", "stochastic"])
def test_noiseless_sweep_runs_to_max_frames(decoder):
    (rec,) = run_sweep(SweepConfig("hamming16_11", decoder, (100.0,), max_frames=100, root_seed=1))
    assert rec.bit_errors == 0 and rec.frames == 100 and rec.ber == 0.0


def test_noiseless_product_code():
    (rec,) = run_sweep(SweepConfig("product256_121", "stochastic", (100.0,), max_frames=3, iterations=2, root_seed=1))
    assert rec.bit_errors == 0 and rec.frames == 3


def test_sum_product_equals_brute_force_on_sweep_frames():
    setup = code_setup("hamming16_11")
    frames = make_frames(setup, ChannelConfig(2.0, setup.rate), 9, 0, 0, 200)
    dec, _ = FloodingDecoder(setup.graph).decode(frames.evidence)
    cb = hamming16_11().codebook
    for f in range(200):
        assert np.array_equal(dec[f], brute_force_map(cb, frames.evidence[f]).argmax(axis=1))


def test_frames_are_codewords_with_info_in_place():
    setup = code_setup("product256_121")
    frames = make_frames(setup, ChannelConfig(3.0, setup.rate), 2, 0, 5, 3)
    assert frames.bits.shape == (3, 256)
    assert setup.k == 121 and setup.rate == pytest.approx(121 / 256)


def test_frame_generation_is_positional():
    setup = code_setup("hamming16_11")
    ch = ChannelConfig(3.0, setup.rate)
    whole = make_frames(setup, ch, 4, 1, 0, 10)
    part = make_frames(setup, ch, 4, 1, 6, 4)
    np.testing.assert_array_equal(whole.evidence[6:], part.evidence)
    np.testing.assert_array_equal(whole.decoder_seeds[6:], part.decoder_seeds)


def test_stop_rule_truncates_at_the_crossing_frame():
    cfg = SweepConfig("hamming16_11", "sum_product", (2.0,), stop_errors=30, root_seed=3)
    rec = run_point(cfg, 0)
    assert rec.bit_errors >= 30
    short = run_point(SweepConfig("hamming16_11", "sum_product", (2.0,), stop_errors=30, max_frames=rec.frames - 1, root_seed=3), 0)
    assert short.bit_errors < 30
    assert rec.ber == rec.bit_errors / (rec.frames * 11)


@pytest.mark.parametrize("decoder", ["sum_product", "stochastic"])
def test_csv_independent_of_batching_and_workers(decoder):
    base = dict(code="hamming16_11", decoder=decoder, ebn0_points=(2.0, 3.0), stop_errors=20, root_seed=5)
    a = emit_csv(run_sweep(SweepConfig(**base)))
    b = emit_csv(run_sweep(SweepConfig(**base)))
    c = emit_csv(run_sweep(SweepConfig(**base, workers=3, batch=7)))
    assert a == b == c


def test_stochastic_close_to_sum_product_at_long_packets():
    setup = code_setup("hamming16_11")
    frames = make_frames(setup, ChannelConfig(4.0, setup.rate), 21, 0, 0, 1000)
    sp, _ = FloodingDecoder(setup.graph).decode(frames.evidence)
    st = StochasticDecoder(setup.graph).run(frames.evidence, frames.decoder_seeds, l=2000).decisions
    assert (sp != st).any(axis=1).mean() <= 0.02


def test_csv_shapes():
    assert emit_csv([]) == ",".join(CSV_HEADER) + "\n"
    rec = BerRecord("hamming16_11", "stochastic", 3.0, 10, 5, 5 / 110, 250, 1, None, 7)
    lines = emit_csv([rec]).splitlines()
    assert len(lines) == 2
    assert lines[1] == "hamming16_11,stochastic,3.0,10,5,0.045454545454545456,250,1,,7"


def test_asymptote_csv():
    lines = emit_asymptote("hamming16_11", [3.0, 4.0, 5.0]).splitlines()
    assert lines[0] == "ebn0_db,ber_asymptote"
    values = [float(x.split(",")[1]) for x in lines[1:]]
    assert values[0] > values[1] > values[2]
    with pytest.raises(ConfigInvalid):
        emit_asymptote("product256_121", [3.0])


def test_resolved_defaults():
    h = SweepConfig("hamming16_11", "stochastic", (1.0,)).resolved()
    assert (h.l, h.iterations, h.mode) == (250, 1, "accumulation")
    p = SweepConfig("product256_121", "stochastic", (1.0,)).resolved()
    assert (p.l, p.iterations, p.mode) == (250, 8, "accumulation")
    r = SweepConfig("hamming16_11", "sum_product", (1.0,)).resolved()
    assert r.iterations == code_setup("hamming16_11").graph.diameter + 1


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(code="golay"),
        dict(decoder="min_sum"),
        dict(ebn0_points=()),
        dict(stop_errors=0),
        dict(max_frames=0),
        dict(l=0),
        dict(mode="sometimes"),
        dict(decoder="relaxation", beta=1.0),
        dict(root_seed=-1),
    ],
)
def test_invalid_configs(kwargs):
    base = dict(code="hamming16_11", decoder="stochastic", ebn0_points=(3.0,))
    base.update(kwargs)
    with pytest.raises(ConfigInvalid):
        SweepConfig(**base)
