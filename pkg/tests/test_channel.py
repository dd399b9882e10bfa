import numpy as np
import pytest
from hypothesis import given, strategies as st

from stochdec.channel import ChannelConfig, modulate, to_evidence, transmit
from stochdec.codes import qfunc
from stochdec.mass import EPS


def test_sigma_formula():
    cfg = ChannelConfig(3.0, 11 / 16)
    assert cfg.noise_sigma**2 == pytest.approx(1 / (2 * 11 / 16 * 10**0.3))
    with pytest.raises(ValueError):
        ChannelConfig(3.0, 0.0)
    with pytest.raises(ValueError):
        ChannelConfig(3.0, 1.5)


def test_mapping():
    assert modulate([0, 1, 1, 0]).tolist() == [1.0, -1.0, -1.0, 1.0]
    assert modulate(np.array([1], dtype=np.uint8)).tolist() == [-1.0]
    with pytest.raises(ValueError):
        modulate([2])


def test_noiseless_limit():
    y = transmit([0, 1, 0], ChannelConfig(300.0, 0.5), seed=1)
    np.testing.assert_allclose(y, [1, -1, 1], atol=1e-12)


def test_noise_variance():
    cfg = ChannelConfig(2.0, 0.5)
    bits = np.zeros(10**6, dtype=int)
    bits[::2] = 1
    y = transmit(bits, cfg, seed=7)
    var = np.var(y - modulate(bits))
    assert abs(var / cfg.noise_sigma**2 - 1) < 0.01


def test_determinism():
    cfg = ChannelConfig(4.0, 0.5)
    assert np.array_equal(transmit([0] * 8, cfg, 3), transmit([0] * 8, cfg, 3))
    assert not np.array_equal(transmit([0] * 8, cfg, 3), transmit([0] * 8, cfg, 4))


def test_evidence_values():
    cfg = ChannelConfig(1.0, 0.5)
    np.testing.assert_allclose(to_evidence(0.0, cfg), [0.5, 0.5])
    np.testing.assert_allclose(to_evidence(1e6, cfg), [1 - EPS, EPS])
    s2 = cfg.noise_sigma**2
    assert to_evidence(s2 / 2, cfg)[0] == pytest.approx(0.7310585786300049, abs=1e-12)


@given(st.floats(-50, 50), st.floats(-2, 8))
def test_channel_symmetry(y, ebn0):
    cfg = ChannelConfig(ebn0, 0.5)
    np.testing.assert_allclose(to_evidence(-y, cfg), to_evidence(y, cfg)[::-1], atol=1e-15)


def test_high_snr_hard_decisions():
    cfg = ChannelConfig(8.0, 11 / 16)
    y = transmit(np.zeros(10**5, dtype=int), cfg, seed=5)
    err = (to_evidence(y, cfg).argmax(axis=-1) != 0).mean()
    assert err < qfunc(1 / cfg.noise_sigma) + 1e-3
