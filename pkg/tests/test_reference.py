import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import FOUR_SYMBOL_ROWS
from oracles import chain_elimination, eq2_by_rows, explicit_marginals, nullspace_codebook
from stochdec.codes import build_hamming_graph, encode, hamming16_11
from stochdec.errors import BetaOutOfRange, CodebookTooLarge
from stochdec.graph import ConstraintGraph, ConstraintNode, Endpoint, SatisfactionTable, VariableNode
from stochdec.reference import (
    FloodingDecoder,
    brute_force_map,
    decode,
    relaxation_update,
    sum_product_update,
)


def test_sum_product_uniform(four_symbol):
    np.testing.assert_allclose(sum_product_update(four_symbol, "C", [0.25] * 4, [0.25] * 4), [0.25] * 4)


def test_sum_product_four_symbol_example(four_symbol):
    out = sum_product_update(four_symbol, "C", [0.7, 0.1, 0.1, 0.1], [0.25] * 4)
    np.testing.assert_allclose(out, [0.4, 0.4, 0.1, 0.1], atol=1e-12)


def test_sum_product_equality_identity():
    eq = SatisfactionTable.equality(2, 3)
    np.testing.assert_allclose(sum_product_update(eq, "C", [0.8, 0.2], [0.5, 0.5]), [0.8, 0.2])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_sum_product_matches_longhand(out, seed):
    rng = np.random.default_rng(seed)
    p, q = rng.dirichlet(np.ones(4), 2)
    four_symbol = SatisfactionTable((4, 4, 4), FOUR_SYMBOL_ROWS)
    np.testing.assert_allclose(sum_product_update(four_symbol, out, p, q, eps=0.0), eq2_by_rows(FOUR_SYMBOL_ROWS, out, p, q))


def test_relaxation_examples():
    np.testing.assert_allclose(relaxation_update([0.5, 0.5], [0.9, 0.1], 0.5), [0.7, 0.3])
    prev = np.array([0.3, 0.7])
    np.testing.assert_allclose(relaxation_update(prev, prev, 0.37), prev)
    beta = 1e-6
    out = relaxation_update([0.25, 0.75], [0.75, 0.25], beta)
    assert np.abs(out - [0.25, 0.75]).max() <= beta * 0.5 + 1e-15


@pytest.mark.parametrize("beta", [0.0, 1.0, -0.1, 1.5])
def test_relaxation_beta_range(beta):
    with pytest.raises(BetaOutOfRange):
        relaxation_update([0.5, 0.5], [0.9, 0.1], beta)


def two_node_chain(four_symbol):
    variables = [VariableNode(f"x{i}", 4, True) for i in range(4)] + [VariableNode("s", 4)]
    constraints = [ConstraintNode("t1", four_symbol), ConstraintNode("t2", four_symbol)]
    edges = [
        (Endpoint("x0", 0), Endpoint("t1", 0)),
        (Endpoint("x1", 0), Endpoint("t1", 1)),
        (Endpoint("t1", 2), Endpoint("s", 0)),
        (Endpoint("s", 1), Endpoint("t2", 0)),
        (Endpoint("x2", 0), Endpoint("t2", 1)),
        (Endpoint("x3", 0), Endpoint("t2", 2)),
    ]
    return ConstraintGraph(tuple(variables), tuple(constraints), tuple(edges))


def test_two_node_chain_matches_elimination(four_symbol, rng):
    g = two_node_chain(four_symbol)
    ev = rng.dirichlet(np.ones(4), 4)
    _, marg = decode(g, list(ev), iterations=2)
    expected = chain_elimination(FOUR_SYMBOL_ROWS, FOUR_SYMBOL_ROWS, *ev)
    np.testing.assert_allclose(marg, np.array(expected), atol=1e-9)


def test_single_node_reaches_fixed_point_in_one_iteration(four_symbol, rng):
    g = ConstraintGraph(
        tuple(VariableNode(f"x{i}", 4, True) for i in range(3)),
        (ConstraintNode("t", four_symbol),),
        tuple((Endpoint(f"x{i}", 0), Endpoint("t", i)) for i in range(3)),
    )
    dec = FloodingDecoder(g)
    s1 = dec.iterate(dec.init_state(list(rng.dirichlet(np.ones(4), 3))))
    s2 = dec.iterate(s1)
    np.testing.assert_array_equal(s1.messages, s2.messages)


def hamming_evidence(rng, frames):
    p0 = rng.uniform(0.02, 0.98, size=(frames, 16))
    return np.stack([p0, 1 - p0], axis=-1)


def test_hamming_marginals_equal_exhaustive_sum(rng):
    g = build_hamming_graph()
    codebook = nullspace_codebook(hamming16_11().parity_check)
    ev = hamming_evidence(rng, 10)
    _, marg = FloodingDecoder(g).decode(ev)
    for f in range(10):
        np.testing.assert_allclose(marg[f], explicit_marginals(codebook, ev[f]), atol=1e-9)


def test_hamming_decisions_equal_brute_force(rng):
    g = build_hamming_graph()
    code = hamming16_11()
    ev = hamming_evidence(rng, 100)
    dec, _ = FloodingDecoder(g).decode(ev)
    for f in range(100):
        assert np.array_equal(dec[f], brute_force_map(code.codebook, ev[f]).argmax(axis=1))


def test_noiseless_decoding(rng):
    g = build_hamming_graph()
    cw = encode(hamming16_11(), rng.integers(0, 2, 11)).astype(int)
    ev = np.where(cw[:, None] == np.arange(2), 1.0, 0.0)
    dec, _ = decode(g, list(ev))
    assert np.array_equal(dec, cw)


def test_relaxation_converges_to_sum_product(rng):
    g = build_hamming_graph()
    ev = hamming_evidence(rng, 5)
    dec = FloodingDecoder(g)
    _, sp = dec.decode(ev)
    _, rx = dec.decode(ev, "relaxation", iterations=60, beta=0.99)
    np.testing.assert_allclose(rx, sp, atol=1e-6)


def test_decode_rejects_bad_rule_and_beta(rng):
    g = build_hamming_graph()
    dec = FloodingDecoder(g)
    with pytest.raises(ValueError):
        dec.decode(hamming_evidence(rng, 1), "min_sum")
    with pytest.raises(BetaOutOfRange):
        dec.decode(hamming_evidence(rng, 1), "relaxation", beta=1.0)


def test_brute_force_small_codebooks():
    cb = np.array([[0, 0], [1, 1]])
    np.testing.assert_allclose(brute_force_map(cb, np.full((2, 2), 0.5)), np.full((2, 2), 0.5))
    np.testing.assert_allclose(brute_force_map(cb, [[0.9, 0.1], [0.5, 0.5]])[1], [0.9, 0.1])


def test_brute_force_limit():
    with pytest.raises(CodebookTooLarge):
        brute_force_map(np.zeros((5, 2), dtype=int), np.full((2, 2), 0.5), limit=4)
