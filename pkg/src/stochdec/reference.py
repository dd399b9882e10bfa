"""Exact message passing: sum-product and successive relaxation under flooding.

The compiled :class:`FloodingDecoder` works on a batch of frames at once.
Messages live in a padded array of shape ``(frames, ports, q_max)`` where a
port is one slot of one constraint node and the stored mass is the message
the node sends out of that slot.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BetaOutOfRange, CodebookTooLarge, DegenerateMass
from .graph import INPUT_ROLES, ConstraintGraph, SatisfactionTable, role_index
from .mass import EPS, as_mass, clamp


def sum_product_update(
    table: SatisfactionTable, out_role, in1, in2, eps: float = EPS
) -> np.ndarray:
    """Normalized sum-product message for ``out_role`` given the two other roles' masses.

    ``in1`` and ``in2`` belong to the input roles in A, B, C order (for output
    C they are the A and B masses; for output A, the B and C masses).
    """
    out = role_index(out_role)
    i, j = INPUT_ROLES[out]
    in1 = np.asarray(in1, dtype=float)
    in2 = np.asarray(in2, dtype=float)
    if in1.shape != (table.sizes[i],) or in2.shape != (table.sizes[j],):
        raise ValueError("input masses do not match the table's alphabets")
    rows = table.array
    acc = np.zeros(table.sizes[out])
    np.add.at(acc, rows[:, out], in1[rows[:, i]] * in2[rows[:, j]])
    if acc.sum() <= 0:
        raise DegenerateMass("no satisfying input combination has positive probability")
    return clamp(acc, eps)


def relaxation_update(prev, nu, beta: float) -> np.ndarray:
    """``prev + beta * (nu - prev)`` for ``0 < beta < 1``."""
    if not 0.0 < beta < 1.0:
        raise BetaOutOfRange(f"relaxation parameter must lie in (0, 1), got {beta}")
    prev = np.asarray(prev, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if prev.shape != nu.shape:
        raise ValueError("masses are over different alphabets")
    return prev + beta * (nu - prev)


@dataclass
class MessageState:
    """Outgoing message of every constraint slot plus the fixed channel evidence.

    ``messages`` has shape ``(frames, ports, q_max)``; ``iteration`` counts
    completed flooding iterations.
    """

    messages: np.ndarray
    evidence: np.ndarray
    iteration: int = 0


class _TableGroup:
    """Constraint nodes sharing one satisfaction table."""

    def __init__(self, table: SatisfactionTable, nodes: list[int], qmax: int):
        self.table = table
        self.nodes = np.asarray(nodes)
        rows = table.array
        self.rows = rows
        self.onehot = []
        for r in range(3):
            m = np.zeros((len(rows), qmax))
            m[np.arange(len(rows)), rows[:, r]] = 1.0
            self.onehot.append(m)


class FloodingDecoder:
    """Sum-product / relaxation decoder compiled for one constraint graph."""

    def __init__(self, graph: ConstraintGraph, eps: float = EPS):
        self.graph = graph
        self.eps = eps
        cons = graph.constraints
        self.cindex = {c.id: k for k, c in enumerate(cons)}
        self.n_ports = 3 * len(cons)
        obs = graph.observables
        self.obs_index = {v.id: k for k, v in enumerate(obs)}
        sizes = [s for c in cons for s in c.table.sizes] + [v.size for v in graph.variables]
        self.qmax = max(sizes)
        self.obs_sizes = np.array([v.size for v in obs], dtype=int)

        # extra sources appended after the ports: observables, uniform leaves, constant
        leaves: dict[str, int] = {}
        in_index = np.empty(self.n_ports, dtype=np.int64)
        n_obs = len(obs)
        const_index = None
        for c in cons:
            for slot in range(3):
                src = graph.port_source(c.id, slot)
                p = 3 * self.cindex[c.id] + slot
                if src.kind == "port":
                    in_index[p] = 3 * self.cindex[src.node] + src.slot
                elif src.kind == "observable":
                    in_index[p] = self.n_ports + self.obs_index[src.node]
                elif src.kind == "leaf":
                    leaves.setdefault(src.node, len(leaves))
                    in_index[p] = self.n_ports + n_obs + leaves[src.node]
                else:
                    const_index = -1
                    in_index[p] = -1
        self.leaf_sizes = [graph.nodes[v].size for v in leaves]
        self.has_const = const_index is not None
        n_ext = n_obs + len(leaves) + (1 if const_index is not None else 0)
        in_index[in_index == -1] = self.n_ports + n_ext - 1
        self.in_index = in_index
        self.n_ext = n_ext
        self.n_obs = n_obs
        self.obs_port = np.array(
            [
                3 * self.cindex[s.node] + s.slot
                for s in (graph.variable_source(v.id) for v in obs)
            ],
            dtype=np.int64,
        )
        groups: dict[SatisfactionTable, list[int]] = {}
        for k, c in enumerate(cons):
            groups.setdefault(c.table, []).append(k)
        self.groups = [_TableGroup(t, nodes, self.qmax) for t, nodes in groups.items()]

    # -- state -------------------------------------------------------------

    def evidence_array(self, evidence) -> np.ndarray:
        """Coerce evidence to ``(frames, observables, q_max)``.

        Accepts a mapping ``{var_id: mass}``, a sequence of masses in
        observable order, or an array already shaped per frame.
        """
        if isinstance(evidence, dict):
            evidence = [evidence[v.id] for v in self.graph.observables]
        if isinstance(evidence, np.ndarray) and evidence.ndim == 3:
            ev = np.zeros((evidence.shape[0], self.n_obs, self.qmax))
            ev[..., : evidence.shape[2]] = evidence
            return ev
        ev = np.zeros((1, self.n_obs, self.qmax))
        for k, m in enumerate(evidence):
            m = as_mass(m, self.eps)
            if m.size != self.obs_sizes[k]:
                raise ValueError(f"evidence {k} has {m.size} symbols, expected {self.obs_sizes[k]}")
            ev[0, k, : m.size] = m
        return ev

    def _external(self, evidence: np.ndarray) -> np.ndarray:
        frames = evidence.shape[0]
        ext = np.zeros((frames, self.n_ext, self.qmax))
        ext[:, : self.n_obs] = evidence
        for k, q in enumerate(self.leaf_sizes):
            ext[:, self.n_obs + k, :q] = 1.0 / q
        if self.has_const:
            ext[:, -1, 0] = 1.0
        return ext

    def init_state(self, evidence) -> MessageState:
        ev = self.evidence_array(evidence)
        msgs = np.zeros((ev.shape[0], self.n_ports, self.qmax))
        for g in self.groups:
            for r, q in enumerate(g.table.sizes):
                msgs[:, 3 * g.nodes + r, :q] = 1.0 / q
        return MessageState(msgs, ev, 0)

    # -- iteration ---------------------------------------------------------

    def iterate(self, state: MessageState, rule: str = "sum_product", beta: float = 0.5) -> MessageState:
        """One flooding iteration: every node reads the old buffer, all writes land together."""
        if rule not in ("sum_product", "relaxation"):
            raise ValueError(f"unknown update rule {rule!r}")
        if rule == "relaxation" and not 0.0 < beta < 1.0:
            raise BetaOutOfRange(f"relaxation parameter must lie in (0, 1), got {beta}")
        old = state.messages
        combined = np.concatenate([old, self._external(state.evidence)], axis=1)
        incoming = combined[:, self.in_index]
        new = np.empty_like(old)
        for g in self.groups:
            for out in range(3):
                i, j = INPUT_ROLES[out]
                a = incoming[:, 3 * g.nodes + i][..., g.rows[:, i]]
                b = incoming[:, 3 * g.nodes + j][..., g.rows[:, j]]
                acc = (a * b) @ g.onehot[out]
                q = g.table.sizes[out]
                nu = clamp(acc[..., :q], self.eps)
                ports = 3 * g.nodes + out
                new[:, ports] = 0.0
                if rule == "relaxation" and state.iteration > 0:
                    new[:, ports, :q] = old[:, ports, :q] + beta * (nu - old[:, ports, :q])
                else:
                    new[:, ports, :q] = nu
        return MessageState(new, state.evidence, state.iteration + 1)

    def marginals(self, state: MessageState) -> np.ndarray:
        """Evidence times incoming message at each observable, normalized (not clamped)."""
        prod = state.evidence * state.messages[:, self.obs_port]
        total = prod.sum(axis=-1, keepdims=True)
        if np.any(total <= 0):
            raise DegenerateMass("marginal normalizer is zero")
        return prod / total

    def decode(self, evidence, rule: str = "sum_product", iterations: int | None = None, beta: float = 0.5):
        """Run ``iterations`` flooding iterations; return ``(decisions, marginals)``.

        Shapes are ``(frames, observables)`` and ``(frames, observables, q)``
        where ``q`` is the largest observable alphabet.  Ties in the hard
        decision go to the lowest symbol.
        """
        if iterations is None:
            iterations = self.graph.diameter + 1
        if iterations < 1:
            raise ValueError("iterations must be at least 1")
        state = self.init_state(evidence)
        for _ in range(iterations):
            state = self.iterate(state, rule, beta)
        marg = self.marginals(state)[..., : self.obs_sizes.max()]
        return np.argmax(marg, axis=-1), marg


@lru_cache(maxsize=16)
def compiled(graph: ConstraintGraph, eps: float = EPS) -> FloodingDecoder:
    return FloodingDecoder(graph, eps)


def flood_iteration(graph: ConstraintGraph, state: MessageState, rule: str = "sum_product", beta: float = 0.5) -> MessageState:
    return compiled(graph).iterate(state, rule, beta)


def decode(graph: ConstraintGraph, evidence, rule: str = "sum_product", iterations: int | None = None, beta: float = 0.5):
    """Decode one frame.  Returns ``(decisions, marginals)`` in observable order."""
    decisions, marg = compiled(graph).decode(evidence, rule, iterations, beta)
    return decisions[0], marg[0]


def brute_force_map(codebook, evidence, limit: int = 2**16) -> np.ndarray:
    """Exact bitwise a-posteriori marginals by enumerating every codeword.

    ``codebook`` is ``(N, n)`` with symbols as integers, ``evidence`` is
    ``(n, q)``.  Returns ``(n, q)`` marginals.
    """
    codebook = np.asarray(codebook, dtype=np.int64)
    if codebook.shape[0] > limit:
        raise CodebookTooLarge(f"{codebook.shape[0]} codewords exceed the enumeration limit {limit}")
    evidence = np.asarray(evidence, dtype=float)
    n, q = evidence.shape
    if codebook.shape[1] != n:
        raise ValueError("evidence length differs from the code length")
    with np.errstate(divide="ignore"):
        logs = np.log(evidence)
    loglik = logs[np.arange(n), codebook].sum(axis=1)
    weights = np.exp(loglik - loglik.max())
    marg = np.zeros((n, q))
    for s in range(q):
        marg[:, s] = ((codebook == s) * weights[:, None]).sum(axis=0)
    return marg / marg.sum(axis=1, keepdims=True)
