"""Stochastic message passing on constraint graphs.

Messages are integer symbol streams.  A constraint node emits, on each
output slot, ``f(a, b)`` when the two input symbols are in its satisfaction
set and otherwise repeats its previous output (the hold rule).  Variables
emit random symbols drawn from their channel mass.  Cycles are broken by
supernodes, which tabulate incoming symbols for ``l`` steps (one packet),
estimate masses from the counts and regenerate fresh, independent streams.

The whole-graph engine lives in :class:`StochasticDecoder`; the small
classes and functions above it model single nodes and are what the engine is
tested against.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numba as nb
import numpy as np

from .errors import EmptyHistogram, IncompletePacket, UncoveredCycle
from .graph import (
    INPUT_ROLES,
    ConstraintGraph,
    ConstraintNode,
    Endpoint,
    SatisfactionTable,
    VariableNode,
    detect_cycles,
    role_index,
)
from .mass import EPS, as_mass, clamp
from .rng import TWO53, draw53, key_for, pick, stream_key, thresholds

REPLACEMENT = "replacement"
ACCUMULATION = "accumulation"


# ---------------------------------------------------------------------------
# single-node models


@dataclass(frozen=True)
class StochasticNodeState:
    """Held output symbol per slot (the register read by the hold rule)."""

    held: tuple[int, int, int] = (0, 0, 0)


def node_step(table: SatisfactionTable, out_role, a: int, b: int, state: StochasticNodeState):
    """Apply the hold rule for one output slot.

    ``a`` and ``b`` are the symbols on the two input roles (A, B, C order).
    Returns ``(symbol, new_state)``.
    """
    out = role_index(out_role)
    i, j = INPUT_ROLES[out]
    if not (0 <= a < table.sizes[i] and 0 <= b < table.sizes[j]):
        raise ValueError("input symbol outside its alphabet")
    sym = int(_luts(table)[out][a, b])
    if sym < 0:
        return state.held[out], state
    held = list(state.held)
    held[out] = sym
    return sym, StochasticNodeState(tuple(held))


_LUT_CACHE: dict[SatisfactionTable, tuple] = {}


def _luts(table: SatisfactionTable):
    if table not in _LUT_CACHE:
        _LUT_CACHE[table] = tuple(table.lookup(r) for r in range(3))
    return _LUT_CACHE[table]


class StreamSource:
    """Emits symbols with a fixed mass from a counter-based stream."""

    def __init__(self, mass, seed: int = 0, stream: int = 0, eps: float = EPS):
        self.key = key_for(seed, stream)
        self.counter = 0
        self.set_mass(mass, eps)

    def set_mass(self, mass, eps: float = EPS):
        self.mass = as_mass(mass, eps)
        self._thr = np.zeros(max(self.mass.size - 1, 1), dtype=np.uint64)
        thresholds(self.mass, self._thr)

    def draw(self) -> int:
        u = draw53(self.key, np.uint64(self.counter))
        self.counter += 1
        return int(pick(u, self._thr, self.mass.size))

    def draws(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.int64)
        _draw_block(self.key, np.uint64(self.counter), self._thr, self.mass.size, out)
        self.counter += n
        return out


@nb.njit(cache=True)
def _draw_block(key, start, thr, q, out):
    for t in range(out.shape[0]):
        out[t] = pick(draw53(key, start + np.uint64(t)), thr, q)


def source_step(source: StreamSource) -> int:
    return source.draw()


@dataclass
class Histogram:
    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64).copy()

    @classmethod
    def empty(cls, q: int) -> "Histogram":
        return cls(np.zeros(q, dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def add(self, symbol: int, count: int = 1):
        self.counts[symbol] += count

    def clear(self):
        self.counts[:] = 0


def marginal_decide(counts, evidence) -> np.ndarray:
    """Hard decisions from arrival histograms and channel evidence.

    The incoming message is estimated from the counts with half a count
    added per symbol, so a variable that received nothing falls back to its
    channel decision.  Ties go to the lowest symbol.
    """
    counts = np.asarray(counts, dtype=float)
    evidence = np.asarray(evidence, dtype=float)
    q = min(counts.shape[-1], evidence.shape[-1])
    score = evidence[..., :q] * (counts[..., :q] + 0.5)
    return np.argmax(score, axis=-1)


def histogram_decide(h) -> int:
    """Symbol with the largest count; ties go to the lowest symbol."""
    counts = h.counts if isinstance(h, Histogram) else np.asarray(h)
    if counts.sum() < 1:
        raise EmptyHistogram("cannot decide from an empty histogram")
    return int(np.argmax(counts))


@dataclass
class Supernode:
    """Packetized regenerator for one stream.

    Incoming symbols are tabulated in ``packet``.  Once ``l`` symbols have
    arrived, :meth:`update` re-estimates the mass, either from the packet
    alone (replacement) or from all packets so far (accumulation), and the
    outgoing stream switches to the new mass.
    """

    q: int
    l: int
    mode: str = ACCUMULATION
    seed: int = 0
    stream: int = 0
    eps: float = EPS
    packet: Histogram = field(init=False)
    accumulated: Histogram = field(init=False)
    estimate: np.ndarray = field(init=False)
    m: int = field(init=False, default=0)

    def __post_init__(self):
        if self.mode not in (REPLACEMENT, ACCUMULATION):
            raise ValueError(f"unknown supernode mode {self.mode!r}")
        if self.l < 1:
            raise ValueError("packet length must be positive")
        self.packet = Histogram.empty(self.q)
        self.accumulated = Histogram.empty(self.q)
        self.estimate = np.full(self.q, 1.0 / self.q)
        self.source = StreamSource(self.estimate, self.seed, self.stream, self.eps)

    @property
    def current_mass(self) -> np.ndarray:
        return self.source.mass

    def observe(self, symbol: int):
        self.packet.add(symbol)

    def emit(self) -> int:
        return self.source.draw()

    def update(self) -> "Supernode":
        if self.packet.total != self.l:
            raise IncompletePacket(f"packet holds {self.packet.total} of {self.l} symbols")
        self.m += 1
        if self.mode == REPLACEMENT:
            self.estimate = self.packet.counts / self.l
        else:
            self.accumulated.counts += self.packet.counts
            self.estimate = self.accumulated.counts / (self.m * self.l)
        self.packet.clear()
        self.source.set_mass(self.estimate, self.eps)
        return self

    def exact_estimate(self) -> list[Fraction]:
        """Unclamped estimate in exact rational arithmetic."""
        if self.m == 0:
            return [Fraction(1, self.q)] * self.q
        if self.mode == REPLACEMENT:
            raise ValueError("exact accumulated estimate only exists in accumulation mode")
        return [Fraction(int(c), self.m * self.l) for c in self.accumulated.counts]


def supernode_packet_update(s: Supernode) -> Supernode:
    return s.update()


def equality_supernode_update(estimates: Sequence, channel, eps: float = EPS) -> list[np.ndarray]:
    """Outgoing masses of an equality supernode.

    Each outgoing mass is the normalized product of the channel mass and the
    estimates of all *other* incoming edges.  ``estimates`` may hold masses or
    :class:`Supernode` objects (their current mass is used).
    """
    ests = [np.asarray(e.current_mass if isinstance(e, Supernode) else e, dtype=float) for e in estimates]
    channel = np.asarray(channel, dtype=float)
    out = []
    for k in range(len(ests)):
        prod = channel.copy()
        for j, e in enumerate(ests):
            if j != k:
                prod = prod * e
        out.append(clamp(prod, eps))
    return out


# ---------------------------------------------------------------------------
# whole-graph engine


@nb.njit(cache=True)
def _clamp_inplace(v, q, eps):
    s = 0.0
    for k in range(q):
        s += v[k]
    for k in range(q):
        v[k] /= s
    if q > 1 and eps > 0.0:
        s = 0.0
        for k in range(q):
            if v[k] < eps:
                v[k] = eps
            elif v[k] > 1.0 - eps:
                v[k] = 1.0 - eps
            s += v[k]
        for k in range(q):
            v[k] /= s


@nb.njit(cache=True)
def _supernode_emit(n, est, rows, sn_off, sn_len, sn_sizes, sn_out_src, thr, eps, nu):
    for s in range(3):
        src = sn_out_src[n, s]
        if src < 0:
            continue
        if s == 0:
            i, j = 1, 2
        elif s == 1:
            i, j = 0, 2
        else:
            i, j = 0, 1
        q = sn_sizes[n, s]
        for k in range(q):
            nu[k] = 0.0
        for r in range(sn_off[n], sn_off[n] + sn_len[n]):
            nu[rows[r, s]] += est[n, i, rows[r, i]] * est[n, j, rows[r, j]]
        _clamp_inplace(nu, q, eps)
        thresholds(nu[:q], thr[src])


@nb.njit(cache=True, nogil=True)
def _engine(
    seeds, ev, n_emit, const_emit,
    hp_emit, hp_in1, hp_in2, hp_off, hp_stride, hp_q, hp_stream, lut,
    src_emit, src_stream, src_q, src_obs,
    sn_off, sn_len, rows, sn_sizes, sn_in, sn_exact, sn_out_src,
    obs_in,
    l, iterations, accumulate, eps, init_held, warmup,
    trace_emit, trace_out, counts_out, est_out,
):
    fresh = np.ones(n_emit, dtype=np.bool_)
    n_frames = seeds.shape[0]
    n_src = src_emit.shape[0]
    n_hp = hp_emit.shape[0]
    n_sn = sn_sizes.shape[0]
    n_obs = obs_in.shape[0]
    qmax = counts_out.shape[2]
    n_trace = trace_emit.shape[0]
    total_steps = l * iterations
    cur = np.zeros(n_emit, dtype=np.int64)
    prev = np.zeros(n_emit, dtype=np.int64)
    keys = np.zeros(n_src, dtype=np.uint64)
    thr = np.zeros((n_src, max(qmax - 1, 1)), dtype=np.uint64)
    est = np.zeros((n_sn, 3, qmax))
    pk = np.zeros((n_sn, 3, qmax), dtype=np.int64)
    acc = np.zeros((n_sn, 3, qmax), dtype=np.int64)
    nu = np.zeros(qmax)
    uni = np.zeros(qmax)

    for f in range(n_frames):
        seed = seeds[f]
        cur[:] = 0
        pk[:] = 0
        acc[:] = 0
        for i in range(n_src):
            keys[i] = stream_key(seed, src_stream[i])
            q = src_q[i]
            o = src_obs[i]
            if o >= 0:
                thresholds(ev[f, o, :q], thr[i])
            elif o == -2:
                for k in range(q):
                    uni[k] = 1.0 / q
                thresholds(uni[:q], thr[i])
        for n in range(n_sn):
            for s in range(3):
                q = sn_sizes[n, s]
                est[n, s, :] = 0.0
                if sn_exact[n, s] >= 0:
                    for k in range(q):
                        est[n, s, k] = ev[f, sn_exact[n, s], k]
                else:
                    for k in range(q):
                        est[n, s, k] = 1.0 / q
            _supernode_emit(n, est, rows, sn_off, sn_len, sn_sizes, sn_out_src, thr, eps, nu)

        # t = 0: random held registers, first source draws
        for h in range(n_hp):
            e = hp_emit[h]
            if init_held[e] >= 0:
                cur[e] = init_held[e]
            else:
                u = draw53(stream_key(seed, hp_stream[h]), np.uint64(0))
                cur[e] = int(u * (hp_q[h] / TWO53))
        for i in range(n_src):
            cur[src_emit[i]] = pick(draw53(keys[i], np.uint64(0)), thr[i], src_q[i])
        cur[const_emit] = 0
        if n_trace > 0:
            for k in range(n_trace):
                trace_out[f, 0, k] = cur[trace_emit[k]]

        m = 0
        for t in range(1, total_steps + 1):
            prev[:] = cur
            for h in range(n_hp):
                e = hp_emit[h]
                sym = lut[hp_off[h] + prev[hp_in1[h]] * hp_stride[h] + prev[hp_in2[h]]]
                if sym >= 0:
                    cur[e] = sym
                    fresh[e] = True
                else:
                    fresh[e] = False
            for i in range(n_src):
                cur[src_emit[i]] = pick(draw53(keys[i], np.uint64(t)), thr[i], src_q[i])
            for n in range(n_sn):
                for s in range(3):
                    if sn_in[n, s] >= 0 and sn_exact[n, s] < 0 and sn_sizes[n, s] > 1:
                        pk[n, s, cur[sn_in[n, s]]] += 1
            if t > warmup:
                # tabulate only symbols the sending node actually produced this step
                for v in range(n_obs):
                    e = obs_in[v]
                    if fresh[e]:
                        counts_out[f, v, cur[e]] += 1
            if n_trace > 0:
                for k in range(n_trace):
                    trace_out[f, t, k] = cur[trace_emit[k]]
            if t % l == 0:
                m += 1
                for n in range(n_sn):
                    for s in range(3):
                        q = sn_sizes[n, s]
                        if sn_exact[n, s] >= 0 or q == 1 or sn_in[n, s] < 0:
                            continue
                        if accumulate:
                            for k in range(q):
                                acc[n, s, k] += pk[n, s, k]
                                est[n, s, k] = acc[n, s, k] / (m * l)
                        else:
                            for k in range(q):
                                est[n, s, k] = pk[n, s, k] / l
                        _clamp_inplace(est[n, s], q, eps)
                        for k in range(q):
                            pk[n, s, k] = 0
                    _supernode_emit(n, est, rows, sn_off, sn_len, sn_sizes, sn_out_src, thr, eps, nu)
        est_out[f] = est


@dataclass
class StochasticResult:
    """Output of a batched run.

    ``decisions`` is ``(frames, observables)``, ``histograms`` the decision
    counts ``(frames, observables, q_max)``; ``estimates`` holds each
    supernode's final per-slot mass estimate ``(frames, supernodes, 3, q_max)``;
    ``trace`` is ``(frames, steps + 1, traced)`` when tracing was requested.
    """

    decisions: np.ndarray
    histograms: np.ndarray
    estimates: np.ndarray
    trace: np.ndarray | None = None


class StochasticDecoder:
    """Stochastic decoder compiled for one constraint graph.

    Edges flagged as supernode edges that do not touch a supernode constraint
    get a two-slot relay supernode spliced in, one per flagged connection.
    """

    def __init__(self, graph: ConstraintGraph, eps: float = EPS, allow_cycles: bool = False):
        if not allow_cycles:
            cycles = detect_cycles(graph)
            if cycles:
                raise UncoveredCycle(cycles[0])
        self.graph = graph
        self.eps = eps
        self._compile()

    # -- compilation -------------------------------------------------------

    def _compile(self):
        g = self.graph
        cons = list(g.constraints)
        cidx = {c.id: k for k, c in enumerate(cons)}
        n_real = len(cons)
        obs = list(g.observables)
        oidx = {v.id: k for k, v in enumerate(obs)}
        flagged = g.supernode_edges

        # terminals: ("c", k, s) constraint slot, ("v", j) observable
        relays: dict[frozenset, int] = {}
        relay_faces: list[tuple] = []  # (terminal facing slot 0, terminal facing slot 1)
        links: dict[tuple, tuple] = {}  # terminal -> ("port"/"obs"/"leaf"/"const", ...)
        leaves: dict[str, int] = {}
        for k, c in enumerate(cons):
            for s in range(3):
                src = g.port_source(c.id, s)
                here = ("c", k, s)
                if src.kind == "const":
                    links[here] = ("const",)
                    continue
                if src.kind == "leaf":
                    leaves.setdefault(src.node, len(leaves))
                    links[here] = ("leaf", leaves[src.node])
                    continue
                there = ("v", oidx[src.node]) if src.kind == "observable" else ("c", cidx[src.node], src.slot)
                needs_relay = (
                    any(e in flagged for e in src.edges)
                    and not c.supernode
                    and not (src.kind == "port" and g.nodes[src.node].supernode)
                )
                if needs_relay:
                    pair = frozenset((here, there))
                    if pair not in relays:
                        relays[pair] = len(relay_faces)
                        relay_faces.append((here, there))
                    links[here] = ("relay", relays[pair])
                    if there[0] == "v":
                        links[there] = ("relay", relays[pair])
                else:
                    links[here] = there
                    if there[0] == "v":
                        links[there] = here

        n_nodes = n_real + len(relay_faces)
        tables = [c.table for c in cons]
        supers = [c.supernode for c in cons]
        streams = [4 * g.node_index[c.id] for c in cons]
        total_nodes = len(g.nodes)
        for r, (a, b) in enumerate(relay_faces):
            q = self._terminal_size(a, cons, obs)
            tables.append(SatisfactionTable.equality(q, degree=2))
            supers.append(True)
            streams.append(4 * (total_nodes + r))

        n_obs = len(obs)
        obs_emit0 = 3 * n_nodes
        leaf_emit0 = obs_emit0 + n_obs
        const_emit = leaf_emit0 + len(leaves)
        n_emit = const_emit + 1

        def emitter_of(term):
            if term[0] == "c":
                return 3 * term[1] + term[2]
            return obs_emit0 + term[1]

        def relay_output_toward(r, term):
            return 3 * (n_real + r) + (0 if relay_faces[r][0] == term else 1)

        in_emit = np.full((n_nodes, 3), const_emit, dtype=np.int64)
        exact = np.full((n_nodes, 3), -1, dtype=np.int64)
        obs_in = np.zeros(n_obs, dtype=np.int64)
        for here, link in links.items():
            if link[0] == "const":
                target = const_emit
            elif link[0] == "leaf":
                target = leaf_emit0 + link[1]
            elif link[0] == "relay":
                target = relay_output_toward(link[1], here)
            else:
                target = emitter_of(link)
            if here[0] == "c":
                in_emit[here[1], here[2]] = target
                if link[0] == "v":
                    exact[here[1], here[2]] = link[1]
            else:
                obs_in[here[1]] = target
        for r, (a, b) in enumerate(relay_faces):
            node = n_real + r
            in_emit[node, 0] = emitter_of(a)
            in_emit[node, 1] = emitter_of(b)
            if b[0] == "v":
                exact[node, 1] = b[1]

        qmax = max(max(t.sizes) for t in tables)
        qmax = max(qmax, max((v.size for v in g.variables), default=2))

        # hold-rule ports
        lut_parts, hp = [], []
        lut_off = 0
        lut_index: dict[tuple, int] = {}
        for k in range(n_nodes):
            if supers[k]:
                continue
            t = tables[k]
            for s in range(3):
                if t.sizes[s] == 1:
                    continue
                key = (id(t), s)
                if key not in lut_index:
                    lut_index[key] = lut_off
                    arr = t.lookup(s)
                    lut_parts.append(arr.ravel())
                    lut_off += arr.size
                i, j = INPUT_ROLES[s]
                hp.append((3 * k + s, in_emit[k, i], in_emit[k, j], lut_index[key], t.sizes[j], t.sizes[s], streams[k] + s))
        hp = np.array(hp, dtype=np.int64).reshape(-1, 7)
        self._lut = np.concatenate(lut_parts).astype(np.int64) if lut_parts else np.zeros(1, np.int64)
        self._hp = [np.ascontiguousarray(hp[:, c]) for c in range(7)]

        # sources: observables, leaves, supernode outputs
        src = []
        for j, v in enumerate(obs):
            src.append((obs_emit0 + j, 4 * g.node_index[v.id], v.size, j))
        for vid, j in leaves.items():
            src.append((leaf_emit0 + j, 4 * g.node_index[vid], g.nodes[vid].size, -2))
        sn_nodes = [k for k in range(n_nodes) if supers[k]]
        sn_out_src = np.full((len(sn_nodes), 3), -1, dtype=np.int64)
        for n, k in enumerate(sn_nodes):
            for s in range(3):
                if tables[k].sizes[s] > 1:
                    sn_out_src[n, s] = len(src)
                    src.append((3 * k + s, streams[k] + s, tables[k].sizes[s], -1))
        src = np.array(src, dtype=np.int64).reshape(-1, 4)
        self._src = [np.ascontiguousarray(src[:, c]) for c in range(4)]
        self._obs_in = obs_in

        rows, off, length, sizes = [], [], [], []
        for k in sn_nodes:
            off.append(len(rows))
            rows.extend(tables[k].rows)
            length.append(len(tables[k]))
            sizes.append(tables[k].sizes)
        self._sn = (
            np.array(off, dtype=np.int64),
            np.array(length, dtype=np.int64),
            np.array(rows, dtype=np.int64).reshape(-1, 3),
            np.array(sizes, dtype=np.int64).reshape(-1, 3),
            in_emit[sn_nodes].reshape(-1, 3).copy(),
            exact[sn_nodes].reshape(-1, 3).copy(),
            sn_out_src,
        )
        self.supernode_index = {
            (cons[k].id if k < n_real else f"relay{k - n_real}"): n for n, k in enumerate(sn_nodes)
        }
        self.n_emit = n_emit
        self.const_emit = const_emit
        self.qmax = qmax
        self.n_obs = n_obs
        self.obs_sizes = [v.size for v in obs]
        self._cidx = cidx
        self._in_emit = in_emit
        self._obs_emit0 = obs_emit0
        self._links = links
        self._relay_faces = relay_faces
        self._n_real = n_real

    @staticmethod
    def _terminal_size(term, cons, obs) -> int:
        if term[0] == "c":
            return cons[term[1]].table.sizes[term[2]]
        return obs[term[1]].size

    def emitter(self, node_id: str, slot: int) -> int:
        """Emitter index of the stream a constraint (or observable) sends out of ``slot``."""
        if node_id in self._cidx:
            return 3 * self._cidx[node_id] + slot
        obs_ids = [v.id for v in self.graph.observables]
        return self._obs_emit0 + obs_ids.index(node_id)

    def arriving(self, node_id: str, slot: int) -> int:
        """Emitter index of the stream arriving at a constraint slot."""
        return int(self._in_emit[self._cidx[node_id], slot])

    def edge_emitters(self, edge: int) -> tuple[int, int]:
        """Streams on an edge: (u -> v, v -> u)."""
        u, v = self.graph.edges[edge]
        out = []
        for a, b in ((u, v), (v, u)):
            if b.node in self._cidx:
                out.append(self.arriving(b.node, b.slot))
            elif a.node in self._cidx:
                out.append(self.emitter(a.node, a.slot))
            else:
                out.append(self.emitter(a.node, a.slot))
        return tuple(out)

    # -- running -----------------------------------------------------------

    def _evidence(self, evidence) -> np.ndarray:
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

    def run(
        self,
        evidence,
        seeds,
        l: int = 250,
        iterations: int = 1,
        mode: str = ACCUMULATION,
        init_held: dict | None = None,
        trace: Sequence[int] = (),
        warmup: int | None = None,
    ) -> StochasticResult:
        """Clock the graph for ``l * iterations`` steps for each frame.

        Observable variables tabulate the symbols that arrive at them, counting
        a step only when the sending node produced a new symbol (a held repeat
        is not counted) and only after the first ``warmup`` steps, which
        default to the graph diameter: until then the arriving streams still
        depend on the random initial registers.  Decisions combine the counts
        with the channel evidence (:func:`marginal_decide`).

        ``evidence`` is ``(frames, observables, q)`` (or one frame as a mapping or
        sequence of masses); ``seeds`` one integer per frame.  A single frame
        of evidence is shared by all seeds.  ``init_held`` maps
        emitter indices to initial held symbols (others start uniformly random).
        ``trace`` lists emitter indices to record at every step.
        """
        if mode not in (REPLACEMENT, ACCUMULATION):
            raise ValueError(f"unknown supernode mode {mode!r}")
        if l < 1 or iterations < 1:
            raise ValueError("packet length and iteration count must be positive")
        ev = self._evidence(evidence)
        seeds = np.atleast_1d(np.asarray(seeds, dtype=np.uint64))
        if ev.shape[0] == 1 and seeds.shape[0] > 1:
            ev = np.repeat(ev, seeds.shape[0], axis=0)
        if seeds.shape[0] != ev.shape[0]:
            raise ValueError("need one seed per frame")
        init = np.full(self.n_emit, -1, dtype=np.int64)
        for e, sym in (init_held or {}).items():
            init[e] = sym
        frames = ev.shape[0]
        if warmup is None:
            warmup = min(self.graph.diameter, l * iterations - 1)
        trace_emit = np.asarray(list(trace), dtype=np.int64)
        steps = l * iterations
        trace_out = np.zeros((frames if len(trace_emit) else 0, steps + 1, len(trace_emit)), dtype=np.int8)
        counts = np.zeros((frames, self.n_obs, self.qmax), dtype=np.int64)
        n_sn = self._sn[3].shape[0]
        est_out = np.zeros((frames, n_sn, 3, self.qmax))
        hp = self._hp
        src = self._src
        _engine(
            seeds, ev, self.n_emit, self.const_emit,
            hp[0], hp[1], hp[2], hp[3], hp[4], hp[5], hp[6].astype(np.uint64), self._lut,
            src[0], src[1].astype(np.uint64), src[2], src[3],
            *self._sn,
            self._obs_in,
            int(l), int(iterations), mode == ACCUMULATION, float(self.eps), init, int(warmup),
            trace_emit, trace_out, counts, est_out,
        )
        decisions = marginal_decide(counts, ev)
        return StochasticResult(decisions, counts, est_out, trace_out if len(trace_emit) else None)


def run_stochastic(
    graph: ConstraintGraph,
    evidence,
    l: int = 250,
    iterations: int = 1,
    mode: str = ACCUMULATION,
    seed: int = 0,
):
    """Decode one frame.  Returns ``(decisions, histograms)`` in observable order."""
    res = StochasticDecoder(graph).run(evidence, [seed], l, iterations, mode)
    return res.decisions[0], res.histograms[0]


def write_trace(fh, decoder: StochasticDecoder, result: StochasticResult, edges: Sequence[int], frame: int = 0):
    """Write ``edge,direction,t,symbol`` lines for traced edges.

    ``result`` must come from a run whose ``trace`` argument was
    ``trace_emitters(decoder, edges)``.
    """
    fh.write("edge,direction,t,symbol\n")
    tr = result.trace[frame]
    for t in range(tr.shape[0]):
        for k, e in enumerate(edges):
            fh.write(f"{e},0,{t},{tr[t, 2 * k]}\n")
            fh.write(f"{e},1,{t},{tr[t, 2 * k + 1]}\n")


def trace_emitters(decoder: StochasticDecoder, edges: Sequence[int]) -> list[int]:
    out = []
    for e in edges:
        out.extend(decoder.edge_emitters(e))
    return out


# ---------------------------------------------------------------------------
# latching


def build_latching_demo(supernode: bool = False):
    """Two parity checks and three bit (equality) nodes wired as K(2,3).

    Returns ``(graph, internal)`` where ``internal`` lists the ``(node, slot)``
    pairs whose outgoing streams run between parity and equality nodes.  With
    ``supernode=True`` the first parity check is a supernode, which lies on
    every cycle.
    """
    par = SatisfactionTable.parity()
    eq = SatisfactionTable.equality(2, 3)
    variables = [VariableNode(f"x{j}", 2, True, "info") for j in range(3)]
    constraints = [
        ConstraintNode("p0", par, supernode=supernode),
        ConstraintNode("p1", par),
        *(ConstraintNode(f"e{j}", eq) for j in range(3)),
    ]
    edges = []
    internal = []
    for j in range(3):
        edges.append((Endpoint("p0", j), Endpoint(f"e{j}", 0)))
        edges.append((Endpoint("p1", j), Endpoint(f"e{j}", 1)))
        edges.append((Endpoint(f"x{j}", 0), Endpoint(f"e{j}", 2)))
        internal += [("p0", j), ("p1", j), (f"e{j}", 0), (f"e{j}", 1)]
    graph = ConstraintGraph(tuple(variables), tuple(constraints), tuple(edges))
    return graph, internal


def run_latching(graph: ConstraintGraph, internal, evidence, seeds, steps: int, l: int | None = None, start: int = 0):
    """Clock the demo from a uniform internal state ``start``; trace internal streams.

    Test entry point: cycles without supernodes are allowed here.  Returns
    the ``(frames, steps + 1, len(internal))`` trace.
    """
    dec = StochasticDecoder(graph, allow_cycles=True)
    emit = [dec.emitter(n, s) for n, s in internal]
    init = {e: start for e in emit}
    l = l or steps
    res = dec.run(evidence, seeds, l=l, iterations=max(1, steps // l), init_held=init, trace=emit)
    return res.trace
