"""The (16,11) extended Hamming code, its syndrome trellis, and the (256,121) product code."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product as iproduct

import numpy as np
from scipy.special import erfc

from .errors import CodebookTooLarge, LengthMismatch
from .graph import (
    ConstraintGraph,
    ConstraintNode,
    Endpoint,
    SatisfactionTable,
    VariableNode,
)


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Binary linear code with a systematic generator ``[I_k | P]``."""

    generator: np.ndarray
    parity_check: np.ndarray
    name: str = ""

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=np.uint8) % 2
        h = np.asarray(self.parity_check, dtype=np.uint8) % 2
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "parity_check", h)
        if g.shape[1] != h.shape[1]:
            raise ValueError("generator and parity-check lengths differ")
        if np.any((g.astype(int) @ h.T.astype(int)) % 2):
            raise ValueError("G * H^T != 0 over GF(2)")
        if gf2_rank(g) != g.shape[0]:
            raise ValueError("generator is rank deficient")

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def rate(self) -> float:
        return self.k / self.n

    @cached_property
    def codebook(self) -> np.ndarray:
        """All ``2^k`` codewords, row ``m`` encoding the bits of ``m`` (LSB first)."""
        if self.k > 16:
            raise CodebookTooLarge(f"2^{self.k} codewords is too many to enumerate")
        info = (np.arange(2**self.k)[:, None] >> np.arange(self.k)) & 1
        return (info @ self.generator.astype(np.int64)) % 2

    @cached_property
    def weight_distribution(self) -> np.ndarray:
        return np.bincount(self.codebook.sum(axis=1), minlength=self.n + 1)

    @property
    def d_min(self) -> int:
        w = self.weight_distribution
        return int(np.flatnonzero(w[1:])[0] + 1)


def gf2_rank(m: np.ndarray) -> int:
    m = np.array(m, dtype=np.uint8) % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


@lru_cache(maxsize=None)
def hamming16_11() -> LinearCode:
    """Extended Hamming code: (15,11) Hamming plus an overall even-parity bit.

    Bits 0..10 are information, 11..14 the Hamming parities, 15 the overall parity.
    """
    cols = [v for v in iproduct((0, 1), repeat=4) if sum(v) >= 2]
    p = np.array(cols, dtype=np.uint8)  # 11 x 4
    overall = (1 + p.sum(axis=1)) % 2  # parity over the info bit and its 4 checks
    p_full = np.hstack([p, overall[:, None]])
    g = np.hstack([np.eye(11, dtype=np.uint8), p_full])
    h = np.hstack([p_full.T, np.eye(5, dtype=np.uint8)])
    return LinearCode(g, h, "hamming16_11")


def encode(code: LinearCode, info) -> np.ndarray:
    info = np.asarray(info, dtype=np.int64)
    if info.shape[-1] != code.k:
        raise LengthMismatch(f"expected {code.k} information bits, got {info.shape[-1]}")
    return ((info @ code.generator.astype(np.int64)) % 2).astype(np.uint8)


# ---------------------------------------------------------------------------
# trellis


def syndrome_trellis(h: np.ndarray) -> list[SatisfactionTable]:
    """BCJR syndrome trellis, one bit per section, pruned to paths from 0 to 0.

    Section ``i`` has rows ``(state_i, bit_i, state_{i+1})``; states are
    relabelled densely per depth with the zero syndrome as symbol 0.  The first
    and last sections have a single left (resp. right) state.
    """
    h = np.asarray(h, dtype=np.int64) % 2
    r, n = h.shape
    col = [int(sum(int(h[j, i]) << j for j in range(r))) for i in range(n)]
    forward = [{0}]
    for i in range(n):
        forward.append({s ^ (b * col[i]) for s in forward[-1] for b in (0, 1)})
    backward = [set() for _ in range(n + 1)]
    backward[n] = {0}
    for i in range(n - 1, -1, -1):
        backward[i] = {s ^ (b * col[i]) for s in backward[i + 1] for b in (0, 1)}
    alive = [sorted(f & b) for f, b in zip(forward, backward)]
    labels = [{s: k for k, s in enumerate(states)} for states in alive]
    tables = []
    for i in range(n):
        rows = []
        for s in alive[i]:
            for b in (0, 1):
                t = s ^ (b * col[i])
                if t in labels[i + 1]:
                    rows.append((labels[i][s], b, labels[i + 1][t]))
        tables.append(SatisfactionTable((len(alive[i]), 2, len(alive[i + 1])), rows))
    return tables


def _chain(prefix: str, tables, bit_roles, observable: bool):
    """Variables, constraints and edges of one trellis chain.

    With ``observable=False`` the bit slots are left for the caller to connect.
    """
    n = len(tables)
    variables, constraints, edges = [], [], []
    for i, t in enumerate(tables):
        constraints.append(ConstraintNode(f"{prefix}t{i}", t))
    for i in range(1, n):
        sid = f"{prefix}s{i}"
        variables.append(VariableNode(sid, tables[i].sizes[0]))
        edges.append((Endpoint(f"{prefix}t{i - 1}", 2), Endpoint(sid, 0)))
        edges.append((Endpoint(sid, 1), Endpoint(f"{prefix}t{i}", 0)))
    if observable:
        for i in range(n):
            bid = f"{prefix}b{i}"
            variables.append(VariableNode(bid, 2, True, bit_roles[i]))
            edges.append((Endpoint(f"{prefix}t{i}", 1), Endpoint(bid, 0)))
    return variables, constraints, edges


def build_hamming_graph(code: LinearCode | None = None) -> ConstraintGraph:
    """Acyclic chain of trellis sections: ``t_i`` joins ``s_i``, bit ``b_i`` and ``s_{i+1}``."""
    code = code or hamming16_11()
    roles = ["info"] * code.k + ["parity"] * (code.n - code.k)
    v, c, e = _chain("", syndrome_trellis(code.parity_check), roles, True)
    return ConstraintGraph(tuple(v), tuple(c), tuple(e))


def count_trellis_paths(graph: ConstraintGraph) -> int:
    """Number of end-to-end paths through a chain built by :func:`build_hamming_graph`."""
    tables = [c.table for c in graph.constraints]
    ways = np.ones(tables[0].sizes[0], dtype=object)
    for t in tables:
        nxt = np.zeros(t.sizes[2], dtype=object)
        for a, _, c in t.rows:
            nxt[c] += ways[a]
        ways = nxt
    return int(ways.sum())


def trellis_accepts(graph: ConstraintGraph, bits) -> bool:
    """True if ``bits`` labels a path from the zero state to the zero state."""
    states = {0}
    for t, b in zip((c.table for c in graph.constraints), bits):
        states = {c for a, bb, c in t.rows if a in states and bb == b}
        if not states:
            return False
    return bool(states)


# ---------------------------------------------------------------------------
# product code


@dataclass(frozen=True)
class ProductCodeLayout:
    """16x16 grid; cell ``(r, c)`` is observable ``x{r}_{c}`` joined by supernode ``e{r}_{c}``."""

    rows: int = 16
    cols: int = 16
    k_side: int = 11
    bit_grid: tuple = field(default=())

    def info_mask(self) -> np.ndarray:
        m = np.zeros((self.rows, self.cols), dtype=bool)
        m[: self.k_side, : self.k_side] = True
        return m


def product_layout() -> ProductCodeLayout:
    grid = tuple(tuple(f"x{r}_{c}" for c in range(16)) for r in range(16))
    return ProductCodeLayout(16, 16, 11, grid)


def encode_product(info, code: LinearCode | None = None) -> np.ndarray:
    """Encode an ``11x11`` info grid (or a batch ``(..., 11, 11)``): rows first, then columns."""
    code = code or hamming16_11()
    info = np.asarray(info, dtype=np.int64)
    if info.shape[-2:] != (code.k, code.k):
        raise LengthMismatch(f"expected a {code.k}x{code.k} information grid")
    g = code.generator.astype(np.int64)
    rows = (info @ g) % 2  # (..., 11, 16)
    full = (np.swapaxes(rows, -1, -2) @ g) % 2  # (..., 16 cols, 16 rows)
    return np.swapaxes(full, -1, -2).astype(np.uint8)


def build_product_graph(code: LinearCode | None = None) -> ConstraintGraph:
    """32 trellis chains (16 rows, 16 columns) meeting at 256 equality supernodes.

    Supernode ``e{r}_{c}`` has slot A on row ``r``'s section ``c``, slot B on
    column ``c``'s section ``r`` and slot C on the observable ``x{r}_{c}``.
    """
    code = code or hamming16_11()
    tables = syndrome_trellis(code.parity_check)
    eq = SatisfactionTable.equality(2, 3)
    n = code.n
    variables, constraints, edges = [], [], []
    for r in range(n):
        v, c, e = _chain(f"r{r}", tables, None, False)
        variables += v
        constraints += c
        edges += e
    for col in range(n):
        v, c, e = _chain(f"c{col}", tables, None, False)
        variables += v
        constraints += c
        edges += e
    info = product_layout().info_mask()
    for r in range(n):
        for col in range(n):
            node = f"e{r}_{col}"
            var = f"x{r}_{col}"
            constraints.append(ConstraintNode(node, eq, supernode=True))
            variables.append(VariableNode(var, 2, True, "info" if info[r, col] else "parity"))
            edges.append((Endpoint(f"r{r}t{col}", 1), Endpoint(node, 0)))
            edges.append((Endpoint(f"c{col}t{r}", 1), Endpoint(node, 1)))
            edges.append((Endpoint(var, 0), Endpoint(node, 2)))
    return ConstraintGraph(tuple(variables), tuple(constraints), tuple(edges))


def product_observable_order(graph: ConstraintGraph) -> list[tuple[int, int]]:
    """Grid cell of each observable, in ``graph.observables`` order."""
    out = []
    for v in graph.observables:
        r, c = v.id[1:].split("_")
        out.append((int(r), int(c)))
    return out


# ---------------------------------------------------------------------------


def qfunc(x):
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


def min_distance_asymptote(code: LinearCode, ebn0_db):
    """Dominant union-bound term ``(A_d * d / n) * Q(sqrt(2 R d Eb/N0))``."""
    if code.k > 16:
        raise CodebookTooLarge("weight enumeration needs k <= 16")
    d = code.d_min
    a_d = int(code.weight_distribution[d])
    ebn0 = 10.0 ** (np.asarray(ebn0_db, dtype=float) / 10.0)
    return a_d * d / code.n * qfunc(np.sqrt(2.0 * code.rate * d * ebn0))
