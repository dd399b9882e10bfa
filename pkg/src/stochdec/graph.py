"""Constraint graphs built from degree-3 constraint functions.

A constraint function over three variables ``(A, B, C)`` is stored as its
satisfaction set: the triples for which the constraint holds.  Symbols are
dense integers ``0..size-1``.  Every constraint node has exactly three slots,
one per role; a slot whose alphabet has a single symbol carries a constant
and may be left unconnected, which is how degree-2 constraints are written.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import GraphError, NotAFunction

ROLES = ("A", "B", "C")

# input roles feeding each output role, in (first, second) order
INPUT_ROLES = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


def role_index(role) -> int:
    if isinstance(role, str):
        try:
            return ROLES.index(role.upper())
        except ValueError:
            raise ValueError(f"unknown edge role {role!r}") from None
    role = int(role)
    if role not in (0, 1, 2):
        raise ValueError(f"unknown edge role {role!r}")
    return role


@dataclass(frozen=True)
class Alphabet:
    """The symbols ``0..size-1``.  Size 1 is reserved for constant slots."""

    size: int

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise ValueError(f"alphabet size must be a positive integer, got {self.size}")

    def __contains__(self, symbol) -> bool:
        return 0 <= symbol < self.size

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class SatisfactionTable:
    """Satisfaction set ``S`` of a constraint over alphabets of the given sizes.

    Rows are deduplicated and sorted.  Whether the rows define a constraint
    function is checked by :func:`validate_table`, not here, so that invalid
    sets can still be represented and diagnosed.
    """

    sizes: tuple[int, int, int]
    rows: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) != 3:
            raise ValueError("a satisfaction table needs exactly three alphabets")
        for s in sizes:
            Alphabet(s)
        rows = set()
        for row in self.rows:
            row = tuple(int(v) for v in row)
            if len(row) != 3:
                raise ValueError(f"row {row} is not a triple")
            for role, (v, s) in enumerate(zip(row, sizes)):
                if not 0 <= v < s:
                    raise ValueError(
                        f"symbol {v} of row {row} outside alphabet {ROLES[role]} (size {s})"
                    )
            rows.add(row)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "rows", tuple(sorted(rows)))

    @property
    def alphabets(self) -> tuple[Alphabet, Alphabet, Alphabet]:
        return tuple(Alphabet(s) for s in self.sizes)

    def __len__(self) -> int:
        return len(self.rows)

    @cached_property
    def array(self) -> np.ndarray:
        """Rows as an ``(R, 3)`` integer array."""
        return np.array(self.rows, dtype=np.int64).reshape(-1, 3)

    def lookup(self, out_role) -> np.ndarray:
        """Table of ``f_out(x, y)`` indexed by the two input symbols; -1 where undefined.

        Requires a valid table (single-valued projections).
        """
        out = role_index(out_role)
        i, j = INPUT_ROLES[out]
        lut = np.full((self.sizes[i], self.sizes[j]), -1, dtype=np.int64)
        for row in self.rows:
            lut[row[i], row[j]] = row[out]
        return lut

    @classmethod
    def equality(cls, q: int = 2, degree: int = 3) -> "SatisfactionTable":
        """``a = b = c`` over ``q`` symbols; ``degree=2`` gives ``a = b`` with a constant C slot."""
        if degree == 3:
            return cls((q, q, q), [(s, s, s) for s in range(q)])
        if degree == 2:
            return cls((q, q, 1), [(s, s, 0) for s in range(q)])
        raise ValueError("degree must be 2 or 3")

    @classmethod
    def parity(cls) -> "SatisfactionTable":
        """Binary even parity ``a + b + c = 0 (mod 2)``."""
        return cls((2, 2, 2), [(a, b, a ^ b) for a in range(2) for b in range(2)])


def validate_table(table: SatisfactionTable) -> bool:
    """Check that all three induced mappings ``f_A, f_B, f_C`` are single-valued.

    Returns True, or raises :class:`NotAFunction` naming the first offending
    role (checked in the order A, B, C) and a witness pair of input symbols.
    """
    for out in range(3):
        i, j = INPUT_ROLES[out]
        seen: dict[tuple[int, int], int] = {}
        for row in table.rows:
            key = (row[i], row[j])
            if key in seen and seen[key] != row[out]:
                raise NotAFunction(ROLES[out], key, (seen[key], row[out]))
            seen.setdefault(key, row[out])
    return True


def project(table: SatisfactionTable, role, symbol: int) -> set[tuple[int, int]]:
    """``S_{role=symbol}``: pairs of the other two roles' symbols (in A, B, C order)."""
    r = role_index(role)
    if not 0 <= symbol < table.sizes[r]:
        raise ValueError(f"symbol {symbol} outside alphabet {ROLES[r]}")
    i, j = INPUT_ROLES[r]
    return {(row[i], row[j]) for row in table.rows if row[r] == symbol}


@dataclass(frozen=True)
class TrellisSection:
    left_states: Alphabet
    labels: Alphabet
    right_states: Alphabet
    branches: tuple[tuple[int, int, int], ...]  # (left, label, right)

    def __len__(self) -> int:
        return len(self.branches)


def to_trellis(table: SatisfactionTable) -> TrellisSection:
    a, b, c = table.alphabets
    return TrellisSection(a, b, c, tuple(table.rows))


def from_trellis(section: TrellisSection) -> SatisfactionTable:
    sizes = (section.left_states.size, section.labels.size, section.right_states.size)
    return SatisfactionTable(sizes, section.branches)


# ---------------------------------------------------------------------------
# graphs


class Endpoint(NamedTuple):
    node: str
    slot: int


@dataclass(frozen=True)
class VariableNode:
    id: str
    size: int
    observable: bool = False
    role: str = "internal"  # info | parity | internal

    def __post_init__(self):
        if self.role not in ("info", "parity", "internal"):
            raise ValueError(f"unknown variable role {self.role!r}")
        if self.size < 2:
            raise ValueError("variables need at least two symbols")


@dataclass(frozen=True)
class ConstraintNode:
    id: str
    table: SatisfactionTable
    supernode: bool = False


@dataclass(frozen=True)
class PortSource:
    """Where the message entering a constraint slot comes from.

    ``kind`` is one of ``"port"`` (another constraint's slot), ``"observable"``,
    ``"leaf"`` (a non-observable variable with a single edge) or ``"const"``
    (unconnected singleton slot).  ``edges`` lists the edge indices crossed.
    """

    kind: str
    node: str | None = None
    slot: int | None = None
    edges: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class ConstraintGraph:
    """Immutable constraint graph.

    Variables have up to two slots (0 and 1): observable variables exactly
    one edge, internal variables one or two.  A two-edge internal variable is a
    plain connection between its neighbours.  ``supernode_edges`` holds edge
    indices; every edge touching a supernode constraint is added to it.
    """

    variables: tuple[VariableNode, ...]
    constraints: tuple[ConstraintNode, ...]
    edges: tuple[tuple[Endpoint, Endpoint], ...]
    supernode_edges: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(
            self,
            "edges",
            tuple((Endpoint(*u), Endpoint(*v)) for u, v in self.edges),
        )
        self._check()
        flagged = set(int(e) for e in self.supernode_edges)
        for e in flagged:
            if not 0 <= e < len(self.edges):
                raise GraphError(f"supernode edge index {e} out of range")
        for k, (u, v) in enumerate(self.edges):
            if any(self._is_supernode(p.node) for p in (u, v)):
                flagged.add(k)
        object.__setattr__(self, "supernode_edges", frozenset(flagged))

    # -- lookups -----------------------------------------------------------

    @cached_property
    def nodes(self) -> dict:
        return {n.id: n for n in (*self.variables, *self.constraints)}

    @cached_property
    def node_index(self) -> dict[str, int]:
        """Stable position of each node: variables first, then constraints."""
        return {nid: i for i, nid in enumerate(self.nodes)}

    @cached_property
    def slot_edges(self) -> dict[Endpoint, int]:
        out = {}
        for k, (u, v) in enumerate(self.edges):
            out[u] = k
            out[v] = k
        return out

    def _is_supernode(self, node_id: str) -> bool:
        node = self.nodes.get(node_id)
        return isinstance(node, ConstraintNode) and node.supernode

    def slot_size(self, endpoint: Endpoint) -> int:
        node = self.nodes[endpoint.node]
        if isinstance(node, VariableNode):
            return node.size
        return node.table.sizes[endpoint.slot]

    def other_end(self, edge: int, endpoint: Endpoint) -> Endpoint:
        u, v = self.edges[edge]
        return v if u == endpoint else u

    @cached_property
    def observables(self) -> tuple[VariableNode, ...]:
        return tuple(v for v in self.variables if v.observable)

    def _check(self):
        ids = [n.id for n in (*self.variables, *self.constraints)]
        if len(set(ids)) != len(ids):
            raise GraphError("node ids must be unique")
        nodes = {n.id: n for n in (*self.variables, *self.constraints)}
        used: dict[Endpoint, int] = {}
        for k, (u, v) in enumerate(self.edges):
            sizes = []
            for p in (u, v):
                node = nodes.get(p.node)
                if node is None:
                    raise GraphError(f"edge {k} references unknown node {p.node!r}")
                nslots = 2 if isinstance(node, VariableNode) else 3
                if not 0 <= p.slot < nslots:
                    raise GraphError(f"edge {k}: node {p.node!r} has no slot {p.slot}")
                if p in used:
                    raise GraphError(f"slot {p} is connected to edges {used[p]} and {k}")
                used[p] = k
                sizes.append(
                    node.size if isinstance(node, VariableNode) else node.table.sizes[p.slot]
                )
            if sizes[0] != sizes[1]:
                raise GraphError(f"edge {k} joins alphabets of size {sizes[0]} and {sizes[1]}")
            if all(isinstance(nodes[p.node], VariableNode) for p in (u, v)):
                raise GraphError(f"edge {k} joins two variables")
        for c in self.constraints:
            for slot, size in enumerate(c.table.sizes):
                if size > 1 and Endpoint(c.id, slot) not in used:
                    raise GraphError(f"constraint {c.id!r} slot {ROLES[slot]} is unconnected")
        for var in self.variables:
            degree = sum(Endpoint(var.id, s) in used for s in (0, 1))
            if var.observable and degree != 1:
                raise GraphError(f"observable variable {var.id!r} must have exactly one edge")
            if degree == 0:
                raise GraphError(f"variable {var.id!r} has no edges")
            if degree == 1 and Endpoint(var.id, 0) not in used:
                raise GraphError(f"variable {var.id!r} must use slot 0 for its single edge")

    # -- message routing ---------------------------------------------------

    def port_source(self, node_id: str, slot: int) -> PortSource:
        """Resolve the far end of a constraint slot, passing through internal variables."""
        here = Endpoint(node_id, slot)
        if here not in self.slot_edges:
            return PortSource("const")
        e = self.slot_edges[here]
        far = self.other_end(e, here)
        node = self.nodes[far.node]
        if isinstance(node, ConstraintNode):
            return PortSource("port", far.node, far.slot, (e,))
        if node.observable:
            return PortSource("observable", node.id, 0, (e,))
        other = Endpoint(node.id, 1 - far.slot)
        if other not in self.slot_edges:
            return PortSource("leaf", node.id, 0, (e,))
        e2 = self.slot_edges[other]
        far2 = self.other_end(e2, other)
        return PortSource("port", far2.node, far2.slot, (e, e2))

    def variable_source(self, var_id: str) -> PortSource:
        """The constraint slot sending messages into a single-edge variable."""
        here = Endpoint(var_id, 0)
        e = self.slot_edges[here]
        far = self.other_end(e, here)
        return PortSource("port", far.node, far.slot, (e,))

    # -- structure ---------------------------------------------------------

    @cached_property
    def diameter(self) -> int:
        """Longest shortest path, in constraint-to-constraint hops, over all constraint pairs."""
        adj: dict[str, set[str]] = {c.id: set() for c in self.constraints}
        for c in self.constraints:
            for slot in range(3):
                src = self.port_source(c.id, slot)
                if src.kind == "port":
                    adj[c.id].add(src.node)
        best = 0
        for start in adj:
            dist = {start: 0}
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            best = max(best, max(dist.values()))
        return best


def detect_cycles(graph: ConstraintGraph) -> list[list[int]]:
    """Return ``[]`` if every cycle crosses a supernode edge, else one uncovered cycle.

    The cycle is given as a list of edge indices.  Parallel edges between the
    same two nodes count as a cycle of length two.
    """
    parent = {nid: nid for nid in graph.nodes}
    tree: dict[str, list[tuple[str, int]]] = {nid: [] for nid in graph.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, (u, v) in enumerate(graph.edges):
        if k in graph.supernode_edges:
            continue
        ru, rv = find(u.node), find(v.node)
        if ru == rv:
            path = _tree_path(tree, u.node, v.node)
            return [path + [k]]
        parent[ru] = rv
        tree[u.node].append((v.node, k))
        tree[v.node].append((u.node, k))
    return []


def _tree_path(tree, start, goal) -> list[int]:
    prev = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == goal:
            break
        for y, k in tree[x]:
            if y not in prev:
                prev[y] = (x, k)
                queue.append(y)
    path = []
    x = goal
    while prev[x] is not None:
        x, k = prev[x]
        path.append(k)
    return path[::-1]


def make_graph(
    variables: Iterable[VariableNode],
    constraints: Iterable[ConstraintNode],
    edges: Iterable,
    supernode_edges: Iterable[int] = (),
) -> ConstraintGraph:
    return ConstraintGraph(tuple(variables), tuple(constraints), tuple(edges), frozenset(supernode_edges))
