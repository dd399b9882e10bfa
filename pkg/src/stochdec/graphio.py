"""Line-oriented text format for constraint graphs.

::

    # comment
    table  <name> <size_A> <size_B> <size_C>
    row    <a> <b> <c>                 # rows attach to the last table
    variable   <id> <size> [observable] [info|parity|internal]
    constraint <id> <table> [supernode]
    edge   <node>:<slot> <node>:<slot> [supernode]

Constraint slots are written ``A``, ``B``, ``C`` (or ``0``-``2``); variable
slots are ``0`` and ``1``.  Edges are numbered in order of appearance.
"""
from __future__ import annotations

from .errors import GraphError
from .graph import (
    ROLES,
    ConstraintGraph,
    ConstraintNode,
    Endpoint,
    SatisfactionTable,
    VariableNode,
)


def _slot(token: str, lineno: int) -> Endpoint:
    node, sep, slot = token.rpartition(":")
    if not sep or not node:
        raise GraphError(f"line {lineno}: endpoint {token!r} is not <node>:<slot>")
    if slot.upper() in ROLES:
        return Endpoint(node, ROLES.index(slot.upper()))
    try:
        return Endpoint(node, int(slot))
    except ValueError:
        raise GraphError(f"line {lineno}: bad slot {slot!r}") from None


def loads(text: str) -> ConstraintGraph:
    tables: dict[str, list] = {}
    current = None
    variables, constraints, edges, flagged = [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        key, args = tokens[0].lower(), tokens[1:]
        try:
            if key == "table":
                name, *sizes = args
                if len(sizes) != 3:
                    raise GraphError(f"line {lineno}: table needs three alphabet sizes")
                tables[name] = [tuple(int(s) for s in sizes), []]
                current = name
            elif key == "row":
                if current is None:
                    raise GraphError(f"line {lineno}: row before any table")
                if len(args) != 3:
                    raise GraphError(f"line {lineno}: row needs three symbols")
                tables[current][1].append(tuple(int(a) for a in args))
            elif key == "variable":
                vid, size, *flags = args
                role = next((f for f in flags if f in ("info", "parity", "internal")), "internal")
                variables.append(VariableNode(vid, int(size), "observable" in flags, role))
            elif key == "constraint":
                cid, tname, *flags = args
                if tname not in tables:
                    raise GraphError(f"line {lineno}: unknown table {tname!r}")
                constraints.append((cid, tname, "supernode" in flags))
            elif key == "edge":
                u, v, *flags = args
                if "supernode" in flags:
                    flagged.append(len(edges))
                edges.append((_slot(u, lineno), _slot(v, lineno)))
            else:
                raise GraphError(f"line {lineno}: unknown keyword {tokens[0]!r}")
        except (ValueError, TypeError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"line {lineno}: {exc}") from None
    built = {name: SatisfactionTable(sizes, rows) for name, (sizes, rows) in tables.items()}
    nodes = [ConstraintNode(cid, built[t], sn) for cid, t, sn in constraints]
    return ConstraintGraph(tuple(variables), tuple(nodes), tuple(edges), frozenset(flagged))


def dumps(graph: ConstraintGraph) -> str:
    names: dict[SatisfactionTable, str] = {}
    lines = []
    for c in graph.constraints:
        if c.table in names:
            continue
        name = f"T{len(names)}"
        names[c.table] = name
        lines.append(f"table {name} {' '.join(map(str, c.table.sizes))}")
        lines.extend(f"row {a} {b} {cc}" for a, b, cc in c.table.rows)
    for v in graph.variables:
        flags = " observable" if v.observable else ""
        lines.append(f"variable {v.id} {v.size}{flags} {v.role}")
    for c in graph.constraints:
        lines.append(f"constraint {c.id} {names[c.table]}" + (" supernode" if c.supernode else ""))

    constraint_ids = {c.id for c in graph.constraints}

    def fmt(p: Endpoint) -> str:
        if p.node in constraint_ids:
            return f"{p.node}:{ROLES[p.slot]}"
        return f"{p.node}:{p.slot}"

    for k, (u, v) in enumerate(graph.edges):
        # edges touching supernode constraints are flagged implicitly
        explicit = k in graph.supernode_edges and not any(
            p.node in constraint_ids and graph.nodes[p.node].supernode for p in (u, v)
        )
        lines.append(f"edge {fmt(u)} {fmt(v)}" + (" supernode" if explicit else ""))
    return "\n".join(lines) + "\n"


def load(path) -> ConstraintGraph:
    with open(path) as fh:
        return loads(fh.read())


def dump(graph: ConstraintGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(graph))
