import pytest

from stochdec.codes import build_hamming_graph, build_product_graph
from stochdec.errors import GraphError
from stochdec.graphio import dump, dumps, load, loads
from stochdec.stochastic import build_latching_demo

SMALL = """
# two equality checks joined by one internal variable
table EQ 2 2 2
row 0 0 0
row 1 1 1
variable x 2 observable info
variable y 2 observable parity
variable z 2 observable
variable w 2 observable
variable s 2
constraint c1 EQ
constraint c2 EQ supernode
edge x:0 c1:A
edge y:0 c1:B
edge c1:C s:0
edge s:1 c2:A
edge z:0 c2:B
edge w:0 c2:C
"""


def test_parse_small_graph():
    g = loads(SMALL)
    assert len(g.variables) == 5 and len(g.constraints) == 2 and len(g.edges) == 6
    assert g.nodes["c2"].supernode
    assert g.nodes["x"].role == "info"
    assert g.port_source("c1", 2).node == "c2"
    # every edge touching the supernode is flagged
    assert g.supernode_edges == {3, 4, 5}


def _same(g1, g2):
    assert [v for v in g1.variables] == [v for v in g2.variables]
    assert [(c.id, c.table, c.supernode) for c in g1.constraints] == [
        (c.id, c.table, c.supernode) for c in g2.constraints
    ]
    assert g1.edges == g2.edges
    assert g1.supernode_edges == g2.supernode_edges


@pytest.mark.parametrize(
    "builder",
    [build_hamming_graph, build_product_graph, lambda: build_latching_demo(True)[0]],
)
def test_roundtrip(builder):
    g = builder()
    _same(g, loads(dumps(g)))


def test_file_roundtrip(tmp_path):
    g = build_hamming_graph()
    path = tmp_path / "h.graph"
    dump(g, path)
    _same(g, load(path))


def test_explicit_edge_flag_survives():
    text = SMALL.replace("constraint c2 EQ supernode", "constraint c2 EQ").replace(
        "edge s:1 c2:A", "edge s:1 c2:A supernode"
    )
    g = loads(text)
    assert g.supernode_edges == {3}
    _same(g, loads(dumps(g)))


@pytest.mark.parametrize(
    "bad",
    [
        "row 0 0 0",
        "table T 2 2\n",
        "table T 2 2 2\nrow 0 0\n",
        "frobnicate x",
        "table T 2 2 2\nconstraint c U\n",
        "variable x 2 observable\nedge x c:A\n",
        "variable x 2 observable\ntable T 2 2 2\nrow 0 0 0\nconstraint c T\nedge x:0 c:Q\n",
        "variable x two\n",
    ],
)
def test_malformed_input(bad):
    with pytest.raises(GraphError):
        loads(bad)
