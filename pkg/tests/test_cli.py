import json

from stochdec.cli import main
from stochdec.codes import build_hamming_graph
from stochdec.graphio import dump
from stochdec.stochastic import build_latching_demo


def error_of(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    return json.loads(err[-1])


def test_sweep_to_stdout(capsys):
    rc = main(["sweep", "--code", "hamming16_11", "--decoder", "sum_product", "--ebno", "2", "3", "--stop-errors", "5", "--seed", "1"])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0].startswith("code,decoder,ebn0_db")
    assert len(out) == 3


def test_sweep_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"code": "hamming16_11", "decoder": "stochastic", "ebno": [2.0], "seed": 4, "stop_errors": 5, "l": 100}))
    out = tmp_path / "ber.csv"
    rc = main(["sweep", "--config", str(cfg), "--l", "120", "--out", str(out)])
    assert rc == 0
    row = out.read_text().splitlines()[1].split(",")
    assert row[1] == "stochastic" and row[6] == "120" and row[9] == "4"


def test_sweep_is_reproducible(tmp_path):
    args = ["sweep", "--code", "hamming16_11", "--decoder", "stochastic", "--ebno", "2,3", "--stop-errors", "10", "--seed", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_trace_option(tmp_path):
    trace = tmp_path / "t.csv"
    rc = main(["sweep", "--code", "hamming16_11", "--decoder", "stochastic", "--ebno", "3", "--l", "10",
               "--stop-errors", "1", "--max-frames", "2", "--seed", "0", "--trace", str(trace), "--out", str(tmp_path / "o.csv")])
    assert rc == 0
    lines = trace.read_text().splitlines()
    assert lines[0] == "edge,direction,t,symbol"
    assert len(lines) == 1 + len(build_hamming_graph().edges) * 2 * 11


def test_trace_needs_stochastic(tmp_path, capsys):
    rc = main(["sweep", "--code", "hamming16_11", "--decoder", "sum_product", "--ebno", "3", "--seed", "0", "--trace", str(tmp_path / "t")])
    assert rc == 2 and error_of(capsys)["error"] == "ConfigInvalid"


def test_missing_and_bad_settings(capsys):
    assert main(["sweep", "--code", "hamming16_11", "--decoder", "stochastic", "--ebno", "3"]) == 2
    assert "seed" in error_of(capsys)["message"]
    assert main(["sweep", "--code", "bch", "--decoder", "stochastic", "--ebno", "3", "--seed", "1"]) == 2
    assert error_of(capsys)["error"] == "ConfigInvalid"
    assert main(["sweep", "--code", "hamming16_11", "--decoder", "relaxation", "--beta", "2", "--ebno", "3", "--seed", "1"]) == 2
    assert error_of(capsys)["error"] == "ConfigInvalid"
    assert main([]) == 2


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"colour": "blue"}')
    assert main(["sweep", "--config", str(cfg)]) == 2
    assert "colour" in error_of(capsys)["message"]
    cfg.write_text("not json")
    assert main(["sweep", "--config", str(cfg)]) == 2


def test_asymptote_command(capsys):
    assert main(["asymptote", "--code", "hamming16_11", "--ebno-range", "2:4:0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "ebn0_db,ber_asymptote"
    assert [float(x.split(",")[0]) for x in lines[1:]] == [2.0, 2.5, 3.0, 3.5, 4.0]
    assert main(["asymptote", "--code", "hamming16_11", "--ebno-range", "4:2:1"]) == 2


def test_validate_graph(tmp_path, capsys):
    path = tmp_path / "h.graph"
    dump(build_hamming_graph(), path)
    assert main(["validate-graph", "--graph", str(path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["ok"] and summary["observables"] == 16 and summary["constraints"] == 16


def test_validate_graph_failures(tmp_path, capsys):
    cyclic = tmp_path / "c.graph"
    dump(build_latching_demo(False)[0], cyclic)
    assert main(["validate-graph", "--graph", str(cyclic)]) == 2
    assert error_of(capsys)["error"] == "UncoveredCycle"
    bad = tmp_path / "bad.graph"
    bad.write_text("edge nowhere\n")
    assert main(["validate-graph", "--graph", str(bad)]) == 2
    assert error_of(capsys)["error"] == "GraphError"
    assert main(["validate-graph", "--graph", str(tmp_path / "missing")]) == 2
