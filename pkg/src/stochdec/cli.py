"""``decode-sim``: BER sweeps, minimum-distance asymptotes and graph checks.

Failures print one JSON object on stderr, ``{"error": <type>, "message": <text>}``,
and exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConfigInvalid, DecodingError, UncoveredCycle
from .graph import detect_cycles
from .graphio import load
from .sweep import CODES, DECODERS, SweepConfig, emit_asymptote, emit_csv, run_sweep, trace_first_frame

EXIT_FAILURE = 2

# config-file key -> (SweepConfig field, type)
_SWEEP_KEYS = {
    "code": ("code", str),
    "decoder": ("decoder", str),
    "l": ("l", int),
    "iters": ("iterations", int),
    "mode": ("mode", str),
    "beta": ("beta", float),
    "ebno": ("ebn0_points", None),
    "stop_errors": ("stop_errors", int),
    "max_frames": ("max_frames", int),
    "seed": ("root_seed", int),
    "workers": ("workers", int),
}
_OTHER_KEYS = {"out", "trace"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigInvalid(message)


def _floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [float(x) for part in text for x in _floats(part)]
    try:
        return [float(x) for x in str(text).replace(",", " ").split()]
    except ValueError:
        raise ConfigInvalid(f"cannot read Eb/N0 values from {text!r}") from None


def _range(text: str) -> np.ndarray:
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigInvalid(f"--ebno-range wants lo:hi:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise ConfigInvalid("--ebno-range needs step > 0 and hi >= lo")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 10)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="decode-sim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="BER versus Eb/N0 for one code and decoder")
    s.add_argument("--config", help="JSON file whose keys mirror the long options (flags win)")
    s.add_argument("--code", choices=CODES)
    s.add_argument("--decoder", choices=DECODERS)
    s.add_argument("--l", type=int, help="packet length (stochastic)")
    s.add_argument("--iters", type=int, help="iterations (packets for stochastic, flooding rounds otherwise)")
    s.add_argument("--mode", choices=("replacement", "accumulation"))
    s.add_argument("--beta", type=float, help="relaxation parameter")
    s.add_argument("--ebno", nargs="+", help="Eb/N0 points in dB, space or comma separated")
    s.add_argument("--stop-errors", type=int)
    s.add_argument("--max-frames", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--workers", type=int, help="decoder threads per batch")
    s.add_argument("--out", help="CSV output file (default stdout)")
    s.add_argument("--trace", help="write the symbol streams of frame 0 at the first point")

    a = sub.add_parser("asymptote", help="minimum-distance asymptote as CSV")
    a.add_argument("--code", required=True, choices=CODES)
    a.add_argument("--ebno-range", required=True, help="lo:hi:step in dB")
    a.add_argument("--out")

    v = sub.add_parser("validate-graph", help="check a graph file and summarize it")
    v.add_argument("--graph", required=True)
    return p


def _sweep_settings(args) -> tuple[dict, dict]:
    file_values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(file_values, dict):
            raise ConfigInvalid("config file must hold a JSON object")
        file_values = {k.replace("-", "_"): v for k, v in file_values.items()}
        unknown = set(file_values) - set(_SWEEP_KEYS) - _OTHER_KEYS
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = dict(file_values)
    for key in list(_SWEEP_KEYS) + sorted(_OTHER_KEYS):
        value = getattr(args, key)
        if value is not None:
            merged[key] = value
    fields = {}
    for key, (name, kind) in _SWEEP_KEYS.items():
        if key not in merged:
            continue
        if key == "ebno":
            fields[name] = tuple(_floats(merged[key]))
            continue
        try:
            fields[name] = kind(merged[key])
        except (TypeError, ValueError):
            raise ConfigInvalid(f"{key}: cannot convert {merged[key]!r}") from None
    for required in ("code", "decoder", "ebn0_points", "root_seed"):
        if required not in fields:
            raise ConfigInvalid(f"missing required setting {required!r}")
    return fields, {k: merged.get(k) for k in _OTHER_KEYS}


def _write(text: str, path) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> None:
    fields, other = _sweep_settings(args)
    cfg = SweepConfig(**fields)
    if other["trace"]:
        with open(other["trace"], "w") as fh:
            trace_first_frame(cfg, fh)
    _write(emit_csv(run_sweep(cfg)), other["out"])


def cmd_asymptote(args) -> None:
    _write(emit_asymptote(args.code, _range(args.ebno_range)), args.out)


def cmd_validate_graph(args) -> None:
    try:
        graph = load(args.graph)
    except OSError as exc:
        raise ConfigInvalid(f"cannot read {args.graph}: {exc}") from None
    cycles = detect_cycles(graph)
    if cycles:
        raise UncoveredCycle(cycles[0])
    summary = {
        "ok": True,
        "variables": len(graph.variables),
        "observables": len(graph.observables),
        "constraints": len(graph.constraints),
        "supernodes": sum(c.supernode for c in graph.constraints),
        "edges": len(graph.edges),
        "supernode_edges": len(graph.supernode_edges),
        "diameter": graph.diameter,
    }
    sys.stdout.write(json.dumps(summary) + "\n")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        {"sweep": cmd_sweep, "asymptote": cmd_asymptote, "validate-graph": cmd_validate_graph}[args.command](args)
    except (DecodingError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
