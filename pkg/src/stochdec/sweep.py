"""Monte Carlo bit-error-rate sweeps.

Each frame ``f`` at Eb/N0 point ``p`` draws its information bits, its
channel noise and its decoder randomness from seeds derived from
``(root_seed, p, f)``.  Frames are decoded in batches (optionally split
across threads) and merged in frame order, so the records do not depend on
the batch size or on the number of workers.  A point stops at the first
frame where the accumulated information-bit errors reach ``stop_errors``,
or after ``max_frames`` frames.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .channel import ChannelConfig, to_evidence, transmit
from .codes import (
    build_hamming_graph,
    build_product_graph,
    encode,
    encode_product,
    hamming16_11,
    min_distance_asymptote,
    product_observable_order,
)
from .errors import ConfigInvalid
from .graph import ConstraintGraph
from .reference import FloodingDecoder
from .rng import derive_seed
from .stochastic import ACCUMULATION, REPLACEMENT, StochasticDecoder

CODES = ("hamming16_11", "product256_121")
DECODERS = ("sum_product", "relaxation", "stochastic")
CSV_HEADER = ("code", "decoder", "ebn0_db", "frames", "bit_errors", "ber", "l", "iterations", "beta", "seed")

# stochastic defaults per code: (l, iterations, mode)
STOCHASTIC_DEFAULTS = {
    "hamming16_11": (250, 1, ACCUMULATION),
    "product256_121": (250, 8, ACCUMULATION),
}

# sub-seed tags under (root, point, frame)
_INFO, _NOISE, _DECODER = 0, 1, 2


@dataclass(frozen=True)
class CodeSetup:
    """A code as the harness sees it: its graph, an encoder in observable order, and its info positions."""

    name: str
    graph: ConstraintGraph
    n: int
    k: int
    info_positions: np.ndarray

    @property
    def rate(self) -> float:
        return self.k / self.n

    def draw_info(self, rng: np.random.Generator) -> np.ndarray:
        if self.name == "product256_121":
            return rng.integers(0, 2, size=(11, 11))
        return rng.integers(0, 2, size=self.k)

    def encode(self, info) -> np.ndarray:
        """Codeword bits in the graph's observable order."""
        if self.name == "product256_121":
            grid = encode_product(info)
            rows, cols = _product_index()
            return grid[rows, cols]
        return encode(hamming16_11(), info)


@lru_cache(maxsize=None)
def _product_index():
    order = product_observable_order(_product_graph())
    rows = np.array([r for r, _ in order])
    cols = np.array([c for _, c in order])
    return rows, cols


@lru_cache(maxsize=None)
def _product_graph() -> ConstraintGraph:
    return build_product_graph()


@lru_cache(maxsize=None)
def code_setup(name: str) -> CodeSetup:
    if name == "hamming16_11":
        graph = build_hamming_graph()
    elif name == "product256_121":
        graph = _product_graph()
    else:
        raise ConfigInvalid(f"unknown code {name!r}; choose from {', '.join(CODES)}")
    info = np.array([k for k, v in enumerate(graph.observables) if v.role == "info"])
    return CodeSetup(name, graph, len(graph.observables), len(info), info)


@dataclass(frozen=True)
class SweepConfig:
    """One decoder on one code over a list of Eb/N0 points.

    ``l``, ``iterations`` and ``mode`` left as ``None`` take the code's
    stochastic defaults; reference decoders default to ``diameter + 1``
    flooding iterations.  ``beta`` only matters for relaxation.
    """

    code: str
    decoder: str
    ebn0_points: tuple = ()
    stop_errors: int = 50
    max_frames: int = 10**6
    root_seed: int = 0
    l: int | None = None
    iterations: int | None = None
    mode: str | None = None
    beta: float = 0.5
    workers: int = 1
    batch: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "ebn0_points", tuple(float(x) for x in self.ebn0_points))
        if self.code not in CODES:
            raise ConfigInvalid(f"unknown code {self.code!r}; choose from {', '.join(CODES)}")
        if self.decoder not in DECODERS:
            raise ConfigInvalid(f"unknown decoder {self.decoder!r}; choose from {', '.join(DECODERS)}")
        if not self.ebn0_points:
            raise ConfigInvalid("at least one Eb/N0 point is required")
        if not all(np.isfinite(self.ebn0_points)):
            raise ConfigInvalid("Eb/N0 points must be finite")
        for name in ("stop_errors", "max_frames", "workers"):
            if int(getattr(self, name)) < 1:
                raise ConfigInvalid(f"{name} must be a positive integer")
        if self.root_seed < 0:
            raise ConfigInvalid("root_seed must be non-negative")
        if self.l is not None and self.l < 1:
            raise ConfigInvalid("packet length l must be positive")
        if self.iterations is not None and self.iterations < 1:
            raise ConfigInvalid("iterations must be positive")
        if self.mode is not None and self.mode not in (REPLACEMENT, ACCUMULATION):
            raise ConfigInvalid(f"unknown supernode mode {self.mode!r}")
        if self.decoder == "relaxation" and not 0.0 < self.beta < 1.0:
            raise ConfigInvalid(f"relaxation parameter must lie in (0, 1), got {self.beta}")
        if self.batch is not None and self.batch < 1:
            raise ConfigInvalid("batch must be positive")

    def resolved(self) -> "SweepConfig":
        """Copy with every defaulted decoder parameter filled in."""
        if self.decoder == "stochastic":
            l, it, mode = STOCHASTIC_DEFAULTS[self.code]
            return replace(
                self,
                l=self.l if self.l is not None else l,
                iterations=self.iterations if self.iterations is not None else it,
                mode=self.mode or mode,
            )
        it = self.iterations if self.iterations is not None else code_setup(self.code).graph.diameter + 1
        return replace(self, iterations=it)


@dataclass(frozen=True)
class BerRecord:
    code: str
    decoder: str
    ebn0_db: float
    frames: int
    bit_errors: int
    ber: float
    l: int | None
    iterations: int
    beta: float | None
    seed: int


@dataclass
class FrameBatch:
    """Transmitted bits, evidence and decoder seeds for consecutive frames."""

    bits: np.ndarray
    evidence: np.ndarray
    decoder_seeds: np.ndarray


def make_frames(setup: CodeSetup, ch: ChannelConfig, root_seed: int, point: int, start: int, count: int) -> FrameBatch:
    bits = np.empty((count, setup.n), dtype=np.int64)
    y = np.empty((count, setup.n))
    seeds = np.empty(count, dtype=np.uint64)
    for j in range(count):
        f = start + j
        info_rng = np.random.default_rng(derive_seed(root_seed, point, f, _INFO))
        bits[j] = setup.encode(setup.draw_info(info_rng))
        y[j] = transmit(bits[j], ch, derive_seed(root_seed, point, f, _NOISE))
        seeds[j] = derive_seed(root_seed, point, f, _DECODER)
    return FrameBatch(bits, to_evidence(y, ch), seeds)


class _Decoder:
    def __init__(self, cfg: SweepConfig, setup: CodeSetup):
        self.cfg = cfg
        if cfg.decoder == "stochastic":
            self.engine = StochasticDecoder(setup.graph)
        else:
            self.engine = FloodingDecoder(setup.graph)

    def __call__(self, batch: FrameBatch, trace=()):
        cfg = self.cfg
        if cfg.decoder == "stochastic":
            res = self.engine.run(batch.evidence, batch.decoder_seeds, cfg.l, cfg.iterations, cfg.mode, trace=trace)
            return res.decisions, res
        decisions, _ = self.engine.decode(batch.evidence, cfg.decoder, cfg.iterations, cfg.beta)
        return decisions, None


def _split(batch: FrameBatch, parts: int):
    edges = np.linspace(0, len(batch.bits), parts + 1).astype(int)
    return [
        FrameBatch(batch.bits[a:b], batch.evidence[a:b], batch.decoder_seeds[a:b])
        for a, b in zip(edges[:-1], edges[1:])
        if b > a
    ]


def frame_errors(cfg: SweepConfig, setup: CodeSetup, decoder, batch: FrameBatch, pool=None) -> np.ndarray:
    """Information-bit errors per frame."""
    if pool is None or cfg.workers == 1 or len(batch.bits) < 2 * cfg.workers:
        decisions = decoder(batch)[0]
    else:
        parts = _split(batch, cfg.workers)
        decisions = np.concatenate([d for d, _ in pool.map(decoder, parts)])
    info = setup.info_positions
    return (decisions[:, info] != batch.bits[:, info]).sum(axis=1)


def _batch_sizes(cfg: SweepConfig):
    if cfg.batch is not None:
        while True:
            yield cfg.batch
    size, cap = (16, 4096) if cfg.code == "hamming16_11" else (4, 64)
    while True:
        yield size
        size = min(2 * size, cap)


def run_point(cfg: SweepConfig, point: int, decoder=None, pool=None) -> BerRecord:
    cfg = cfg.resolved()
    setup = code_setup(cfg.code)
    decoder = decoder or _Decoder(cfg, setup)
    ebn0 = cfg.ebn0_points[point]
    ch = ChannelConfig(ebn0, setup.rate)
    frames = errors = 0
    sizes = _batch_sizes(cfg)
    while frames < cfg.max_frames and errors < cfg.stop_errors:
        count = min(next(sizes), cfg.max_frames - frames)
        batch = make_frames(setup, ch, cfg.root_seed, point, frames, count)
        per_frame = frame_errors(cfg, setup, decoder, batch, pool)
        running = errors + np.cumsum(per_frame)
        hit = np.flatnonzero(running >= cfg.stop_errors)
        if hit.size:
            frames += int(hit[0]) + 1
            errors = int(running[hit[0]])
            break
        frames += count
        errors = int(running[-1])
    return BerRecord(
        cfg.code,
        cfg.decoder,
        ebn0,
        frames,
        errors,
        errors / (frames * setup.k),
        cfg.l if cfg.decoder == "stochastic" else None,
        cfg.iterations,
        cfg.beta if cfg.decoder == "relaxation" else None,
        cfg.root_seed,
    )


def run_sweep(cfg: SweepConfig) -> list[BerRecord]:
    """One record per Eb/N0 point, in the order given."""
    cfg = cfg.resolved()
    setup = code_setup(cfg.code)
    decoder = _Decoder(cfg, setup)
    if cfg.workers == 1:
        return [run_point(cfg, p, decoder) for p in range(len(cfg.ebn0_points))]
    with ThreadPoolExecutor(cfg.workers) as pool:
        return [run_point(cfg, p, decoder, pool) for p in range(len(cfg.ebn0_points))]


def trace_first_frame(cfg: SweepConfig, fh, point: int = 0) -> None:
    """Write the stream trace of frame 0 at one point (stochastic decoder only)."""
    from .stochastic import trace_emitters, write_trace

    cfg = cfg.resolved()
    if cfg.decoder != "stochastic":
        raise ConfigInvalid("--trace needs the stochastic decoder")
    setup = code_setup(cfg.code)
    decoder = _Decoder(cfg, setup)
    ch = ChannelConfig(cfg.ebn0_points[point], setup.rate)
    batch = make_frames(setup, ch, cfg.root_seed, point, 0, 1)
    edges = list(range(len(setup.graph.edges)))
    emit = trace_emitters(decoder.engine, edges)
    _, res = decoder(batch, trace=emit)
    write_trace(fh, decoder.engine, res, edges)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit_csv(records) -> str:
    """CSV text; ``ber`` is information-bit errors over ``frames * k``."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])
    return out.getvalue()


def emit_asymptote(code: str, ebn0_db) -> str:
    if code not in CODES:
        raise ConfigInvalid(f"unknown code {code!r}; choose from {', '.join(CODES)}")
    if code != "hamming16_11":
        raise ConfigInvalid(f"the asymptote needs an enumerable code; {code} has 2^121 codewords")
    ebn0 = np.atleast_1d(np.asarray(ebn0_db, dtype=float))
    values = min_distance_asymptote(hamming16_11(), ebn0)
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("ebn0_db", "ber_asymptote"))
    for e, v in zip(ebn0, values):
        w.writerow((repr(float(e)), repr(float(v))))
    return out.getvalue()
