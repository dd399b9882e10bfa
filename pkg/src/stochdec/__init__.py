"""Stochastic and sum-product iterative decoding on constraint graphs."""
from .channel import ChannelConfig, to_evidence, transmit
from .codes import (
    LinearCode,
    build_hamming_graph,
    build_product_graph,
    encode,
    encode_product,
    hamming16_11,
    min_distance_asymptote,
    syndrome_trellis,
)
from .errors import (
    BetaOutOfRange,
    CodebookTooLarge,
    ConfigInvalid,
    DecodingError,
    DegenerateMass,
    EmptyHistogram,
    GraphError,
    IncompletePacket,
    LengthMismatch,
    NotAFunction,
    UncoveredCycle,
)
from .graph import (
    Alphabet,
    ConstraintGraph,
    ConstraintNode,
    Endpoint,
    SatisfactionTable,
    TrellisSection,
    VariableNode,
    detect_cycles,
    from_trellis,
    project,
    to_trellis,
    validate_table,
)
from .mass import EPS, clamp
from .reference import FloodingDecoder, brute_force_map, decode, relaxation_update, sum_product_update
from .stochastic import (
    Histogram,
    StochasticDecoder,
    StochasticNodeState,
    StreamSource,
    Supernode,
    build_latching_demo,
    equality_supernode_update,
    histogram_decide,
    marginal_decide,
    node_step,
    run_stochastic,
)
from .sweep import BerRecord, SweepConfig, emit_asymptote, emit_csv, run_sweep

__version__ = "0.1.0"
