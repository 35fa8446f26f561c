"""LLVM IR program graphs with numeric and aggregate-type awareness.

Parse a subset of textual LLVM IR, build typed program graphs
(control/data/call edges plus store-modification and type-chain
relations), embed numeric literals digit by digit, and export everything
for heterogeneous graph learning.
"""

from .builder import UnresolvedReference, build_base_graph
from .embedding import (
    ALPHABET,
    DEFAULT_K,
    DEFAULT_OUT_DIM,
    DEFAULT_SEED,
    MAX_DIGITS,
    PAD_ID,
    PAD_TOKEN,
    UNK_ID,
    UNK_TOKEN,
    Aggregation,
    EmbeddingTable,
    EmptySequence,
    LiteralTooLong,
    NonNumeric,
    aggregate,
    embed_digits,
    embed_number,
    is_numeric_literal,
    node_feature_vector,
    tokenize_numeric,
)
from .export import (
    HeteroBundle,
    SchemaError,
    Vocab,
    VocabMiss,
    build_vocab,
    bundle_to_graph,
    from_json,
    read_bundle,
    read_vocab,
    to_dot,
    to_hetero_bundle,
    to_json,
    vocab_from_json,
    vocab_masked,
    vocab_to_json,
    write_bundle,
    write_vocab,
)
from .graph import (
    Edge,
    EdgeKind,
    InvariantViolation,
    NodeAttrs,
    NodeKind,
    ProgramGraph,
    graphs_equal,
    stats,
)
from .ir import (
    ArrayType,
    DimLength,
    FloatType,
    IntType,
    IrBlock,
    IrFunction,
    IrGlobal,
    IrInstruction,
    IrModule,
    IrParam,
    LabelType,
    OpaqueType,
    PointerType,
    StructType,
    VectorType,
    VoidType,
    peel_aggregate_dims,
    type_to_string,
)
from .parser import (
    IrParseError,
    IrSyntaxError,
    ParseDiagnostics,
    SsaError,
    UnsupportedConstructError,
    parse_module,
    parse_type,
)
from .transforms import (
    TransformConfig,
    add_store_modify_edges,
    attach_numeric_values,
    build_program_graph,
    expand_aggregate_types,
    unify_identifier_nodes,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHABET",
    "Aggregation",
    "ArrayType",
    "DEFAULT_K",
    "DEFAULT_OUT_DIM",
    "DEFAULT_SEED",
    "DimLength",
    "Edge",
    "EdgeKind",
    "EmbeddingTable",
    "EmptySequence",
    "FloatType",
    "HeteroBundle",
    "IntType",
    "InvariantViolation",
    "IrBlock",
    "IrFunction",
    "IrGlobal",
    "IrInstruction",
    "IrModule",
    "IrParam",
    "IrParseError",
    "IrSyntaxError",
    "LabelType",
    "LiteralTooLong",
    "MAX_DIGITS",
    "NodeAttrs",
    "NodeKind",
    "NonNumeric",
    "OpaqueType",
    "PAD_ID",
    "PAD_TOKEN",
    "ParseDiagnostics",
    "PointerType",
    "ProgramGraph",
    "SchemaError",
    "SsaError",
    "StructType",
    "TransformConfig",
    "UNK_ID",
    "UNK_TOKEN",
    "UnresolvedReference",
    "UnsupportedConstructError",
    "VectorType",
    "Vocab",
    "VocabMiss",
    "VoidType",
    "add_store_modify_edges",
    "aggregate",
    "attach_numeric_values",
    "build_base_graph",
    "build_program_graph",
    "build_vocab",
    "bundle_to_graph",
    "embed_digits",
    "embed_number",
    "from_json",
    "graphs_equal",
    "is_numeric_literal",
    "node_feature_vector",
    "parse_module",
    "parse_type",
    "peel_aggregate_dims",
    "read_bundle",
    "read_vocab",
    "stats",
    "to_dot",
    "to_hetero_bundle",
    "to_json",
    "tokenize_numeric",
    "type_to_string",
    "unify_identifier_nodes",
    "vocab_from_json",
    "vocab_masked",
    "vocab_to_json",
    "write_bundle",
    "write_vocab",
]
