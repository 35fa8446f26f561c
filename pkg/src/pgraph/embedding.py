"""Digit-level numeric embedding and node feature assembly.

A numeric literal is split into one token per character; each token is the
sum of a symbol vector and a place-value position vector, and the token
rows are aggregated into a fixed-size vector.  All tables are generated
from a seeded portable PRNG with an exact integer-to-float mapping, so
identical (seed, k, vocab) inputs give bit-identical features on any
platform; see the table-generation contract in the project README.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import NodeAttrs

# Closed symbol alphabet: hex digits cover 'e', then punctuation and markers.
# Row order is part of the interchange contract; do not reorder.
ALPHABET = tuple("0123456789abcdef") + (".", "-", "+", "x")
ALPHABET_INDEX = {s: i for i, s in enumerate(ALPHABET)}

MAX_DIGITS = 64

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"
PAD_ID = 0
UNK_ID = 1

DEFAULT_SEED = 42
DEFAULT_K = 40
DEFAULT_OUT_DIM = 120

DigitTokenSeq = tuple[tuple[str, int], ...]


class NonNumeric(Exception):
    def __init__(self, literal: str):
        super().__init__(f"not a numeric literal: {literal!r}")
        self.literal = literal


class LiteralTooLong(Exception):
    def __init__(self, literal: str):
        super().__init__(f"literal exceeds {MAX_DIGITS} symbols: {literal!r}")
        self.literal = literal


class EmptySequence(Exception):
    pass


class Aggregation(Enum):
    MEAN = "Mean"
    MAX = "Max"
    SUM = "Sum"


_NUMERIC_RE = re.compile(
    r"^[-+]?(?:0x[0-9a-f]+|\d+\.?\d*(?:e[-+]?\d+)?|\.\d+(?:e[-+]?\d+)?)$"
)


def is_numeric_literal(text: str) -> bool:
    """True when the text is a decimal, scientific, or plain-hex literal
    expressible in the closed alphabet (excludes 0xK/L/M/H prefixed floats)."""
    return bool(_NUMERIC_RE.match(text.lower()))


def tokenize_numeric(literal: str) -> DigitTokenSeq:
    """One (symbol, position) token per character.

    Positions are place values for the integer part (rightmost integer
    digit = 0, growing leftward); every other symbol gets its absolute
    token distance from that same anchor.  For hex literals the whole
    digit run after the prefix is the integer part.
    """
    if len(literal) > MAX_DIGITS:
        raise LiteralTooLong(literal)
    lowered = literal.lower()
    if not _NUMERIC_RE.match(lowered):
        raise NonNumeric(literal)
    if re.match(r"^[-+]?0x", lowered):
        anchor = len(lowered) - 1  # the whole hex digit run is the integer part
    else:
        anchor = 0
        for i, ch in enumerate(lowered):
            if ch in ".e":
                break
            if ch.isdigit():
                anchor = i
    return tuple((ch, abs(i - anchor)) for i, ch in enumerate(lowered))


class EmbeddingTable:
    """Seeded symbol/position/token lookup tables of one shared dimension k.

    Generation contract (reproduced verbatim by any consumer):
      - stream: numpy PCG64(seed), uint64 draws in [0, 2**32)
      - value mapping: (u - 2**31) / 2**31, exact in float64
      - draw order: symbol rows (len(ALPHABET) x k), position rows
        (MAX_DIGITS x k), then token rows (vocab_size x k) by vocab id
      - the PAD row (id 0) is zeroed after drawing
    """

    def __init__(self, symbols: np.ndarray, positions: np.ndarray, tokens: np.ndarray,
                 token_ids: dict[str, int], seed: int, k: int):
        self.symbols = symbols
        self.positions = positions
        self.tokens = tokens
        self.token_ids = dict(token_ids)
        self.seed = seed
        self.k = k
        for arr in (symbols, positions, tokens):
            arr.setflags(write=False)

    @classmethod
    def from_vocab(cls, token_ids: dict[str, int], seed: int = DEFAULT_SEED, k: int = DEFAULT_K) -> "EmbeddingTable":
        if k <= 0:
            raise ValueError("k must be positive")
        rng = np.random.Generator(np.random.PCG64(seed))

        def draw(rows: int) -> np.ndarray:
            u = rng.integers(0, 2**32, size=(rows, k), dtype=np.uint64)
            return (u.astype(np.float64) - 2.0**31) / 2.0**31

        symbols = draw(len(ALPHABET))
        positions = draw(MAX_DIGITS)
        vocab_size = max(token_ids.values(), default=UNK_ID) + 1
        tokens = draw(vocab_size)
        tokens[PAD_ID] = 0.0
        return cls(symbols, positions, tokens, token_ids, seed, k)

    @classmethod
    def minimal(cls, seed: int = DEFAULT_SEED, k: int = DEFAULT_K) -> "EmbeddingTable":
        return cls.from_vocab({PAD_TOKEN: PAD_ID, UNK_TOKEN: UNK_ID}, seed, k)

    def symbol_vector(self, symbol: str) -> np.ndarray:
        return self.symbols[ALPHABET_INDEX[symbol]]

    def position_vector(self, position: int) -> np.ndarray:
        return self.positions[position]

    def token_vector(self, token: str) -> np.ndarray:
        return self.tokens[self.token_ids.get(token, UNK_ID)]


def embed_digits(seq: DigitTokenSeq, table: EmbeddingTable) -> np.ndarray:
    """n x k matrix; row i = symbol vector + position vector of token i."""
    out = np.empty((len(seq), table.k), dtype=np.float64)
    for i, (symbol, position) in enumerate(seq):
        if position >= MAX_DIGITS:
            raise LiteralTooLong(symbol)
        out[i] = table.symbols[ALPHABET_INDEX[symbol]] + table.positions[position]
    return out


def aggregate(matrix: np.ndarray, agg: Aggregation) -> np.ndarray:
    """Reduce across the token axis in fixed row order (bit-reproducible)."""
    if matrix.shape[0] == 0:
        raise EmptySequence("cannot aggregate an empty token sequence")
    if agg is Aggregation.MAX:
        acc = matrix[0].copy()
        for row in matrix[1:]:
            np.maximum(acc, row, out=acc)
        return acc
    acc = np.zeros(matrix.shape[1], dtype=np.float64)
    for row in matrix:
        acc += row
    if agg is Aggregation.MEAN:
        acc /= matrix.shape[0]
    return acc


def embed_number(literal: str, table: EmbeddingTable, agg: Aggregation = Aggregation.MEAN) -> np.ndarray:
    return aggregate(embed_digits(tokenize_numeric(literal), table), agg)


def node_feature_vector(
    node: NodeAttrs,
    table: EmbeddingTable,
    agg: Aggregation = Aggregation.MEAN,
    out_dim: int = DEFAULT_OUT_DIM,
) -> np.ndarray:
    """concat(token slot, numeric slot, type slot), each of dimension k."""
    if 3 * table.k != out_dim:
        raise ValueError(f"out_dim {out_dim} is not 3 x k (k={table.k})")
    token_slot = table.token_vector(node.text_token)
    if node.digit_tokens:
        numeric_slot = aggregate(embed_digits(node.digit_tokens, table), agg)
    elif node.numeric_value is not None:
        numeric_slot = embed_number(node.numeric_value, table, agg)
    else:
        numeric_slot = np.zeros(table.k, dtype=np.float64)
    if node.type_string is not None:
        type_slot = table.token_vector(node.type_string)
    else:
        type_slot = np.zeros(table.k, dtype=np.float64)
    return np.concatenate([token_slot, numeric_slot, type_slot])
