"""Node feature assembly from a shared vocabulary file.

Regenerates the producer's seeded lookup tables from vocab.json alone and
assembles the same 120-dim node vectors bit for bit.  The generation
contract being reproduced:

  - symbol alphabet 0-9 a-f . - + x (20 symbols), positions 0..63
  - one PCG64(seed) generator draws each table as uint64 values in
    [0, 2**32), mapped to (u - 2**31) / 2**31
  - draw order: symbol rows, position rows, token rows by vocab id
  - the PAD row (id 0) is zeroed after drawing
  - reductions over digit rows run sequentially in row order
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

ALPHABET = tuple("0123456789abcdef") + (".", "-", "+", "x")
ALPHABET_INDEX = {symbol: i for i, symbol in enumerate(ALPHABET)}
MAX_DIGITS = 64
PAD_ID = 0
UNK_ID = 1


class VocabError(Exception):
    """vocab.json is missing, malformed, or inconsistent."""


class FeatureTables:
    """Symbol, position, and token lookup tables of one shared dimension k."""

    def __init__(self, symbols: np.ndarray, positions: np.ndarray, tokens: np.ndarray,
                 seed: int, k: int):
        self.symbols = symbols
        self.positions = positions
        self.tokens = tokens
        self.seed = seed
        self.k = k
        for arr in (symbols, positions, tokens):
            arr.setflags(write=False)

    @classmethod
    def from_vocab_doc(cls, doc: dict) -> "FeatureTables":
        try:
            seed = int(doc["seed"])
            k = int(doc["k"])
            token_ids = {str(t): int(i) for t, i in doc["tokens"].items()}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise VocabError(f"bad vocab document: {exc}") from exc
        if k <= 0:
            raise VocabError(f"bad embedding dimension k={k}")
        rng = np.random.Generator(np.random.PCG64(seed))

        def draw(rows: int) -> np.ndarray:
            u = rng.integers(0, 2**32, size=(rows, k), dtype=np.uint64)
            return (u.astype(np.float64) - 2.0**31) / 2.0**31

        symbols = draw(len(ALPHABET))
        positions = draw(MAX_DIGITS)
        vocab_size = max(token_ids.values(), default=UNK_ID) + 1
        tokens = draw(vocab_size)
        tokens[PAD_ID] = 0.0
        return cls(symbols, positions, tokens, seed, k)

    @classmethod
    def from_vocab_file(cls, path: Path | str) -> "FeatureTables":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise VocabError(f"cannot read vocab: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise VocabError(f"vocab is not JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("format_version") != 1:
            raise VocabError("unsupported vocab document")
        return cls.from_vocab_doc(doc)

    @property
    def out_dim(self) -> int:
        return 3 * self.k


def _numeric_slot(digit_tokens: list | None, tables: FeatureTables) -> np.ndarray:
    if not digit_tokens:
        return np.zeros(tables.k, dtype=np.float64)
    acc = np.zeros(tables.k, dtype=np.float64)
    for symbol, position in digit_tokens:
        if symbol not in ALPHABET_INDEX or not 0 <= int(position) < MAX_DIGITS:
            raise VocabError(f"bad digit token ({symbol!r}, {position!r})")
        acc += tables.symbols[ALPHABET_INDEX[symbol]] + tables.positions[int(position)]
    acc /= len(digit_tokens)
    return acc


def record_feature(record: dict, tables: FeatureTables) -> np.ndarray:
    """120-dim vector for one bundle node record: token, numeric, and type
    slots of k dims each.  Ids outside the table map to the unknown row."""
    out = np.empty(tables.out_dim, dtype=np.float64)
    k = tables.k

    def token_row(vocab_id) -> np.ndarray:
        i = int(vocab_id)
        if not 0 <= i < tables.tokens.shape[0]:
            i = UNK_ID
        return tables.tokens[i]

    out[0:k] = token_row(record.get("token_id", PAD_ID))
    out[k:2 * k] = _numeric_slot(record.get("digit_tokens"), tables)
    out[2 * k:3 * k] = token_row(record.get("type_id", PAD_ID))
    return out


def table_features(records: list[dict], tables: FeatureTables) -> np.ndarray:
    out = np.empty((len(records), tables.out_dim), dtype=np.float64)
    for i, record in enumerate(records):
        out[i] = record_feature(record, tables)
    return out
