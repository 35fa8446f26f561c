"""Digit tokenizer, seeded tables, aggregation, and feature assembly.

The brute-force oracles below re-derive every value from the documented
generation contract instead of calling table internals, so any drift in
draw order or arithmetic shows up as a bit-level mismatch.
"""

import random

import numpy as np
import pytest

from pgraph.embedding import (
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
from pgraph.graph import NodeAttrs


def test_alphabet_is_the_pinned_interchange_order():
    assert ALPHABET == tuple("0123456789abcdef") + (".", "-", "+", "x")
    assert len(ALPHABET) == 20
    assert len(set(ALPHABET)) == 20
    assert MAX_DIGITS == 64


def test_tokenize_examples():
    assert tokenize_numeric("1997") == (("1", 3), ("9", 2), ("9", 1), ("7", 0))
    assert tokenize_numeric("0") == (("0", 0),)
    assert tokenize_numeric("-12") == (("-", 2), ("1", 1), ("2", 0))


def test_tokenize_float_scientific():
    toks = tokenize_numeric("3.000000e+00")
    assert [s for s, _ in toks] == list("3.000000e+00")
    # integer part is the single '3'; everything right of it counts outward
    assert toks[0] == ("3", 0)
    assert toks[1] == (".", 1)
    assert toks[-1] == ("0", 11)


def test_tokenize_decimal_positions_are_place_values():
    toks = tokenize_numeric("12.5")
    assert toks == (("1", 1), ("2", 0), (".", 1), ("5", 2))


def test_tokenize_hex_counts_from_last_digit():
    toks = tokenize_numeric("0x1A2B")
    assert toks == (("0", 5), ("x", 4), ("1", 3), ("a", 2), ("2", 1), ("b", 0))


def test_tokenize_lowercases():
    assert tokenize_numeric("1E5") == (("1", 0), ("e", 1), ("5", 2))


def test_tokenize_rejections():
    with pytest.raises(NonNumeric):
        tokenize_numeric("hello")
    with pytest.raises(NonNumeric):
        tokenize_numeric("null")
    with pytest.raises(NonNumeric):
        tokenize_numeric("")
    with pytest.raises(NonNumeric):
        tokenize_numeric("0xK4000")  # special-valued hex forms stay opaque
    with pytest.raises(LiteralTooLong):
        tokenize_numeric("1" * 65)
    assert len(tokenize_numeric("1" * 64)) == 64


def test_is_numeric_literal():
    for text in ("0", "-7", "+7", "12.5", ".5", "1e9", "3.000000e+00", "0x1f"):
        assert is_numeric_literal(text), text
    for text in ("null", "undef", "true", "x", "1.2.3", "0x", "--1"):
        assert not is_numeric_literal(text), text


def test_positions_always_fit_the_table():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, MAX_DIGITS)
        literal = "".join(rng.choice("0123456789") for _ in range(n))
        for _, pos in tokenize_numeric(literal):
            assert 0 <= pos < MAX_DIGITS


# --- brute-force table oracle ---


def brute_tables(seed, k, vocab):
    """Re-derive tables straight from the documented generation contract."""
    rng = np.random.Generator(np.random.PCG64(seed))

    def draw(rows):
        u = rng.integers(0, 2 ** 32, size=(rows, k), dtype=np.uint64)
        return (u.astype(np.float64) - 2.0 ** 31) / 2.0 ** 31

    symbols = draw(len(ALPHABET))
    positions = draw(MAX_DIGITS)
    tokens = draw(len(vocab))
    tokens[PAD_ID] = 0.0
    return symbols, positions, tokens


VOCAB = {PAD_TOKEN: 0, UNK_TOKEN: 1, "store": 2, "i32": 3, "ret": 4}


def test_table_generation_matches_brute_force_bit_exactly():
    table = EmbeddingTable.from_vocab(VOCAB, seed=123, k=7)
    sym, pos, tok = brute_tables(123, 7, VOCAB)
    assert table.symbols.tobytes() == sym.tobytes()
    assert table.positions.tobytes() == pos.tobytes()
    assert table.tokens.tobytes() == tok.tobytes()


def test_pad_row_is_zero_unk_is_not():
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=5)
    assert not table.token_vector(PAD_TOKEN).any()
    assert table.token_vector(UNK_TOKEN).any()


def test_same_seed_same_tables_different_seed_different():
    a = EmbeddingTable.from_vocab(VOCAB, seed=9, k=6)
    b = EmbeddingTable.from_vocab(VOCAB, seed=9, k=6)
    c = EmbeddingTable.from_vocab(VOCAB, seed=10, k=6)
    assert a.symbols.tobytes() == b.symbols.tobytes()
    assert a.tokens.tobytes() == b.tokens.tobytes()
    assert a.symbols.tobytes() != c.symbols.tobytes()


def test_values_are_in_unit_interval():
    table = EmbeddingTable.from_vocab(VOCAB, seed=0, k=16)
    for arr in (table.symbols, table.positions, table.tokens):
        assert arr.dtype == np.float64
        assert (arr >= -1.0).all() and (arr < 1.0).all()


def test_embed_digits_shape_and_rows():
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=3)
    seq = tokenize_numeric("1997")
    m = embed_digits(seq, table)
    assert m.shape == (4, 3)
    sym, pos, _ = brute_tables(DEFAULT_SEED, 3, VOCAB)
    for i, (s, p) in enumerate(seq):
        expected = sym[ALPHABET.index(s)] + pos[p]
        assert m[i].tobytes() == expected.tobytes()


def test_embed_digits_single_symbol():
    table = EmbeddingTable.from_vocab(VOCAB, seed=4, k=8)
    m = embed_digits((("7", 0),), table)
    assert m.shape == (1, 8)
    expected = table.symbol_vector("7") + table.position_vector(0)
    assert m[0].tobytes() == expected.tobytes()


def test_aggregate_shapes_and_identities():
    table = EmbeddingTable.from_vocab(VOCAB, seed=2, k=3)
    m = embed_digits(tokenize_numeric("1997"), table)
    for agg in Aggregation:
        v = aggregate(m, agg)
        assert v.shape == (3,)
    row = m[:1]
    for agg in Aggregation:
        assert aggregate(row, agg).tobytes() == m[0].tobytes()
    same = np.tile(m[0], (5, 1))
    assert aggregate(same, Aggregation.MEAN).tobytes() == m[0].tobytes()
    with pytest.raises(EmptySequence):
        aggregate(np.zeros((0, 3)), Aggregation.SUM)


def _column_sum(m):
    # sequential element-wise accumulation, the pinned reduction order
    out = []
    for j in range(m.shape[1]):
        acc = 0.0
        for i in range(m.shape[0]):
            acc += float(m[i, j])
        out.append(acc)
    return np.array(out)


def test_aggregate_matches_brute_force_zero_ulp():
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=11)
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 20)
        literal = "".join(rng.choice("0123456789") for _ in range(n))
        m = embed_digits(tokenize_numeric(literal), table)
        s = _column_sum(m)
        assert aggregate(m, Aggregation.SUM).tobytes() == s.tobytes()
        assert aggregate(m, Aggregation.MEAN).tobytes() == (s / m.shape[0]).tobytes()
        mx = m[0].copy()
        for i in range(1, m.shape[0]):
            mx = np.maximum(mx, m[i])
        assert aggregate(m, Aggregation.MAX).tobytes() == mx.tobytes()


def test_embed_number_composition_and_shape():
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=DEFAULT_K)
    v = embed_number("1997", table, Aggregation.MEAN)
    assert v.shape == (DEFAULT_K,)
    single = embed_number("7", table, Aggregation.SUM)
    expected = table.symbol_vector("7") + table.position_vector(0)
    assert single.tobytes() == expected.tobytes()


def test_embed_number_distinguishes_permutations_under_max():
    # Sum/Mean cannot separate digit permutations: sum(sym_i + pos_i) only
    # sees the two multisets, and a permutation preserves both.  The
    # positional pairing survives only through the non-linear Max path.
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=DEFAULT_K)
    a = embed_number("1997", table, Aggregation.MAX)
    b = embed_number("7991", table, Aggregation.MAX)
    assert not np.array_equal(a, b)
    for agg in (Aggregation.SUM, Aggregation.MEAN):
        x = embed_number("1997", table, agg)
        y = embed_number("7991", table, agg)
        assert np.allclose(x, y)  # equal up to summation-order rounding


def test_embed_number_constant_output_dimension():
    table = EmbeddingTable.from_vocab(VOCAB, seed=1, k=9)
    dims = {embed_number(lit, table, Aggregation.MEAN).shape for lit in ("5", "123456", "-2.5e10")}
    assert dims == {(9,)}


def test_node_feature_vector_layout():
    k = DEFAULT_K
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=k)
    store = NodeAttrs(text_token="store", full_text="store i32 0, i32* %p")
    v = node_feature_vector(store, table, Aggregation.MEAN, DEFAULT_OUT_DIM)
    assert v.shape == (DEFAULT_OUT_DIM,)
    assert v[:k].tobytes() == table.token_vector("store").tobytes()
    assert not v[k:].any()

    const = NodeAttrs(text_token="i32", full_text="i32 0", type_string="i32",
                      numeric_value="0", digit_tokens=(("0", 0),))
    v = node_feature_vector(const, table, Aggregation.MEAN, DEFAULT_OUT_DIM)
    assert v[:k].tobytes() == table.token_vector("i32").tobytes()
    assert v[k:2 * k].tobytes() == embed_number("0", table, Aggregation.MEAN).tobytes()
    assert v[2 * k:].tobytes() == table.token_vector("i32").tobytes()


def test_node_feature_vector_unk_fallback():
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=DEFAULT_K)
    node = NodeAttrs(text_token="nostalgia", full_text="nostalgia")
    v = node_feature_vector(node, table, Aggregation.MEAN, DEFAULT_OUT_DIM)
    assert v[:DEFAULT_K].tobytes() == table.tokens[UNK_ID].tobytes()


def test_node_feature_vector_dim_mismatch():
    table = EmbeddingTable.from_vocab(VOCAB, seed=DEFAULT_SEED, k=10)
    node = NodeAttrs(text_token="ret", full_text="ret void")
    with pytest.raises(ValueError):
        node_feature_vector(node, table, Aggregation.MEAN, 120)
    assert node_feature_vector(node, table, Aggregation.MEAN, 30).shape == (30,)


def test_minimal_table_covers_pad_and_unk():
    table = EmbeddingTable.minimal(seed=DEFAULT_SEED, k=4)
    assert table.token_ids[PAD_TOKEN] == PAD_ID
    assert table.token_ids[UNK_TOKEN] == UNK_ID
    assert table.tokens.shape[0] == 2
