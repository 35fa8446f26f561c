"""Walkthrough: numeric literals as digit sequences.

Shows the tokenizer, the seeded lookup tables, and how the choice of
aggregation decides whether digit order survives.
"""

import numpy as np

from pgraph import Aggregation, EmbeddingTable, aggregate, embed_digits, tokenize_numeric

np.set_printoptions(precision=4, suppress=True)


def show_tokens(literal):
    seq = tokenize_numeric(literal)
    pairs = " ".join(f"({sym},{pos})" for sym, pos in seq)
    print(f"  {literal!r:<24} -> {pairs}")


def main():
    print("tokenization: (symbol, distance from the ones place)")
    for lit in ["1997", "-12.5", "6.02e23", "0x4014000000000000"]:
        show_tokens(lit)

    # each row is symbol vector + position vector, both drawn once per seed
    table = EmbeddingTable.minimal(seed=42, k=4)
    seq = tokenize_numeric("1997")
    matrix = embed_digits(seq, table)
    print(f"\nembed_digits('1997'), k=4, one row per digit:\n{matrix}")

    for agg in Aggregation:
        print(f"  {agg.name:<4} -> {aggregate(matrix, agg)}")

    # a permutation keeps the multiset of symbols and the multiset of
    # distances, so Sum and Mean cannot tell "1997" from "7991"; Max
    # compares the actual rows and can
    a = embed_digits(tokenize_numeric("1997"), table)
    b = embed_digits(tokenize_numeric("7991"), table)
    print("\npermutation test, '1997' vs '7991':")
    for agg in Aggregation:
        same = np.allclose(aggregate(a, agg), aggregate(b, agg))
        print(f"  {agg.name:<4} {'identical' if same else 'distinct'}")


if __name__ == "__main__":
    main()
