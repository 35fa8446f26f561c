"""Consume program-graph tensor bundles and train a relational GNN.

Reads the producer's interchange files only: bundle directories plus the
shared vocab.json.  Feature tables are regenerated from the vocab so node
vectors match the producer bit for bit.
"""

from .bundle import BundleError, BundleGraph, load_bundle, load_corpus, load_tables
from .features import ALPHABET, MAX_DIGITS, PAD_ID, UNK_ID, FeatureTables, VocabError, record_feature, table_features
from .model import RelConvLayer, RelGraphClassifier
from .train import TrainError, smoke_train

__all__ = [
    "ALPHABET",
    "BundleError",
    "BundleGraph",
    "FeatureTables",
    "MAX_DIGITS",
    "PAD_ID",
    "RelConvLayer",
    "RelGraphClassifier",
    "TrainError",
    "UNK_ID",
    "VocabError",
    "load_bundle",
    "load_corpus",
    "load_tables",
    "record_feature",
    "smoke_train",
    "table_features",
]
