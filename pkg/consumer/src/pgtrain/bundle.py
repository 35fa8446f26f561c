"""Bundle directory loader.

A bundle directory holds one graph: a manifest, one node table per node
kind, and one edge table per populated (source kind, relation, dest kind)
triple.  The shared vocab.json lives next to the bundle directories.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .features import FeatureTables, table_features

Relation = tuple[str, str, str]


class BundleError(Exception):
    """A bundle directory is missing pieces or inconsistent."""


@dataclass
class BundleGraph:
    """One graph, ready for the model: per-kind feature matrices and
    per-relation edge indices over kind-local node ids."""

    name: str
    features: dict[str, np.ndarray]
    edges: dict[Relation, np.ndarray]  # int64 of shape (2, count)
    edge_positions: dict[Relation, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def node_counts(self) -> dict[str, int]:
        return {kind: mat.shape[0] for kind, mat in self.features.items()}

    @property
    def edge_counts(self) -> dict[Relation, int]:
        return {rel: idx.shape[1] for rel, idx in self.edges.items()}


def _load_json(path: Path) -> dict:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise BundleError(f"cannot read {path.name}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BundleError(f"{path.name} is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise BundleError(f"{path.name}: expected a JSON object")
    return doc


def load_tables(vocab_path: Path | str) -> tuple[FeatureTables, str]:
    """Feature tables plus the sha256 of the vocab file they came from."""
    data = Path(vocab_path).read_bytes()
    doc = json.loads(data.decode("utf-8"))
    if not isinstance(doc, dict) or doc.get("format_version") != 1:
        raise BundleError(f"{Path(vocab_path).name}: unsupported vocab document")
    return FeatureTables.from_vocab_doc(doc), hashlib.sha256(data).hexdigest()


def load_bundle(
    bundle_dir: Path | str,
    vocab_path: Path | str | None = None,
    tables: FeatureTables | None = None,
    vocab_sha256: str | None = None,
) -> BundleGraph:
    """Load one bundle directory into feature matrices and edge indices.

    The vocab defaults to vocab.json next to the bundle directory.  Pass
    preloaded (tables, vocab_sha256) to amortize table generation across a
    corpus.  The manifest's recorded vocab checksum must match.
    """
    bundle_dir = Path(bundle_dir)
    manifest_path = bundle_dir / "manifest.json"
    if not manifest_path.is_file():
        raise BundleError(f"missing manifest: {manifest_path}")
    manifest = _load_json(manifest_path)
    if manifest.get("format_version") != 1:
        raise BundleError(f"unsupported bundle format_version: {manifest.get('format_version')!r}")

    if tables is None or vocab_sha256 is None:
        if vocab_path is None:
            vocab_path = bundle_dir.parent / "vocab.json"
        if not Path(vocab_path).is_file():
            raise BundleError(f"missing vocab: {vocab_path}")
        tables, vocab_sha256 = load_tables(vocab_path)
    recorded = manifest.get("vocab_sha256", "")
    if recorded and recorded != vocab_sha256:
        raise BundleError(
            f"vocab checksum mismatch: manifest has {recorded[:12]}.., file is {vocab_sha256[:12]}..")

    features: dict[str, np.ndarray] = {}
    for kind, entry in manifest.get("node_files", {}).items():
        doc = _load_json(bundle_dir / entry["file"])
        records = doc.get("records")
        if not isinstance(records, list) or len(records) != entry.get("count"):
            raise BundleError(f"{entry['file']}: record count does not match manifest")
        features[kind] = table_features(records, tables)

    edges: dict[Relation, np.ndarray] = {}
    positions: dict[Relation, np.ndarray] = {}
    for name, entry in manifest.get("edge_files", {}).items():
        doc = _load_json(bundle_dir / entry["file"])
        relation = doc.get("relation")
        rows = doc.get("edges")
        if not isinstance(relation, list) or len(relation) != 3:
            raise BundleError(f"{entry['file']}: bad relation key")
        if not isinstance(rows, list) or len(rows) != entry.get("count"):
            raise BundleError(f"{entry['file']}: edge count does not match manifest")
        src_kind, _, dst_kind = relation
        arr = np.asarray(rows, dtype=np.int64).reshape(len(rows), 3).T
        for endpoint, kind in ((arr[0], src_kind), (arr[1], dst_kind)):
            limit = features.get(kind, np.empty((0, 0))).shape[0]
            if endpoint.size and (endpoint.min() < 0 or endpoint.max() >= limit):
                raise BundleError(f"{entry['file']}: node id out of range for {kind}")
        edges[tuple(relation)] = arr[:2]
        positions[tuple(relation)] = arr[2]

    meta = {
        "module_name": manifest.get("module_name", ""),
        "source_path": manifest.get("source_path", ""),
        "config": manifest.get("config", {}),
        "vocab_sha256": recorded,
    }
    return BundleGraph(bundle_dir.name, features, edges, positions, meta)


def load_corpus(corpus_dir: Path | str) -> list[BundleGraph]:
    """Load every *.bundle directory under a corpus output directory,
    sharing one set of feature tables, in sorted name order."""
    corpus_dir = Path(corpus_dir)
    vocab_path = corpus_dir / "vocab.json"
    if not vocab_path.is_file():
        raise BundleError(f"missing vocab: {vocab_path}")
    tables, sha = load_tables(vocab_path)
    dirs = sorted(p for p in corpus_dir.iterdir() if p.is_dir() and p.name.endswith(".bundle"))
    if not dirs:
        raise BundleError(f"no .bundle directories under {corpus_dir}")
    return [load_bundle(d, tables=tables, vocab_sha256=sha) for d in dirs]
