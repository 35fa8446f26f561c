"""Serialization: versioned JSON graphs, DOT visualization, corpus
vocabularies, and the heterogeneous training bundle (per-kind node tables
plus per-relation edge tables).

All file output is UTF-8 with LF newlines and a stable field order, so
reruns over unchanged inputs are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .embedding import DEFAULT_K, DEFAULT_SEED, PAD_ID, PAD_TOKEN, UNK_ID, UNK_TOKEN
from .graph import EdgeKind, NodeAttrs, NodeKind, ProgramGraph
from .ir import DimLength

FORMAT_VERSION = 1


class SchemaError(Exception):
    pass


class VocabMiss(Exception):
    def __init__(self, token: str):
        super().__init__(f"token not in closed vocabulary: {token!r}")
        self.token = token


# --- JSON graph interchange ---


def _dim_to_json(dim: DimLength | None):
    if dim is None:
        return None
    return {"count": dim.count, "scalable": dim.scalable}


def _dim_from_json(obj) -> DimLength | None:
    if obj is None:
        return None
    try:
        return DimLength(int(obj["count"]), bool(obj["scalable"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad dim_length record: {obj!r}") from exc


def _attrs_to_json(attrs: NodeAttrs) -> dict:
    return {
        "text_token": attrs.text_token,
        "full_text": attrs.full_text,
        "type_string": attrs.type_string,
        "numeric_value": attrs.numeric_value,
        "digit_tokens": [[s, p] for s, p in attrs.digit_tokens] if attrs.digit_tokens is not None else None,
        "dim_length": _dim_to_json(attrs.dim_length),
        "element_type": attrs.element_type,
        "function": attrs.function,
        "source_order": attrs.source_order,
    }


def _attrs_from_json(obj: dict) -> NodeAttrs:
    try:
        digit_tokens = obj["digit_tokens"]
        return NodeAttrs(
            text_token=obj["text_token"],
            full_text=obj["full_text"],
            type_string=obj["type_string"],
            numeric_value=obj["numeric_value"],
            digit_tokens=tuple((s, int(p)) for s, p in digit_tokens) if digit_tokens is not None else None,
            dim_length=_dim_from_json(obj["dim_length"]),
            element_type=obj["element_type"],
            function=obj["function"],
            source_order=int(obj["source_order"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad node attribute record: {exc}") from exc


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def to_json(graph: ProgramGraph) -> bytes:
    doc = {
        "format_version": FORMAT_VERSION,
        "module_name": graph.module_name,
        "nodes": [
            {"id": i, "kind": graph.kind(i).value, "attrs": _attrs_to_json(graph.attrs(i))}
            for i in graph.node_ids()
        ],
        "edges": [
            {"src": e.src, "dst": e.dst, "kind": e.kind.value, "position": e.position}
            for e in graph.edges
        ],
    }
    return _dumps(doc).encode("utf-8")


def from_json(data: bytes | str) -> ProgramGraph:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not a JSON document: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top-level value must be an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version: {version!r}")
    for key in ("module_name", "nodes", "edges"):
        if key not in doc:
            raise SchemaError(f"missing field: {key}")
    graph = ProgramGraph(doc["module_name"])
    kinds = {k.value: k for k in NodeKind}
    edge_kinds = {k.value: k for k in EdgeKind}
    for expected, node in enumerate(doc["nodes"]):
        try:
            node_id, kind_name, attrs = node["id"], node["kind"], node["attrs"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad node record: {node!r}") from exc
        if node_id != expected:
            raise SchemaError(f"node ids must be dense and ascending; got {node_id} at index {expected}")
        if kind_name not in kinds:
            raise SchemaError(f"unknown node kind: {kind_name!r}")
        graph.add_node(kinds[kind_name], _attrs_from_json(attrs))
    for edge in doc["edges"]:
        try:
            src, dst, kind_name, position = edge["src"], edge["dst"], edge["kind"], edge["position"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad edge record: {edge!r}") from exc
        if kind_name not in edge_kinds:
            raise SchemaError(f"unknown edge kind: {kind_name!r}")
        try:
            graph.add_edge(int(src), int(dst), edge_kinds[kind_name], int(position))
        except Exception as exc:
            raise SchemaError(f"bad edge record: {exc}") from exc
    try:
        return graph.freeze()
    except Exception as exc:
        raise SchemaError(str(exc)) from exc


# --- DOT ---

_NODE_STYLE = {
    NodeKind.INSTRUCTION: 'shape=box, style=filled, fillcolor="#3c78d8", fontcolor="white"',
    NodeKind.VARIABLE: 'shape=ellipse, style=filled, fillcolor="#f4cccc", color="#990000"',
    NodeKind.CONSTANT: 'shape=diamond, style=filled, fillcolor="#f4cccc", color="#990000"',
    NodeKind.AGGREGATE_DIM: 'shape=box, style=filled, fillcolor="white", color="#990000"',
    NodeKind.EXTERNAL: 'shape=doubleoctagon, style=filled, fillcolor="#d9d9d9"',
}
_EDGE_STYLE = {
    EdgeKind.CONTROL: 'color="#3c78d8"',
    EdgeKind.DATA: 'color="#990000"',
    EdgeKind.CALL: 'color="#65ae4d"',
    EdgeKind.STORE_MODIFY: 'color="#990000", style=dashed',
    EdgeKind.TYPE_CHAIN: 'color="#990000", style=dotted',
}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _node_label(graph: ProgramGraph, node_id: int) -> str:
    kind = graph.kind(node_id)
    attrs = graph.attrs(node_id)
    if kind is NodeKind.INSTRUCTION:
        return attrs.text_token
    if kind is NodeKind.AGGREGATE_DIM:
        return f"{attrs.dim_length} x {attrs.element_type}"
    return attrs.full_text or attrs.text_token


def to_dot(graph: ProgramGraph, style: dict | None = None) -> str:
    node_style = dict(_NODE_STYLE)
    edge_style = dict(_EDGE_STYLE)
    if style:
        for kind, extra in style.get("nodes", {}).items():
            node_style[kind] = extra
        for kind, extra in style.get("edges", {}).items():
            edge_style[kind] = extra
    lines = [f'digraph "{_dot_escape(graph.module_name or "module")}" {{']
    for i in graph.node_ids():
        label = _dot_escape(_node_label(graph, i))
        lines.append(f'  n{i} [label="{label}", {node_style[graph.kind(i)]}];')
    for e in graph.edges:
        attrs = edge_style[e.kind]
        if e.kind in (EdgeKind.DATA, EdgeKind.CONTROL):
            attrs = f'label="{e.position}", {attrs}'
        lines.append(f"  n{e.src} -> n{e.dst} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- vocabulary ---


@dataclass
class Vocab:
    token_to_id: dict[str, int] = field(default_factory=lambda: {PAD_TOKEN: PAD_ID, UNK_TOKEN: UNK_ID})
    seed: int = DEFAULT_SEED
    k: int = DEFAULT_K
    min_count: int = 1
    closed: bool = False

    def id(self, token: str) -> int:
        found = self.token_to_id.get(token)
        if found is not None:
            return found
        if self.closed:
            raise VocabMiss(token)
        return UNK_ID

    def id_to_token(self) -> dict[int, str]:
        return {i: t for t, i in self.token_to_id.items()}

    @property
    def size(self) -> int:
        return max(self.token_to_id.values(), default=UNK_ID) + 1


def _node_tokens(graph: ProgramGraph, node_id: int) -> Iterable[str]:
    attrs = graph.attrs(node_id)
    yield attrs.text_token
    if attrs.type_string is not None:
        yield attrs.type_string
    if attrs.element_type is not None:
        yield attrs.element_type


def build_vocab(
    corpus: Iterable[ProgramGraph],
    min_count: int = 1,
    seed: int = DEFAULT_SEED,
    k: int = DEFAULT_K,
    closed: bool = False,
) -> Vocab:
    """Dense token ids over all text/type tokens of the corpus; 0 and 1 are
    reserved for PAD and UNK; ties broken lexicographically so the result
    is independent of corpus order."""
    counts: Counter[str] = Counter()
    for graph in corpus:
        for i in graph.node_ids():
            counts.update(_node_tokens(graph, i))
    token_to_id = {PAD_TOKEN: PAD_ID, UNK_TOKEN: UNK_ID}
    next_id = 2
    for token in sorted(counts, key=lambda t: (-counts[t], t)):
        if counts[token] >= min_count and token not in token_to_id:
            token_to_id[token] = next_id
            next_id += 1
    return Vocab(token_to_id, seed=seed, k=k, min_count=min_count, closed=closed)


def vocab_to_json(vocab: Vocab) -> bytes:
    ordered = dict(sorted(vocab.token_to_id.items(), key=lambda kv: kv[1]))
    doc = {
        "format_version": FORMAT_VERSION,
        "seed": vocab.seed,
        "k": vocab.k,
        "min_count": vocab.min_count,
        "tokens": ordered,
    }
    return _dumps(doc).encode("utf-8")


def vocab_from_json(data: bytes | str) -> Vocab:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not a JSON document: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise SchemaError("unsupported vocab document")
    try:
        return Vocab(
            token_to_id={str(t): int(i) for t, i in doc["tokens"].items()},
            seed=int(doc["seed"]),
            k=int(doc["k"]),
            min_count=int(doc["min_count"]),
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"bad vocab document: {exc}") from exc


def write_vocab(vocab: Vocab, path: Path | str) -> str:
    """Write vocab.json and return its sha256 hex digest."""
    data = vocab_to_json(vocab)
    with open(path, "wb") as fh:
        fh.write(data)
    return hashlib.sha256(data).hexdigest()


def read_vocab(path: Path | str) -> tuple[Vocab, str]:
    data = Path(path).read_bytes()
    return vocab_from_json(data), hashlib.sha256(data).hexdigest()


# --- heterogeneous bundle ---


@dataclass
class HeteroBundle:
    node_tables: dict[str, list[dict]]
    edge_tables: dict[tuple[str, str, str], list[tuple[int, int, int]]]
    vocab_sha256: str
    meta: dict


def to_hetero_bundle(
    graph: ProgramGraph,
    vocab: Vocab,
    vocab_sha256: str = "",
    source_path: str = "",
    config: dict | None = None,
) -> HeteroBundle:
    """Kind-local node tables with vocab ids substituted for tokens, plus
    per-(srcKind, EdgeKind, dstKind) edge index tables."""
    local_index: dict[int, tuple[str, int]] = {}
    node_tables: dict[str, list[dict]] = {}
    for i in graph.node_ids():
        kind = graph.kind(i).value
        attrs = graph.attrs(i)
        records = node_tables.setdefault(kind, [])
        local_index[i] = (kind, len(records))
        records.append(
            {
                "node": i,
                "source_order": attrs.source_order,
                "token_id": vocab.id(attrs.text_token),
                "type_id": vocab.id(attrs.type_string) if attrs.type_string is not None else PAD_ID,
                "full_text": attrs.full_text,
                "function": attrs.function,
                "numeric_value": attrs.numeric_value,
                "digit_tokens": [[s, p] for s, p in attrs.digit_tokens] if attrs.digit_tokens is not None else None,
                "dim_length": _dim_to_json(attrs.dim_length),
                "element_type_id": vocab.id(attrs.element_type) if attrs.element_type is not None else PAD_ID,
            }
        )
    edge_tables: dict[tuple[str, str, str], list[tuple[int, int, int]]] = {}
    for e in graph.edges:
        src_kind, src_local = local_index[e.src]
        dst_kind, dst_local = local_index[e.dst]
        key = (src_kind, e.kind.value, dst_kind)
        edge_tables.setdefault(key, []).append((src_local, dst_local, e.position))
    meta = {
        "module_name": graph.module_name,
        "source_path": source_path,
        "config": config
        or {
            "unify_identifiers": True,
            "store_modify_edges": True,
            "numeric_values": True,
            "aggregate_chains": True,
        },
    }
    return HeteroBundle(node_tables, edge_tables, vocab_sha256, meta)


def _relation_name(key: tuple[str, str, str]) -> str:
    return "__".join(key)


def write_bundle(bundle: HeteroBundle, outdir: Path | str) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    node_files = {}
    for kind in NodeKind:
        records = bundle.node_tables.get(kind.value)
        if not records:
            continue
        fname = f"{kind.value}.nodes.json"
        doc = {"format_version": FORMAT_VERSION, "kind": kind.value, "records": records}
        with open(outdir / fname, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dumps(doc))
        node_files[kind.value] = {"file": fname, "count": len(records)}
    edge_files = {}
    for key in sorted(bundle.edge_tables):
        entries = bundle.edge_tables[key]
        if not entries:
            continue
        fname = f"{_relation_name(key)}.edges.json"
        doc = {
            "format_version": FORMAT_VERSION,
            "relation": list(key),
            "edges": [list(entry) for entry in entries],
        }
        with open(outdir / fname, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dumps(doc))
        edge_files[_relation_name(key)] = {"file": fname, "count": len(entries)}
    manifest = {
        "format_version": FORMAT_VERSION,
        "module_name": bundle.meta.get("module_name", ""),
        "source_path": bundle.meta.get("source_path", ""),
        "config": bundle.meta.get("config", {}),
        "vocab_sha256": bundle.vocab_sha256,
        "node_files": node_files,
        "edge_files": edge_files,
    }
    with open(outdir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dumps(manifest))


def read_bundle(bundle_dir: Path | str) -> HeteroBundle:
    bundle_dir = Path(bundle_dir)
    manifest_path = bundle_dir / "manifest.json"
    if not manifest_path.is_file():
        raise SchemaError(f"missing manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"bad manifest: {exc}") from exc
    if manifest.get("format_version") != FORMAT_VERSION:
        raise SchemaError(f"unsupported bundle format_version: {manifest.get('format_version')!r}")
    node_tables: dict[str, list[dict]] = {}
    for kind, entry in manifest.get("node_files", {}).items():
        doc = json.loads((bundle_dir / entry["file"]).read_text(encoding="utf-8"))
        records = doc.get("records")
        if not isinstance(records, list) or len(records) != entry["count"]:
            raise SchemaError(f"node table {entry['file']} does not match manifest count")
        node_tables[kind] = records
    edge_tables: dict[tuple[str, str, str], list[tuple[int, int, int]]] = {}
    for name, entry in manifest.get("edge_files", {}).items():
        doc = json.loads((bundle_dir / entry["file"]).read_text(encoding="utf-8"))
        relation = doc.get("relation")
        edges = doc.get("edges")
        if not isinstance(relation, list) or len(relation) != 3:
            raise SchemaError(f"edge table {entry['file']} has a bad relation key")
        if not isinstance(edges, list) or len(edges) != entry["count"]:
            raise SchemaError(f"edge table {entry['file']} does not match manifest count")
        edge_tables[tuple(relation)] = [tuple(int(v) for v in e) for e in edges]
    meta = {
        "module_name": manifest.get("module_name", ""),
        "source_path": manifest.get("source_path", ""),
        "config": manifest.get("config", {}),
    }
    return HeteroBundle(node_tables, edge_tables, manifest.get("vocab_sha256", ""), meta)


def bundle_to_graph(bundle: HeteroBundle, vocab: Vocab) -> ProgramGraph:
    """Reconstruct a flat graph from a bundle; token attributes come back
    as the vocab's canonical spellings (OOV tokens as the UNK marker)."""
    inverse = vocab.id_to_token()
    kinds = {k.value: k for k in NodeKind}
    edge_kinds = {k.value: k for k in EdgeKind}
    entries: list[tuple[int, NodeKind, dict]] = []
    for kind_name, records in bundle.node_tables.items():
        if kind_name not in kinds:
            raise SchemaError(f"unknown node kind: {kind_name!r}")
        for record in records:
            entries.append((int(record["node"]), kinds[kind_name], record))
    entries.sort(key=lambda t: t[0])
    graph = ProgramGraph(bundle.meta.get("module_name", ""))
    remap: dict[int, int] = {}
    for original_id, kind, record in entries:
        try:
            type_id = record["type_id"]
            element_id = record["element_type_id"]
            digit_tokens = record["digit_tokens"]
            attrs = NodeAttrs(
                text_token=inverse.get(record["token_id"], UNK_TOKEN),
                full_text=record["full_text"],
                type_string=inverse.get(type_id, UNK_TOKEN) if type_id != PAD_ID else None,
                numeric_value=record["numeric_value"],
                digit_tokens=tuple((s, int(p)) for s, p in digit_tokens) if digit_tokens is not None else None,
                dim_length=_dim_from_json(record["dim_length"]),
                element_type=inverse.get(element_id, UNK_TOKEN) if element_id != PAD_ID else None,
                function=record["function"],
                source_order=int(record["source_order"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad bundle node record: {exc}") from exc
        remap[original_id] = graph.add_node(kind, attrs)
    local_to_global = {
        (kind_name, local): int(record["node"])
        for kind_name, records in bundle.node_tables.items()
        for local, record in enumerate(records)
    }
    for (src_kind, edge_name, dst_kind), edges in sorted(bundle.edge_tables.items()):
        if edge_name not in edge_kinds:
            raise SchemaError(f"unknown edge kind: {edge_name!r}")
        for src_local, dst_local, position in edges:
            try:
                src = remap[local_to_global[(src_kind, src_local)]]
                dst = remap[local_to_global[(dst_kind, dst_local)]]
            except KeyError as exc:
                raise SchemaError(f"edge references a missing node: {exc}") from exc
            graph.add_edge(src, dst, edge_kinds[edge_name], int(position))
    try:
        return graph.freeze()
    except Exception as exc:
        raise SchemaError(str(exc)) from exc


def vocab_masked(graph: ProgramGraph, vocab: Vocab) -> ProgramGraph:
    """Copy of the graph with every token attribute replaced by its vocab
    canonical spelling; the image of a graph under bundle round-trip."""
    inverse = vocab.id_to_token()

    def canon(token: str | None) -> str | None:
        if token is None:
            return None
        return inverse.get(vocab.id(token), UNK_TOKEN)

    new = graph.copy()
    for i in graph.node_ids():
        attrs = graph.attrs(i)
        new.set_attrs(
            i,
            replace(
                attrs,
                text_token=canon(attrs.text_token),
                type_string=canon(attrs.type_string),
                element_type=canon(attrs.element_type),
            ),
        )
    return new.freeze()
