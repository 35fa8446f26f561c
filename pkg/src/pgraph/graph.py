"""Typed multigraph over IR entities, plus equality and statistics helpers.

Node ids are dense and monotonically assigned; nodes are never deleted
(rewrite passes build new graphs instead of mutating destructively).  A
graph is mutable during construction and immutable after `freeze()`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .ir import DimLength


class NodeKind(Enum):
    INSTRUCTION = "Instruction"
    VARIABLE = "Variable"
    CONSTANT = "Constant"
    AGGREGATE_DIM = "AggregateDim"
    EXTERNAL = "External"


class EdgeKind(Enum):
    CONTROL = "Control"
    DATA = "Data"
    CALL = "Call"
    STORE_MODIFY = "StoreModify"
    TYPE_CHAIN = "TypeChain"


class InvariantViolation(Exception):
    pass


DigitToken = tuple[str, int]


@dataclass(frozen=True)
class NodeAttrs:
    """Attribute record shared by all node kinds; optional fields are
    kind-gated (see __post_init__ checks applied at insertion)."""

    text_token: str
    full_text: str = ""
    type_string: str | None = None
    numeric_value: str | None = None
    digit_tokens: tuple[DigitToken, ...] | None = None
    dim_length: DimLength | None = None
    element_type: str | None = None
    function: str | None = None
    source_order: int = 0


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: EdgeKind
    position: int = 0


def _check_attrs(kind: NodeKind, attrs: NodeAttrs) -> None:
    if attrs.numeric_value is not None and kind is not NodeKind.CONSTANT:
        raise InvariantViolation(f"numeric_value only valid on Constant nodes, not {kind.value}")
    if attrs.digit_tokens is not None and kind is not NodeKind.CONSTANT:
        raise InvariantViolation(f"digit_tokens only valid on Constant nodes, not {kind.value}")
    has_dim = attrs.dim_length is not None
    has_elem = attrs.element_type is not None
    if kind is NodeKind.AGGREGATE_DIM:
        if not (has_dim and has_elem):
            raise InvariantViolation("AggregateDim nodes require dim_length and element_type")
    elif has_dim or has_elem:
        raise InvariantViolation(f"dim_length/element_type only valid on AggregateDim nodes, not {kind.value}")


class ProgramGraph:
    def __init__(self, module_name: str = ""):
        self.module_name = module_name
        self._kinds: list[NodeKind] = []
        self._attrs: list[NodeAttrs] = []
        self._edges: list[Edge] = []
        self._edge_keys: set[tuple[int, int, EdgeKind, int]] = set()
        self._frozen = False

    # --- construction ---

    def add_node(self, kind: NodeKind, attrs: NodeAttrs) -> int:
        if self._frozen:
            raise InvariantViolation("graph is frozen")
        if not isinstance(kind, NodeKind):
            raise InvariantViolation(f"kind must be a NodeKind, got {kind!r}")
        _check_attrs(kind, attrs)
        self._kinds.append(kind)
        self._attrs.append(attrs)
        return len(self._kinds) - 1

    def add_edge(self, src: int, dst: int, kind: EdgeKind, position: int = 0) -> Edge:
        if self._frozen:
            raise InvariantViolation("graph is frozen")
        n = len(self._kinds)
        if not (0 <= src < n and 0 <= dst < n):
            raise InvariantViolation(f"edge endpoint out of range: ({src}, {dst}) with {n} nodes")
        if position < 0:
            raise InvariantViolation("edge position must be non-negative")
        if kind not in (EdgeKind.DATA, EdgeKind.CONTROL) and position != 0:
            raise InvariantViolation(f"position must be 0 on {kind.value} edges")
        key = (src, dst, kind, position)
        if key in self._edge_keys:
            raise InvariantViolation(f"duplicate edge {key}")
        self._edge_keys.add(key)
        edge = Edge(src, dst, kind, position)
        self._edges.append(edge)
        return edge

    def has_edge(self, src: int, dst: int, kind: EdgeKind, position: int = 0) -> bool:
        return (src, dst, kind, position) in self._edge_keys

    def set_attrs(self, node_id: int, attrs: NodeAttrs) -> None:
        if self._frozen:
            raise InvariantViolation("graph is frozen")
        _check_attrs(self._kinds[node_id], attrs)
        self._attrs[node_id] = attrs

    def freeze(self) -> "ProgramGraph":
        if sum(1 for k in self._kinds if k is NodeKind.EXTERNAL) != 1:
            raise InvariantViolation("graph must contain exactly one External node")
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # --- access ---

    @property
    def node_count(self) -> int:
        return len(self._kinds)

    def node_ids(self) -> range:
        return range(len(self._kinds))

    def kind(self, node_id: int) -> NodeKind:
        return self._kinds[node_id]

    def attrs(self, node_id: int) -> NodeAttrs:
        return self._attrs[node_id]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges)

    def nodes(self) -> list[tuple[int, NodeKind, NodeAttrs]]:
        return [(i, k, a) for i, (k, a) in enumerate(zip(self._kinds, self._attrs))]

    def copy(self, unfrozen: bool = True) -> "ProgramGraph":
        g = ProgramGraph(self.module_name)
        g._kinds = list(self._kinds)
        g._attrs = list(self._attrs)
        g._edges = list(self._edges)
        g._edge_keys = set(self._edge_keys)
        g._frozen = not unfrozen and self._frozen
        return g

    def __repr__(self) -> str:
        return f"ProgramGraph({self.module_name!r}, nodes={self.node_count}, edges={len(self._edges)})"


def _canonical_order(graph: ProgramGraph) -> list[int]:
    return sorted(
        graph.node_ids(),
        key=lambda i: (
            graph.kind(i).value,
            graph.attrs(i).source_order,
            graph.attrs(i).text_token,
            graph.attrs(i).full_text,
            i,
        ),
    )


def graphs_equal(a: ProgramGraph, b: ProgramGraph) -> bool:
    """Equality after canonical renumbering by (kind, source_order, text_token).

    Construction is deterministic, so label-based canonicalization suffices;
    this is not a general isomorphism test.
    """
    if a.node_count != b.node_count or len(a.edges) != len(b.edges):
        return False
    order_a = _canonical_order(a)
    order_b = _canonical_order(b)
    for ia, ib in zip(order_a, order_b):
        if a.kind(ia) is not b.kind(ib) or a.attrs(ia) != b.attrs(ib):
            return False
    rank_a = {old: new for new, old in enumerate(order_a)}
    rank_b = {old: new for new, old in enumerate(order_b)}
    edges_a = Counter((rank_a[e.src], rank_a[e.dst], e.kind, e.position) for e in a.edges)
    edges_b = Counter((rank_b[e.src], rank_b[e.dst], e.kind, e.position) for e in b.edges)
    return edges_a == edges_b


def stats(graph: ProgramGraph) -> dict:
    """Node counts per kind, edge counts per kind, and max total degree."""
    node_counts = {k.value: 0 for k in NodeKind}
    for i in graph.node_ids():
        node_counts[graph.kind(i).value] += 1
    edge_counts = {k.value: 0 for k in EdgeKind}
    degree = [0] * graph.node_count
    for e in graph.edges:
        edge_counts[e.kind.value] += 1
        degree[e.src] += 1
        degree[e.dst] += 1
    return {
        "nodes": node_counts,
        "edges": edge_counts,
        "max_degree": max(degree, default=0),
    }
