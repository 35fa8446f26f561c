"""Rewrite passes over the base graph: memory-identifier unification,
store-modification edges, numeric value attachment, and aggregate type
chain expansion, plus the one-shot pipeline with ablation toggles.

Each pass is a pure function producing a new frozen graph.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .builder import build_base_graph, constant_literal
from .embedding import LiteralTooLong, is_numeric_literal, tokenize_numeric
from .graph import EdgeKind, NodeAttrs, NodeKind, ProgramGraph
from .ir import GlobalRef, IrFunction, IrInstruction, IrModule, LocalRef, type_to_string, peel_aggregate_dims
from .parser import IrParseError, parse_type


@dataclass(frozen=True)
class TransformConfig:
    unify_identifiers: bool = True
    store_modify_edges: bool = True
    numeric_values: bool = True
    aggregate_chains: bool = True

    def __post_init__(self):
        if self.store_modify_edges and not self.unify_identifiers:
            raise ValueError("store_modify_edges requires unify_identifiers")


def _identifier_tail(attrs: NodeAttrs) -> str:
    return attrs.full_text.rsplit(" ", 1)[-1]


def _alloca_results(func: IrFunction) -> set[str]:
    return {
        inst.result
        for block in func.blocks
        for inst in block.instructions
        if inst.opcode == "alloca" and inst.result is not None
    }


def _memory_group_key(graph: ProgramGraph, node_id: int, allocas: dict[str, set[str]]):
    """Group key for Variable nodes that name a memory location: alloca'd
    identifiers group per function, globals group module-wide."""
    if graph.kind(node_id) is not NodeKind.VARIABLE:
        return None
    attrs = graph.attrs(node_id)
    tail = _identifier_tail(attrs)
    if tail.startswith("@"):
        return (None, tail)
    if tail.startswith("%") and attrs.function is not None:
        if tail[1:] in allocas.get(attrs.function, ()):
            return (attrs.function, tail)
    return None


def unify_identifier_nodes(graph: ProgramGraph, module: IrModule) -> ProgramGraph:
    """Merge the per-use Variable nodes of each memory identifier into one
    node (the earliest), reattaching all edges.  Non-memory SSA values are
    untouched; idempotent."""
    allocas = {f.name: _alloca_results(f) for f in module.functions}
    keeper: dict = {}
    group_of: dict[int, tuple] = {}
    for i in graph.node_ids():
        key = _memory_group_key(graph, i, allocas)
        if key is not None:
            group_of[i] = key
            keeper.setdefault(key, i)

    new = ProgramGraph(graph.module_name)
    mapping: dict[int, int] = {}
    for i in graph.node_ids():
        key = group_of.get(i)
        if key is not None and keeper[key] != i:
            continue
        mapping[i] = new.add_node(graph.kind(i), graph.attrs(i))
    for i in graph.node_ids():
        if i not in mapping:
            mapping[i] = mapping[keeper[group_of[i]]]
    for e in graph.edges:
        src, dst = mapping[e.src], mapping[e.dst]
        if not new.has_edge(src, dst, e.kind, e.position):
            new.add_edge(src, dst, e.kind, e.position)
    return new.freeze()


def _instruction_nodes(graph: ProgramGraph, module: IrModule) -> list[tuple[int, str, IrInstruction]]:
    """Pair each Instruction node with its IrInstruction by construction
    order (the builder emits them in block order per function)."""
    by_func: dict[str | None, list[int]] = {}
    for i in graph.node_ids():
        if graph.kind(i) is NodeKind.INSTRUCTION:
            by_func.setdefault(graph.attrs(i).function, []).append(i)
    pairs: list[tuple[int, str, IrInstruction]] = []
    for func in module.functions:
        insts = [inst for block in func.blocks for inst in block.instructions]
        nodes = by_func.get(func.name, [])
        if len(insts) != len(nodes):
            raise ValueError(f"graph does not correspond to module (function @{func.name})")
        pairs.extend((node, func.name, inst) for node, inst in zip(nodes, insts))
    return pairs


def _identifier_node_index(graph: ProgramGraph) -> dict[tuple[str | None, str], int]:
    index: dict[tuple[str | None, str], int] = {}
    for i in graph.node_ids():
        if graph.kind(i) is NodeKind.VARIABLE:
            attrs = graph.attrs(i)
            tail = _identifier_tail(attrs)
            key = (None, tail) if tail.startswith("@") else (attrs.function, tail)
            index.setdefault(key, i)
    return index


def _resolve_store_target(
    ptr, fname: str, defs: dict[str, IrInstruction], index: dict[tuple[str | None, str], int]
) -> int | None:
    if isinstance(ptr, GlobalRef):
        return index.get((None, f"@{ptr.name}"))
    if not isinstance(ptr, LocalRef):
        return None
    name = ptr.name
    seen: set[str] = set()
    while name not in seen:
        seen.add(name)
        d = defs.get(name)
        if d is None or d.opcode == "alloca":
            break
        if d.opcode in ("getelementptr", "bitcast") and d.operands:
            base = d.operands[0]
            if isinstance(base, LocalRef):
                name = base.name
                continue
            if isinstance(base, GlobalRef):
                return index.get((None, f"@{base.name}"))
        break
    d = defs.get(name)
    if d is not None and d.opcode == "alloca":
        return index.get((fname, f"%{name}"))
    # not statically a stack or global location: fall back to the pointer
    # operand's own SSA node
    return index.get((fname, f"%{ptr.name}"))


def add_store_modify_edges(graph: ProgramGraph, module: IrModule) -> ProgramGraph:
    """One StoreModify edge per store instruction, from the store node to
    the Variable node of the written identifier (getelementptr/bitcast
    chains resolved to their root alloca when static)."""
    index = _identifier_node_index(graph)
    defs_per_func = {
        f.name: {
            inst.result: inst
            for block in f.blocks
            for inst in block.instructions
            if inst.result is not None
        }
        for f in module.functions
    }
    new = graph.copy()
    for node, fname, inst in _instruction_nodes(graph, module):
        if inst.opcode != "store" or len(inst.operands) < 2:
            continue
        target = _resolve_store_target(inst.operands[1], fname, defs_per_func[fname], index)
        if target is not None and not new.has_edge(node, target, EdgeKind.STORE_MODIFY, 0):
            new.add_edge(node, target, EdgeKind.STORE_MODIFY, 0)
    return new.freeze()


def attach_numeric_values(graph: ProgramGraph) -> ProgramGraph:
    """Give every numeric Constant node its verbatim literal and digit
    tokens; non-numeric constants (null, strings, opaque expressions) and
    over-long literals are left untouched."""
    new = graph.copy()
    for i in graph.node_ids():
        if graph.kind(i) is not NodeKind.CONSTANT:
            continue
        attrs = graph.attrs(i)
        literal = constant_literal(attrs.full_text, attrs.type_string)
        if not is_numeric_literal(literal):
            continue
        try:
            tokens = tokenize_numeric(literal)
        except LiteralTooLong:
            continue
        new.set_attrs(i, replace(attrs, numeric_value=literal, digit_tokens=tokens))
    return new.freeze()


def expand_aggregate_types(graph: ProgramGraph, module: IrModule) -> ProgramGraph:
    """Chain one AggregateDim node per array/vector dimension (outermost
    first) off every Variable node with an aggregate type."""
    del module  # types are recovered from the nodes' own type strings
    new = graph.copy()
    for i in graph.node_ids():
        if graph.kind(i) is not NodeKind.VARIABLE:
            continue
        attrs = graph.attrs(i)
        if not attrs.type_string:
            continue
        try:
            ty = parse_type(attrs.type_string)
        except IrParseError:
            continue
        dims, base = peel_aggregate_dims(ty)
        if not dims:
            continue
        prev = i
        for di, (dim_length, context) in enumerate(dims):
            element = type_to_string(dims[di + 1][1]) if di + 1 < len(dims) else type_to_string(base)
            context_str = type_to_string(context)
            node = new.add_node(
                NodeKind.AGGREGATE_DIM,
                NodeAttrs(
                    text_token=context_str,
                    full_text=context_str,
                    type_string=context_str,
                    dim_length=dim_length,
                    element_type=element,
                    function=attrs.function,
                    source_order=new.node_count,
                ),
            )
            new.add_edge(prev, node, EdgeKind.TYPE_CHAIN, 0)
            prev = node
    return new.freeze()


def build_program_graph(module: IrModule, config: TransformConfig = TransformConfig()) -> ProgramGraph:
    """Base graph with the enabled passes applied in fixed order:
    unify -> store-modify -> numeric -> aggregate."""
    graph = build_base_graph(module)
    if config.unify_identifiers:
        graph = unify_identifier_nodes(graph, module)
    if config.store_modify_edges:
        graph = add_store_modify_edges(graph, module)
    if config.numeric_values:
        graph = attach_numeric_values(graph)
    if config.aggregate_chains:
        graph = expand_aggregate_types(graph, module)
    return graph
