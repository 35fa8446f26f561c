"""Base program graph construction: instruction, variable, and constant
nodes with control, data, and call edges.

The base graph intentionally gives every use of a stack/global memory
identifier its own Variable node (the duplicate-node shape later collapsed
by the identifier-unification pass), so that pass has an observable effect.
"""

from __future__ import annotations

from .graph import Edge, EdgeKind, NodeAttrs, NodeKind, ProgramGraph
from .ir import (
    GlobalRef,
    IrFunction,
    IrInstruction,
    IrModule,
    IrType,
    LocalRef,
    NumericLiteral,
    OpaqueValue,
    PointerType,
    UndefOrNull,
    type_to_string,
)

UNKNOWN_TYPE_TOKEN = "?"
OPAQUE_CONSTANT_TOKEN = "<opaque>"
EXTERNAL_TOKEN = "external"


class UnresolvedReference(Exception):
    def __init__(self, identifier: str, function: str):
        super().__init__(f"operand %{identifier} in @{function} names an undefined local")
        self.identifier = identifier
        self.function = function


def variable_full_text(type_string: str | None, name: str) -> str:
    """Render a memory/SSA identifier node's full_text; the identifier is
    recoverable as the token after the last space."""
    return f"{type_string or UNKNOWN_TYPE_TOKEN} %{name}"


def variable_identifier(full_text: str) -> str:
    return full_text.rsplit(" ", 1)[-1].lstrip("%@")


def constant_full_text(type_string: str | None, literal: str) -> str:
    return f"{type_string or UNKNOWN_TYPE_TOKEN} {literal}"


def constant_literal(attrs_full_text: str, type_string: str | None) -> str:
    prefix = (type_string or UNKNOWN_TYPE_TOKEN) + " "
    return attrs_full_text[len(prefix):] if attrs_full_text.startswith(prefix) else attrs_full_text


class _FunctionIndex:
    def __init__(self, func: IrFunction):
        self.func = func
        self.param_types: dict[str, IrType] = {p.name: p.type for p in func.params}
        self.result_types: dict[str, IrType | None] = {}
        self.alloca_results: set[str] = set()
        self.labels: set[str] = {b.label for b in func.blocks}
        for block in func.blocks:
            for inst in block.instructions:
                if inst.result is not None:
                    self.result_types[inst.result] = inst.result_type
                    if inst.opcode == "alloca":
                        self.alloca_results.add(inst.result)


class _Builder:
    def __init__(self, module: IrModule):
        self.module = module
        self.graph = ProgramGraph(module.name)
        self.external = self._add(NodeKind.EXTERNAL, text_token=EXTERNAL_TOKEN, full_text=EXTERNAL_TOKEN)
        self.indexes: dict[str, _FunctionIndex] = {f.name: _FunctionIndex(f) for f in module.functions}
        self.globals = {g.name: g for g in module.globals}
        # (function, local name) -> defining Variable node
        self.def_node: dict[tuple[str, str], int] = {}
        # (function, block index, instruction index) -> Instruction node
        self.inst_node: dict[tuple[str, int, int], int] = {}
        # (function, literal text, type string) -> Constant node
        self.const_node: dict[tuple[str, str, str | None], int] = {}
        self.call_sites: list[tuple[str, IrInstruction, int]] = []

    def _add(self, kind: NodeKind, **attrs) -> int:
        return self.graph.add_node(kind, NodeAttrs(source_order=self.graph.node_count, **attrs))

    def build(self) -> ProgramGraph:
        for func in self.module.functions:
            self._declare(func)
        for func in self.module.functions:
            self._connect(func)
        self._connect_calls()
        return self.graph.freeze()

    # --- pass A: nodes for instructions, parameters, and SSA results ---

    def _declare(self, func: IrFunction) -> None:
        index = self.indexes[func.name]
        for param in func.params:
            ts = type_to_string(param.type)
            self.def_node[(func.name, param.name)] = self._add(
                NodeKind.VARIABLE,
                text_token=ts,
                full_text=variable_full_text(ts, param.name),
                type_string=ts,
                function=func.name,
            )
        for bi, block in enumerate(func.blocks):
            for ii, inst in enumerate(block.instructions):
                node = self._add(
                    NodeKind.INSTRUCTION,
                    text_token=inst.opcode,
                    full_text=inst.text,
                    type_string=type_to_string(inst.result_type) if inst.result_type is not None else None,
                    function=func.name,
                )
                self.inst_node[(func.name, bi, ii)] = node
                if inst.result is not None:
                    var = self._variable_node(func.name, inst.result, index)
                    self.graph.add_edge(node, var, EdgeKind.DATA, 0)
                if inst.opcode == "call":
                    self.call_sites.append((func.name, inst, node))

    def _variable_node(self, fname: str, name: str, index: _FunctionIndex) -> int:
        ty = index.result_types.get(name)
        ts = type_to_string(ty) if ty is not None else None
        node = self._add(
            NodeKind.VARIABLE,
            text_token=ts or UNKNOWN_TYPE_TOKEN,
            full_text=variable_full_text(ts, name),
            type_string=ts,
            function=fname,
        )
        self.def_node[(fname, name)] = node
        return node

    # --- pass B: data and control edges within one function ---

    def _connect(self, func: IrFunction) -> None:
        index = self.indexes[func.name]
        for bi, block in enumerate(func.blocks):
            n = len(block.instructions)
            for ii, inst in enumerate(block.instructions):
                node = self.inst_node[(func.name, bi, ii)]
                for pos, operand in enumerate(inst.operands):
                    src = self._operand_node(func.name, operand, index)
                    if src is not None:
                        self.graph.add_edge(src, node, EdgeKind.DATA, pos)
                if ii + 1 < n and not inst.is_terminator:
                    self.graph.add_edge(node, self.inst_node[(func.name, bi, ii + 1)], EdgeKind.CONTROL, 0)
                for si, succ in enumerate(inst.successors):
                    target = self._block_entry(func, succ)
                    if target is not None:
                        self.graph.add_edge(node, target, EdgeKind.CONTROL, si)

    def _block_entry(self, func: IrFunction, label: str) -> int | None:
        for bi, block in enumerate(func.blocks):
            if block.label == label:
                if block.instructions:
                    return self.inst_node[(func.name, bi, 0)]
                return None
        return None

    def _operand_node(self, fname: str, operand, index: _FunctionIndex) -> int | None:
        if isinstance(operand, LocalRef):
            name = operand.name
            if name in index.alloca_results:
                # one fresh Variable node per use site (pre-unification shape)
                ty = index.result_types.get(name)
                ts = type_to_string(ty) if ty is not None else None
                return self._add(
                    NodeKind.VARIABLE,
                    text_token=ts or UNKNOWN_TYPE_TOKEN,
                    full_text=variable_full_text(ts, name),
                    type_string=ts,
                    function=fname,
                )
            key = (fname, name)
            if key in self.def_node:
                return self.def_node[key]
            if name in index.labels:
                return None  # scraped block-label reference in an opaque instruction
            raise UnresolvedReference(name, fname)
        if isinstance(operand, GlobalRef):
            g = self.globals.get(operand.name)
            ts = type_to_string(PointerType(g.type)) if g is not None else None
            return self._add(
                NodeKind.VARIABLE,
                text_token=ts or UNKNOWN_TYPE_TOKEN,
                full_text=f"{ts or UNKNOWN_TYPE_TOKEN} @{operand.name}",
                type_string=ts,
                function=None,
            )
        if isinstance(operand, NumericLiteral):
            ts = type_to_string(operand.type)
            return self._constant(fname, operand.text, ts)
        if isinstance(operand, UndefOrNull):
            ts = type_to_string(operand.type)
            return self._constant(fname, operand.text, ts)
        if isinstance(operand, OpaqueValue):
            return self._constant(fname, operand.text, None, token=OPAQUE_CONSTANT_TOKEN)
        raise TypeError(f"unexpected operand {operand!r}")

    def _constant(self, fname: str, literal: str, ts: str | None, token: str | None = None) -> int:
        key = (fname, literal, ts)
        node = self.const_node.get(key)
        if node is None:
            node = self._add(
                NodeKind.CONSTANT,
                text_token=token or ts or UNKNOWN_TYPE_TOKEN,
                full_text=constant_full_text(ts, literal),
                type_string=ts,
                function=fname,
            )
            self.const_node[key] = node
        return node

    # --- pass C: interprocedural call and return edges ---

    def _connect_calls(self) -> None:
        for fname, inst, node in self.call_sites:
            target = self.module.function(inst.callee) if inst.callee is not None else None
            if target is not None and target.blocks and target.blocks[0].instructions:
                entry = self.inst_node[(target.name, 0, 0)]
                self.graph.add_edge(node, entry, EdgeKind.CALL, 0)
                for bi, block in enumerate(target.blocks):
                    for ii, ret in enumerate(block.instructions):
                        if ret.opcode == "ret":
                            self.graph.add_edge(self.inst_node[(target.name, bi, ii)], node, EdgeKind.CALL, 0)
            else:
                self.graph.add_edge(node, self.external, EdgeKind.CALL, 0)
                self.graph.add_edge(self.external, node, EdgeKind.CALL, 0)


def build_base_graph(module: IrModule) -> ProgramGraph:
    """One Instruction node per instruction, Variable nodes per SSA result,
    parameter, and memory-identifier use, deduplicated Constant nodes per
    function, with Control/Data/Call edges; frozen on return."""
    return _Builder(module).build()
