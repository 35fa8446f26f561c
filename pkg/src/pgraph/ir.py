"""In-memory model of the supported LLVM IR subset.

Everything here is immutable after construction and independent of parsing;
the textual type rendering follows LLVM's own syntax so that rendering and
re-parsing round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

_FLOAT_KINDS = ("half", "float", "double")


@dataclass(frozen=True)
class IntType:
    bits: int

    def __post_init__(self) -> None:
        if self.bits <= 0:
            raise ValueError(f"integer bit width must be positive, got {self.bits}")


@dataclass(frozen=True)
class FloatType:
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _FLOAT_KINDS:
            raise ValueError(f"unknown float kind {self.kind!r}")


@dataclass(frozen=True)
class PointerType:
    pointee: "IrType"


@dataclass(frozen=True)
class ArrayType:
    length: int
    element: "IrType"

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("array length must be non-negative")
        _check_element(self.element)


@dataclass(frozen=True)
class VectorType:
    length: int
    element: "IrType"
    scalable: bool = False

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise ValueError("vector length must be positive")
        _check_element(self.element)


@dataclass(frozen=True)
class StructType:
    fields: tuple["IrType", ...]
    packed: bool = False


@dataclass(frozen=True)
class VoidType:
    pass


@dataclass(frozen=True)
class LabelType:
    pass


@dataclass(frozen=True)
class OpaqueType:
    """A type we carry verbatim without interpreting (named structs, `ptr`, ...)."""

    name: str


IrType = Union[
    IntType,
    FloatType,
    PointerType,
    ArrayType,
    VectorType,
    StructType,
    VoidType,
    LabelType,
    OpaqueType,
]


def _check_element(t: IrType) -> None:
    if isinstance(t, (VoidType, LabelType)):
        raise ValueError("array/vector element type cannot be void or label")


def type_to_string(t: IrType) -> str:
    """Render a type in canonical LLVM syntax (pointers with a trailing `*`)."""
    if isinstance(t, IntType):
        return f"i{t.bits}"
    if isinstance(t, FloatType):
        return t.kind
    if isinstance(t, PointerType):
        return type_to_string(t.pointee) + "*"
    if isinstance(t, ArrayType):
        return f"[{t.length} x {type_to_string(t.element)}]"
    if isinstance(t, VectorType):
        if t.scalable:
            return f"<vscale x {t.length} x {type_to_string(t.element)}>"
        return f"<{t.length} x {type_to_string(t.element)}>"
    if isinstance(t, StructType):
        inner = ", ".join(type_to_string(f) for f in t.fields)
        body = "{ " + inner + " }" if t.fields else "{}"
        return "<" + body + ">" if t.packed else body
    if isinstance(t, VoidType):
        return "void"
    if isinstance(t, LabelType):
        return "label"
    if isinstance(t, OpaqueType):
        return t.name
    raise TypeError(f"not an IR type: {t!r}")


@dataclass(frozen=True)
class DimLength:
    """Length of one array/vector dimension; `scalable` marks vscale lengths."""

    count: int
    scalable: bool = False

    def __str__(self) -> str:
        return f"vscale x {self.count}" if self.scalable else str(self.count)


def peel_aggregate_dims(t: IrType) -> tuple[list[tuple[DimLength, IrType]], IrType]:
    """Decompose nested array/vector types into per-dimension entries.

    Returns (dims, base) where dims is ordered outermost-first and each entry
    carries the sub-type rooted at that dimension as its context.  Pointer
    wrappers are skipped at the outermost level only; an interior pointer
    terminates the chain.  Non-aggregate types yield an empty dims list.
    """
    while isinstance(t, PointerType):
        t = t.pointee
    dims: list[tuple[DimLength, IrType]] = []
    while isinstance(t, (ArrayType, VectorType)):
        scalable = isinstance(t, VectorType) and t.scalable
        dims.append((DimLength(t.length, scalable), t))
        t = t.element
    return dims, t


# --- operands ---


@dataclass(frozen=True)
class LocalRef:
    name: str


@dataclass(frozen=True)
class GlobalRef:
    name: str


@dataclass(frozen=True)
class NumericLiteral:
    """A literal operand, kept as the exact source spelling."""

    text: str
    type: IrType
    is_hex: bool = False


@dataclass(frozen=True)
class UndefOrNull:
    text: str  # "undef", "null", "poison" or "zeroinitializer"
    type: IrType


@dataclass(frozen=True)
class BlockLabel:
    label: str


@dataclass(frozen=True)
class OpaqueValue:
    """Lenient-mode stand-in for operands we do not model (constant exprs etc.)."""

    text: str


IrOperand = Union[LocalRef, GlobalRef, NumericLiteral, UndefOrNull, BlockLabel, OpaqueValue]


# --- module structure ---

TERMINATOR_OPCODES = frozenset({"br", "ret", "switch", "unreachable"})


@dataclass(frozen=True)
class IrInstruction:
    opcode: str
    operands: tuple[IrOperand, ...] = ()
    result: str | None = None
    result_type: IrType | None = None
    successors: tuple[str, ...] = ()
    callee: str | None = None
    text: str = ""

    @property
    def is_terminator(self) -> bool:
        return self.opcode in TERMINATOR_OPCODES


@dataclass(frozen=True)
class IrBlock:
    label: str
    instructions: tuple[IrInstruction, ...]


@dataclass(frozen=True)
class IrParam:
    name: str
    type: IrType


@dataclass(frozen=True)
class IrFunction:
    name: str
    params: tuple[IrParam, ...]
    blocks: tuple[IrBlock, ...]
    is_definition: bool = True

    def __post_init__(self) -> None:
        if self.is_definition and not self.blocks:
            raise ValueError(f"function definition @{self.name} has no blocks")

    @property
    def entry_block(self) -> IrBlock:
        return self.blocks[0]


@dataclass(frozen=True)
class IrGlobal:
    name: str
    type: IrType
    initializer: str | None = None
    is_constant: bool = False


@dataclass(frozen=True)
class IrModule:
    name: str
    globals: tuple[IrGlobal, ...] = ()
    functions: tuple[IrFunction, ...] = ()
    external_decls: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        names = [f.name for f in self.functions]
        if len(names) != len(set(names)):
            raise ValueError("function names must be unique within a module")
        gnames = [g.name for g in self.globals]
        if len(gnames) != len(set(gnames)):
            raise ValueError("global identifiers must be unique within a module")

    def function(self, name: str) -> IrFunction | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None
