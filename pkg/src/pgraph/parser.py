"""Recursive-descent parser for textual LLVM IR (`.ll`) files.

Covers the instruction subset needed for graph construction, with two modes:
strict mode rejects anything outside the subset, lenient mode degrades
unknown constructs to opaque instructions/operands and keeps going.  The
parser is line-structured: one instruction per logical line, with bracketed
continuations (e.g. multi-line `switch`) joined beforehand.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .ir import (
    ArrayType,
    FloatType,
    GlobalRef,
    IntType,
    IrBlock,
    IrFunction,
    IrGlobal,
    IrInstruction,
    IrModule,
    IrOperand,
    IrParam,
    IrType,
    LabelType,
    LocalRef,
    NumericLiteral,
    OpaqueType,
    OpaqueValue,
    PointerType,
    StructType,
    UndefOrNull,
    VectorType,
    VoidType,
    type_to_string,
)


class IrParseError(Exception):
    """Base class for parse failures; carries the 1-based source line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class IrSyntaxError(IrParseError):
    def __init__(self, line: int, expected: str, found: str):
        super().__init__(line, f"expected {expected}, found {found!r}")
        self.expected = expected
        self.found = found


class UnsupportedConstructError(IrParseError):
    def __init__(self, line: int, construct: str):
        super().__init__(line, f"unsupported construct: {construct}")
        self.construct = construct


class SsaError(IrParseError):
    """Duplicate definition of a local identifier; fatal in every mode."""


@dataclass
class ParseDiagnostics:
    mode: str
    warnings: list[tuple[int, str]] = field(default_factory=list)
    skipped_instructions: int = 0

    def warn(self, line: int, message: str) -> None:
        self.warnings.append((line, message))


# --- lexer ---


class Token(NamedTuple):
    kind: str
    text: str


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<str>c?"[^"]*")
    | (?P<local>%(?:"[^"]*"|[-a-zA-Z$._][-a-zA-Z$._0-9]*|\d+))
    | (?P<glob>@(?:"[^"]*"|[-a-zA-Z$._][-a-zA-Z$._0-9]*|\d+))
    | (?P<meta>!(?:"[^"]*"|[-a-zA-Z$._][-a-zA-Z$._0-9]*|\d+)?)
    | (?P<attrid>\#\d+)
    | (?P<num>[-+]?(?:0[xX][KLMH]?[0-9a-fA-F]+|\d+\.\d*(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?))
    | (?P<ellipsis>\.\.\.)
    | (?P<word>[a-zA-Z$._][-a-zA-Z$._0-9]*)
    | (?P<punct>[=,()\[\]{}<>*:])
    """,
    re.VERBOSE,
)


def _lex(line_no: int, text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise IrSyntaxError(line_no, "a token", text[pos : pos + 10])
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        tokens.append(Token(kind, m.group()))
    return tokens


def _strip_comment(line: str) -> str:
    in_string = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_string = not in_string
        elif ch == ";" and not in_string:
            return line[:i]
    return line


def _logical_lines(text: str) -> list[tuple[int, str]]:
    """Comment-stripped source lines, with bracketed continuations joined."""
    out: list[tuple[int, str]] = []
    pending: str | None = None
    pending_line = 0
    depth = 0
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        in_string = False
        for ch in line:
            if ch == '"':
                in_string = not in_string
            elif not in_string:
                if ch == "[":
                    depth += 1
                elif ch == "]":
                    depth -= 1
        if pending is None:
            pending, pending_line = line, idx
        else:
            pending += " " + line
        if depth <= 0:
            out.append((pending_line, pending))
            pending = None
            depth = 0
    if pending is not None:
        out.append((pending_line, pending))
    return out


class _Cursor:
    def __init__(self, line_no: int, tokens: list[Token]):
        self.line = line_no
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else Token("eof", "")

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.peek().text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise IrSyntaxError(self.line, repr(text), tok.text or "end of line")
        return tok

    @property
    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def error(self, expected: str) -> IrSyntaxError:
        return IrSyntaxError(self.line, expected, self.peek().text or "end of line")


def _unquote(name: str) -> str:
    return name[1:-1] if name.startswith('"') and name.endswith('"') else name


# --- type grammar ---

_FLOAT_WORDS = {"half", "float", "double"}
_OPAQUE_TYPE_WORDS = {
    "bfloat",
    "x86_fp80",
    "fp128",
    "ppc_fp128",
    "x86_mmx",
    "x86_amx",
    "ptr",
    "opaque",
    "metadata",
    "token",
}
_INT_RE = re.compile(r"^i(\d+)$")


def _parse_type_tokens(cur: _Cursor, allow_fn_suffix: bool = True) -> IrType:
    t = _parse_type_base(cur)
    while True:
        if cur.accept("*"):
            t = PointerType(t)
        elif allow_fn_suffix and cur.peek().text == "(":
            # function-type suffix; carried verbatim, not modeled structurally
            cur.next()
            params: list[str] = []
            if not cur.accept(")"):
                params.append(type_to_string(_parse_type_tokens(cur)))
                while cur.accept(","):
                    params.append(type_to_string(_parse_type_tokens(cur)))
                cur.expect(")")
            t = OpaqueType(f"{type_to_string(t)} ({', '.join(params)})")
        elif cur.peek().text == "addrspace" and cur.peek(1).text == "(":
            # address spaces are accepted and dropped (outside the modeled subset)
            cur.next()
            cur.expect("(")
            cur.next()
            cur.expect(")")
            cur.expect("*")
            t = PointerType(t)
        else:
            return t


def _parse_type_base(cur: _Cursor) -> IrType:
    tok = cur.peek()
    if tok.kind == "word":
        m = _INT_RE.match(tok.text)
        if m:
            cur.next()
            return IntType(int(m.group(1)))
        if tok.text in _FLOAT_WORDS:
            cur.next()
            return FloatType(tok.text)
        if tok.text == "void":
            cur.next()
            return VoidType()
        if tok.text == "label":
            cur.next()
            return LabelType()
        if tok.text in _OPAQUE_TYPE_WORDS:
            cur.next()
            return OpaqueType(tok.text)
        raise cur.error("a type")
    if tok.kind == "local":
        cur.next()
        return OpaqueType(tok.text)  # named struct reference, kept verbatim
    if tok.kind == "ellipsis":
        cur.next()
        return OpaqueType("...")
    if tok.text == "[":
        cur.next()
        length = _expect_int(cur)
        _expect_word(cur, "x")
        element = _parse_type_tokens(cur)
        cur.expect("]")
        return ArrayType(length, element)
    if tok.text == "<":
        if cur.peek(1).text == "{":
            cur.next()
            fields = _parse_struct_body(cur)
            cur.expect(">")
            return StructType(fields, packed=True)
        cur.next()
        scalable = False
        if cur.peek().text == "vscale":
            cur.next()
            _expect_word(cur, "x")
            scalable = True
        length = _expect_int(cur)
        _expect_word(cur, "x")
        element = _parse_type_tokens(cur)
        cur.expect(">")
        return VectorType(length, element, scalable=scalable)
    if tok.text == "{":
        return StructType(_parse_struct_body(cur))
    raise cur.error("a type")


def _parse_struct_body(cur: _Cursor) -> tuple[IrType, ...]:
    cur.expect("{")
    fields: list[IrType] = []
    if not cur.accept("}"):
        fields.append(_parse_type_tokens(cur))
        while cur.accept(","):
            fields.append(_parse_type_tokens(cur))
        cur.expect("}")
    return tuple(fields)


def _expect_int(cur: _Cursor) -> int:
    tok = cur.next()
    if tok.kind != "num" or not tok.text.isdigit():
        raise IrSyntaxError(cur.line, "an integer", tok.text or "end of line")
    return int(tok.text)


def _expect_word(cur: _Cursor, word: str) -> None:
    tok = cur.next()
    if tok.kind != "word" or tok.text != word:
        raise IrSyntaxError(cur.line, repr(word), tok.text or "end of line")


def parse_type(text: str) -> IrType:
    """Parse a standalone type string; inverse of type_to_string on the subset."""
    cur = _Cursor(1, _lex(1, text))
    t = _parse_type_tokens(cur)
    if not cur.at_end:
        raise IrSyntaxError(1, "end of type", cur.peek().text)
    return t


# --- operand grammar ---

_UNDEF_WORDS = {"undef", "null", "poison", "zeroinitializer", "none"}
_CONSTEXPR_HEADS = {
    "bitcast",
    "getelementptr",
    "ptrtoint",
    "inttoptr",
    "addrspacecast",
    "trunc",
    "zext",
    "sext",
    "fptrunc",
    "fpext",
    "fptosi",
    "fptoui",
    "sitofp",
    "uitofp",
    "icmp",
    "fcmp",
    "select",
    "add",
    "sub",
    "mul",
    "and",
    "or",
    "xor",
    "shl",
    "lshr",
    "ashr",
    "blockaddress",
}
_OPEN_TO_CLOSE = {"(": ")", "[": "]", "{": "}", "<": ">"}


def _consume_balanced(cur: _Cursor) -> str:
    """Consume a bracketed token group and return its space-joined text."""
    parts: list[str] = []
    stack: list[str] = []
    while True:
        tok = cur.next()
        if tok.kind == "eof":
            raise IrSyntaxError(cur.line, "closing bracket", "end of line")
        parts.append(tok.text)
        if tok.text in _OPEN_TO_CLOSE:
            stack.append(_OPEN_TO_CLOSE[tok.text])
        elif stack and tok.text == stack[-1]:
            stack.pop()
            if not stack:
                return " ".join(parts)
        if not stack:
            return " ".join(parts)


def _parse_value(cur: _Cursor, ty: IrType, lenient: bool) -> IrOperand:
    tok = cur.peek()
    if tok.kind == "local":
        cur.next()
        return LocalRef(_unquote(tok.text[1:]))
    if tok.kind == "glob":
        cur.next()
        return GlobalRef(_unquote(tok.text[1:]))
    if tok.kind == "num":
        cur.next()
        return NumericLiteral(tok.text, ty, is_hex=tok.text.lower().startswith(("0x", "-0x", "+0x")))
    if tok.kind == "word":
        if tok.text in ("true", "false"):
            cur.next()
            return NumericLiteral(tok.text, ty)
        if tok.text in _UNDEF_WORDS:
            cur.next()
            return UndefOrNull(tok.text, ty)
        if tok.text in _CONSTEXPR_HEADS and cur.peek(1).text in ("(", "inbounds"):
            if not lenient:
                raise UnsupportedConstructError(cur.line, f"constant expression '{tok.text} (...)'")
            head = cur.next().text
            flags = []
            while cur.peek().kind == "word" and cur.peek().text != "(":
                flags.append(cur.next().text)
            body = _consume_balanced(cur)
            tail = []
            while cur.peek().kind in ("word",) and cur.peek().text == "to":
                tail.append(cur.next().text)
                tail.append(type_to_string(_parse_type_tokens(cur)))
            return OpaqueValue(" ".join([head, *flags, body, *tail]))
    if tok.kind == "str" or tok.text in ("[", "{", "<"):
        if not lenient:
            raise UnsupportedConstructError(cur.line, f"aggregate or string literal starting {tok.text!r}")
        if tok.kind == "str":
            cur.next()
            return OpaqueValue(tok.text)
        return OpaqueValue(_consume_balanced(cur))
    raise cur.error("an operand")


# --- instruction grammar ---

_BINARY_OPS = {
    "add", "sub", "mul", "udiv", "sdiv", "fadd", "fsub", "fmul", "fdiv",
    "urem", "srem", "frem", "and", "or", "xor", "shl", "lshr", "ashr",
}
_CAST_OPS = {"zext", "sext", "trunc", "fptosi", "sitofp", "bitcast", "fpext", "fptrunc"}
_FLAG_WORDS = {
    "nuw", "nsw", "exact", "inbounds", "volatile",
    "nnan", "ninf", "nsz", "arcp", "contract", "afn", "reassoc", "fast",
}
_ICMP_PREDS = {"eq", "ne", "ugt", "uge", "ult", "ule", "sgt", "sge", "slt", "sle"}
_FCMP_PREDS = {
    "false", "oeq", "ogt", "oge", "olt", "ole", "one", "ord",
    "ueq", "ugt", "uge", "ult", "ule", "une", "uno", "true",
}
_PARAM_ATTR_WORDS = {
    "noundef", "noalias", "nocapture", "readonly", "writeonly", "readnone",
    "nonnull", "signext", "zeroext", "inreg", "immarg", "returned", "nest",
    "swiftself", "nofree", "nosync", "willreturn", "cold", "allocptr", "dead_on_unwind",
}
_PAREN_ATTR_WORDS = {"align", "dereferenceable", "dereferenceable_or_null", "byval", "byref", "sret", "elementtype", "inalloca", "preallocated"}
_CALL_QUALIFIERS = {
    "ccc", "fastcc", "coldcc", "tailcc", "swiftcc", "cfguard_checkcc",
    "noundef", "signext", "zeroext", "inreg",
    "nnan", "ninf", "nsz", "arcp", "contract", "afn", "reassoc", "fast",
}
_FUNC_QUALIFIERS = {
    "private", "internal", "external", "linkonce", "linkonce_odr", "weak",
    "weak_odr", "common", "appending", "extern_weak", "available_externally",
    "dso_local", "dso_preemptable", "hidden", "protected", "default",
    "ccc", "fastcc", "coldcc", "tailcc", "swiftcc",
    "unnamed_addr", "local_unnamed_addr", "noundef", "signext", "zeroext",
}
_GLOBAL_QUALIFIERS = _FUNC_QUALIFIERS | {
    "global", "constant", "thread_local", "externally_initialized", "addrspace",
}

_SUPPORTED_OPCODES = (
    {"alloca", "load", "store", "getelementptr", "icmp", "fcmp", "br", "switch",
     "ret", "call", "phi", "select", "unreachable"}
    | _BINARY_OPS
    | _CAST_OPS
)


def _skip_flags(cur: _Cursor) -> None:
    while cur.peek().kind == "word" and cur.peek().text in _FLAG_WORDS:
        cur.next()


def _skip_param_attrs(cur: _Cursor) -> None:
    while True:
        tok = cur.peek()
        if tok.kind == "word" and tok.text in _PARAM_ATTR_WORDS:
            cur.next()
        elif tok.kind == "word" and tok.text in _PAREN_ATTR_WORDS:
            cur.next()
            if cur.peek().text == "(":
                _consume_balanced(cur)
            elif cur.peek().kind == "num":
                cur.next()
        else:
            return


def _skip_instruction_tail(cur: _Cursor) -> None:
    """Consume trailing `, align N`, metadata and attribute tokens."""
    while not cur.at_end:
        tok = cur.peek()
        if tok.text == ",":
            nxt = cur.peek(1)
            if nxt.kind == "meta":
                cur.next()
                while cur.peek().kind == "meta" or cur.peek().text == ",":
                    cur.next()
                continue
            if nxt.kind == "word" and nxt.text in ("align", "addrspace", "syncscope"):
                cur.next()
                cur.next()
                if cur.peek().text == "(":
                    _consume_balanced(cur)
                elif cur.peek().kind == "num":
                    cur.next()
                continue
            return
        if tok.kind in ("meta", "attrid"):
            cur.next()
            continue
        return


class _InstructionParser:
    def __init__(self, cur: _Cursor, lenient: bool, raw: str):
        self.cur = cur
        self.lenient = lenient
        self.raw = raw

    def parse(self) -> IrInstruction:
        cur = self.cur
        result: str | None = None
        if cur.peek().kind == "local" and cur.peek(1).text == "=":
            result = _unquote(cur.next().text[1:])
            cur.next()
        while cur.peek().kind == "word" and cur.peek().text in ("tail", "musttail", "notail"):
            cur.next()
        opcode_tok = cur.next()
        if opcode_tok.kind != "word":
            raise IrSyntaxError(cur.line, "an opcode", opcode_tok.text or "end of line")
        opcode = opcode_tok.text
        if opcode not in _SUPPORTED_OPCODES:
            raise UnsupportedConstructError(cur.line, f"opcode '{opcode}'")
        inst = self._dispatch(opcode, result)
        _skip_instruction_tail(cur)
        if not cur.at_end:
            raise cur.error("end of instruction")
        return inst

    def _dispatch(self, opcode: str, result: str | None) -> IrInstruction:
        cur = self.cur
        make = lambda **kw: IrInstruction(opcode=opcode, result=result, text=self.raw, **kw)

        if opcode == "unreachable":
            return make()

        if opcode == "alloca":
            ty = self._type()
            operands: list[IrOperand] = []
            if cur.peek().text == "," and cur.peek(1).text not in ("align", "addrspace") and cur.peek(1).kind != "meta":
                cur.next()
                count_ty = self._type()
                operands.append(self._value(count_ty))
            return make(operands=tuple(operands), result_type=PointerType(ty))

        if opcode == "load":
            _skip_flags(cur)
            ty = self._type()
            cur.expect(",")
            ptr_ty = self._type()
            ptr = self._value(ptr_ty)
            return make(operands=(ptr,), result_type=ty)

        if opcode == "store":
            _skip_flags(cur)
            val_ty = self._type()
            val = self._value(val_ty)
            cur.expect(",")
            ptr_ty = self._type()
            ptr = self._value(ptr_ty)
            return make(operands=(val, ptr))

        if opcode == "getelementptr":
            _skip_flags(cur)
            base_ty = self._type()
            cur.expect(",")
            ptr_ty = self._type()
            operands = [self._value(ptr_ty)]
            index_literals: list[IrOperand] = []
            while cur.peek().text == "," and cur.peek(1).text not in ("align",) and cur.peek(1).kind != "meta":
                cur.next()
                idx_ty = self._type()
                idx = self._value(idx_ty)
                operands.append(idx)
                index_literals.append(idx)
            # the first index steps through the pointer operand; only the
            # rest descend into the pointee type
            return make(operands=tuple(operands), result_type=_gep_result_type(base_ty, index_literals[1:]))

        if opcode in _BINARY_OPS:
            _skip_flags(cur)
            ty = self._type()
            lhs = self._value(ty)
            cur.expect(",")
            rhs = self._value(ty)
            return make(operands=(lhs, rhs), result_type=ty)

        if opcode in ("icmp", "fcmp"):
            _skip_flags(cur)
            preds = _ICMP_PREDS if opcode == "icmp" else _FCMP_PREDS
            pred = cur.next()
            if pred.kind != "word" or pred.text not in preds:
                raise IrSyntaxError(cur.line, f"{opcode} predicate", pred.text or "end of line")
            ty = self._type()
            lhs = self._value(ty)
            cur.expect(",")
            rhs = self._value(ty)
            if isinstance(ty, VectorType):
                res: IrType = VectorType(ty.length, IntType(1), scalable=ty.scalable)
            else:
                res = IntType(1)
            return make(operands=(lhs, rhs), result_type=res)

        if opcode in _CAST_OPS:
            src_ty = self._type()
            val = self._value(src_ty)
            _expect_word(cur, "to")
            dst_ty = self._type()
            return make(operands=(val,), result_type=dst_ty)

        if opcode == "br":
            if cur.peek().text == "label":
                cur.next()
                target = self._label_ref()
                return make(successors=(target,))
            ty = self._type()
            cond = self._value(ty)
            cur.expect(",")
            _expect_word(cur, "label")
            then_lbl = self._label_ref()
            cur.expect(",")
            _expect_word(cur, "label")
            else_lbl = self._label_ref()
            return make(operands=(cond,), successors=(then_lbl, else_lbl))

        if opcode == "switch":
            ty = self._type()
            value = self._value(ty)
            cur.expect(",")
            _expect_word(cur, "label")
            default = self._label_ref()
            cur.expect("[")
            operands = [value]
            successors = [default]
            while not cur.accept("]"):
                case_ty = self._type()
                operands.append(self._value(case_ty))
                cur.expect(",")
                _expect_word(cur, "label")
                successors.append(self._label_ref())
            return make(operands=tuple(operands), successors=tuple(successors))

        if opcode == "ret":
            if cur.peek().text == "void":
                cur.next()
                return make()
            ty = self._type()
            return make(operands=(self._value(ty),))

        if opcode == "phi":
            _skip_flags(cur)
            ty = self._type()
            operands = []
            while True:
                cur.expect("[")
                operands.append(self._value(ty))
                cur.expect(",")
                self._label_ref()  # incoming block, not an operand
                cur.expect("]")
                if not cur.accept(","):
                    break
            return make(operands=tuple(operands), result_type=ty)

        if opcode == "select":
            _skip_flags(cur)
            cond_ty = self._type()
            cond = self._value(cond_ty)
            cur.expect(",")
            then_ty = self._type()
            then_val = self._value(then_ty)
            cur.expect(",")
            else_ty = self._type()
            else_val = self._value(else_ty)
            return make(operands=(cond, then_val, else_val), result_type=then_ty)

        if opcode == "call":
            return self._call(result)

        raise UnsupportedConstructError(cur.line, f"opcode '{opcode}'")

    def _call(self, result: str | None) -> IrInstruction:
        cur = self.cur
        while cur.peek().kind == "word" and cur.peek().text in _CALL_QUALIFIERS:
            cur.next()
        # the fn-suffix rule must not eat an explicit function-type prefix here
        ret_ty = _parse_type_tokens(cur, allow_fn_suffix=False)
        # An explicit function type (for varargs / function pointers) may sit
        # between the return type and the callee; detect it by what follows
        # the balanced parens and discard it.
        if cur.peek().text == "(":
            save = cur.pos
            _consume_balanced(cur)
            trailing = cur.peek()
            if trailing.kind in ("glob", "local"):
                while cur.accept("*"):
                    pass
            else:
                cur.pos = save
        callee: str | None = None
        operands: list[IrOperand] = []
        callee_tok = cur.peek()
        if callee_tok.kind == "glob":
            cur.next()
            callee = _unquote(callee_tok.text[1:])
        elif callee_tok.kind == "local":
            cur.next()
            operands.append(LocalRef(_unquote(callee_tok.text[1:])))  # indirect call
        else:
            raise IrSyntaxError(cur.line, "a callee", callee_tok.text or "end of line")
        cur.expect("(")
        if not cur.accept(")"):
            while True:
                arg_ty = self._type()
                _skip_param_attrs(cur)
                operands.append(self._value(arg_ty))
                if cur.accept(")"):
                    break
                cur.expect(",")
        while cur.peek().kind == "attrid" or (
            cur.peek().kind == "word" and cur.peek().text in _PARAM_ATTR_WORDS | {"nounwind", "readnone", "readonly"}
        ):
            cur.next()
        result_type = None if isinstance(ret_ty, VoidType) else ret_ty
        return IrInstruction(
            opcode="call",
            result=result,
            operands=tuple(operands),
            result_type=result_type if result is not None else None,
            callee=callee,
            text=self.raw,
        )

    def _type(self) -> IrType:
        return _parse_type_tokens(self.cur)

    def _value(self, ty: IrType) -> IrOperand:
        return _parse_value(self.cur, ty, self.lenient)

    def _label_ref(self) -> str:
        tok = self.cur.next()
        if tok.kind != "local":
            raise IrSyntaxError(self.cur.line, "a block label reference", tok.text or "end of line")
        return _unquote(tok.text[1:])


def _gep_result_type(base_ty: IrType, indices: list[IrOperand]) -> IrType | None:
    """Walk indices after the initial pointer step; None when not statically known."""
    t: IrType = base_ty
    for idx in indices:
        if isinstance(t, (ArrayType, VectorType)):
            t = t.element
        elif isinstance(t, StructType):
            if isinstance(idx, NumericLiteral) and idx.text.isdigit() and int(idx.text) < len(t.fields):
                t = t.fields[int(idx.text)]
            else:
                return None
        else:
            return None
    return PointerType(t)


# --- module scanner ---


class _FunctionBuilder:
    def __init__(self, name: str, params: list[IrParam], unnamed_counter: int, line: int):
        self.name = name
        self.params = params
        self.unnamed_counter = unnamed_counter
        self.line = line
        self.blocks: list[IrBlock] = []
        self.label: str | None = None
        self.instructions: list[IrInstruction] = []
        self.implicit_blocks = 0

    def start_block(self, label: str) -> None:
        self._flush()
        self.label = label

    def add_instruction(self, inst: IrInstruction, diags: ParseDiagnostics, line: int, lenient: bool) -> None:
        if self.label is None and not self.blocks and not self.instructions:
            self.label = str(self.unnamed_counter)
            self.unnamed_counter += 1
        if self.instructions and self.instructions[-1].is_terminator:
            if not lenient:
                raise IrSyntaxError(line, "a block label after terminator", inst.opcode)
            self.implicit_blocks += 1
            diags.warn(line, f"instruction after terminator; starting implicit block in @{self.name}")
            self._flush()
            self.label = f"implicit.{self.implicit_blocks}"
        self.instructions.append(inst)

    def _flush(self) -> None:
        if self.label is not None or self.instructions:
            self.blocks.append(IrBlock(self.label or "", tuple(self.instructions)))
            self.label = None
            self.instructions = []

    def finish(self, diags: ParseDiagnostics, lenient: bool) -> IrFunction:
        self._flush()
        if not self.blocks:
            raise IrSyntaxError(self.line, "at least one basic block", "}")
        defined: set[str] = set()
        for p in self.params:
            if p.name in defined:
                raise SsaError(self.line, f"duplicate parameter %{p.name} in @{self.name}")
            defined.add(p.name)
        for block in self.blocks:
            for inst in block.instructions:
                if inst.result is not None:
                    if inst.result in defined:
                        raise SsaError(self.line, f"duplicate definition of %{inst.result} in @{self.name}")
                    defined.add(inst.result)
        labels = {b.label for b in self.blocks}
        for block in self.blocks:
            if not block.instructions or not block.instructions[-1].is_terminator:
                if not lenient:
                    raise IrSyntaxError(
                        self.line, f"a terminator ending block %{block.label} in @{self.name}", "end of block"
                    )
                diags.warn(self.line, f"block %{block.label} in @{self.name} has no terminator")
            for inst in block.instructions:
                for succ in inst.successors:
                    if succ not in labels:
                        if not lenient:
                            raise IrSyntaxError(self.line, f"a defined block label (%{succ})", "end of function")
                        diags.warn(self.line, f"branch to undefined label %{succ} in @{self.name}")
        return IrFunction(self.name, tuple(self.params), tuple(self.blocks))


def parse_module(text: str, mode: str = "strict") -> tuple[IrModule, ParseDiagnostics]:
    """Parse one `.ll` translation unit.

    In strict mode anything outside the supported subset raises; in lenient
    mode unknown instructions become opaque (opcode preserved, operands
    scraped best-effort) and are counted in the diagnostics.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"mode must be 'strict' or 'lenient', got {mode!r}")
    lenient = mode == "lenient"
    diags = ParseDiagnostics(mode=mode)

    module_name = "module"
    globals_: list[IrGlobal] = []
    functions: list[IrFunction] = []
    external_decls: list[tuple[str, str]] = []
    fb: _FunctionBuilder | None = None

    for line_no, line in _logical_lines(text):
        try:
            tokens = _lex(line_no, line)
        except IrSyntaxError:
            if lenient:
                diags.warn(line_no, "unlexable line skipped")
                if fb is not None:
                    diags.skipped_instructions += 1
                continue
            raise
        if not tokens:
            continue
        cur = _Cursor(line_no, tokens)
        head = tokens[0]

        if fb is None:
            if head.text == "define":
                fb, leftover = _parse_define_header(cur, line, diags, lenient)
                if leftover:
                    _feed_body_tokens(fb, leftover, line_no, line, diags, lenient)
                    if leftover and leftover[-1].text == "}":
                        functions.append(fb.finish(diags, lenient))
                        fb = None
            elif head.text == "declare":
                decl = _parse_declare(cur, diags, lenient)
                if decl is not None:
                    external_decls.append(decl)
            elif head.kind == "glob":
                g = _parse_global(cur, diags, lenient)
                if g is not None:
                    globals_.append(g)
            elif head.kind == "local" and len(tokens) >= 3 and tokens[1].text == "=" and tokens[2].text == "type":
                continue  # named type definition; referenced opaquely
            elif head.text in ("target", "source_filename", "attributes", "module", "uselistorder") or head.kind in ("meta", "attrid") or head.text.startswith("$"):
                continue
            else:
                if lenient:
                    diags.warn(line_no, f"unrecognized top-level construct {head.text!r} skipped")
                    continue
                raise IrSyntaxError(line_no, "a top-level construct", head.text)
        else:
            if head.text == "}":
                functions.append(fb.finish(diags, lenient))
                fb = None
            elif len(tokens) == 2 and tokens[1].text == ":" and head.kind in ("word", "num", "local"):
                fb.start_block(_unquote(head.text.lstrip("%")))
            else:
                _feed_instruction(fb, cur, line_no, line, diags, lenient)

    if fb is not None:
        raise IrSyntaxError(fb.line, "'}' closing function body", "end of file")

    module = IrModule(
        name=module_name,
        globals=tuple(globals_),
        functions=tuple(functions),
        external_decls=tuple(external_decls),
    )
    return module, diags


def _feed_instruction(
    fb: _FunctionBuilder,
    cur: _Cursor,
    line_no: int,
    raw: str,
    diags: ParseDiagnostics,
    lenient: bool,
) -> None:
    try:
        inst = _InstructionParser(cur, lenient, raw).parse()
    except SsaError:
        raise
    except IrParseError:
        if not lenient:
            raise
        inst = _opaque_instruction(cur.tokens, raw)
        diags.skipped_instructions += 1
        diags.warn(line_no, f"instruction parsed opaquely: {inst.opcode}")
    fb.add_instruction(inst, diags, line_no, lenient)


def _feed_body_tokens(
    fb: _FunctionBuilder,
    tokens: list[Token],
    line_no: int,
    raw: str,
    diags: ParseDiagnostics,
    lenient: bool,
) -> None:
    """Handle a single-line `define ... { inst }` body."""
    body = [t for t in tokens if t.text != "}"]
    if body:
        _feed_instruction(fb, _Cursor(line_no, body), line_no, raw, diags, lenient)


def _opaque_instruction(tokens: list[Token], raw: str) -> IrInstruction:
    result: str | None = None
    idx = 0
    if len(tokens) >= 2 and tokens[0].kind == "local" and tokens[1].text == "=":
        result = _unquote(tokens[0].text[1:])
        idx = 2
    opcode = "unknown"
    for tok in tokens[idx:]:
        if tok.kind == "word" and tok.text not in ("tail", "musttail", "notail"):
            opcode = tok.text
            break
    operands: list[IrOperand] = []
    for tok in tokens[idx:]:
        if tok.kind == "local":
            operands.append(LocalRef(_unquote(tok.text[1:])))
        elif tok.kind == "glob":
            operands.append(GlobalRef(_unquote(tok.text[1:])))
    return IrInstruction(opcode=opcode, result=result, operands=tuple(operands), text=raw)


def _parse_define_header(
    cur: _Cursor, raw: str, diags: ParseDiagnostics, lenient: bool
) -> tuple[_FunctionBuilder, list[Token]]:
    cur.expect("define")
    while cur.peek().kind == "word" and cur.peek().text in _FUNC_QUALIFIERS:
        cur.next()
    _parse_type_tokens(cur)  # return type; recovered from call sites when needed
    name_tok = cur.next()
    if name_tok.kind != "glob":
        raise IrSyntaxError(cur.line, "a function name", name_tok.text or "end of line")
    name = _unquote(name_tok.text[1:])
    cur.expect("(")
    params: list[IrParam] = []
    unnamed = 0
    if not cur.accept(")"):
        while True:
            if cur.peek().kind == "ellipsis":
                cur.next()
            else:
                pty = _parse_type_tokens(cur)
                _skip_param_attrs(cur)
                if cur.peek().kind == "local":
                    pname = _unquote(cur.next().text[1:])
                else:
                    pname = str(unnamed)
                if pname == str(unnamed):
                    unnamed += 1
                params.append(IrParam(pname, pty))
            if cur.accept(")"):
                break
            cur.expect(",")
    leftover: list[Token] = []
    while not cur.at_end:
        tok = cur.next()
        if tok.text == "{":
            leftover = cur.tokens[cur.pos :]
            break
    return _FunctionBuilder(name, params, unnamed, cur.line), leftover


def _parse_declare(cur: _Cursor, diags: ParseDiagnostics, lenient: bool) -> tuple[str, str] | None:
    cur.expect("declare")
    try:
        while cur.peek().kind == "word" and cur.peek().text in _FUNC_QUALIFIERS:
            cur.next()
        ret_ty = _parse_type_tokens(cur)
        name_tok = cur.next()
        if name_tok.kind != "glob":
            raise IrSyntaxError(cur.line, "a function name", name_tok.text or "end of line")
        name = _unquote(name_tok.text[1:])
        cur.expect("(")
        param_sigs: list[str] = []
        if not cur.accept(")"):
            while True:
                if cur.peek().kind == "ellipsis":
                    cur.next()
                    param_sigs.append("...")
                else:
                    pty = _parse_type_tokens(cur)
                    _skip_param_attrs(cur)
                    if cur.peek().kind == "local":
                        cur.next()
                    param_sigs.append(type_to_string(pty))
                if cur.accept(")"):
                    break
                cur.expect(",")
        signature = f"{type_to_string(ret_ty)} ({', '.join(param_sigs)})"
        return name, signature
    except IrParseError:
        if lenient:
            diags.warn(cur.line, "declaration parsed opaquely")
            return None
        raise


def _parse_global(cur: _Cursor, diags: ParseDiagnostics, lenient: bool) -> IrGlobal | None:
    name_tok = cur.next()
    name = _unquote(name_tok.text[1:])
    try:
        cur.expect("=")
        is_constant = False
        while cur.peek().kind == "word" and (cur.peek().text in _GLOBAL_QUALIFIERS):
            word = cur.next().text
            if word == "constant":
                is_constant = True
                break
            if word == "global":
                break
            if word == "addrspace" and cur.peek().text == "(":
                _consume_balanced(cur)
        else:
            raise IrSyntaxError(cur.line, "'global' or 'constant'", cur.peek().text or "end of line")
        ty = _parse_type_tokens(cur)
        init_parts: list[str] = []
        while not cur.at_end:
            tok = cur.peek()
            if tok.text == ",":
                nxt = cur.peek(1)
                if nxt.kind == "word" and nxt.text in ("align", "section", "comdat", "partition", "no_sanitize_address"):
                    break
                if nxt.kind == "meta":
                    break
            if tok.kind in ("meta", "attrid"):
                break
            if tok.text in ("(", "[", "{", "<"):
                init_parts.append(_consume_balanced(cur))
            else:
                init_parts.append(cur.next().text)
        initializer = " ".join(init_parts) if init_parts else None
        return IrGlobal(name, ty, initializer, is_constant)
    except IrParseError:
        if lenient:
            diags.warn(cur.line, f"global @{name} parsed opaquely")
            return IrGlobal(name, OpaqueType("opaque"), None, False)
        raise
