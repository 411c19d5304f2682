"""Program representation: AST, textual grammar, evaluator, and size measures.

Grammar:  expr := IDENT | IDENT '(' expr (',' expr)? ')'
Identifiers are primitive names (long or short alias), operator names (long or
short alias), step references ``step_K``, or helper names resolved against a
library at evaluation time. Whitespace is insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import grid
from .grid import Canvas

PRIMITIVE_ALIASES = {
    "line_horizontal": "line_h",
    "line_vertical": "line_v",
    "diagonal": "diag",
    "square": "square",
    "triangle": "triangle",
}
OPERATOR_ALIASES = {
    "invert": "invert",
    "reflect_horizontal": "refl_h",
    "reflect_vertical": "refl_v",
    "reflect_diag": "refl_d",
    "add": "add",
    "subtract": "subtract",
    "overlap": "overlap",
}

_PRIMITIVE_BY_IDENT = {}
for long, short in PRIMITIVE_ALIASES.items():
    _PRIMITIVE_BY_IDENT[long] = long
    _PRIMITIVE_BY_IDENT[short] = long
_OPERATOR_BY_IDENT = {}
for long, short in OPERATOR_ALIASES.items():
    _OPERATOR_BY_IDENT[long] = long
    _OPERATOR_BY_IDENT[short] = long

RESERVED_IDENTS = frozenset(_PRIMITIVE_BY_IDENT) | frozenset(_OPERATOR_BY_IDENT)
_STEP_REF = re.compile(r"^step_([0-9]+)$")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class LangError(ValueError):
    """Base class for parse and evaluation errors."""


class ParseError(LangError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ArityError(LangError):
    pass


class UnknownIdentifierError(LangError):
    pass


class UnknownHelperError(LangError):
    def __init__(self, name: str):
        super().__init__(f"unknown helper: {name!r}")
        self.name = name


class StepRefError(LangError):
    """A step reference survived to evaluation, or points out of range."""


@dataclass(frozen=True, slots=True)
class PrimitiveRef:
    name: str  # canonical long name


@dataclass(frozen=True, slots=True)
class LibraryRef:
    name: str


@dataclass(frozen=True, slots=True)
class StepRef:
    index: int  # 1-based step number


@dataclass(frozen=True, slots=True)
class UnaryApp:
    op: str
    child: "Expr"


@dataclass(frozen=True, slots=True)
class BinaryApp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[PrimitiveRef, LibraryRef, StepRef, UnaryApp, BinaryApp]


@dataclass(frozen=True, slots=True)
class ExprMeasures:
    node_count: int
    leaf_count: int
    depth: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _ident(self) -> tuple[str, int]:
        self._skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if m is None:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected identifier, found {found!r}", self.pos)
        start = self.pos
        self.pos = m.end()
        return m.group(0), start

    def _expect(self, ch: str) -> None:
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Expr:
        expr = self._expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected trailing input {self.text[self.pos]!r}", self.pos)
        return expr

    def _expr(self) -> Expr:
        ident, start = self._ident()
        if self._peek() == "(":
            return self._application(ident, start)
        return self._leaf(ident, start)

    def _leaf(self, ident: str, start: int) -> Expr:
        if ident in _PRIMITIVE_BY_IDENT:
            return PrimitiveRef(_PRIMITIVE_BY_IDENT[ident])
        if ident in _OPERATOR_BY_IDENT:
            op = _OPERATOR_BY_IDENT[ident]
            raise ArityError(
                f"operator {op!r} takes {grid.OPERATOR_ARITY[op]} argument(s), got 0"
            )
        m = _STEP_REF.match(ident)
        if m:
            return StepRef(int(m.group(1)))
        return LibraryRef(ident)

    def _application(self, ident: str, start: int) -> Expr:
        self._expect("(")
        args = [self._expr()]
        while self._peek() == ",":
            self._expect(",")
            args.append(self._expr())
        self._expect(")")
        if ident in _OPERATOR_BY_IDENT:
            op = _OPERATOR_BY_IDENT[ident]
            arity = grid.OPERATOR_ARITY[op]
            if len(args) != arity:
                raise ArityError(f"operator {op!r} takes {arity} argument(s), got {len(args)}")
            if arity == 1:
                return UnaryApp(op, args[0])
            return BinaryApp(op, args[0], args[1])
        if ident in _PRIMITIVE_BY_IDENT:
            raise ArityError(f"primitive {ident!r} takes no arguments, got {len(args)}")
        raise UnknownIdentifierError(f"unknown identifier: {ident!r}")


def parse(text: str) -> Expr:
    """Parse program text into an AST; raises ParseError/ArityError/UnknownIdentifierError."""
    return _Parser(text).parse()


def print_expr(e: Expr) -> str:
    """Canonical short-alias rendering; parse(print_expr(e)) == e."""
    if isinstance(e, PrimitiveRef):
        return PRIMITIVE_ALIASES[e.name]
    if isinstance(e, LibraryRef):
        return e.name
    if isinstance(e, StepRef):
        return f"step_{e.index}"
    if isinstance(e, UnaryApp):
        return f"{OPERATOR_ALIASES[e.op]}({print_expr(e.child)})"
    if isinstance(e, BinaryApp):
        return f"{OPERATOR_ALIASES[e.op]}({print_expr(e.left)},{print_expr(e.right)})"
    raise TypeError(f"not an Expr: {e!r}")


def evaluate(e: Expr, lib=None) -> Canvas:
    """Denotational evaluation. ``lib`` resolves helper (and primitive) names.

    Any object with a ``resolve(name) -> Canvas | None`` method works as a
    library. Step references must be inlined before evaluation.
    """
    if isinstance(e, PrimitiveRef):
        if lib is not None:
            canvas = lib.resolve(e.name)
            if canvas is not None:
                return canvas
        return grid.primitive_canvas(e.name)
    if isinstance(e, LibraryRef):
        canvas = lib.resolve(e.name) if lib is not None else None
        if canvas is None:
            raise UnknownHelperError(e.name)
        return canvas
    if isinstance(e, StepRef):
        raise StepRefError(f"unresolved step reference step_{e.index}")
    if isinstance(e, UnaryApp):
        return grid.apply_unary(e.op, evaluate(e.child, lib))
    if isinstance(e, BinaryApp):
        return grid.apply_binary(e.op, evaluate(e.left, lib), evaluate(e.right, lib))
    raise TypeError(f"not an Expr: {e!r}")


def measures(e: Expr) -> ExprMeasures:
    """Node/leaf/depth counts. Helper and step leaves count as single leaves."""
    if isinstance(e, (PrimitiveRef, LibraryRef, StepRef)):
        return ExprMeasures(1, 1, 1)
    if isinstance(e, UnaryApp):
        m = measures(e.child)
        return ExprMeasures(m.node_count + 1, m.leaf_count, m.depth + 1)
    if isinstance(e, BinaryApp):
        ml = measures(e.left)
        mr = measures(e.right)
        return ExprMeasures(
            ml.node_count + mr.node_count + 1,
            ml.leaf_count + mr.leaf_count,
            max(ml.depth, mr.depth) + 1,
        )
    raise TypeError(f"not an Expr: {e!r}")


def expanded_leaf_count(e: Expr, lib) -> int:
    """Leaf count with helper references inlined recursively via their origins."""
    if isinstance(e, PrimitiveRef):
        return 1
    if isinstance(e, LibraryRef):
        origin = lib.origin_of(e.name)
        if origin is None:
            raise UnknownHelperError(e.name)
        if origin == "built-in":
            return 1
        return expanded_leaf_count(origin, lib)
    if isinstance(e, StepRef):
        raise StepRefError(f"unresolved step reference step_{e.index}")
    if isinstance(e, UnaryApp):
        return expanded_leaf_count(e.child, lib)
    if isinstance(e, BinaryApp):
        return expanded_leaf_count(e.left, lib) + expanded_leaf_count(e.right, lib)
    raise TypeError(f"not an Expr: {e!r}")


def leaves(e: Expr):
    """Yield every leaf node in left-to-right order."""
    stack = [e]
    out = []
    while stack:
        node = stack.pop()
        if isinstance(node, (PrimitiveRef, LibraryRef, StepRef)):
            out.append(node)
        elif isinstance(node, UnaryApp):
            stack.append(node.child)
        elif isinstance(node, BinaryApp):
            stack.append(node.right)
            stack.append(node.left)
    return out


def references_helper(e: Expr) -> bool:
    return any(isinstance(leaf, LibraryRef) for leaf in leaves(e))


def inline_steps(e: Expr, resolved: list[Expr]) -> Expr:
    """Replace step references with already-resolved step expressions.

    ``resolved[k-1]`` must be the (step-free) expression of step k. Forward or
    out-of-range references raise StepRefError.
    """
    if isinstance(e, StepRef):
        if not 1 <= e.index <= len(resolved):
            raise StepRefError(
                f"step_{e.index} does not refer to an existing step (have {len(resolved)})"
            )
        return resolved[e.index - 1]
    if isinstance(e, UnaryApp):
        return UnaryApp(e.op, inline_steps(e.child, resolved))
    if isinstance(e, BinaryApp):
        return BinaryApp(e.op, inline_steps(e.left, resolved), inline_steps(e.right, resolved))
    return e
