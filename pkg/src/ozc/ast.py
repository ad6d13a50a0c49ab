"""Abstract syntax tree for the Object-Z dialect.

All nodes are immutable and carry a SourceSpan. Spans are excluded from
equality, so `==` compares structure only ("equal modulo spans"), which
is what the parse/pretty-print round-trip property needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .diagnostics import SourceSpan
from .tokens import Decoration

# --- types ------------------------------------------------------------


@dataclass(frozen=True)
class NatType:
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class IntType:
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class BoolType:
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class ClassRef:
    name: str
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class SetLiteralType:
    """Enumerated type written as a set of integer literals, e.g. {1, 2, 3}."""

    values: tuple[int, ...]
    span: SourceSpan = field(compare=False)


TypeExpr = Union[NatType, IntType, BoolType, ClassRef, SetLiteralType]

# --- expressions / predicates -----------------------------------------

ARITH_OPS = ("+", "-", "*", "div", "mod")
COMPARE_OPS = ("=", "!=", "<", "<=", ">", ">=")
LOGIC_OPS = ("and", "or", "not", "implies")


@dataclass(frozen=True)
class IntLiteral:
    value: int
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    decoration: Decoration
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Member:
    obj: "Expr"
    field_name: str
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class SetLiteral:
    elements: tuple["Expr", ...]
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Arith:
    op: str
    left: "Expr"
    right: "Expr"
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Expr"
    right: "Expr"
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class In:
    element: "Expr"
    container: "Expr"
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Logic:
    op: str
    operands: tuple["Expr", ...]
    span: SourceSpan = field(compare=False)


Expr = Union[IntLiteral, Name, Member, SetLiteral, Arith, Compare, In, Logic]
Predicate = Expr


def children(expr: Expr) -> tuple[Expr, ...]:
    if isinstance(expr, Member):
        return (expr.obj,)
    if isinstance(expr, SetLiteral):
        return expr.elements
    if isinstance(expr, (Arith, Compare)):
        return (expr.left, expr.right)
    if isinstance(expr, In):
        return (expr.element, expr.container)
    if isinstance(expr, Logic):
        return expr.operands
    return ()


def walk(expr: Expr) -> Iterator[Expr]:
    """Yield expr and every descendant, pre-order."""
    yield expr
    for child in children(expr):
        yield from walk(child)


def names_in(expr: Expr) -> Iterator[Name]:
    for node in walk(expr):
        if isinstance(node, Name):
            yield node


# --- operation expressions ---------------------------------------------


@dataclass(frozen=True)
class OpRef:
    name: str
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class OpMemberRef:
    obj: str
    name: str
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Choice:
    left: "OpExpr"
    right: "OpExpr"
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Sequential:
    left: "OpExpr"
    right: "OpExpr"
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Parallel:
    left: "OpExpr"
    right: "OpExpr"
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class Conjunction:
    left: "OpExpr"
    right: "OpExpr"
    span: SourceSpan = field(compare=False)


OpExpr = Union[OpRef, OpMemberRef, Choice, Sequential, Parallel, Conjunction]


def op_expr_leaves(expr: OpExpr) -> Iterator[OpRef | OpMemberRef]:
    if isinstance(expr, (OpRef, OpMemberRef)):
        yield expr
    else:
        yield from op_expr_leaves(expr.left)
        yield from op_expr_leaves(expr.right)


# --- declarations -------------------------------------------------------


@dataclass(frozen=True)
class Ident:
    """An identifier occurrence that needs its own span (delta/visibility entries)."""

    name: str
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: TypeExpr
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class ConstantDecl:
    name: str
    type: TypeExpr
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class StateBlock:
    primary: tuple[VarDecl, ...]
    secondary: tuple[VarDecl, ...]
    invariants: tuple[Predicate, ...]
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class InitBlock:
    preds: tuple[Predicate, ...]
    span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class OperationSchema:
    name: str
    delta: tuple[Ident, ...]
    inputs: tuple[VarDecl, ...]
    outputs: tuple[VarDecl, ...]
    preds: tuple[Predicate, ...]
    span: SourceSpan = field(compare=False)
    name_span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class OpExprDef:
    name: str
    expr: OpExpr
    span: SourceSpan = field(compare=False)
    name_span: SourceSpan = field(compare=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    generic_params: tuple[str, ...]
    visibility: tuple[Ident, ...] | None  # None means no list given: all public
    constants: tuple[ConstantDecl, ...]
    axioms: tuple[Predicate, ...]
    state: StateBlock | None
    init: InitBlock | None
    operations: tuple[OperationSchema, ...]
    op_expr_defs: tuple[OpExprDef, ...]
    span: SourceSpan = field(compare=False)
    name_span: SourceSpan = field(compare=False)

    def member_names(self) -> list[str]:
        names = [c.name for c in self.constants]
        if self.state is not None:
            names += [v.name for v in self.state.primary]
            names += [v.name for v in self.state.secondary]
        names += [op.name for op in self.operations]
        names += [d.name for d in self.op_expr_defs]
        return names


@dataclass(frozen=True)
class Specification:
    classes: tuple[ClassDecl, ...]
    span: SourceSpan = field(compare=False)
