"""Canonical text renderer for dialect ASTs.

The output re-parses to an AST equal to the input (modulo spans); the
predicate renderer is also reused verbatim for contract detail strings
in generated code.
"""

from __future__ import annotations

from . import ast
from .tokens import Decoration

# Binding strength, tighter binds higher. Comparisons do not chain, so
# nested comparisons are always parenthesized.
_IMPLIES, _OR, _AND, _NOT, _CMP, _ADD, _MUL, _POSTFIX = range(1, 9)

_DECORATION_SUFFIX = {
    Decoration.NONE: "",
    Decoration.PRIMED: "'",
    Decoration.INPUT: "?",
    Decoration.OUTPUT: "!",
}


def print_type(t: ast.TypeExpr) -> str:
    if isinstance(t, ast.NatType):
        return "NAT"
    if isinstance(t, ast.IntType):
        return "INT"
    if isinstance(t, ast.BoolType):
        return "BOOL"
    if isinstance(t, ast.ClassRef):
        return t.name
    return "{" + ", ".join(str(v) for v in t.values) + "}"


def print_predicate(expr: ast.Expr) -> str:
    return _expr(expr, _IMPLIES)


def _paren(text: str, level: int, minimum: int) -> str:
    return f"({text})" if level < minimum else text


def _expr(expr: ast.Expr, minimum: int) -> str:
    if isinstance(expr, ast.IntLiteral):
        return str(expr.value)
    if isinstance(expr, ast.Name):
        return expr.name + _DECORATION_SUFFIX[expr.decoration]
    if isinstance(expr, ast.Member):
        return _paren(_expr(expr.obj, _POSTFIX) + "." + expr.field_name, _POSTFIX, minimum)
    if isinstance(expr, ast.SetLiteral):
        # Elements re-parse at additive level; anything looser needs parens.
        return "{" + ", ".join(_expr(e, _ADD) for e in expr.elements) + "}"
    if isinstance(expr, ast.Arith):
        level = _MUL if expr.op in ("*", "div", "mod") else _ADD
        text = f"{_expr(expr.left, level)} {expr.op} {_expr(expr.right, level + 1)}"
        return _paren(text, level, minimum)
    if isinstance(expr, ast.Compare):
        text = f"{_expr(expr.left, _ADD)} {expr.op} {_expr(expr.right, _ADD)}"
        return _paren(text, _CMP, minimum)
    if isinstance(expr, ast.In):
        text = f"{_expr(expr.element, _ADD)} in {_expr(expr.container, _ADD)}"
        return _paren(text, _CMP, minimum)
    if isinstance(expr, ast.Logic):
        if expr.op == "not":
            text = f"not {_expr(expr.operands[0], _NOT)}"
            return _paren(text, _NOT, minimum)
        if expr.op == "implies":
            text = f"{_expr(expr.operands[0], _OR)} implies {_expr(expr.operands[1], _IMPLIES)}"
            return _paren(text, _IMPLIES, minimum)
        level = _AND if expr.op == "and" else _OR
        parts = [_expr(expr.operands[0], level)] + [_expr(o, level + 1) for o in expr.operands[1:]]
        return _paren(f" {expr.op} ".join(parts), level, minimum)
    raise TypeError(f"not an expression node: {expr!r}")


def print_op_expr(expr: ast.OpExpr) -> str:
    return _op_expr(expr, outer=False)


_OP_SPELLING = {ast.Choice: "[]", ast.Sequential: ";", ast.Parallel: "||", ast.Conjunction: "&"}


def _op_expr(expr: ast.OpExpr, outer: bool) -> str:
    if isinstance(expr, ast.OpRef):
        return expr.name
    if isinstance(expr, ast.OpMemberRef):
        return f"{expr.obj}.{expr.name}"
    left = _op_expr(expr.left, outer=False)
    right = _op_expr(expr.right, outer=True)
    text = f"{left} {_OP_SPELLING[type(expr)]} {right}"
    return f"({text})" if outer else text


def print_specification(spec: ast.Specification) -> str:
    return "\n".join(_print_class(c) for c in spec.classes)


def _print_class(decl: ast.ClassDecl) -> str:
    lines: list[str] = []
    header = f"class {decl.name}"
    if decl.generic_params:
        header += "[" + ", ".join(decl.generic_params) + "]"
    lines.append(header)
    if decl.visibility is not None:
        lines.append("  visibility " + ", ".join(v.name for v in decl.visibility))
    for const in decl.constants:
        lines.append(f"  const {const.name} : {print_type(const.type)}")
    for axiom in decl.axioms:
        lines.append(f"  axiom {print_predicate(axiom)}")
    if decl.state is not None:
        lines.append("  state")
        for var in decl.state.primary:
            lines.append(f"    {var.name} : {print_type(var.type)}")
        if decl.state.secondary:
            lines.append("  secondary")
            for var in decl.state.secondary:
                lines.append(f"    {var.name} : {print_type(var.type)}")
        if decl.state.invariants:
            lines.append("  where")
            for pred in decl.state.invariants:
                lines.append(f"    {print_predicate(pred)}")
    if decl.init is not None:
        lines.append("  init")
        for pred in decl.init.preds:
            lines.append(f"    {print_predicate(pred)}")
    for op in decl.operations:
        lines.append(f"  op {op.name}")
        if op.delta:
            lines.append("    delta " + ", ".join(d.name for d in op.delta))
        for decl_ in op.inputs:
            lines.append(f"    {decl_.name}? : {print_type(decl_.type)}")
        for decl_ in op.outputs:
            lines.append(f"    {decl_.name}! : {print_type(decl_.type)}")
        if op.preds:
            lines.append("  where")
            for pred in op.preds:
                lines.append(f"    {print_predicate(pred)}")
        lines.append("  end")
    for d in decl.op_expr_defs:
        lines.append(f"  op {d.name} = {print_op_expr(d.expr)}")
    lines.append("end")
    return "\n".join(lines) + "\n"
