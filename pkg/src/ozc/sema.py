"""Semantic analysis: name resolution, well-formedness, and the
classification of operation predicates into preconditions, body
assignments, and checked postconditions.

Classification rule, applied per predicate in source order:

  (a) no primed and no output-decorated names  -> precondition
  (b) an equality  v' = rhs  where v is in the delta list, rhs contains
      no primed names, and v' has not already been assigned -> body
      assignment
  (c) anything else -> postcondition, evaluated against an old-state
      snapshot at runtime

Rule (b) is deliberately minimal; any predicate it does not match stays
a checked postcondition, so no constraint is ever silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ast
from .diagnostics import (
    Diagnostic,
    S_BAD_INIT_PREDICATE,
    S_BAD_VISIBILITY,
    S_CYCLIC_MEMBER,
    S_CYCLIC_OP_EXPR,
    S_DELTA_NOT_STATE,
    S_DUPLICATE_DEFINITION,
    S_MULTIPLE_DEFINING_EQUALITIES,
    S_NO_DEFINING_EQUALITY,
    S_PRIMED_OUTSIDE_DELTA,
    S_RESERVED_TARGET_NAME,
    S_UNCONSTRAINED_OUTPUT,
    S_UNRESOLVED_NAME,
    error,
    sort_diagnostics,
    warning,
)

# Identifiers that cannot appear in generated Python: keywords, the names
# the contract wrappers bind (self/old/result), and runtime-internal hooks.
_TARGET_RESERVED = frozenset(
    """False None True and as assert async await break class continue def del elif else
    except finally for from global if import in is lambda nonlocal not or pass raise
    return try while with yield match case self old result object""".split()
)
_TARGET_RESERVED_PREFIXES = ("_oz_", "_update_secondary")
from .tokens import Decoration

CONSTANT = "constant"
PRIMARY_VAR = "primaryVar"
SECONDARY_VAR = "secondaryVar"
OPERATION = "operation"
OP_EXPR_DEF = "opExprDef"


@dataclass(frozen=True)
class MemberInfo:
    kind: str
    type: ast.TypeExpr | None = None


@dataclass(frozen=True)
class ClassSymbolTable:
    class_name: str
    members: dict[str, MemberInfo]
    visibility: frozenset[str] | None  # None: no visibility list, everything public
    member_object_fields: dict[str, str]  # field -> class name

    def is_public(self, name: str) -> bool:
        return self.visibility is None or name in self.visibility

    def kind_of(self, name: str) -> str | None:
        info = self.members.get(name)
        return info.kind if info else None

    def type_of(self, name: str) -> ast.TypeExpr | None:
        info = self.members.get(name)
        return info.type if info else None

    def primary_vars(self) -> list[str]:
        return [n for n, i in self.members.items() if i.kind == PRIMARY_VAR]

    def secondary_vars(self) -> list[str]:
        return [n for n, i in self.members.items() if i.kind == SECONDARY_VAR]


@dataclass(frozen=True)
class BodyAssignment:
    target: str            # base name of the primed variable
    rhs: ast.Expr
    index: int             # position of the source predicate in the schema
    pred: ast.Predicate


@dataclass(frozen=True)
class ClassifiedOperation:
    name: str
    delta: tuple[str, ...]
    inputs: tuple[ast.VarDecl, ...]
    outputs: tuple[ast.VarDecl, ...]
    pre_preds: tuple[tuple[int, ast.Predicate], ...]
    body_assignments: tuple[BodyAssignment, ...]
    post_preds: tuple[tuple[int, ast.Predicate], ...]
    frame_vars: tuple[str, ...]  # primary vars the operation must leave unchanged


@dataclass(frozen=True)
class SecondaryUpdate:
    var: str
    rhs: ast.Expr
    reads: tuple[str, ...]  # member names the defining expression reads
    pred_index: int         # index of the defining equality in the state invariants


@dataclass(frozen=True)
class SecondaryUpdatePlan:
    updates: tuple[SecondaryUpdate, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.updates)

    def defining_indices(self) -> frozenset[int]:
        return frozenset(u.pred_index for u in self.updates)


# --- symbol tables and name resolution -----------------------------------


def build_table(decl: ast.ClassDecl) -> ClassSymbolTable:
    members: dict[str, MemberInfo] = {}
    for const in decl.constants:
        members[const.name] = MemberInfo(CONSTANT, const.type)
    if decl.state is not None:
        for var in decl.state.primary:
            members[var.name] = MemberInfo(PRIMARY_VAR, var.type)
        for var in decl.state.secondary:
            members[var.name] = MemberInfo(SECONDARY_VAR, var.type)
    for op in decl.operations:
        members[op.name] = MemberInfo(OPERATION)
    for d in decl.op_expr_defs:
        members[d.name] = MemberInfo(OP_EXPR_DEF)
    visibility = None
    if decl.visibility is not None:
        visibility = frozenset(v.name for v in decl.visibility)
    return ClassSymbolTable(decl.name, members, visibility, {})


class _Resolver:
    def __init__(self, spec: ast.Specification) -> None:
        self.spec = spec
        self.diags: list[Diagnostic] = []
        self.tables: dict[str, ClassSymbolTable] = {}
        self.classes: dict[str, ast.ClassDecl] = {}

    def run(self) -> dict[str, ClassSymbolTable]:
        for decl in self.spec.classes:
            if decl.name in self.classes:
                self.diags.append(
                    error(S_DUPLICATE_DEFINITION, f"duplicate class name '{decl.name}'", decl.name_span)
                )
                continue
            self.classes[decl.name] = decl
        for name, decl in self.classes.items():
            table = build_table(decl)
            member_objects = {}
            for var_name, info in table.members.items():
                if isinstance(info.type, ast.ClassRef) and info.type.name in self.classes:
                    member_objects[var_name] = info.type.name
            self.tables[name] = ClassSymbolTable(name, table.members, table.visibility, member_objects)
        for decl in self.classes.values():
            self.check_class(decl)
        return self.tables

    def check_class(self, decl: ast.ClassDecl) -> None:
        table = self.tables[decl.name]
        if decl.visibility is not None:
            for entry in decl.visibility:
                if entry.name not in table.members:
                    self.diags.append(
                        error(
                            S_BAD_VISIBILITY,
                            f"visibility entry '{entry.name}' names no member of class '{decl.name}'",
                            entry.span,
                        )
                    )
        for const in decl.constants:
            self.check_type(decl, const.type)
        if decl.state is not None:
            for var in list(decl.state.primary) + list(decl.state.secondary):
                self.check_type(decl, var.type)
            for pred in decl.state.invariants:
                self.resolve_expr(decl, pred, context="state")
        for axiom in decl.axioms:
            self.resolve_expr(decl, axiom, context="axiom")
        if decl.init is not None:
            for pred in decl.init.preds:
                if _init_member_ref(pred) is not None:
                    self.resolve_init_ref(decl, pred)
                else:
                    self.resolve_expr(decl, pred, context="init")
        for op in decl.operations:
            for decl_ in list(op.inputs) + list(op.outputs):
                self.check_type(decl, decl_.type)
            for pred in op.preds:
                self.resolve_expr(decl, pred, context="op", op=op)
        for d in decl.op_expr_defs:
            self.resolve_op_expr(decl, d.expr)

    def check_type(self, decl: ast.ClassDecl, type_expr: ast.TypeExpr) -> None:
        if isinstance(type_expr, ast.ClassRef):
            if type_expr.name in self.classes or type_expr.name in decl.generic_params:
                return
            self.diags.append(
                error(S_UNRESOLVED_NAME, f"unknown class '{type_expr.name}'", type_expr.span)
            )

    def resolve_init_ref(self, decl: ast.ClassDecl, pred: ast.Predicate) -> None:
        obj = _init_member_ref(pred)
        assert obj is not None
        table = self.tables[decl.name]
        if obj.name not in table.members:
            self.diags.append(error(S_UNRESOLVED_NAME, f"unresolved name '{obj.name}'", obj.span))
        elif obj.name not in table.member_object_fields:
            self.diags.append(
                error(
                    S_BAD_INIT_PREDICATE,
                    f"'{obj.name}.INIT' does not reference a member object",
                    pred.span,
                )
            )

    def resolve_expr(
        self,
        decl: ast.ClassDecl,
        expr: ast.Expr,
        context: str,
        op: ast.OperationSchema | None = None,
    ) -> None:
        table = self.tables[decl.name]
        if isinstance(expr, ast.Name):
            self.resolve_name(decl, expr, context, op)
            return
        if isinstance(expr, ast.Member):
            self.resolve_member(decl, expr, context, op)
            return
        for child in ast.children(expr):
            self.resolve_expr(decl, child, context, op)

    def resolve_name(
        self,
        decl: ast.ClassDecl,
        name: ast.Name,
        context: str,
        op: ast.OperationSchema | None,
    ) -> None:
        table = self.tables[decl.name]
        if name.decoration is Decoration.INPUT:
            assert op is not None
            if all(i.name != name.name for i in op.inputs):
                self.diags.append(
                    error(S_UNRESOLVED_NAME, f"unresolved input '{name.name}?' in operation '{op.name}'", name.span)
                )
            return
        if name.decoration is Decoration.OUTPUT:
            assert op is not None
            if all(o.name != name.name for o in op.outputs):
                self.diags.append(
                    error(S_UNRESOLVED_NAME, f"unresolved output '{name.name}!' in operation '{op.name}'", name.span)
                )
            return
        # Plain and primed names refer to class members.
        kind = table.kind_of(name.name)
        if kind is None:
            self.diags.append(error(S_UNRESOLVED_NAME, f"unresolved name '{name.name}'", name.span))
        elif kind in (OPERATION, OP_EXPR_DEF):
            self.diags.append(
                error(S_UNRESOLVED_NAME, f"operation '{name.name}' cannot be used as a value", name.span)
            )

    def resolve_member(
        self,
        decl: ast.ClassDecl,
        member: ast.Member,
        context: str,
        op: ast.OperationSchema | None,
    ) -> None:
        # Resolve the object part first.
        self.resolve_expr(decl, member.obj, context, op)
        target_class = self.class_of(decl, member.obj, op)
        if target_class is None:
            return  # either already diagnosed or not class-typed enough to check
        target_table = self.tables.get(target_class)
        if target_table is None:
            return
        if member.field_name == "INIT":
            self.diags.append(
                error(
                    S_UNRESOLVED_NAME,
                    "member 'INIT' can only be referenced as a whole init predicate",
                    member.span,
                )
            )
            return
        field_kind = target_table.kind_of(member.field_name)
        if field_kind is None:
            self.diags.append(
                error(
                    S_UNRESOLVED_NAME,
                    f"class '{target_class}' has no member '{member.field_name}'",
                    member.span,
                )
            )
        elif field_kind in (OPERATION, OP_EXPR_DEF):
            self.diags.append(
                error(
                    S_UNRESOLVED_NAME,
                    f"operation '{target_class}.{member.field_name}' cannot be used as a value",
                    member.span,
                )
            )

    def class_of(
        self, decl: ast.ClassDecl, obj: ast.Expr, op: ast.OperationSchema | None
    ) -> str | None:
        """Class name of an expression used as a member-access receiver."""
        if not isinstance(obj, ast.Name):
            return None
        type_expr: ast.TypeExpr | None = None
        if obj.decoration is Decoration.INPUT and op is not None:
            for decl_ in op.inputs:
                if decl_.name == obj.name:
                    type_expr = decl_.type
        elif obj.decoration is Decoration.OUTPUT and op is not None:
            for decl_ in op.outputs:
                if decl_.name == obj.name:
                    type_expr = decl_.type
        else:
            type_expr = self.tables[decl.name].type_of(obj.name)
        if isinstance(type_expr, ast.ClassRef) and type_expr.name in self.tables:
            return type_expr.name
        return None

    def resolve_op_expr(self, decl: ast.ClassDecl, expr: ast.OpExpr) -> None:
        table = self.tables[decl.name]
        for leaf in ast.op_expr_leaves(expr):
            if isinstance(leaf, ast.OpRef):
                kind = table.kind_of(leaf.name)
                if kind not in (OPERATION, OP_EXPR_DEF):
                    self.diags.append(
                        error(S_UNRESOLVED_NAME, f"'{leaf.name}' does not name an operation", leaf.span)
                    )
            else:
                target_class = table.member_object_fields.get(leaf.obj)
                if target_class is None:
                    self.diags.append(
                        error(S_UNRESOLVED_NAME, f"'{leaf.obj}' does not name a member object", leaf.span)
                    )
                    continue
                kind = self.tables[target_class].kind_of(leaf.name)
                if kind not in (OPERATION, OP_EXPR_DEF):
                    self.diags.append(
                        error(
                            S_UNRESOLVED_NAME,
                            f"class '{target_class}' has no operation '{leaf.name}'",
                            leaf.span,
                        )
                    )


def _init_member_ref(pred: ast.Predicate) -> ast.Name | None:
    """Return the object name if pred has the shape `obj.INIT`."""
    if isinstance(pred, ast.Member) and pred.field_name == "INIT" and isinstance(pred.obj, ast.Name):
        if pred.obj.decoration is Decoration.NONE:
            return pred.obj
    return None


def resolve(spec: ast.Specification) -> tuple[dict[str, ClassSymbolTable], list[Diagnostic]]:
    """Build symbol tables and bind every identifier. Idempotent."""
    resolver = _Resolver(spec)
    tables = resolver.run()
    return tables, sort_diagnostics(resolver.diags)


# --- operation classification ---------------------------------------------


def _primed_names(pred: ast.Predicate) -> list[ast.Name]:
    return [n for n in ast.names_in(pred) if n.decoration is Decoration.PRIMED]


def _output_names(pred: ast.Predicate) -> list[ast.Name]:
    return [n for n in ast.names_in(pred) if n.decoration is Decoration.OUTPUT]


def assignment_shape(pred: ast.Predicate) -> tuple[ast.Name, ast.Expr] | None:
    """Match `v' = rhs`; the delta/prior-assignment conditions are the caller's."""
    if isinstance(pred, ast.Compare) and pred.op == "=":
        if isinstance(pred.left, ast.Name) and pred.left.decoration is Decoration.PRIMED:
            return pred.left, pred.right
    return None


def classify_operation(
    op: ast.OperationSchema, table: ClassSymbolTable
) -> tuple[ClassifiedOperation, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    primary = table.primary_vars()

    for ident in op.delta:
        kind = table.kind_of(ident.name)
        if kind != PRIMARY_VAR:
            what = "a member" if kind is None else "a primary state variable"
            diags.append(
                error(S_DELTA_NOT_STATE, f"delta entry '{ident.name}' is not {what}", ident.span)
            )
    delta_names = tuple(dict.fromkeys(d.name for d in op.delta))

    pre_preds: list[tuple[int, ast.Predicate]] = []
    body: list[BodyAssignment] = []
    post_preds: list[tuple[int, ast.Predicate]] = []
    assigned: set[str] = set()

    for index, pred in enumerate(op.preds):
        primed = _primed_names(pred)
        for name in primed:
            if name.name not in delta_names:
                diags.append(
                    error(
                        S_PRIMED_OUTSIDE_DELTA,
                        f"primed name '{name.name}'' is not in the delta list of '{op.name}'",
                        name.span,
                    )
                )
        if not primed and not _output_names(pred):
            pre_preds.append((index, pred))
            continue
        shape = assignment_shape(pred)
        if (
            shape is not None
            and shape[0].name in delta_names
            and not _primed_names(shape[1])
            and shape[0].name not in assigned
        ):
            body.append(BodyAssignment(shape[0].name, shape[1], index, pred))
            assigned.add(shape[0].name)
            continue
        post_preds.append((index, pred))

    constrained = {n.name for pred in op.preds for n in _output_names(pred)}
    for out in op.outputs:
        if out.name not in constrained:
            diags.append(
                warning(
                    S_UNCONSTRAINED_OUTPUT,
                    f"output '{out.name}!' of operation '{op.name}' is never constrained",
                    out.span,
                )
            )

    frame_vars = tuple(v for v in primary if v not in delta_names)
    classified = ClassifiedOperation(
        name=op.name,
        delta=delta_names,
        inputs=op.inputs,
        outputs=op.outputs,
        pre_preds=tuple(pre_preds),
        body_assignments=tuple(body),
        post_preds=tuple(post_preds),
        frame_vars=frame_vars,
    )
    return classified, sort_diagnostics(diags)


# --- secondary-variable update planning ------------------------------------


def _reads_of(expr: ast.Expr) -> tuple[str, ...]:
    reads: dict[str, None] = {}
    for node in ast.walk(expr):
        if isinstance(node, ast.Member) and isinstance(node.obj, ast.Name):
            reads.setdefault(node.obj.name)
        elif isinstance(node, ast.Name):
            reads.setdefault(node.name)
    return tuple(reads)


def plan_secondary_updates(
    decl: ast.ClassDecl, table: ClassSymbolTable
) -> tuple[SecondaryUpdatePlan, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    if decl.state is None or not decl.state.secondary:
        return SecondaryUpdatePlan(), []
    updates: list[SecondaryUpdate] = []
    invariants = decl.state.invariants
    for var in decl.state.secondary:
        candidates: list[tuple[int, ast.Expr]] = []
        for index, pred in enumerate(invariants):
            if (
                isinstance(pred, ast.Compare)
                and pred.op == "="
                and isinstance(pred.left, ast.Name)
                and pred.left.decoration is Decoration.NONE
                and pred.left.name == var.name
            ):
                candidates.append((index, pred.right))
        if not candidates:
            diags.append(
                error(
                    S_NO_DEFINING_EQUALITY,
                    f"secondary variable '{var.name}' has no defining equality in the state invariants",
                    var.span,
                )
            )
            continue
        if len(candidates) > 1:
            diags.append(
                error(
                    S_MULTIPLE_DEFINING_EQUALITIES,
                    f"secondary variable '{var.name}' has {len(candidates)} defining equalities",
                    invariants[candidates[1][0]].span,
                )
            )
            continue
        index, rhs = candidates[0]
        reads = tuple(r for r in _reads_of(rhs) if r != var.name)
        updates.append(SecondaryUpdate(var.name, rhs, reads, index))
    return SecondaryUpdatePlan(tuple(updates)), sort_diagnostics(diags)


# --- whole-specification checking --------------------------------------------


def _reserved_name_diags(decl: ast.ClassDecl) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def check(name: str, span) -> None:
        if name in _TARGET_RESERVED or name.startswith(_TARGET_RESERVED_PREFIXES):
            diags.append(
                error(
                    S_RESERVED_TARGET_NAME,
                    f"'{name}' is reserved in generated code and cannot be used",
                    span,
                )
            )

    check(decl.name, decl.name_span)
    for const in decl.constants:
        check(const.name, const.span)
    if decl.state is not None:
        for var in list(decl.state.primary) + list(decl.state.secondary):
            check(var.name, var.span)
    for op in decl.operations:
        check(op.name, op.name_span)
        for io in list(op.inputs) + list(op.outputs):
            check(io.name, io.span)
    for d in decl.op_expr_defs:
        check(d.name, d.name_span)
    return diags


def _check_init_shapes(decl: ast.ClassDecl, table: ClassSymbolTable) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if decl.init is None:
        return diags
    for pred in decl.init.preds:
        if _init_member_ref(pred) is not None:
            continue
        if (
            isinstance(pred, ast.Compare)
            and pred.op == "="
            and isinstance(pred.left, ast.Name)
            and pred.left.decoration is Decoration.NONE
            and table.kind_of(pred.left.name) == PRIMARY_VAR
        ):
            continue
        diags.append(
            error(
                S_BAD_INIT_PREDICATE,
                "an init predicate must be `var = expr` over a primary state variable or `obj.INIT`",
                pred.span,
            )
        )
    return diags


def _construction_edges(
    decl: ast.ClassDecl, table: ClassSymbolTable
) -> list[tuple[str, ast.Predicate]]:
    """Classes this one constructs through `obj.INIT` init predicates."""
    edges: list[tuple[str, ast.Predicate]] = []
    if decl.init is None:
        return edges
    for pred in decl.init.preds:
        obj = _init_member_ref(pred)
        if obj is not None and obj.name in table.member_object_fields:
            edges.append((table.member_object_fields[obj.name], pred))
    return edges


def _check_member_cycles(
    spec: ast.Specification, tables: dict[str, ClassSymbolTable]
) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    by_name = {decl.name: decl for decl in spec.classes}
    graph = {
        name: sorted({target for target, _ in _construction_edges(by_name[name], table)})
        for name, table in tables.items()
        if name in by_name
    }
    for decl in spec.classes:
        table = tables.get(decl.name)
        if table is None:
            continue
        for target, pred in _construction_edges(decl, table):
            # DFS from the constructed class back to the declaring class.
            stack, seen = [target], set()
            cyclic = False
            while stack:
                current = stack.pop()
                if current == decl.name:
                    cyclic = True
                    break
                if current in seen:
                    continue
                seen.add(current)
                stack.extend(graph.get(current, ()))
            if cyclic:
                diags.append(
                    error(
                        S_CYCLIC_MEMBER,
                        f"initializing this member object would construct '{decl.name}' recursively",
                        pred.span,
                    )
                )
    return diags


def _check_op_expr_cycles(
    spec: ast.Specification, tables: dict[str, ClassSymbolTable]
) -> list[Diagnostic]:
    """Operation-expression definitions may reference each other (also
    across member objects); a reference cycle would make both emission
    and the generated forwarding methods recurse forever."""
    defs: dict[tuple[str, str], ast.OpExprDef] = {}
    for decl in spec.classes:
        for d in decl.op_expr_defs:
            defs[(decl.name, d.name)] = d

    def edges(node: tuple[str, str]) -> list[tuple[str, str]]:
        cls, name = node
        table = tables[cls]
        out: list[tuple[str, str]] = []
        for leaf in ast.op_expr_leaves(defs[node].expr):
            if isinstance(leaf, ast.OpRef):
                if table.kind_of(leaf.name) == OP_EXPR_DEF:
                    out.append((cls, leaf.name))
            else:
                target = table.member_object_fields.get(leaf.obj)
                if target is not None and tables[target].kind_of(leaf.name) == OP_EXPR_DEF:
                    out.append((target, leaf.name))
        return out

    diags: list[Diagnostic] = []
    for node, d in defs.items():
        stack, seen = edges(node), set()
        while stack:
            current = stack.pop()
            if current == node:
                diags.append(
                    error(
                        S_CYCLIC_OP_EXPR,
                        f"operation expression '{d.name}' refers back to itself",
                        d.name_span,
                    )
                )
                break
            if current in seen or current not in defs:
                continue
            seen.add(current)
            stack.extend(edges(current))
    return diags


def check_specification(spec: ast.Specification) -> list[Diagnostic]:
    """All semantic checks; an empty result means the input is accepted."""
    tables, diags = resolve(spec)
    if diags:
        return sort_diagnostics(diags)
    all_diags: list[Diagnostic] = []
    all_diags.extend(_check_member_cycles(spec, tables))
    all_diags.extend(_check_op_expr_cycles(spec, tables))
    for decl in spec.classes:
        table = tables[decl.name]
        all_diags.extend(_reserved_name_diags(decl))
        for op in decl.operations:
            _, op_diags = classify_operation(op, table)
            all_diags.extend(op_diags)
        _, plan_diags = plan_secondary_updates(decl, table)
        all_diags.extend(plan_diags)
        all_diags.extend(_check_init_shapes(decl, table))
    return sort_diagnostics(all_diags)
