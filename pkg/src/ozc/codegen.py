"""Python code emission for accepted specifications.

The translation follows a fixed recipe so output is byte-identical for
identical input:

  * every class becomes a Python class of the same name; generic
    parameters are dropped
  * constant axioms and non-defining state predicates become `inv`
    class wrappers (outermost); a secondary-update wrapper sits
    innermost when the class has secondary variables
  * members missing from a class's visibility list are renamed with two
    leading underscores
  * constants become validated, frozen constructor parameters; NAT/INT
    state variables are re-validated on every assignment via an emitted
    __setattr__
  * operation schemas become methods: classified preconditions turn
    into `pre` wrappers, body assignments and output bindings execute in
    predicate source order, remaining predicates and frame conditions
    turn into `post` wrappers
  * operation expressions become forwarding methods over the runtime
    combinators, so invariant and secondary-update wrapping applies to
    them like any other method

Generated modules import exactly one runtime module, `ozruntime`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import ast
from .diagnostics import Diagnostic
from .parser import parse_source
from .printer import print_predicate
from .sema import (
    ClassSymbolTable,
    ClassifiedOperation,
    OP_EXPR_DEF,
    OPERATION,
    SecondaryUpdatePlan,
    _reserved_name_diags,
    check_specification,
    classify_operation,
    plan_secondary_updates,
    resolve,
)
from .tokens import Decoration

TOOL_NAME = "ozc"
TOOL_VERSION = "0.1.0"

UPDATER_NAME = "_update_secondary"

# Python operator binding strength for minimal-parentheses rendering.
_PY_OR, _PY_AND, _PY_NOT, _PY_CMP, _PY_ADD, _PY_MUL, _PY_ATOM = range(1, 8)


@dataclass(frozen=True)
class EmitOptions:
    frame_checks: bool = True


@dataclass(frozen=True)
class GeneratedMethod:
    name: str
    decorators: tuple[str, ...]
    params: tuple[str, ...]          # without self
    body: tuple[str, ...]            # unindented statement lines
    output_names: tuple[str, ...]    # piping metadata, () when none
    star_kwargs: bool = False


@dataclass(frozen=True)
class GeneratedClass:
    name: str
    class_wrappers: tuple[str, ...]  # decorator lines, outermost first
    class_attrs: tuple[str, ...]
    methods: tuple[GeneratedMethod, ...]


@dataclass(frozen=True)
class GeneratedModule:
    source_name: str
    source_digest: str
    runtime_imports: tuple[str, ...]  # () -> plain `import ozruntime`
    validators: tuple[str, ...]       # subset of ("Nat", "Int"), emission order
    classes: tuple[GeneratedClass, ...]


class EmitError(Exception):
    """Internal invariant failure; check_specification should have caught it."""


# --- expression rendering ---------------------------------------------------


@dataclass
class _ExprEnv:
    """How dialect names map onto Python in the current emission context."""

    emitter: "_Emitter"
    table: ClassSymbolTable
    state_source: str                 # receiver for unprimed state/constants: "self" or "old"
    in_class_body: bool               # short private form `self.__x` is only valid inside the class
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    output_style: str = "local"       # "local" (body statements) or "result" (post lambdas)
    used: set[str] = field(default_factory=set)

    def attr(self, receiver: str, name: str, table: ClassSymbolTable, short_private: bool) -> str:
        if table.is_public(name):
            return f"{receiver}.{name}"
        if short_private:
            return f"{receiver}.__{name}"
        return f"{receiver}._{table.class_name}__{name}"


def _render(expr: ast.Expr, env: _ExprEnv, minimum: int) -> str:
    def paren(text: str, level: int) -> str:
        return f"({text})" if level < minimum else text

    if isinstance(expr, ast.IntLiteral):
        return str(expr.value)
    if isinstance(expr, ast.Name):
        return _render_name(expr, env)
    if isinstance(expr, ast.Member):
        return _render_member(expr, env)
    if isinstance(expr, ast.SetLiteral):
        return "{" + ", ".join(_render(e, env, _PY_OR) for e in expr.elements) + "}"
    if isinstance(expr, ast.Arith):
        op = {"+": "+", "-": "-", "*": "*", "div": "//", "mod": "%"}[expr.op]
        level = _PY_MUL if expr.op in ("*", "div", "mod") else _PY_ADD
        text = f"{_render(expr.left, env, level)} {op} {_render(expr.right, env, level + 1)}"
        return paren(text, level)
    if isinstance(expr, ast.Compare):
        op = "==" if expr.op == "=" else expr.op
        text = f"{_render(expr.left, env, _PY_ADD)} {op} {_render(expr.right, env, _PY_ADD)}"
        return paren(text, _PY_CMP)
    if isinstance(expr, ast.In):
        text = f"{_render(expr.element, env, _PY_ADD)} in {_render(expr.container, env, _PY_ADD)}"
        return paren(text, _PY_CMP)
    if isinstance(expr, ast.Logic):
        if expr.op == "not":
            return paren(f"not {_render(expr.operands[0], env, _PY_NOT)}", _PY_NOT)
        if expr.op == "implies":
            antecedent, consequent = expr.operands
            rewritten = ast.Logic("or", (ast.Logic("not", (antecedent,), expr.span), consequent), expr.span)
            return _render(rewritten, env, minimum)
        level = _PY_AND if expr.op == "and" else _PY_OR
        parts = [_render(expr.operands[0], env, level)]
        parts += [_render(o, env, level + 1) for o in expr.operands[1:]]
        return paren(f" {expr.op} ".join(parts), level)
    raise EmitError(f"cannot render expression node {expr!r}")


def _render_name(name: ast.Name, env: _ExprEnv) -> str:
    if name.decoration is Decoration.INPUT:
        env.used.add(name.name)
        return name.name
    if name.decoration is Decoration.OUTPUT:
        if env.output_style == "local":
            return name.name
        env.used.add("result")
        if len(env.outputs) == 1:
            return "result"
        return f'result["{name.name}"]'
    if name.decoration is Decoration.PRIMED:
        # Post-state: always the live instance.
        env.used.add("self")
        return env.attr("self", name.name, env.table, env.in_class_body)
    receiver = env.state_source
    env.used.add(receiver)
    # `old` snapshots keep the original (mangled) attribute names.
    short = env.in_class_body and receiver == "self"
    return env.attr(receiver, name.name, env.table, short)


def _render_member(member: ast.Member, env: _ExprEnv) -> str:
    obj_text = _render(member.obj, env, _PY_ATOM)
    target = _member_target_table(member, env)
    if target is None or target.is_public(member.field_name):
        return f"{obj_text}.{member.field_name}"
    return f"{obj_text}._{target.class_name}__{member.field_name}"


def _member_target_table(member: ast.Member, env: _ExprEnv) -> ClassSymbolTable | None:
    if not isinstance(member.obj, ast.Name):
        return None
    obj = member.obj
    type_expr: ast.TypeExpr | None = None
    if obj.decoration is Decoration.NONE:
        type_expr = env.table.type_of(obj.name)
    if isinstance(type_expr, ast.ClassRef):
        return env.emitter.tables.get(type_expr.name)
    return None


# --- emission ---------------------------------------------------------------


class _Emitter:
    def __init__(self, spec: ast.Specification, tables: dict[str, ClassSymbolTable], options: EmitOptions) -> None:
        self.spec = spec
        self.tables = tables
        self.options = options
        self.classes = {decl.name: decl for decl in spec.classes}
        self.plans: dict[str, SecondaryUpdatePlan] = {}
        self.classified: dict[str, dict[str, ClassifiedOperation]] = {}
        for decl in spec.classes:
            table = tables[decl.name]
            plan, plan_diags = plan_secondary_updates(decl, table)
            ops = {}
            for op in decl.operations:
                classified, op_diags = classify_operation(op, table)
                if any(d.severity == "error" for d in op_diags):
                    raise EmitError(f"operation '{decl.name}.{op.name}' failed classification")
                ops[op.name] = classified
            if any(d.severity == "error" for d in plan_diags):
                raise EmitError(f"secondary-update plan for '{decl.name}' failed")
            self.plans[decl.name] = plan
            self.classified[decl.name] = ops
        self.used_runtime: set[str] = set()
        self._ctor_params: dict[str, tuple[str, ...]] = {}

    # -- naming helpers --

    def attr_name(self, table: ClassSymbolTable, name: str, short: bool) -> str:
        if table.is_public(name):
            return name
        return f"__{name}" if short else f"_{table.class_name}__{name}"

    def validator_for(self, type_expr: ast.TypeExpr) -> str | None:
        if isinstance(type_expr, ast.NatType):
            return "Nat"
        if isinstance(type_expr, ast.IntType):
            return "Int"
        return None

    def check_target_names(self, decl: ast.ClassDecl) -> None:
        bad = _reserved_name_diags(decl)
        if bad:
            raise EmitError(f"reserved names in '{decl.name}': " + "; ".join(d.message for d in bad))

    # -- constructor parameter forwarding --

    def ctor_params(self, class_name: str) -> tuple[str, ...]:
        """Constructor parameters: own constants, then `<field>_<param>`
        forwards for every member object the init block constructs."""
        cached = self._ctor_params.get(class_name)
        if cached is not None:
            return cached
        decl = self.classes[class_name]
        params = [c.name for c in decl.constants]
        for field_name, target in self.init_constructions(decl):
            params += [f"{field_name}_{p}" for p in self.ctor_params(target)]
        result = tuple(params)
        self._ctor_params[class_name] = result
        return result

    def init_constructions(self, decl: ast.ClassDecl) -> list[tuple[str, str]]:
        refs: list[tuple[str, str]] = []
        if decl.init is None:
            return refs
        table = self.tables[decl.name]
        for pred in decl.init.preds:
            if (
                isinstance(pred, ast.Member)
                and pred.field_name == "INIT"
                and isinstance(pred.obj, ast.Name)
                and pred.obj.name in table.member_object_fields
            ):
                refs.append((pred.obj.name, table.member_object_fields[pred.obj.name]))
        return refs

    # -- module --

    def emit_module(self, source_text: str, source_name: str) -> GeneratedModule:
        for decl in self.spec.classes:
            self.check_target_names(decl)
        classes = tuple(self.emit_class(decl) for decl in self.spec.classes)
        validators = tuple(v for v in ("Nat", "Int") if v in self.base_types_used())
        if validators:
            self.used_runtime.add("pre")
        digest = hashlib.sha256(source_text.encode("utf-8")).hexdigest()
        return GeneratedModule(
            source_name=source_name,
            source_digest=digest,
            runtime_imports=tuple(sorted(self.used_runtime)),
            validators=validators,
            classes=classes,
        )

    def base_types_used(self) -> set[str]:
        used: set[str] = set()

        def note(type_expr: ast.TypeExpr) -> None:
            validator = self.validator_for(type_expr)
            if validator:
                used.add(validator)

        for decl in self.spec.classes:
            for const in decl.constants:
                note(const.type)
            if decl.state is not None:
                for var in list(decl.state.primary) + list(decl.state.secondary):
                    note(var.type)
            for op in decl.operations:
                for io in list(op.inputs) + list(op.outputs):
                    note(io.type)
        return used

    # -- class --

    def emit_class(self, decl: ast.ClassDecl) -> GeneratedClass:
        table = self.tables[decl.name]
        plan = self.plans[decl.name]

        wrappers: list[str] = []

        def inv_env() -> _ExprEnv:
            # Class decorators sit outside the class body, so private
            # attributes need their fully mangled spelling.
            return _ExprEnv(self, table, state_source="self", in_class_body=False)

        for axiom in decl.axioms:
            wrappers.append(self.inv_wrapper(axiom, inv_env()))
        defining = plan.defining_indices()
        if decl.state is not None:
            for index, pred in enumerate(decl.state.invariants):
                if index not in defining:
                    wrappers.append(self.inv_wrapper(pred, inv_env()))
        if plan:
            self.used_runtime.add("decorate_all")
            wrappers.append(f'@decorate_all("{UPDATER_NAME}")')

        attrs: list[str] = []
        if decl.constants:
            attrs.append("_oz_frozen = ()")

        methods: list[GeneratedMethod] = [self.emit_init(decl, table)]
        setattr_method = self.emit_setattr(decl, table)
        if setattr_method is not None:
            methods.append(setattr_method)
        if plan:
            methods.append(self.emit_updater(decl, table, plan))
        for op in decl.operations:
            methods.append(self.emit_operation(decl, table, self.classified[decl.name][op.name]))
        for d in decl.op_expr_defs:
            methods.append(self.emit_op_expr_def(decl, table, d))

        return GeneratedClass(decl.name, tuple(wrappers), tuple(attrs), tuple(methods))

    def inv_wrapper(self, pred: ast.Predicate, env: _ExprEnv) -> str:
        self.used_runtime.add("inv")
        text = _render(pred, env, _PY_OR)
        detail = print_predicate(pred)
        return f'@inv(lambda self: {text}, detail="{detail}")'

    # -- constructor --

    def emit_init(self, decl: ast.ClassDecl, table: ClassSymbolTable) -> GeneratedMethod:
        body: list[str] = []
        for const in decl.constants:
            attr = self.attr_name(table, const.name, short=True)
            validator = self.validator_for(const.type)
            value = f"{validator}({const.name})" if validator else const.name
            body.append(f"self.{attr} = {value}")
        if decl.init is not None:
            for pred in decl.init.preds:
                body.extend(self.emit_init_pred(decl, table, pred))
        if decl.constants:
            frozen = ", ".join(f'"{self._frozen_attr(table, c.name)}"' for c in decl.constants)
            trailing_comma = "," if len(decl.constants) == 1 else ""
            body.append(f"self._oz_frozen = ({frozen}{trailing_comma})")
        if not body:
            body.append("pass")
        return GeneratedMethod("__init__", (), self.ctor_params(decl.name), tuple(body), ())

    def _frozen_attr(self, table: ClassSymbolTable, name: str) -> str:
        # __setattr__ observes the name Python actually stores: inside the
        # class body `self.__x` has already been mangled to `_Cls__x`.
        return name if table.is_public(name) else f"_{table.class_name}__{name}"

    def emit_init_pred(self, decl: ast.ClassDecl, table: ClassSymbolTable, pred: ast.Predicate) -> list[str]:
        construction = None
        for field_name, target in self.init_constructions(decl):
            if (
                isinstance(pred, ast.Member)
                and pred.field_name == "INIT"
                and isinstance(pred.obj, ast.Name)
                and pred.obj.name == field_name
            ):
                construction = (field_name, target)
                break
        if construction is not None:
            field_name, target = construction
            attr = self.attr_name(table, field_name, short=True)
            args = ", ".join(f"{field_name}_{p}" for p in self.ctor_params(target))
            return [f"self.{attr} = {target}({args})"]
        if isinstance(pred, ast.Compare) and pred.op == "=" and isinstance(pred.left, ast.Name):
            env = _ExprEnv(self, table, state_source="self", in_class_body=True)
            attr = self.attr_name(table, pred.left.name, short=True)
            return [f"self.{attr} = {_render(pred.right, env, _PY_OR)}"]
        raise EmitError(f"init predicate of '{decl.name}' is neither an assignment nor obj.INIT")

    # -- __setattr__ (frozen constants + re-validation) --

    def emit_setattr(self, decl: ast.ClassDecl, table: ClassSymbolTable) -> GeneratedMethod | None:
        validated: list[tuple[str, str]] = []
        if decl.state is not None:
            for var in list(decl.state.primary) + list(decl.state.secondary):
                validator = self.validator_for(var.type)
                if validator:
                    validated.append((self._frozen_attr(table, var.name), validator))
        if not decl.constants and not validated:
            return None
        body: list[str] = []
        if decl.constants:
            self.used_runtime.add("FrozenConstantViolation")
            body.append("if name in self._oz_frozen:")
            body.append(
                f'    raise FrozenConstantViolation("{decl.name}." + name, "constants are frozen after initialization")'
            )
        for index, (attr, validator) in enumerate(validated):
            keyword = "if" if index == 0 else "elif"
            body.append(f'{keyword} name == "{attr}":')
            body.append(f"    value = {validator}(value)")
        body.append("object.__setattr__(self, name, value)")
        return GeneratedMethod("__setattr__", (), ("name", "value"), tuple(body), ())

    # -- secondary updater --

    def emit_updater(self, decl: ast.ClassDecl, table: ClassSymbolTable, plan: SecondaryUpdatePlan) -> GeneratedMethod:
        env = _ExprEnv(self, table, state_source="self", in_class_body=True)
        body = []
        for update in plan.updates:
            attr = self.attr_name(table, update.var, short=True)
            body.append(f"self.{attr} = {_render(update.rhs, env, _PY_OR)}")
        return GeneratedMethod(UPDATER_NAME, (), (), tuple(body), ())

    # -- operations --

    def emit_operation(self, decl: ast.ClassDecl, table: ClassSymbolTable, op: ClassifiedOperation) -> GeneratedMethod:
        input_names = tuple(v.name for v in op.inputs)
        output_names = tuple(v.name for v in op.outputs)

        decorators: list[str] = []
        for _, pred in op.pre_preds:
            decorators.append(self.pre_wrapper(table, op, pred))
        for _, pred in op.post_preds:
            decorators.append(self.post_wrapper(table, op, pred))
        if self.options.frame_checks:
            for var in op.frame_vars:
                decorators.append(self.frame_wrapper(table, var))

        body: list[str] = []
        for var in op.inputs:
            validator = self.validator_for(var.type)
            if validator:
                body.append(f"{var.name} = {validator}({var.name})")

        bindings = self.output_bindings(op)
        bound = {name for name, _, _ in bindings}
        for name in output_names:
            if name not in bound:
                body.append(f"{name} = None")

        steps: list[tuple[int, str]] = []
        env = _ExprEnv(
            self, table, state_source="self", in_class_body=True,
            inputs=input_names, outputs=output_names, output_style="local",
        )
        for assign in op.body_assignments:
            attr = self.attr_name(table, assign.target, short=True)
            steps.append((assign.index, f"self.{attr} = {_render(assign.rhs, env, _PY_OR)}"))
        for name, rhs, index in bindings:
            steps.append((index, f"{name} = {_render(rhs, env, _PY_OR)}"))
        body.extend(line for _, line in sorted(steps, key=lambda s: s[0]))

        if len(output_names) == 1:
            body.append(f"return {output_names[0]}")
        elif len(output_names) > 1:
            record = ", ".join(f'"{name}": {name}' for name in output_names)
            body.append(f"return {{{record}}}")
        if not body:
            body.append("pass")

        name = self.attr_name(table, op.name, short=True)
        return GeneratedMethod(name, tuple(decorators), input_names, tuple(body), output_names)

    def output_bindings(self, op: ClassifiedOperation) -> list[tuple[str, ast.Expr, int]]:
        """Postconditions of the shape `out! = rhs` (rhs free of primed and
        output names) double as the body statements that compute outputs."""
        output_names = {v.name for v in op.outputs}
        bindings: list[tuple[str, ast.Expr, int]] = []
        bound: set[str] = set()
        for index, pred in op.post_preds:
            if not (
                isinstance(pred, ast.Compare)
                and pred.op == "="
                and isinstance(pred.left, ast.Name)
                and pred.left.decoration is Decoration.OUTPUT
            ):
                continue
            name = pred.left.name
            if name not in output_names or name in bound:
                continue
            rhs_names = list(ast.names_in(pred.right))
            if any(n.decoration in (Decoration.PRIMED, Decoration.OUTPUT) for n in rhs_names):
                continue
            bindings.append((name, pred.right, index))
            bound.add(name)
        return bindings

    def pre_wrapper(self, table: ClassSymbolTable, op: ClassifiedOperation, pred: ast.Predicate) -> str:
        self.used_runtime.add("pre")
        env = _ExprEnv(
            self, table, state_source="self", in_class_body=True,
            inputs=tuple(v.name for v in op.inputs),
        )
        text = _render(pred, env, _PY_OR)
        params = self.lambda_params(env, op)
        detail = print_predicate(pred)
        return f'@pre(lambda {params}: {text}, detail="{detail}")'

    def post_wrapper(self, table: ClassSymbolTable, op: ClassifiedOperation, pred: ast.Predicate) -> str:
        self.used_runtime.add("post")
        env = _ExprEnv(
            self, table, state_source="old", in_class_body=True,
            inputs=tuple(v.name for v in op.inputs),
            outputs=tuple(v.name for v in op.outputs),
            output_style="result",
        )
        text = _render(pred, env, _PY_OR)
        params = self.lambda_params(env, op)
        detail = print_predicate(pred)
        return f'@post(lambda {params}: {text}, detail="{detail}")'

    def frame_wrapper(self, table: ClassSymbolTable, var: str) -> str:
        self.used_runtime.add("post")
        attr = self._frozen_attr(table, var)
        return (
            f"@post(lambda self, old: self.{attr} == old.{attr}, "
            f"detail=\"{var}' = {var}\", frame=True)"
        )

    def lambda_params(self, env: _ExprEnv, op: ClassifiedOperation) -> str:
        ordered = ["self", "old", "result"] + [v.name for v in op.inputs]
        params = [p for p in ordered if p in env.used]
        return ", ".join(params)

    # -- operation expressions --

    def emit_op_expr_def(self, decl: ast.ClassDecl, table: ClassSymbolTable, d: ast.OpExprDef) -> GeneratedMethod:
        target = self.op_expr_code(decl, table, d.expr)
        name = self.attr_name(table, d.name, short=True)
        outputs = self.op_expr_outputs(decl.name, d.expr)
        return GeneratedMethod(
            name,
            (),
            (),
            (f"return {target}(**kwargs)",),
            outputs,
            star_kwargs=True,
        )

    def op_expr_code(self, decl: ast.ClassDecl, table: ClassSymbolTable, expr: ast.OpExpr) -> str:
        if isinstance(expr, ast.OpRef):
            return f"self.{self.attr_name(table, expr.name, short=True)}"
        if isinstance(expr, ast.OpMemberRef):
            obj_attr = self.attr_name(table, expr.obj, short=True)
            target_table = self.tables[table.member_object_fields[expr.obj]]
            return f"self.{obj_attr}.{self.attr_name(target_table, expr.name, short=False)}"
        combinator = {
            ast.Choice: "choice",
            ast.Sequential: "sequential",
            ast.Parallel: "parallel",
            ast.Conjunction: "conjunction",
        }[type(expr)]
        self.used_runtime.add(combinator)
        left = self.op_expr_code(decl, table, expr.left)
        right = self.op_expr_code(decl, table, expr.right)
        return f"{combinator}({left}, {right})"

    def op_expr_outputs(
        self, class_name: str, expr: ast.OpExpr, _visiting: frozenset = frozenset()
    ) -> tuple[str, ...]:
        names: dict[str, None] = {}

        def visit(cls: str, node: ast.OpExpr) -> None:
            if isinstance(node, ast.OpRef):
                leaf_outputs(cls, node.name)
            elif isinstance(node, ast.OpMemberRef):
                target = self.tables[cls].member_object_fields[node.obj]
                leaf_outputs(target, node.name)
            else:
                visit(cls, node.left)
                visit(cls, node.right)

        def leaf_outputs(cls: str, op_name: str) -> None:
            kind = self.tables[cls].kind_of(op_name)
            if kind == OPERATION:
                for out in self.classified[cls][op_name].outputs:
                    names.setdefault(out.name)
            elif kind == OP_EXPR_DEF and (cls, op_name) not in _visiting:
                # cyclic definitions are rejected in sema (S007); the guard
                # keeps this traversal finite regardless
                for d in self.classes[cls].op_expr_defs:
                    if d.name == op_name:
                        nested = self.op_expr_outputs(cls, d.expr, _visiting | {(cls, op_name)})
                        for name in nested:
                            names.setdefault(name)

        visit(class_name, expr)
        return tuple(names)


# --- rendering ---------------------------------------------------------------


def render_module(gm: GeneratedModule) -> str:
    lines: list[str] = [
        f"# Generated by {TOOL_NAME} {TOOL_VERSION} from {gm.source_name} -- do not edit.",
        f"# Source SHA-256: {gm.source_digest}",
        "",
    ]
    if gm.runtime_imports:
        lines.append("from ozruntime import " + ", ".join(gm.runtime_imports))
    else:
        lines.append("import ozruntime")
    for validator in gm.validators:
        lines.append("")
        lines.append("")
        if validator == "Nat":
            lines.append('@pre(lambda n: isinstance(n, int) and n >= 0, detail="isinstance(n, int) and n >= 0")')
            lines.append("def Nat(n):")
        else:
            lines.append('@pre(lambda n: isinstance(n, int), detail="isinstance(n, int)")')
            lines.append("def Int(n):")
        lines.append("    return n")
    for cls in gm.classes:
        lines.append("")
        lines.append("")
        lines.extend(cls.class_wrappers)
        lines.append(f"class {cls.name}:")
        body_lines: list[str] = []
        for attr in cls.class_attrs:
            body_lines.append(attr)
        for method in cls.methods:
            if body_lines:
                body_lines.append("")
            body_lines.extend(method.decorators)
            params = ["self"] + list(method.params)
            if method.star_kwargs:
                params.append("**kwargs")
            body_lines.append(f"def {method.name}({', '.join(params)}):")
            body_lines.extend(f"    {line}" if line else "" for line in method.body)
            if method.output_names:
                names = ", ".join(f'"{n}"' for n in method.output_names)
                trailing = "," if len(method.output_names) == 1 else ""
                body_lines.append("")
                body_lines.append(f"{method.name}._oz_outputs = ({names}{trailing})")
        if not body_lines:
            body_lines.append("pass")
        lines.extend(f"    {line}" if line else "" for line in body_lines)
    return "\n".join(lines) + "\n"


# --- public entry points -------------------------------------------------------


def emit_module(
    spec: ast.Specification,
    tables: dict[str, ClassSymbolTable],
    source_text: str,
    source_name: str,
    options: EmitOptions = EmitOptions(),
) -> GeneratedModule:
    """Assemble the emission model for a checked specification."""
    return _Emitter(spec, tables, options).emit_module(source_text, source_name)


def transpile(
    text: str, file: str = "<input>", options: EmitOptions = EmitOptions()
) -> tuple[list[Diagnostic], str | None]:
    """parse -> check -> emit -> render. Returns (diagnostics, source or None)."""
    result = parse_source(text, file)
    if result.spec is None:
        return result.diagnostics, None
    diags = check_specification(result.spec)
    if any(d.severity == "error" for d in diags):
        return diags, None
    tables, _ = resolve(result.spec)
    gm = emit_module(result.spec, tables, text, file, options)
    return diags, render_module(gm)
