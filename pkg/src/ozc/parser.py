"""Recursive-descent parser for the Object-Z dialect.

The dialect is line-oriented: every section header, declaration, and
predicate occupies one line, and `class`/`op` blocks are closed with
`end`. Parsing is total: malformed input produces diagnostics and the
parser re-synchronizes at line and section boundaries, it never raises.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import ast
from .diagnostics import (
    Diagnostic,
    P_BAD_DECORATION,
    P_DUPLICATE_MEMBER,
    P_DUPLICATE_STATE,
    P_UNEXPECTED_TOKEN,
    P_UNTERMINATED_BLOCK,
    SourceSpan,
    error,
    sort_diagnostics,
)
from .lexer import tokenize
from .tokens import Decoration, Token, TokenKind

_SECTION_KEYWORDS = frozenset({"visibility", "const", "axiom", "state", "secondary", "where", "init", "op", "end"})

_COMPARE_KINDS = {
    TokenKind.EQ: "=",
    TokenKind.NE: "!=",
    TokenKind.LT: "<",
    TokenKind.LE: "<=",
    TokenKind.GT: ">",
    TokenKind.GE: ">=",
}


@dataclass
class ParseResult:
    spec: ast.Specification | None
    diagnostics: list[Diagnostic] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.spec is not None


class _ParseError(Exception):
    """Internal: aborts one line/section; the caller records and resyncs."""

    def __init__(self, diag: Diagnostic) -> None:
        super().__init__(diag.message)
        self.diag = diag


class _Parser:
    def __init__(self, tokens: list[Token], file: str) -> None:
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.diags: list[Diagnostic] = []

    # --- token plumbing --------------------------------------------------

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def here_span(self) -> SourceSpan:
        tok = self.peek()
        if tok is not None:
            return tok.span
        if self.tokens:
            return self.tokens[-1].span
        return SourceSpan(self.file, 1, 1, 1, 1)

    def fail(self, code: str, message: str, span: SourceSpan | None = None) -> _ParseError:
        return _ParseError(error(code, message, span or self.here_span()))

    def report(self, code: str, message: str, span: SourceSpan | None = None) -> None:
        self.diags.append(error(code, message, span or self.here_span()))

    def describe(self, tok: Token | None) -> str:
        if tok is None:
            return "end of file"
        if tok.kind is TokenKind.NEWLINE:
            return "end of line"
        return f"'{tok.lexeme}'"

    def expect_kind(self, kind: TokenKind, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind is not kind:
            raise self.fail(P_UNEXPECTED_TOKEN, f"expected {what}, found {self.describe(tok)}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok is None or not tok.is_keyword(word):
            raise self.fail(P_UNEXPECTED_TOKEN, f"expected '{word}', found {self.describe(tok)}")
        return self.advance()

    def expect_plain_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind is not TokenKind.IDENT:
            raise self.fail(P_UNEXPECTED_TOKEN, f"expected {what}, found {self.describe(tok)}")
        if tok.decoration is not Decoration.NONE:
            raise self.fail(P_BAD_DECORATION, f"decorated name '{tok.lexeme}' is not allowed here", tok.span)
        return self.advance()

    def expect_newline(self) -> None:
        tok = self.peek()
        if tok is None:
            return
        if tok.kind is TokenKind.NEWLINE:
            self.advance()
            return
        raise self.fail(P_UNEXPECTED_TOKEN, f"expected end of line, found {self.describe(tok)}")

    def skip_blank_lines(self) -> None:
        while not self.at_end():
            tok = self.peek()
            assert tok is not None
            if tok.kind is TokenKind.NEWLINE:
                self.advance()
            else:
                return

    def sync_to_line_end(self) -> None:
        """Recovery: drop tokens through the next newline (always makes progress)."""
        while not self.at_end() and self.peek().kind is not TokenKind.NEWLINE:
            self.advance()
        if not self.at_end():
            self.advance()

    def at_section_boundary(self) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind is TokenKind.KEYWORD and tok.lexeme in _SECTION_KEYWORDS

    # --- specification / class -------------------------------------------

    def parse_specification(self) -> ast.Specification | None:
        classes: list[ast.ClassDecl] = []
        self.skip_blank_lines()
        while not self.at_end():
            tok = self.peek()
            assert tok is not None
            if tok.is_keyword("class"):
                decl = self.parse_class()
                if decl is not None:
                    classes.append(decl)
            else:
                self.report(P_UNEXPECTED_TOKEN, f"expected 'class', found {self.describe(tok)}", tok.span)
                while not self.at_end() and not self.peek().is_keyword("class"):
                    self.advance()
            self.skip_blank_lines()
        if not classes and not self.diags:
            self.report(P_UNEXPECTED_TOKEN, "a specification needs at least one class")
        if not classes:
            return None
        span = classes[0].span.to(classes[-1].span)
        return ast.Specification(tuple(classes), span)

    def parse_class(self) -> ast.ClassDecl | None:
        start = self.expect_keyword("class")
        try:
            name_tok = self.expect_plain_ident("class name")
        except _ParseError as exc:
            self.diags.append(exc.diag)
            self.sync_to_line_end()
            return None
        generic_params: list[str] = []
        visibility: list[ast.Ident] | None = None
        constants: list[ast.ConstantDecl] = []
        axioms: list[ast.Predicate] = []
        state: ast.StateBlock | None = None
        init: ast.InitBlock | None = None
        operations: list[ast.OperationSchema] = []
        op_expr_defs: list[ast.OpExprDef] = []

        try:
            tok = self.peek()
            if tok is not None and tok.kind is TokenKind.LBRACKET:
                self.advance()
                generic_params.append(self.expect_plain_ident("generic parameter").lexeme)
                while self.peek() is not None and self.peek().kind is TokenKind.COMMA:
                    self.advance()
                    generic_params.append(self.expect_plain_ident("generic parameter").lexeme)
                self.expect_kind(TokenKind.RBRACKET, "']'")
            self.expect_newline()
        except _ParseError as exc:
            self.diags.append(exc.diag)
            self.sync_to_line_end()

        end_span = start.span
        while True:
            self.skip_blank_lines()
            if self.at_end():
                self.report(P_UNTERMINATED_BLOCK, f"class '{name_tok.lexeme}' is missing 'end'", start.span)
                break
            tok = self.peek()
            assert tok is not None
            if tok.is_keyword("end"):
                end_span = self.advance().span
                try:
                    self.expect_newline()
                except _ParseError as exc:
                    self.diags.append(exc.diag)
                    self.sync_to_line_end()
                break
            try:
                if tok.is_keyword("visibility"):
                    entries = self.parse_visibility()
                    visibility = entries if visibility is None else visibility + entries
                elif tok.is_keyword("const"):
                    constants.append(self.parse_const())
                elif tok.is_keyword("axiom"):
                    axioms.append(self.parse_axiom())
                elif tok.is_keyword("state"):
                    if state is not None:
                        self.report(P_DUPLICATE_STATE, f"class '{name_tok.lexeme}' already has a 'state' block", tok.span)
                        self.parse_state()
                    else:
                        state = self.parse_state()
                elif tok.is_keyword("init"):
                    if init is not None:
                        self.report(P_DUPLICATE_STATE, f"class '{name_tok.lexeme}' already has an 'init' block", tok.span)
                        self.parse_init()
                    else:
                        init = self.parse_init()
                elif tok.is_keyword("op"):
                    parsed = self.parse_op()
                    if isinstance(parsed, ast.OperationSchema):
                        operations.append(parsed)
                    elif parsed is not None:
                        op_expr_defs.append(parsed)
                else:
                    raise self.fail(P_UNEXPECTED_TOKEN, f"expected a class section or 'end', found {self.describe(tok)}", tok.span)
            except _ParseError as exc:
                self.diags.append(exc.diag)
                self.sync_to_line_end()

        decl = ast.ClassDecl(
            name=name_tok.lexeme,
            generic_params=tuple(generic_params),
            visibility=tuple(visibility) if visibility is not None else None,
            constants=tuple(constants),
            axioms=tuple(axioms),
            state=state,
            init=init,
            operations=tuple(operations),
            op_expr_defs=tuple(op_expr_defs),
            span=start.span.to(end_span),
            name_span=name_tok.span,
        )
        self.check_duplicate_members(decl)
        return decl

    def check_duplicate_members(self, decl: ast.ClassDecl) -> None:
        seen: dict[str, SourceSpan] = {}

        def visit(name: str, span: SourceSpan) -> None:
            if name in seen:
                self.report(P_DUPLICATE_MEMBER, f"duplicate member name '{name}' in class '{decl.name}'", span)
            else:
                seen[name] = span

        for c in decl.constants:
            visit(c.name, c.span)
        if decl.state is not None:
            for v in decl.state.primary:
                visit(v.name, v.span)
            for v in decl.state.secondary:
                visit(v.name, v.span)
        for op in decl.operations:
            visit(op.name, op.name_span)
        for d in decl.op_expr_defs:
            visit(d.name, d.name_span)

    # --- sections ----------------------------------------------------------

    def parse_visibility(self) -> list[ast.Ident]:
        self.expect_keyword("visibility")
        entries = []
        tok = self.expect_plain_ident("member name")
        entries.append(ast.Ident(tok.lexeme, tok.span))
        while self.peek() is not None and self.peek().kind is TokenKind.COMMA:
            self.advance()
            tok = self.expect_plain_ident("member name")
            entries.append(ast.Ident(tok.lexeme, tok.span))
        self.expect_newline()
        return entries

    def parse_const(self) -> ast.ConstantDecl:
        kw = self.expect_keyword("const")
        name = self.expect_plain_ident("constant name")
        self.expect_kind(TokenKind.COLON, "':'")
        type_expr = self.parse_type()
        self.expect_newline()
        return ast.ConstantDecl(name.lexeme, type_expr, kw.span.to(name.span))

    def parse_axiom(self) -> ast.Predicate:
        self.expect_keyword("axiom")
        pred = self.parse_predicate()
        self.check_undecorated(pred, "a constant axiom")
        self.expect_newline()
        return pred

    def parse_state(self) -> ast.StateBlock:
        kw = self.expect_keyword("state")
        self.expect_newline()
        primary: list[ast.VarDecl] = []
        secondary: list[ast.VarDecl] = []
        invariants: list[ast.Predicate] = []
        current = primary
        in_where = False
        last_span = kw.span
        while True:
            self.skip_blank_lines()
            if self.at_end():
                break
            tok = self.peek()
            assert tok is not None
            if tok.is_keyword("secondary") and not in_where:
                self.advance()
                self.expect_newline()
                current = secondary
                continue
            if tok.is_keyword("where") and not in_where:
                self.advance()
                self.expect_newline()
                in_where = True
                continue
            if self.at_section_boundary():
                break
            if in_where:
                pred = self.parse_predicate()
                self.check_undecorated(pred, "a state invariant")
                self.expect_newline()
                invariants.append(pred)
                last_span = pred.span
            else:
                decl = self.parse_vardecl()
                current.append(decl)
                last_span = decl.span
        return ast.StateBlock(tuple(primary), tuple(secondary), tuple(invariants), kw.span.to(last_span))

    def parse_vardecl(self) -> ast.VarDecl:
        name = self.expect_plain_ident("variable name")
        self.expect_kind(TokenKind.COLON, "':'")
        type_expr = self.parse_type()
        self.expect_newline()
        return ast.VarDecl(name.lexeme, type_expr, name.span)

    def parse_init(self) -> ast.InitBlock:
        kw = self.expect_keyword("init")
        self.expect_newline()
        preds: list[ast.Predicate] = []
        last_span = kw.span
        while True:
            self.skip_blank_lines()
            if self.at_end() or self.at_section_boundary():
                break
            pred = self.parse_predicate()
            self.check_undecorated(pred, "an init predicate")
            self.expect_newline()
            preds.append(pred)
            last_span = pred.span
        return ast.InitBlock(tuple(preds), kw.span.to(last_span))

    def parse_op(self) -> ast.OperationSchema | ast.OpExprDef | None:
        kw = self.expect_keyword("op")
        name = self.expect_plain_ident("operation name")
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.EQ:
            self.advance()
            expr = self.parse_op_expr()
            self.expect_newline()
            return ast.OpExprDef(name.lexeme, expr, kw.span.to(expr.span), name.span)
        self.expect_newline()
        return self.parse_op_schema_body(kw, name)

    def parse_op_schema_body(self, kw: Token, name: Token) -> ast.OperationSchema:
        delta: list[ast.Ident] = []
        inputs: list[ast.VarDecl] = []
        outputs: list[ast.VarDecl] = []
        preds: list[ast.Predicate] = []
        in_where = False
        end_span = name.span
        while True:
            self.skip_blank_lines()
            if self.at_end():
                self.report(P_UNTERMINATED_BLOCK, f"operation '{name.lexeme}' is missing 'end'", kw.span.to(name.span))
                break
            tok = self.peek()
            assert tok is not None
            if tok.is_keyword("end"):
                end_span = self.advance().span
                self.expect_newline()
                break
            if tok.is_keyword("delta") and not in_where and not delta:
                self.advance()
                ident = self.expect_plain_ident("state variable name")
                delta.append(ast.Ident(ident.lexeme, ident.span))
                while self.peek() is not None and self.peek().kind is TokenKind.COMMA:
                    self.advance()
                    ident = self.expect_plain_ident("state variable name")
                    delta.append(ast.Ident(ident.lexeme, ident.span))
                self.expect_newline()
                continue
            if tok.is_keyword("where") and not in_where:
                self.advance()
                self.expect_newline()
                in_where = True
                continue
            if self.at_section_boundary():
                # A new section keyword inside an op means the 'end' was lost.
                self.report(P_UNTERMINATED_BLOCK, f"operation '{name.lexeme}' is missing 'end'", kw.span.to(name.span))
                break
            if in_where:
                pred = self.parse_predicate()
                self.expect_newline()
                preds.append(pred)
                continue
            decl = self.parse_io_decl()
            if decl[0] == "in":
                inputs.append(decl[1])
            else:
                outputs.append(decl[1])
        self.check_io_duplicates(name.lexeme, inputs, outputs)
        return ast.OperationSchema(
            name=name.lexeme,
            delta=tuple(delta),
            inputs=tuple(inputs),
            outputs=tuple(outputs),
            preds=tuple(preds),
            span=kw.span.to(end_span),
            name_span=name.span,
        )

    def parse_io_decl(self) -> tuple[str, ast.VarDecl]:
        tok = self.peek()
        if tok is None or tok.kind is not TokenKind.IDENT:
            raise self.fail(P_UNEXPECTED_TOKEN, f"expected an input/output declaration, found {self.describe(tok)}")
        if tok.decoration is Decoration.INPUT:
            direction = "in"
        elif tok.decoration is Decoration.OUTPUT:
            direction = "out"
        elif tok.decoration is Decoration.PRIMED:
            raise self.fail(P_BAD_DECORATION, f"primed name '{tok.lexeme}' cannot be declared", tok.span)
        else:
            raise self.fail(
                P_UNEXPECTED_TOKEN,
                f"operation declarations need a '?' or '!' decoration, found '{tok.lexeme}'",
                tok.span,
            )
        self.advance()
        self.expect_kind(TokenKind.COLON, "':'")
        type_expr = self.parse_type()
        self.expect_newline()
        return direction, ast.VarDecl(tok.base_name, type_expr, tok.span)

    def check_io_duplicates(self, op_name: str, inputs: list[ast.VarDecl], outputs: list[ast.VarDecl]) -> None:
        seen: set[str] = set()
        for decl in list(inputs) + list(outputs):
            if decl.name in seen:
                self.report(
                    P_DUPLICATE_MEMBER,
                    f"duplicate input/output name '{decl.name}' in operation '{op_name}'",
                    decl.span,
                )
            seen.add(decl.name)

    # --- types ---------------------------------------------------------------

    def parse_type(self) -> ast.TypeExpr:
        tok = self.peek()
        if tok is None:
            raise self.fail(P_UNEXPECTED_TOKEN, "expected a type, found end of file")
        if tok.kind is TokenKind.TYPENAME:
            self.advance()
            if tok.lexeme == "NAT":
                return ast.NatType(tok.span)
            if tok.lexeme == "INT":
                return ast.IntType(tok.span)
            return ast.BoolType(tok.span)
        if tok.kind is TokenKind.IDENT and tok.decoration is Decoration.NONE:
            self.advance()
            return ast.ClassRef(tok.lexeme, tok.span)
        if tok.kind is TokenKind.LBRACE:
            open_tok = self.advance()
            values = [self.parse_int_literal()]
            while self.peek() is not None and self.peek().kind is TokenKind.COMMA:
                self.advance()
                values.append(self.parse_int_literal())
            close = self.expect_kind(TokenKind.RBRACE, "'}'")
            return ast.SetLiteralType(tuple(values), open_tok.span.to(close.span))
        raise self.fail(P_UNEXPECTED_TOKEN, f"expected a type, found {self.describe(tok)}", tok.span)

    def parse_int_literal(self) -> int:
        tok = self.expect_kind(TokenKind.INT, "an integer literal")
        return int(tok.lexeme)

    # --- predicates ------------------------------------------------------------

    def check_undecorated(self, pred: ast.Predicate, where: str) -> None:
        for name in ast.names_in(pred):
            if name.decoration is Decoration.PRIMED:
                self.report(P_BAD_DECORATION, f"primed name '{name.name}'' is not allowed in {where}", name.span)
            elif name.decoration is Decoration.INPUT:
                self.report(P_BAD_DECORATION, f"input name '{name.name}?' is not allowed in {where}", name.span)
            elif name.decoration is Decoration.OUTPUT:
                self.report(P_BAD_DECORATION, f"output name '{name.name}!' is not allowed in {where}", name.span)

    def parse_predicate(self) -> ast.Predicate:
        return self.parse_implies()

    def parse_implies(self) -> ast.Expr:
        left = self.parse_or()
        tok = self.peek()
        if tok is not None and tok.is_opword("implies"):
            self.advance()
            right = self.parse_implies()
            return ast.Logic("implies", (left, right), left.span.to(right.span))
        return left

    def parse_or(self) -> ast.Expr:
        expr = self.parse_and()
        while self.peek() is not None and self.peek().is_opword("or"):
            self.advance()
            right = self.parse_and()
            expr = ast.Logic("or", (expr, right), expr.span.to(right.span))
        return expr

    def parse_and(self) -> ast.Expr:
        expr = self.parse_not()
        while self.peek() is not None and self.peek().is_opword("and"):
            self.advance()
            right = self.parse_not()
            expr = ast.Logic("and", (expr, right), expr.span.to(right.span))
        return expr

    def parse_not(self) -> ast.Expr:
        tok = self.peek()
        if tok is not None and tok.is_opword("not"):
            self.advance()
            operand = self.parse_not()
            return ast.Logic("not", (operand,), tok.span.to(operand.span))
        return self.parse_comparison()

    def parse_comparison(self) -> ast.Expr:
        left = self.parse_additive()
        tok = self.peek()
        if tok is None:
            return left
        if tok.kind in _COMPARE_KINDS:
            self.advance()
            right = self.parse_additive()
            return ast.Compare(_COMPARE_KINDS[tok.kind], left, right, left.span.to(right.span))
        if tok.is_opword("in"):
            self.advance()
            right = self.parse_additive()
            return ast.In(left, right, left.span.to(right.span))
        return left

    def parse_additive(self) -> ast.Expr:
        expr = self.parse_multiplicative()
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in (TokenKind.PLUS, TokenKind.MINUS):
                return expr
            self.advance()
            right = self.parse_multiplicative()
            op = "+" if tok.kind is TokenKind.PLUS else "-"
            expr = ast.Arith(op, expr, right, expr.span.to(right.span))

    def parse_multiplicative(self) -> ast.Expr:
        expr = self.parse_postfix()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind is TokenKind.STAR:
                op = "*"
            elif tok is not None and (tok.is_opword("div") or tok.is_opword("mod")):
                op = tok.lexeme
            else:
                return expr
            self.advance()
            right = self.parse_postfix()
            expr = ast.Arith(op, expr, right, expr.span.to(right.span))

    def parse_postfix(self) -> ast.Expr:
        expr = self.parse_atom()
        while self.peek() is not None and self.peek().kind is TokenKind.DOT:
            self.advance()
            field_tok = self.peek()
            if field_tok is None or field_tok.kind is not TokenKind.IDENT or field_tok.decoration is not Decoration.NONE:
                raise self.fail(P_UNEXPECTED_TOKEN, f"expected a field name after '.', found {self.describe(field_tok)}")
            self.advance()
            expr = ast.Member(expr, field_tok.lexeme, expr.span.to(field_tok.span))
        return expr

    def parse_atom(self) -> ast.Expr:
        tok = self.peek()
        if tok is None:
            raise self.fail(P_UNEXPECTED_TOKEN, "expected an expression, found end of file")
        if tok.kind is TokenKind.INT:
            self.advance()
            return ast.IntLiteral(int(tok.lexeme), tok.span)
        if tok.kind is TokenKind.IDENT:
            self.advance()
            return ast.Name(tok.base_name, tok.decoration, tok.span)
        if tok.kind is TokenKind.LBRACE:
            open_tok = self.advance()
            elements = [self.parse_additive()]
            while self.peek() is not None and self.peek().kind is TokenKind.COMMA:
                self.advance()
                elements.append(self.parse_additive())
            close = self.expect_kind(TokenKind.RBRACE, "'}'")
            return ast.SetLiteral(tuple(elements), open_tok.span.to(close.span))
        if tok.kind is TokenKind.LPAREN:
            self.advance()
            expr = self.parse_predicate()
            self.expect_kind(TokenKind.RPAREN, "')'")
            return expr
        raise self.fail(P_UNEXPECTED_TOKEN, f"expected an expression, found {self.describe(tok)}", tok.span)

    # --- operation expressions ----------------------------------------------

    def parse_op_expr(self) -> ast.OpExpr:
        expr = self.parse_op_term()
        while True:
            tok = self.peek()
            if tok is None:
                return expr
            if tok.kind is TokenKind.BOX:
                node = ast.Choice
            elif tok.kind is TokenKind.SEMI:
                node = ast.Sequential
            elif tok.kind is TokenKind.PARALLEL:
                node = ast.Parallel
            elif tok.kind is TokenKind.AMP:
                node = ast.Conjunction
            else:
                return expr
            self.advance()
            right = self.parse_op_term()
            expr = node(expr, right, expr.span.to(right.span))

    def parse_op_term(self) -> ast.OpExpr:
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.LPAREN:
            self.advance()
            expr = self.parse_op_expr()
            self.expect_kind(TokenKind.RPAREN, "')'")
            return expr
        name = self.expect_plain_ident("an operation name")
        nxt = self.peek()
        if nxt is not None and nxt.kind is TokenKind.DOT:
            self.advance()
            member = self.expect_plain_ident("an operation name")
            return ast.OpMemberRef(name.lexeme, member.lexeme, name.span.to(member.span))
        return ast.OpRef(name.lexeme, name.span)


def parse(tokens: list[Token], file: str = "<input>") -> ParseResult:
    """Parse a token stream. Returns the AST, or diagnostics on failure."""
    parser = _Parser(tokens, file)
    spec = parser.parse_specification()
    diags = sort_diagnostics(parser.diags)
    if diags:
        return ParseResult(None, diags)
    return ParseResult(spec, [])


def parse_source(text: str, file: str = "<input>") -> ParseResult:
    return parse(tokenize(text, file), file)
