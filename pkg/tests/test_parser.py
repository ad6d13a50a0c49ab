"""Parser structure, diagnostics, recovery, and totality."""

from __future__ import annotations

import random

from hypothesis import given, strategies as st

from ozc import ast, parse_source
from ozc.diagnostics import (
    P_BAD_DECORATION,
    P_DUPLICATE_MEMBER,
    P_DUPLICATE_STATE,
    P_UNEXPECTED_TOKEN,
    P_UNTERMINATED_BLOCK,
)


def codes(result):
    return [d.code for d in result.diagnostics]


def test_creditcard_structure(creditcard_source):
    result = parse_source(creditcard_source, "creditcard.oz")
    assert result.ok, codes(result)
    (decl,) = result.spec.classes
    assert decl.name == "CreditCard"
    assert len(decl.constants) == 1
    assert len(decl.axioms) == 1
    assert len(decl.state.primary) == 1
    assert len(decl.init.preds) == 1
    assert len(decl.operations) == 3
    assert [op.name for op in decl.operations] == ["withdraw", "deposit", "withdrawAvail"]


def test_minimal_class():
    result = parse_source("class C\nend\n")
    assert result.ok
    (decl,) = result.spec.classes
    assert decl.name == "C"
    assert decl.constants == ()
    assert decl.axioms == ()
    assert decl.state is None
    assert decl.init is None
    assert decl.operations == ()
    assert decl.op_expr_defs == ()
    assert decl.visibility is None


def test_generic_params_parsed_and_retained():
    result = parse_source("class Box[X, Y]\nend\n")
    assert result.ok
    assert result.spec.classes[0].generic_params == ("X", "Y")


def test_two_state_blocks_rejected():
    source = "class C\n  state\n    v : INT\n  state\n    w : INT\nend\n"
    result = parse_source(source)
    assert result.spec is None
    assert P_DUPLICATE_STATE in codes(result)
    # still a parse-family code
    assert all(code.startswith("P0") for code in codes(result))


def test_unterminated_class():
    result = parse_source("class C\n  state\n    v : INT\n")
    assert result.spec is None
    assert P_UNTERMINATED_BLOCK in codes(result)


def test_unterminated_operation():
    result = parse_source("class C\n  op f\n    x? : NAT\nend\n")
    assert result.spec is None
    assert P_UNTERMINATED_BLOCK in codes(result)


def test_duplicate_member_name():
    source = "class C\n  const v : NAT\n  state\n    v : INT\nend\n"
    result = parse_source(source)
    assert result.spec is None
    assert P_DUPLICATE_MEMBER in codes(result)


def test_duplicate_io_name():
    source = "class C\n  op f\n    x? : NAT\n    x! : NAT\n  end\nend\n"
    result = parse_source(source)
    assert P_DUPLICATE_MEMBER in codes(result)


def test_primed_name_outside_operation_rejected():
    source = "class C\n  state\n    v : INT\n  where\n    v' >= 0\nend\n"
    result = parse_source(source)
    assert result.spec is None
    assert P_BAD_DECORATION in codes(result)


def test_input_decoration_in_axiom_rejected():
    result = parse_source("class C\n  axiom x? >= 0\nend\n")
    assert result.spec is None
    assert P_BAD_DECORATION in codes(result)


def test_unexpected_token_reports_p001():
    result = parse_source("class C\n  const : NAT\nend\n")
    assert result.spec is None
    assert P_UNEXPECTED_TOKEN in codes(result)


def test_empty_input_needs_a_class():
    result = parse_source("")
    assert result.spec is None
    assert len(result.diagnostics) == 1


def test_op_expr_grouping():
    source = "class C\n  op a\n  end\n  op b\n  end\n  op c\n  end\n  op t = (a [] b) ; c\nend\n"
    result = parse_source(source)
    assert result.ok, codes(result)
    (d,) = result.spec.classes[0].op_expr_defs
    assert isinstance(d.expr, ast.Sequential)
    assert isinstance(d.expr.left, ast.Choice)
    assert isinstance(d.expr.right, ast.OpRef)


def test_op_expr_left_associative():
    source = "class C\n  op a\n  end\n  op b\n  end\n  op c\n  end\n  op t = a [] b ; c\nend\n"
    result = parse_source(source)
    assert result.ok
    (d,) = result.spec.classes[0].op_expr_defs
    assert isinstance(d.expr, ast.Sequential)
    assert isinstance(d.expr.left, ast.Choice)


def test_member_init_reference_parses():
    source = "class A\nend\n\nclass B\n  state\n    a : A\n  init\n    a.INIT\nend\n"
    result = parse_source(source)
    assert result.ok, codes(result)
    (pred,) = result.spec.classes[1].init.preds
    assert isinstance(pred, ast.Member)
    assert pred.field_name == "INIT"


def test_multiple_diagnostics_collected():
    source = "class C\n  const : NAT\n  axiom x? > 0\nend\n"
    result = parse_source(source)
    assert result.spec is None
    assert len(result.diagnostics) >= 2


def test_diagnostics_sorted_by_position():
    source = "class C\n  axiom y? > 0\n  axiom x? > 0\nend\n"
    result = parse_source(source)
    positions = [(d.span.start_line, d.span.start_col) for d in result.diagnostics]
    assert positions == sorted(positions)


def _span_in_bounds(span, text: str) -> bool:
    lines = text.split("\n") or [""]
    if not (1 <= span.start_line <= len(lines) and 1 <= span.end_line <= len(lines)):
        return False
    # Columns may point one past the end of the line (caret position).
    return (
        span.start_col <= len(lines[span.start_line - 1]) + 1
        and span.end_col <= len(lines[span.end_line - 1]) + 1
    )


def test_span_soundness_on_malformed_inputs():
    sources = [
        "class C\n  const : NAT\nend\n",
        "class C\n  state\n  state\nend\n",
        "class\n",
        "junk before\nclass C\nend\n",
        "class C\n  op f\nend\n",
        "?",
    ]
    for source in sources:
        result = parse_source(source)
        assert result.diagnostics
        for diag in result.diagnostics:
            assert _span_in_bounds(diag.span, source), (source, diag)


@given(st.text(max_size=200))
def test_parser_total_on_arbitrary_text(text):
    result = parse_source(text)
    assert result.spec is not None or result.diagnostics


@given(st.binary(max_size=200))
def test_parser_total_on_fuzzed_bytes(data):
    text = data.decode("latin-1")
    result = parse_source(text)
    assert result.spec is not None or result.diagnostics


def test_parser_total_on_mutated_corpus(corpus_sources):
    rnd = random.Random(99)
    for source in corpus_sources.values():
        for _ in range(30):
            chars = list(source)
            for _ in range(rnd.randint(1, 5)):
                op = rnd.choice(("del", "dup", "swap"))
                i = rnd.randrange(len(chars))
                if op == "del":
                    del chars[i]
                elif op == "dup":
                    chars.insert(i, chars[i])
                elif op == "swap" and len(chars) > 1:
                    j = rnd.randrange(len(chars))
                    chars[i], chars[j] = chars[j], chars[i]
            mutated = "".join(chars)
            result = parse_source(mutated)
            assert result.spec is not None or result.diagnostics
