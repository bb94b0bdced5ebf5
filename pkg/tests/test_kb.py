import pytest
from hypothesis import given, strategies as st

from nmprob.errors import ParseError, ValidationError
from nmprob.kb import (
    TRUE,
    And,
    AtomRef,
    CIGTuple,
    Conditional,
    Iff,
    Implies,
    Not,
    Or,
    Relation,
    canonical_form,
    parse_conditional,
    parse_kb,
    parse_sentence,
    render,
    render_kb,
)

from generators import knowledge_bases, sentences

A, B, C, L, N, T = (AtomRef(x) for x in "ABCLNT")


def test_parse_igor():
    kb = parse_kb("atoms D F; P(F | D) = 0.6; P(D) = 0.3;")
    assert kb.atoms == ("D", "F")
    assert len(kb.hard) == 2
    first, second = kb.hard
    assert first.target == AtomRef("F") and first.given == AtomRef("D")
    assert first.relation is Relation.EQ and first.value == 0.6
    assert second.given == TRUE and second.value == 0.3


def test_parse_empty():
    kb = parse_kb("")
    assert kb.atoms == () and kb.hard == ()


def test_value_out_of_range():
    with pytest.raises(ValidationError) as info:
        parse_kb("atoms A; P(A) = 1.5;")
    assert any("value out of [0,1]" in p for p in info.value.problems)


def test_all_problems_reported_together():
    text = "atoms A A; P(A) = 1.5; P(B) >= 0.2; P(A | Z) <= -0.1;"
    with pytest.raises(ValidationError) as info:
        parse_kb(text)
    problems = info.value.problems
    assert len(problems) == 5
    assert sum("out of [0,1]" in p for p in problems) == 2
    assert sum("undeclared atom" in p for p in problems) == 2
    assert any("duplicate atom" in p for p in problems)


def test_source_positions():
    kb = parse_kb("atoms A B;\n  P(A) >= 0.2;\nquery P(B | A);")
    assert kb.hard[0].pos == (2, 3)
    assert kb.queries[0].pos == (3, 1)


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_kb("atoms A;\nP(A) = ;")
    assert (info.value.line, info.value.col) == (2, 8)
    assert str(info.value).startswith("2:8:")


@pytest.mark.parametrize(
    "text",
    ["atoms A; P(A = 0.5;", "atoms A; P(A) == 0.5;", "atoms A; P(A) = 0.5", "atoms A; P(A & ) = 1;", "atoms A; $"],
)
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_kb(text)


def test_reserved_word_atom():
    with pytest.raises(ValidationError):
        parse_kb("atoms v;")


def test_atom_cap():
    names = " ".join(f"a{i}" for i in range(13))
    with pytest.raises(ValidationError) as info:
        parse_kb(f"atoms {names};", atom_cap=12)
    assert any("cap" in p for p in info.value.problems)
    assert len(parse_kb(f"atoms {names};", atom_cap=13).atoms) == 13


def test_defaults_priorities_queries():
    kb = parse_kb(
        "atoms L N T;"
        "default ci {L, T} given N;"
        "prefer ci {L, T} given N over ci {T, L} given true;"
        "query P(L | N & T);"
    )
    assert kb.defaults == (CIGTuple(T, L, N),)
    assert kb.priorities[0].higher == CIGTuple(L, T, N)
    assert kb.priorities[0].lower.given == TRUE
    assert kb.queries == (Conditional(L, And(N, T)),)


def test_prefer_self_rejected():
    with pytest.raises(ValidationError):
        parse_kb("atoms A B C; prefer ci {A, B} given C over ci {B, A} given C;")


def test_ci_pair_needs_two_sentences():
    with pytest.raises(ValidationError):
        parse_kb("atoms A B; default ci {A, A} given B;")
    with pytest.raises(ValueError):
        CIGTuple(And(A, B), And(B, A), C)


def test_parse_sentence_examples():
    atoms = ["A", "B", "C", "N", "T"]
    assert parse_sentence("N & T", atoms) == And(N, T)
    assert parse_sentence("!A v B -> C", atoms) == Implies(Or(Not(A), B), C)
    assert parse_sentence("A <-> (B & true)", atoms) == Iff(A, And(B, TRUE))


def test_precedence_and_associativity():
    atoms = ["A", "B", "C"]
    assert parse_sentence("A -> B -> C", atoms) == Implies(A, Implies(B, C))
    assert parse_sentence("A <-> B <-> C", atoms) == Iff(Iff(A, B), C)
    assert parse_sentence("A & B v C", atoms) == Or(And(A, B), C)
    assert parse_sentence("!A & B", atoms) == And(Not(A), B)
    assert parse_sentence("!(A & B)", atoms) == Not(And(A, B))


def test_unknown_atom_in_sentence():
    with pytest.raises(ParseError) as info:
        parse_sentence("A & Q", ["A"])
    assert info.value.col == 5


def test_parse_conditional():
    assert parse_conditional("P(A | B & C)", "ABC") == Conditional(A, And(B, C))
    assert parse_conditional("P(A)", "A") == Conditional(A, TRUE)
    assert str(parse_conditional("P(A|B)", "AB")) == "P(A | B)"


def test_canonical_form_examples():
    assert canonical_form(And(T, N)) == canonical_form(And(N, T))
    assert canonical_form(Not(Not(A))) == "!!A"
    assert canonical_form(Or(B, A)) == canonical_form(Or(A, B))
    # implication is not commutative
    assert canonical_form(Implies(A, B)) != canonical_form(Implies(B, A))


def test_cig_symmetry():
    assert CIGTuple(A, B, C) == CIGTuple(B, A, C)
    assert hash(CIGTuple(A, B, C)) == hash(CIGTuple(B, A, C))
    assert CIGTuple(And(A, B), C, N) == CIGTuple(C, And(B, A), N)
    assert CIGTuple(A, B, C) != CIGTuple(A, B, N)
    assert str(CIGTuple(B, A, C)) == "ci {A, B} given C"


def _reorder(s):
    """Swap the operands of every And/Or node."""
    if isinstance(s, (And, Or)):
        return type(s)(_reorder(s.right), _reorder(s.left))
    if isinstance(s, Not):
        return Not(_reorder(s.child))
    if isinstance(s, (Implies, Iff)):
        return type(s)(_reorder(s.left), _reorder(s.right))
    return s


@given(sentences("ABC"))
def test_render_parse_round_trip(s):
    assert parse_sentence(render(s), "ABC") == s


@given(sentences("ABC"))
def test_canonical_form_ignores_operand_order(s):
    assert canonical_form(_reorder(s)) == canonical_form(s)


@given(sentences("ABC"), sentences("ABC"), sentences("ABC"))
def test_cig_equality_congruence(x, y, z):
    if canonical_form(x) == canonical_form(y):
        return
    assert CIGTuple(x, y, z) == CIGTuple(_reorder(y), _reorder(x), _reorder(z))


@given(knowledge_bases())
def test_kb_round_trip(kb):
    again = parse_kb(render_kb(kb))
    assert again.atoms == kb.atoms
    assert len(again.hard) == len(kb.hard)
    for a, b in zip(again.hard, kb.hard):
        assert canonical_form(a.target) == canonical_form(b.target)
        assert canonical_form(a.given) == canonical_form(b.given)
        assert (a.relation, a.value) == (b.relation, b.value)


@given(st.floats(allow_nan=False, allow_infinity=False, min_value=-5, max_value=5))
def test_parsed_values_in_range(v):
    text = f"atoms A; P(A) >= {v!r};"
    try:
        kb = parse_kb(text)
    except ValidationError:
        assert not 0.0 <= v <= 1.0
    else:
        assert 0.0 <= kb.hard[0].value <= 1.0
