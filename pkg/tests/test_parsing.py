import random

import pytest
from hypothesis import given, settings, strategies as st

from ledgercat import ParseError, TheoryError, TypingError
from ledgercat.parsing import parse_owned_term, parse_source, parse_term, parse_theory, parse_word
from ledgercat.ownership import OwnedAtom, format_owned_term
from ledgercat.terms import Gen, Id, Par, Seq, Sym, format_term, format_word
from ledgercat.theory import typecheck

from tests.support import BREAD, BREAD_IDEMPOTENT, BREAD_OWNED, TWO_BAKES, bread, bread_owned
from tests.support import random_owned_term, random_term, random_word


def test_bread_summary():
    assert parse_theory(BREAD).summary() == "5 atoms, 3 generators, 0 equations"


def test_empty_theory():
    assert parse_theory("").summary() == "0 atoms, 0 generators, 0 equations"


def test_equation_is_parsed_after_declarations():
    th = parse_theory("eq knead ; knead = knead\n" + BREAD)
    assert len(th.equations) == 1


def test_owner_lines():
    src = parse_source(BREAD_OWNED)
    assert [o.name for o in src.owners] == ["Alice", "Bob", "Carol"]
    assert src.owners[0].colour == "#e41a1c"


@pytest.mark.parametrize("text, line, col", [
    ("atoms a\ngen f : a -> b\n", 2, 14),
    ("atoms a a\n", 1, 9),
    ("atoms a\ngen f : a -> a\ngen f : a -> a\n", 3, 5),
    ("atoms a\nbogus x\n", 2, 1),
    ("atoms a\ngen id : a -> a\n", 2, 5),
])
def test_theory_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_theory(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_ill_typed_equation():
    with pytest.raises(TheoryError):
        parse_theory(BREAD + "eq knead = mix\n")


def test_word_sugar():
    th = bread()
    assert parse_word("dough^3 * oven", th) == ("dough",) * 3 + ("oven",)
    assert parse_word("I", th) == ()
    assert format_word(("dough", "dough", "oven")) == "dough^2 * oven"
    assert format_word(()) == "I"


def test_composite_type():
    th = bread()
    t = parse_term(TWO_BAKES, th)
    assert typecheck(t, th) == (("dough", "oven", "dough"), ("bread", "bread", "oven"))


def test_precedence():
    th = bread()
    t = parse_term("knead * knead ; knead * knead", th)
    assert t == Seq(Par(Gen("knead"), Gen("knead")), Par(Gen("knead"), Gen("knead")))
    assert format_term(t) == "knead * knead ; knead * knead"


def test_typing_errors():
    th = bread()
    with pytest.raises(TypingError):
        parse_term("mix ; mix", th)
    with pytest.raises(TheoryError):
        parse_term("unknown", th)
    with pytest.raises(ParseError):
        parse_term("knead ;", th)


def test_sym_and_identity_terms():
    th = bread()
    assert parse_term("sym(dough, oven * bread)", th) == Sym(("dough",), ("oven", "bread"))
    assert parse_term("id(I)", th) == Id(())


def test_owned_syntax():
    th = bread_owned()
    for text in [
        "knead@Alice",
        "phi@Alice(dough, oven)",
        "psi@Bob(dough, I)",
        "phiI@Carol",
        "psiI@Carol",
        "gamma(dough, Alice->Bob)",
        "id(dough@Alice * (dough * oven)@Bob) ; sym(dough@Alice, (dough * oven)@Bob)",
        "lift@Alice(knead ; knead)",
    ]:
        assert format_owned_term(parse_owned_term(text, th)) == text


def test_owned_unknown_owner():
    with pytest.raises(ParseError):
        parse_owned_term("knead@Dave", bread_owned())


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_base_print_parse_round_trip(seed):
    rng = random.Random(seed)
    th = bread()
    t = random_term(rng, th, random_word(rng, th))
    assert parse_term(format_term(t), th) == t


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_owned_print_parse_round_trip(seed):
    rng = random.Random(seed)
    th = bread_owned()
    dom = tuple(OwnedAtom(random_word(rng, th.base, 2), rng.choice(th.owner_names)) for _ in range(rng.randint(0, 3)))
    t = random_owned_term(rng, th, dom)
    assert parse_owned_term(format_owned_term(t), th) == t


def test_idempotent_theory_loads():
    assert parse_theory(BREAD_IDEMPOTENT).summary() == "5 atoms, 3 generators, 1 equation"
