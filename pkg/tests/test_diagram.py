import random

import pytest
from hypothesis import given, settings, strategies as st

from ledgercat import _backend
from ledgercat.diagram import (
    BOUNDARY,
    Diagram,
    compose,
    diagram_to_term,
    flatten,
    identity,
    tensor,
    to_diagram,
)
from ledgercat.iso import diagram_equal, find_isomorphism
from ledgercat.parsing import parse_term, parse_theory
from ledgercat.terms import Gen, Id, Par, Seq, Sym
from ledgercat.theory import typecheck

from tests.support import BATCHES_IN_TURN, BATCHES_TOGETHER, TWO_BAKES, bread, random_term, random_word

TH = bread()
SEEDS = st.integers(0, 10**9)


def d(text):
    return to_diagram(parse_term(text, TH), TH)


def same(t1, t2):
    """Both equality routes must agree; return their common answer."""
    a, b = to_diagram(t1, TH), to_diagram(t2, TH)
    by_key = a.canonical_key == b.canonical_key
    by_iso = find_isomorphism(a, b) is not None
    assert by_key == by_iso
    return by_key


def rand(seed, dom=None):
    rng = random.Random(seed)
    dom = random_word(rng, TH) if dom is None else dom
    return rng, random_term(rng, TH, dom)


# -- examples ------------------------------------------------------------------


def test_counts():
    x = d("mix ; knead")
    assert len(x.nodes) == 2
    assert len(x.wires()) == 4


def test_identity_has_no_boxes():
    x = identity(("dough", "oven"))
    assert not x.nodes and x.outputs == ((BOUNDARY, 0), (BOUNDARY, 1))


def test_two_bakes_structure():
    x = d(TWO_BAKES)
    assert [n.label for n in x.nodes] == ["bake", "bake"]
    assert x.successors(0) == [1]   # the oven wire


def test_naturality_example():
    assert diagram_equal(d(BATCHES_TOGETHER), d(BATCHES_IN_TURN))


def test_knead_is_not_identity():
    assert not diagram_equal(d("knead"), d("id(dough)"))
    assert not diagram_equal(d("knead"), d("knead ; knead"))


def test_crossing_is_not_identity():
    assert not diagram_equal(d("sym(dough, dough)"), d("id(dough * dough)"))
    assert diagram_equal(d("sym(dough, dough) ; sym(dough, dough)"), d("id(dough * dough)"))


def test_interchange_example():
    assert diagram_equal(d("knead * id(dough) ; id(dough) * knead"), d("knead * knead"))
    assert diagram_equal(d("id(dough) * knead ; knead * id(dough)"), d("knead * knead"))


def test_braid_naturality_example():
    assert diagram_equal(d("knead * mix ; sym(dough, dough)"), d("sym(dough, water * flour) ; mix * knead"))


def test_distinguishes_wiring():
    a = d("mix * mix")
    b = d("mix * mix ; sym(dough, dough)")
    assert not diagram_equal(a, b)
    assert diagram_equal(b, d("sym(water * flour, water * flour) ; mix * mix"))


def test_validate_rejects_bad_label():
    x = d("knead")
    bad = Diagram(("oven",), x.cod, x.nodes, ((( BOUNDARY, 0),),), x.outputs)
    with pytest.raises(Exception):
        bad.validate()


def test_closed_components_are_compared():
    theory = TH
    a = to_diagram(Par(Id(("dough",)), Id(())), theory)
    assert diagram_equal(a, identity(("dough",)))


def test_backends_agree_on_examples():
    for text in [TWO_BAKES, BATCHES_TOGETHER, BATCHES_IN_TURN, "knead * knead", "id(I)"]:
        arrays = flatten(d(text))
        assert _backend.canonical_order(*arrays) == _backend.python_canonical_order(*arrays)


# -- properties -------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(SEEDS)
def test_backends_agree(seed):
    _, t = rand(seed)
    arrays = flatten(to_diagram(t, TH))
    assert _backend.canonical_order(*arrays) == _backend.python_canonical_order(*arrays)


@settings(max_examples=150, deadline=None)
@given(SEEDS)
def test_unit_laws(seed):
    _, f = rand(seed)
    dom, cod = typecheck(f, TH)
    assert same(Seq(Id(dom), f), f)
    assert same(Seq(f, Id(cod)), f)
    assert same(Par(f, Id(())), f)
    assert same(Par(Id(()), f), f)


@settings(max_examples=150, deadline=None)
@given(SEEDS)
def test_associativity(seed):
    rng, f = rand(seed)
    g = random_term(rng, TH, typecheck(f, TH)[1])
    h = random_term(rng, TH, typecheck(g, TH)[1])
    assert same(Seq(Seq(f, g), h), Seq(f, Seq(g, h)))
    k = random_term(rng, TH, random_word(rng, TH, 2))
    assert same(Par(Par(f, g), k), Par(f, Par(g, k)))


@settings(max_examples=150, deadline=None)
@given(SEEDS)
def test_interchange(seed):
    rng, f = rand(seed, None)
    f2 = random_term(rng, TH, typecheck(f, TH)[1])
    g = random_term(rng, TH, random_word(rng, TH, 3))
    g2 = random_term(rng, TH, typecheck(g, TH)[1])
    assert same(Seq(Par(f, g), Par(f2, g2)), Par(Seq(f, f2), Seq(g, g2)))


@settings(max_examples=150, deadline=None)
@given(SEEDS)
def test_symmetry_laws(seed):
    rng = random.Random(seed)
    x, y, z = (random_word(rng, TH, 2) for _ in range(3))
    assert same(Seq(Sym(x, y), Sym(y, x)), Id(x + y))
    assert same(Sym(x, y + z), Seq(Par(Sym(x, y), Id(z)), Par(Id(y), Sym(x, z))))
    assert same(Sym((), x), Id(x))


@settings(max_examples=150, deadline=None)
@given(SEEDS)
def test_braid_naturality(seed):
    rng = random.Random(seed)
    f = random_term(rng, TH, random_word(rng, TH, 3))
    g = random_term(rng, TH, random_word(rng, TH, 3))
    (x, x2), (y, y2) = typecheck(f, TH), typecheck(g, TH)
    assert same(Seq(Par(f, g), Sym(x2, y2)), Seq(Sym(x, y), Par(g, f)))


@settings(max_examples=200, deadline=None)
@given(SEEDS)
def test_readback_is_equal(seed):
    _, f = rand(seed)
    x = to_diagram(f, TH)
    back = diagram_to_term(x)
    assert typecheck(back, TH) == typecheck(f, TH)
    assert diagram_equal(to_diagram(back, TH), x)
    assert to_diagram(back, TH).canonical_key == x.canonical_key


@settings(max_examples=200, deadline=None)
@given(SEEDS, SEEDS)
def test_routes_agree_on_random_pairs(s1, s2):
    rng = random.Random(s1)
    dom = random_word(rng, TH, 3)
    f = random_term(rng, TH, dom)
    g = random_term(random.Random(s2), TH, dom)
    if typecheck(f, TH) == typecheck(g, TH):
        same(f, g)


@settings(max_examples=100, deadline=None)
@given(SEEDS)
def test_compose_and_tensor_match_terms(seed):
    rng, f = rand(seed)
    g = random_term(rng, TH, typecheck(f, TH)[1])
    assert diagram_equal(compose(to_diagram(f, TH), to_diagram(g, TH)), to_diagram(Seq(f, g), TH))
    assert diagram_equal(tensor(to_diagram(f, TH), to_diagram(g, TH)), to_diagram(Par(f, g), TH))


@settings(max_examples=100, deadline=None)
@given(SEEDS)
def test_diagrams_are_well_formed(seed):
    _, f = rand(seed)
    to_diagram(f, TH).validate()


LOOPY = parse_theory(
    "atoms a b\n"
    "gen u : I -> a\ngen c : a -> I\ngen m : a * a -> a\ngen s : a -> a * b\ngen k : b -> b\n"
)


def _loopy(rng):
    dom = random_word(rng, LOOPY, 2)
    return random_term(rng, LOOPY, dom, 6)


@settings(max_examples=300, deadline=None)
@given(SEEDS, SEEDS)
def test_routes_agree_with_closed_components(s1, s2):
    rng = random.Random(s1)
    f = Par(_loopy(rng), random_term(rng, LOOPY, (), 4))
    g = Par(random_term(rng, LOOPY, (), 4), f) if s2 % 2 else _loopy(random.Random(s2))
    a, b = to_diagram(f, LOOPY), to_diagram(g, LOOPY)
    if (a.dom, a.cod) == (b.dom, b.cod):
        assert (a.canonical_key == b.canonical_key) == (find_isomorphism(a, b) is not None)
    arrays = flatten(a)
    assert _backend.canonical_order(*arrays) == _backend.python_canonical_order(*arrays)


def test_closed_components_commute():
    x = to_diagram(Par(Seq(Gen("u"), Gen("c")), Seq(Gen("u"), Seq(Gen("s"), Par(Gen("c"), Gen("k"))))), LOOPY)
    y = to_diagram(Par(Seq(Gen("u"), Seq(Gen("s"), Par(Gen("c"), Gen("k")))), Seq(Gen("u"), Gen("c"))), LOOPY)
    assert diagram_equal(x, y) and x.canonical_key == y.canonical_key


def test_pure_python_fallback_can_be_forced():
    import os
    import subprocess
    import sys

    env = dict(os.environ, LEDGERCAT_PURE_PYTHON="1")
    code = "import ledgercat; print(ledgercat.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
