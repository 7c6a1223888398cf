from fractions import Fraction

import pytest
from hypothesis import given, settings

from dal import DATA
from dal.parser import load_theory, parse_formula
from dal.syntax import (free_var_sorts, OBJ, TIME, TOP, ActionTerm, And, Atom, Const, Forall, Modal, Not, Or,
                        SortError, TimeExpr, Var, diamond, flatten_modalities, free_vars,
                        instantiate, is_grounded, modal_depth, render, term_vars)
from strategies import SIG, formulas

SUZY = load_theory(DATA / "suzy_billy.dal")

x, y, c, c1, c2, c3 = Var("x"), Var("y"), Const("c"), Const("c1"), Const("c2"), Const("c3")
P = Atom("P", ())


def act(name, *args):
    return ActionTerm(name, tuple(args))


class TestInstantiate:
    def test_action_argument_and_body(self):
        phi = Modal((act("a", x, c),), Or(Not(Atom("P", (c, x))), Atom("Q", (x,))))
        got = instantiate(phi, x, c1)
        assert got == Modal((act("a", c1, c),), Or(Not(Atom("P", (c, c1))), Atom("Q", (c1,))))

    def test_sequence_operator(self):
        phi = Modal((act("a1"), act("a2"), act("a3", c, y)), Atom("P", (c, y)))
        got = instantiate(phi, "y", c3)
        assert got == Modal((act("a1"), act("a2"), act("a3", c, c3)), Atom("P", (c, c3)))

    def test_bound_occurrence_untouched(self):
        phi = Forall(x, Atom("P", (x,)))
        assert instantiate(phi, x, c) is phi

    def test_capture_is_avoided(self):
        phi = Forall(y, Atom("R", (x, y)))
        got = instantiate(phi, x, y)
        assert free_vars(got) == {"y"}
        assert got.var.name != "y"

    def test_sort_mismatch(self):
        t = Var("t", TIME)
        with pytest.raises(SortError):
            instantiate(Atom("H", (TimeExpr.atom(t), c)), "t", c1)

    def test_time_substitution_is_linear(self):
        t, d = Var("t", TIME), Var("d", TIME)
        phi = Atom("BB", (TimeExpr(0, [(t, 1), (d, 1)]),))
        got = instantiate(instantiate(phi, "t", 6), "d", 3)
        assert render(got) == "BB(9)"


class TestFreeVars:
    def test_action_arguments_count(self):
        phi = Modal((act("a", x, c2, y),), Atom("P", (y,)))
        assert free_vars(phi) == {"x", "y"}
        assert not is_grounded(phi)

    def test_grounded(self):
        phi = Modal((act("a", c1, c2, c3),), Atom("P", (c1,)))
        assert free_vars(phi) == set()
        assert is_grounded(phi)

    def test_bound_excluded(self):
        assert free_vars(Forall(x, Atom("P", (x, y)))) == {"y"}


class TestFlatten:
    def test_sequence(self):
        phi = Modal((act("a1"), act("a2")), P)
        assert flatten_modalities(phi) == Modal((act("a1"),), Modal((act("a2"),), P))

    def test_empty_operator(self):
        assert flatten_modalities(Modal((), P)) == P

    def test_already_flat(self):
        phi = Modal((act("a"),), P)
        assert flatten_modalities(phi) == phi

    def test_modal_depth_counts_sequence_length(self):
        assert modal_depth(Modal((act("a"), act("b")), P)) == 2


class TestParseRender:
    def test_modal_atom(self):
        phi = parse_formula("[T(0,ds,suzy)] H(ds,suzy)", SUZY.signature)
        assert isinstance(phi, Modal)
        (a,) = phi.actions
        assert a.symbol == "T"
        assert a.args == (TimeExpr(0), TimeExpr.atom(Const("ds", TIME)), Const("suzy"))
        assert phi.body == Atom("H", (TimeExpr.atom(Const("ds", TIME)), Const("suzy")))

    def test_law_three(self):
        phi = parse_formula("box (BB(t) -> forall t1 (t < t1 -> BB(t1)))", free_variables=True)
        assert free_vars(phi) == {"t"}
        assert render(phi) == "box (BB(t) -> forall t1:time (t < t1 -> BB(t1)))"

    def test_parse_error_offset(self):
        with pytest.raises(ValueError) as info:
            parse_formula("[a(x")
        assert info.value.offset == 4

    def test_law_one_renders(self):
        phi = parse_formula("~BB(t+d) -> [T(t,d,p)] H(t+d,p)", free_variables=True)
        assert render(phi) == "~BB(t+d) -> [T(t,d,p)] H(t+d,p)"

    def test_top(self):
        assert render(TOP) == "true"

    def test_no_simplification(self):
        assert render(Not(Not(Atom("P", (c1,))))) == "~~P(c1)"

    def test_diamond_notation(self):
        assert render(diamond(act("a"), TOP)) == "<a> true"
        assert parse_formula("<a> true") == diamond(act("a"), TOP)

    def test_time_arithmetic(self):
        phi = parse_formula("BB(ds + 1/2 + ds)")
        assert phi.args[0] == TimeExpr(Fraction(1, 2), [(Const("ds", TIME), 2)])


# ---------------------------------------------------------------- properties


def _parse_back(phi):
    return parse_formula(render(phi), SIG.copy(), free_variables=free_var_sorts(phi))


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_parse_render_roundtrip(phi):
    assert _parse_back(phi) == phi


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_flatten_idempotent_and_keeps_free_vars(phi):
    once = flatten_modalities(phi)
    assert flatten_modalities(once) == once
    assert free_vars(once) == free_vars(phi)


@settings(max_examples=200, deadline=None)
@given(formulas(ground=True))
def test_flatten_keeps_groundedness(phi):
    assert is_grounded(flatten_modalities(phi))


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_substitution_lemma(phi):
    for name, term in (("x", c1), ("x", y), ("t", TimeExpr(3, [(Const("ds", TIME), 1)]))):
        if name not in free_vars(phi):
            continue
        got = instantiate(phi, name, term)
        assert free_vars(got) == (free_vars(phi) - {name}) | term_vars(term)


def test_nested_sequences_and_conjunctions_render():
    phi = And(Modal((act("a"), act("b", c1)), P), Modal((), Not(P)))
    assert render(phi) == "[a;b(c1)] P & [eps] ~P"
    assert parse_formula(render(phi)) == phi


def test_var_sorts_default_to_object():
    assert Var("x").sort == OBJ
