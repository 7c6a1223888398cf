from fractions import Fraction

import pytest

from dal import DATA
from dal.parser import (DalSyntaxError, load_theory, parse_action, parse_formula, parse_theory,
                        render_theory)
from dal.syntax import (OBJ, TIME, Atom, Box, Compare, Modal, Signature, Var, diamond,
                        free_var_sorts, render)

SHIPPED = sorted(DATA.glob("*.dal"))


def test_shipped_files_exist():
    names = {p.name for p in SHIPPED}
    assert {"suzy_billy.dal", "billy_only.dal", "axioms.dal"} <= names


@pytest.mark.parametrize("path", SHIPPED, ids=lambda p: p.name)
def test_render_is_stable_on_second_pass(path):
    once = render_theory(load_theory(path))
    twice = render_theory(parse_theory(once))
    assert once == twice


def test_suzy_billy_structure():
    th = load_theory(DATA / "suzy_billy.dal")
    sig = th.signature
    assert sig.objects == ["suzy", "billy"]
    assert set(sig.times) >= {"ds", "db", "t1"}
    assert sig.preds == {"H": (TIME, OBJ), "BB": (TIME,)}
    assert sig.actions == {"T": (TIME, TIME, OBJ)}
    assert th.fluents == ["BB"]
    assert th.infinitesimals == ["d1"]
    assert [s.label for s in th.of_kind("law")] == ["1", "2", "3"]
    assert [s.label for s in th.of_kind("occurs")] == ["5", "6"]
    assert [c.name for c in th.cases] == ["case1", "case2", "case3"]
    case1 = th.case("case1")
    assert case1.bindings == {"ds": 1, "t1": 2, "db": 1}
    assert [s.label for s in case1.of_kind("query")] == ["8", "9", "10", "11", "12"]
    assert [s.label for s in case1.of_kind("reject")] == ["h1"]


def test_law_texts():
    th = load_theory(DATA / "suzy_billy.dal")
    laws = {s.label: render(s.formula) for s in th.of_kind("law")}
    assert laws["1"] == "~BB(t+d) -> [T(t,d,p)] H(t+d,p)"
    assert laws["2"] == "box (H(t,p) -> BB(t+d1))"
    assert laws["3"] == "box (BB(t) -> forall t2:time (t < t2 -> BB(t2)))"


def test_constraint_statement():
    th = load_theory(DATA / "suzy_billy.dal")
    (c7,) = th.case("case1").of_kind("constraint")
    assert c7.label == "7"
    assert isinstance(c7.formula, Compare)
    assert render(c7.formula) == "ds+d1 < t1+db"


def test_occurrence_is_an_action_term():
    th = load_theory(DATA / "suzy_billy.dal")
    occ = th.of_kind("occurs")[0].formula
    assert occ.symbol == "T"
    assert render(diamond(occ, Atom("BB", (occ.args[0],)))).startswith("<T(0,ds,suzy)>")


def test_undeclared_symbol_rejected_when_declarations_present():
    text = "const c : obj\npred P(obj)\nfact (1): Q(c)\n"
    with pytest.raises(DalSyntaxError) as info:
        parse_theory(text)
    assert "undeclared predicate Q" in str(info.value)
    assert info.value.line == 3


def test_lenient_theory_without_declarations():
    th = parse_theory("fact (1): [a] P(c)\nfact (2): box Q\n")
    assert th.signature.preds == {"P": (OBJ,), "Q": ()}
    assert th.signature.actions == {"a": ()}
    assert th.signature.objects == ["c"]


def test_error_position_inside_file():
    text = "pred P\naction a\nfact (1): [a P\n"
    with pytest.raises(DalSyntaxError) as info:
        parse_theory(text)
    err = info.value
    assert err.line == 3
    assert text[err.offset:].startswith("P")


def test_unclosed_case():
    with pytest.raises(DalSyntaxError, match="not closed"):
        parse_theory("pred P\ncase c1 {\n  fact (1): P\n")


def test_single_line_case_and_bindings():
    th = parse_theory("const t1 : time\npred BB(time)\ncase k { bind t1 = 3/2; query (q): BB(t1) }\n")
    (case,) = th.cases
    assert case.bindings == {"t1": Fraction(3, 2)}
    assert render(case.statements[0].formula) == "BB(t1)"


def test_unicode_input():
    phi = parse_formula("□(P → Q) ∧ ¬⊥")
    assert render(phi) == "box (P -> Q) & ~false"


def test_strict_formula_against_signature():
    sig = Signature(preds={"P": ()}, actions={"a": ()})
    assert isinstance(parse_formula("[a] P", sig), Modal)
    with pytest.raises(DalSyntaxError, match="undeclared action b"):
        parse_formula("[b] P", sig)


def test_lenient_inference_reads_comparisons_as_time():
    sig = Signature()
    phi = parse_formula("box (BB(t) -> forall t1 (t < t1 -> BB(t1)))", sig, strict=False,
                        free_variables=True)
    assert isinstance(phi, Box)
    assert sig.preds == {"BB": (TIME,)}


def test_failed_lenient_parse_leaves_signature_alone():
    sig = Signature()
    with pytest.raises(DalSyntaxError):
        parse_formula("P(c) & [a(x", sig, strict=False)
    assert sig.preds == {}


def test_comparison_lookahead_reads_time():
    sig = Signature(preds={"P": ()})
    phi = parse_formula("P -> t = 0 | u < v", sig, free_variables=True)
    assert free_var_sorts(phi) == {"t": TIME, "u": TIME, "v": TIME}


def test_free_variable_sorts_can_be_fixed():
    phi = parse_formula("t = u", free_variables={"t": TIME, "u": TIME})
    assert isinstance(phi, Compare) and phi.lhs.variables()
    assert isinstance(parse_formula("t = u", free_variables=True).lhs, Var)


def test_mixed_sorts_rejected():
    sig = Signature(preds={"H": (TIME, OBJ)}, objects=["c"], times=["ds"])
    with pytest.raises(DalSyntaxError, match="is not of sort|sorted"):
        parse_formula("H(c, c)", sig)


def test_parse_action():
    a = parse_action("move(6,3,TGV,Marseille,Paris)")
    assert a.symbol == "move"
    assert [render(Atom("x", (t,))) for t in a.args[:2]] == ["x(6)", "x(3)"]
