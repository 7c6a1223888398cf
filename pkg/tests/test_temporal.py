from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dal import DATA
from dal.parser import load_theory, parse_formula
from dal.semantics import DalModel, enumerate_models, load_model
from dal.syntax import OBJ, TIME, Const, Signature, TimeExpr, instantiate, render
from dal.temporal import (ActionLaw, MissingStamp, TimeConstraint, UnboundTimeConstant,
                          check_constraints, check_infinitesimal, check_time_homomorphism,
                          eval_time, instantiate_law, reach_order, relevant_time_points,
                          stamp_chain)

MOVE = parse_formula("at(t,x,y) -> [move(t,d,x,y,z)] at(t+d,x,z)",
                     Signature(preds={"at": (TIME, OBJ, OBJ)},
                               actions={"move": (TIME, TIME, OBJ, OBJ, OBJ)}),
                     free_variables=True)
SUZY = load_theory(DATA / "suzy_billy.dal")


def tc(op, lhs, rhs, label=None):
    return TimeConstraint.from_compare(parse_formula(f"{lhs} {op} {rhs}", Signature(
        times=["ds", "db", "t1", "d1"])), label)


class TestEvalTime:
    def test_sum(self):
        assert eval_time(TimeExpr(6) + TimeExpr(3), {}) == 9

    def test_zero(self):
        assert eval_time(TimeExpr(0), {}) == 0

    def test_rational(self):
        e = parse_formula("BB(ds + d1)", Signature(preds={"BB": (TIME,)}, times=["ds", "d1"])).args[0]
        assert eval_time(e, {"ds": 1, "d1": Fraction(1, 10)}) == Fraction(11, 10)

    def test_unbound(self):
        with pytest.raises(UnboundTimeConstant) as info:
            eval_time(TimeExpr.atom(Const("ds", TIME)), {})
        assert info.value.names == ["ds"]


class TestConstraints:
    def test_case_one_constraint_holds(self):
        c7 = tc("<", "ds + d1", "t1 + db", "7")
        assert check_constraints([c7], {"ds": 1, "d1": Fraction(1, 10), "t1": 2, "db": 1}) is None

    def test_case_three_constraint_holds(self):
        c19 = tc("=", "t1 + db", "ds", "19")
        assert check_constraints([c19], {"t1": 1, "db": 1, "ds": 2}) is None

    def test_case_two_constraint_fails_under_case_one(self):
        c13 = tc("<", "t1 + db + d1", "ds", "13")
        bad = check_constraints([c13], {"ds": 1, "d1": Fraction(1, 10), "t1": 2, "db": 1})
        assert bad is c13
        assert str(bad) == "(13) t1+db+d1 < ds"

    def test_decide_same_and_swapped(self):
        c7 = tc("<", "ds + d1", "t1 + db")
        diff = c7.difference
        assert c7.decide("<", diff) is True
        assert c7.decide("=", diff) is False
        assert c7.decide("<=", -diff) is False
        assert c7.decide("<", TimeExpr(1)) is None

    def test_shipped_cases_are_mutually_exclusive(self):
        labels = {"case1": "7", "case2": "13", "case3": "19"}
        constraints = {}
        for case in SUZY.cases:
            (c,) = case.of_kind("constraint")
            constraints[case.name] = TimeConstraint.from_compare(c.formula, c.label)
        for case in SUZY.cases:
            bindings = {**case.bindings, "d1": Fraction(1, 1000)}
            holding = [n for n, c in constraints.items() if c.holds(bindings)]
            assert holding == [case.name]
            assert constraints[case.name].label == labels[case.name]


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20), st.integers(2, 1000))
def test_exactly_one_case_constraint(ds, t1, db, k):
    bindings = {"ds": ds, "t1": t1, "db": db, "d1": Fraction(1, k)}
    cs = [tc("<", "ds + d1", "t1 + db"), tc("<", "t1 + db + d1", "ds"), tc("=", "t1 + db", "ds")]
    assert sum(c.holds(bindings) for c in cs) == 1


@settings(max_examples=300, deadline=None)
@given(st.fractions(), st.fractions(), st.fractions(), st.fractions(),
       st.integers(-3, 3), st.integers(-3, 3))
def test_eval_time_is_linear(x, y, o1, o2, k1, k2):
    a, b = Const("a", TIME), Const("b", TIME)
    e1 = TimeExpr(o1, [(a, k1)])
    e2 = TimeExpr(o2, [(b, k2), (a, 1)])
    env = {"a": x, "b": y}
    assert eval_time(e1 + e2, env) == eval_time(e1, env) + eval_time(e2, env)
    assert eval_time(e1 - e2, env) == eval_time(e1, env) - eval_time(e2, env)


class TestInfinitesimal:
    def test_default_is_small_enough(self):
        assert check_infinitesimal("d1", {"ds": 1, "t1": 2, "db": 1, "d1": Fraction(1, 1000)}) is None

    def test_too_large(self):
        msg = check_infinitesimal("d1", {"ds": 1, "t1": 2, "d1": 1})
        assert "not smaller than the gap" in msg

    def test_not_positive(self):
        assert "not positive" in check_infinitesimal("d1", {"d1": 0})


def chain(stamps, edges):
    worlds = tuple(stamps)
    rel = {(w, w) for w in worlds}
    trans = {}
    for (w, v, args) in edges:
        trans[("move", args, w)] = frozenset({v})
        rel.add((w, v))
    from dal.semantics import reflexive_transitive_closure
    return DalModel(worlds, ("TGV",), reflexive_transitive_closure(worlds, rel), trans,
                    stamps=dict(stamps))


class TestReachOrder:
    def test_single_world(self):
        m = DalModel(("w0",), ("c",), {("w0", "w0")})
        assert reach_order(m) == {("w0", "w0")}

    def test_transitive(self):
        m = chain({"w0": 0, "w1": 1, "w2": 2}, [("w0", "w1", (0, 1)), ("w1", "w2", (1, 1))])
        assert ("w0", "w2") in reach_order(m)
        assert ("w2", "w0") not in reach_order(m)


class TestHomomorphism:
    def test_move_chain_ok(self):
        m = load_model(DATA / "move_chain.model")
        assert check_time_homomorphism(m) is None

    def test_decreasing_stamp(self):
        m = chain({"w0": 5, "w1": 2}, [("w0", "w1", (5, 3))])
        assert check_time_homomorphism(m) == ("w0", "w1")

    def test_single_world(self):
        m = DalModel(("w0",), ("c",), {("w0", "w0")}, stamps={"w0": Fraction(7)})
        assert check_time_homomorphism(m) is None

    def test_missing_stamp(self):
        m = DalModel(("w0",), ("c",), {("w0", "w0")})
        with pytest.raises(MissingStamp):
            check_time_homomorphism(m)

    def test_stamp_chain_accepts(self):
        m = chain({"w0": 0, "w1": 0, "w2": 0}, [("w0", "w1", (0, 3)), ("w1", "w2", (3, 2))])
        stamps = stamp_chain(m, "w0")
        assert stamps == {"w0": 0, "w1": 3, "w2": 5}
        m.stamps = stamps
        assert check_time_homomorphism(m) is None
        m.stamps = {**stamps, "w2": 1}
        assert check_time_homomorphism(m) == ("w1", "w2")


class TestActionLaws:
    def test_move_example(self):
        law = ActionLaw.from_formula(MOVE)
        got = instantiate_law(law, {"t": 6, "d": 3, "x": "TGV", "y": "Marseille", "z": "Paris"})
        assert render(got) == "at(6,TGV,Marseille) -> [move(6,3,TGV,Marseille,Paris)] at(9,TGV,Paris)"

    def test_law_one_instance(self):
        (law1,) = [s.formula for s in SUZY.of_kind("law") if s.label == "1"]
        ds = TimeExpr.atom(Const("ds", TIME))
        got = instantiate_law(law1, {"t": 0, "d": ds, "p": "suzy"})
        assert render(got) == "~BB(ds) -> [T(0,ds,suzy)] H(ds,suzy)"

    def test_identity_on_grounded(self):
        phi = parse_formula("P -> [a] Q")
        assert instantiate_law(phi, {}) == phi

    def test_missing_binding(self):
        with pytest.raises(KeyError):
            instantiate_law(MOVE, {"t": 6})

    def test_move_law_schema_report(self):
        # the origin y does not reappear in the result
        problems = ActionLaw.from_formula(MOVE).problems()
        assert problems == ["object variables of precondition and action missing from the result: y"]

    def test_not_a_law(self):
        with pytest.raises(ValueError):
            ActionLaw.from_formula(parse_formula("P & Q"))

    def test_relevant_points(self):
        occ = [s.formula for s in SUZY.of_kind("occurs")]
        pts = relevant_time_points(occ, infinitesimal=Const("d1", TIME))
        assert [str(p) for p in pts] == ["0", "ds", "ds+d1", "t1", "t1+db", "t1+db+d1"]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 50), st.integers(0, 50),
       st.sampled_from(["TGV", "car"]), st.sampled_from(["Paris", "Lyon"]),
       st.sampled_from(["Marseille", "Nice"]))
def test_instantiate_law_commutes_with_instantiate(t, d, x, y, z):
    binding = {"t": t, "d": d, "x": x, "y": y, "z": z}
    by_law = instantiate_law(MOVE, binding)
    stepwise = MOVE
    for name, value in binding.items():
        term = TimeExpr(value) if name in ("t", "d") else Const(value)
        stepwise = instantiate(stepwise, name, term)
    assert by_law == stepwise


def test_reach_order_inside_relation_over_full_enumeration():
    sig = Signature(preds={"P": (OBJ,)}, actions={"a": ()})
    n = 0
    for m in enumerate_models(sig, 3, 2):
        order = reach_order(m)
        assert order <= m.relation
        assert all((w, w) in order for w in m.worlds)
        assert all((w, u) in order for (w, v) in order for (v2, u) in order if v == v2)
        n += 1
    assert n == 132168
