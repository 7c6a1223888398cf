import io
import json
import time

import pytest

from dal import DATA
from dal.parser import load_theory, parse_theory
from dal.scenario import (SCHEMA, Scenario, ScenarioError, report_records,
                          run_all_cases, summary_table, write_records)
from dal.syntax import render
from dal.tableau import Hyp, entails

SUZY = load_theory(DATA / "suzy_billy.dal")
BILLY = load_theory(DATA / "billy_only.dal")


@pytest.fixture(scope="module")
def reports():
    return {r.name: r for r in run_all_cases(SUZY)}


def _by_label(report):
    return {d.label: d for d in report.derivations}


class TestCaseOne:
    def test_all_as_expected(self, reports):
        assert reports["case1"].ok

    def test_verdicts(self, reports):
        got = {k: d.verdict for k, d in _by_label(reports["case1"]).items()}
        assert got == {"8": "derived", "9": "derived", "10": "derived", "11": "derived",
                       "12": "derived", "h1": "not derived"}

    def test_justifications(self, reports):
        d = _by_label(reports["case1"])
        assert d["8"].justification == "from (3) and (7)"
        assert d["9"].justification == "by persistency from (4)"
        assert d["10"].justification == "from (1) and (9)"
        assert d["11"].justification == "from (2), (10), K and (A2)"
        assert d["12"].justification == "from (8), (11), K and (A2)"

    def test_late_breakage_has_a_countermodel(self, reports):
        h1 = _by_label(reports["case1"])["h1"]
        assert h1.countermodel and h1.result.verified


class TestCaseTwo:
    def test_symmetric_to_case_one(self, reports):
        d = _by_label(reports["case2"])
        assert reports["case2"].ok
        assert all(d[k].derived for k in ("14", "15", "16", "17", "18"))
        assert not d["h2"].derived
        assert d["16"].justification == "from (1) and (15)"
        assert d["18"].justification == "from (14), (17), K and (A2)"


class TestCaseThree:
    def test_both_hits(self, reports):
        d = _by_label(reports["case3"])
        assert reports["case3"].ok
        assert all(d[k].derived for k in ("20", "21", "22", "23", "24"))
        assert d["21"].justification == d["22"].justification == "from (1) and (20)"


def test_cases_are_fast():
    for case in ("case1", "case2", "case3"):
        start = time.perf_counter()
        Scenario(SUZY, case).run_case()
        assert time.perf_counter() - start < 5


class TestNonmonotonicity:
    QUERY = "[T(t1,db,billy)] H(t1+db,billy)"

    def test_billy_alone_hits(self):
        s = Scenario(BILLY, "case1")
        d = s.run(self.QUERY)
        assert d.derived
        assert d.justification == "from (1) and persistency from (4)"

    def test_suzy_retracts_it(self):
        s = Scenario(SUZY, "case1")
        assert not s.run(self.QUERY).derived

    def test_without_persistency_nothing_about_the_bottle_follows(self):
        assert not Scenario(BILLY, "case1").run(self.QUERY, persistency=False).derived


class TestPersistency:
    def test_closure_case_one(self):
        closure = Scenario(SUZY, "case1").persistency_closure()
        assert [(a.label, render(a.formula)) for a in closure] == [
            ("persist:4", "~BB(ds)"),
            ("frame:4", "~BB(ds) -> [T(0,ds,suzy)] ~BB(ds)"),
            ("frame:4", "~BB(ds) -> [T(t1,db,billy)] ~BB(ds)"),
        ]

    def test_closure_is_deterministic(self):
        a = [render(x.formula) for x in Scenario(SUZY, "case2").persistency_closure()]
        b = [render(x.formula) for x in Scenario(SUZY, "case2").persistency_closure()]
        assert a == b

    def test_non_fluent_rejected(self):
        with pytest.raises(ScenarioError, match="not a declared fluent"):
            Scenario(SUZY, "case1").persistency_closure(only=["H"])


def test_monotone_core_replay(reports):
    """Steps not citing persistence re-check through the plain prover."""
    for name, report in reports.items():
        s = Scenario(SUZY, name)
        lemmas = []
        for d in report.derivations:
            if d.derived and not any(u.startswith(("persist", "frame")) for u in d.used):
                points = s.time_points((d.query,))
                hyps = [Hyp(f, lab) for lab, f in lemmas] + s.base((d.query,))
                r = entails(hyps, d.query, s.sig, bindings=s.bindings,
                            constraints=s.constraints, time_points=points)
                assert r.verdict == "entailed", (name, d.label)
            if d.derived:
                lemmas.append((d.label, d.query))


def test_contradictory_constraint_is_skipped():
    text = (DATA / "suzy_billy.dal").read_text().replace("bind t1 = 2", "bind t1 = 0", 1)
    reps = {r.name: r for r in run_all_cases(parse_theory(text))}
    assert reps["case1"].skipped.startswith("constraint violated: (7)")
    assert not reps["case1"].ok
    assert reps["case2"].ok


def test_theory_without_cases():
    th = parse_theory("pred P\nfact (1): P\n")
    assert run_all_cases(th) == []


def test_scenario_without_occurrences():
    th = parse_theory("const t1 : time\npred BB(time)\nfluent BB\nfact (1): ~BB(0)\n"
                      "case c { bind t1 = 2\n query (q): ~BB(t1) }\n")
    (rep,) = run_all_cases(th)
    (d,) = rep.derivations
    assert d.derived and d.justification == "by persistency from (1)"


def test_persistence_yields_to_a_later_fact():
    th = parse_theory("const t1 : time\npred BB(time)\nfluent BB\nfact (1): ~BB(0)\n"
                      "fact (2): BB(t1)\ncase c { bind t1 = 2\n query (q): BB(t1) }\n")
    assert Scenario(th, "c").persistency_closure() == []
    (rep,) = run_all_cases(th)
    assert rep.ok and rep.derivations[0].justification == "from (2)"


def test_structured_records(reports):
    recs = report_records(list(reports.values()))
    assert len(recs) == 6 + 6 + 5
    assert all(r["schema"] == SCHEMA for r in recs)
    buf = io.StringIO()
    write_records(recs, buf)
    back = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert back == recs
    h1 = next(r for r in back if r["label"] == "h1")
    assert h1["verdict"] == "not derived" and h1["expected"] == "not derived"


def test_summary_table(reports):
    table = summary_table(list(reports.values())).splitlines()
    assert table[0].split()[:2] == ["case", "derived"]
    assert table[1].split()[:4] == ["case1", "5", "1", "yes"]
    assert table[3].split()[:4] == ["case3", "5", "0", "yes"]


def test_string_query_is_strict():
    from dal.parser import DalSyntaxError
    with pytest.raises(DalSyntaxError):
        Scenario(SUZY, "case1").run("[T(0,ds,bob)] H(ds,bob)")
