"""Temporal action scenarios with default persistence of fluents.

A scenario collects action laws (asserted under ``box`` so they hold in every
reachable world), initial facts, action occurrences (``<a>true``), time
bindings and the ordering constraints of one case. Free variables of laws are
grounded over a finite set of relevant time points and the object constants;
variables that appear in action arguments are instead matched against the
action terms the scenario actually mentions.

Persistence is added abductively. Walking the relevant time points in
ascending order, a fluent literal established at ``t0`` is assumed at a later
point ``t`` unless its complement at ``t`` follows from the theory so far,
either outright or after one of the actions that occurred no later than ``t``.
For every assumption and occurred action ``a`` the weak frame law
``l -> [a]l`` is added when ``[a]~l`` does not follow.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .parser import FormulaParser, load_theory
from .syntax import (OBJ, TIME, TOP, ActionTerm, Atom, Box, Compare, Const, Implies, Modal, Not, TimeExpr,
                     Var, action_terms, as_time, diamond, free_var_sorts, instantiate, neg, render,
                     render_number, render_term, subformulas)
from .tableau import Hyp, check_sat, entails, summarize
from .temporal import TimeConstraint, check_constraints, check_infinitesimal

SCHEMA = "dal-report/1"
DEFAULT_INFINITESIMAL = Fraction(1, 1000)


class ScenarioError(ValueError):
    pass


class UnsatisfiableScenario(ScenarioError):
    """The laws, facts, occurrences and persistence assumptions contradict each other."""


@dataclass
class Assumption:
    formula: object
    source: str | None  # label of the statement the literal persists from
    kind: str = "persist"  # persist | frame
    action: ActionTerm | None = None

    @property
    def label(self):
        return f"{self.kind}:{self.source}" if self.source else self.kind


@dataclass
class Derivation:
    query: object
    label: str | None
    verdict: str  # derived | not derived
    expected: str | None = None
    justification: str = ""
    trace: list = field(default_factory=list)
    used: list = field(default_factory=list)
    countermodel: str | None = None
    seconds: float = 0.0
    result: object = None

    @property
    def derived(self) -> bool:
        return self.verdict == "derived"

    @property
    def as_expected(self) -> bool:
        return self.expected is None or self.expected == self.verdict

    def line(self) -> str:
        label = f"({self.label}) " if self.label else ""
        why = f"  {self.justification}" if self.derived and self.justification else ""
        flag = "" if self.as_expected else f"  [expected {self.expected}]"
        return f"{label}{render(self.query)}  {self.verdict}{why}{flag}"

    def record(self, case=None) -> dict:
        return {"schema": SCHEMA, "case": case, "label": self.label, "query": render(self.query),
                "verdict": self.verdict, "expected": self.expected,
                "justification": self.justification, "used": self.used, "trace": self.trace,
                "countermodel": self.countermodel, "seconds": round(self.seconds, 4)}


# ------------------------------------------------------------------ helpers


def _time_slots(sig, pred):
    return [k for k, s in enumerate(sig.preds.get(pred, ())) if s == TIME]


def _times_in(phi):
    out = []
    for f in subformulas(phi):
        if isinstance(f, Atom):
            out.extend(a for a in f.args if isinstance(a, TimeExpr))
        elif isinstance(f, Compare):
            out.extend(a for a in (f.lhs, f.rhs) if isinstance(a, TimeExpr))
        elif isinstance(f, Modal):
            for act in f.actions:
                out.extend(a for a in act.args if isinstance(a, TimeExpr))
    return out


def _solve_linear(pattern: TimeExpr, value: TimeExpr, binding):
    """Bind the single unbound variable of ``pattern`` so that it equals ``value``."""
    for name, t in binding.items():
        if name in pattern.variables():
            pattern = pattern.substitute(name, t)
    free = [(a, c) for a, c in pattern.parts if isinstance(a, Var)]
    if not free:
        return binding if pattern == value else None
    if len(free) > 1:
        return None
    var, coeff = free[0]
    rest = pattern - TimeExpr.atom(var).scale(coeff)
    out = dict(binding)
    out[var.name] = (value - rest).scale(Fraction(1) / coeff)
    return out


def _match_action(pattern: ActionTerm, ground: ActionTerm, binding, values):
    if pattern.symbol != ground.symbol or len(pattern.args) != len(ground.args):
        return None
    for p, g in zip(pattern.args, ground.args):
        if binding is None:
            return None
        if isinstance(p, Var):
            if p.name in binding:
                if values(binding[p.name]) != values(g):
                    return None
            else:
                binding = dict(binding)
                binding[p.name] = g
        elif isinstance(p, TimeExpr):
            binding = _solve_linear(p, as_time(g), binding)
        elif values(p) != values(g):
            return None
    return binding


# ----------------------------------------------------------------- scenario


class Scenario:
    """Laws, facts, occurrences and (optionally) one case of a theory."""

    def __init__(self, theory, case=None, infinitesimal=DEFAULT_INFINITESIMAL):
        if isinstance(case, str):
            case = theory.case(case)
        self.theory = theory
        self.case = case
        self.sig = theory.signature
        self.laws = theory.of_kind("law", "axiom")
        self.facts = theory.of_kind("fact")
        self.occurrences = theory.of_kind("occurs")
        stmts = list(theory.statements) + (list(case.statements) if case else [])
        self.constraints = [TimeConstraint.from_compare(s.formula, s.label)
                            for s in stmts if s.kind == "constraint"]
        self.queries = [s for s in stmts if s.kind in ("query", "reject")]
        self.bindings = dict(theory.bindings)
        if case is not None:
            self.bindings.update(case.bindings)
        self.fluents = list(theory.fluents)
        self.infinitesimals = list(theory.infinitesimals)
        for name in self.infinitesimals:
            self.bindings.setdefault(name, Fraction(infinitesimal))
        self._instances = {}

    @classmethod
    def load(cls, path, case=None, **kw):
        return cls(load_theory(path), case, **kw)

    @property
    def name(self):
        return self.case.name if self.case else None

    # -- checks
    def problems(self) -> list:
        """Reasons the case cannot be run: violated constraints, bad infinitesimals."""
        out = []
        needed = set()
        for c in self.constraints:
            needed |= c.lhs.constants() | c.rhs.constants()
        missing = sorted(needed - set(self.bindings))
        if missing:
            out.append(f"unbound time constant(s): {', '.join(missing)}")
            return out
        bad = check_constraints(self.constraints, self.bindings)
        if bad is not None:
            out.append(f"constraint violated: {bad}")
        for name in self.infinitesimals:
            pts = [p for p in self.time_points() if name not in p.constants()]
            msg = check_infinitesimal(name, self.bindings, pts)
            if msg:
                out.append(msg)
        return out

    def value(self, t):
        """Value of a term under the bindings (object name, Fraction, or symbolic TimeExpr)."""
        if isinstance(t, Const) and t.sort == OBJ:
            return t.name
        e = as_time(t).bind(self.bindings)
        return e.value if e.is_numeric else e

    # -- time points
    def occurrence_terms(self):
        return [s.formula for s in self.occurrences]

    def time_points(self, extra=()) -> list:
        """Relevant instants, one representative per value, ascending."""
        cands = []
        for f in self.facts:
            cands.extend(_times_in(f.formula))
        for act in self.occurrence_terms():
            if len(act.args) >= 2:
                t, d = as_time(act.args[0]), as_time(act.args[1])
                cands.extend([t, t + d])
                for name in self.infinitesimals:
                    cands.append(t + d + TimeExpr.atom(Const(name, TIME)))
        for c in self.constraints:
            cands.extend([c.lhs, c.rhs])
        for q in self.queries:
            cands.extend(_times_in(q.formula))
        for phi in extra:
            cands.extend(_times_in(phi))
        reps = {}
        for e in cands:
            v = self.value(e)
            if v not in reps:
                reps[v] = e
        return [reps[v] for v in sorted(reps, key=lambda v: (_num(v), render_term(reps[v])))]

    def ground_actions(self, extra=()) -> list:
        out = list(self.occurrence_terms())
        for s in list(self.facts) + list(self.queries):
            out.extend(action_terms(s.formula))
        for phi in extra:
            out.extend(action_terms(phi))
        seen, uniq = set(), []
        for a in out:
            k = (a.symbol, tuple(self.value(x) for x in a.args))
            if k not in seen:
                seen.add(k)
                uniq.append(a)
        return uniq

    # -- grounding
    def ground_law(self, phi, points, actions) -> list:
        """All instances of a law: action-argument variables by matching, others by range."""
        sorts = free_var_sorts(phi)
        if not sorts:
            return [phi]
        patterns = [a for a in action_terms(phi)
                    if any(isinstance(x, Var) or (isinstance(x, TimeExpr) and x.variables())
                           for x in a.args)]
        partials = [{}]
        for pat in patterns:
            nxt = []
            for b in partials:
                for g in actions:
                    m = _match_action(pat, g, b, self.value)
                    if m is not None and m not in nxt:
                        nxt.append(m)
            partials = nxt
        objects = [Const(o, OBJ) for o in self.sig.objects]
        out, seen = [], set()
        for b in partials:
            rest = sorted(n for n in sorts if n not in b)
            ranges = [points if sorts[n] == TIME else objects for n in rest]
            for combo in itertools.product(*ranges):
                full = dict(b)
                full.update(zip(rest, combo))
                inst = phi
                for n in sorted(full):
                    inst = instantiate(inst, n, full[n])
                if inst not in seen:
                    seen.add(inst)
                    out.append(inst)
        return out

    def base(self, extra=()) -> list:
        """Hypotheses of the monotone theory: boxed law instances, facts, occurrences."""
        points = self.time_points(extra)
        actions = self.ground_actions(extra)
        key = (tuple(points), tuple(actions))
        if key in self._instances:
            return list(self._instances[key])
        hyps = []
        for st in self.laws:
            for inst in self.ground_law(st.formula, points, actions):
                hyps.append(Hyp(inst if isinstance(inst, Box) else Box(inst), st.label))
        for st in self.facts:
            hyps.append(Hyp(st.formula, st.label))
        for st in self.occurrences:
            hyps.append(Hyp(diamond((st.formula,), TOP), st.label))
        self._instances[key] = hyps
        return list(hyps)

    def prove(self, hyps, goal, points):
        return entails(hyps, goal, self.sig, bindings=self.bindings,
                       constraints=self.constraints, time_points=points)

    def instant(self, act):
        return self.value(act.args[0]) if act.args else None

    # -- persistence
    def persistency_closure(self, extra=(), only=None):
        """Assumptions and weak frame laws, computed to a fixpoint over the time points."""
        if only is not None:
            for p in only:
                if p not in self.fluents:
                    raise ScenarioError(f"{p} is not a declared fluent")
        fluents = [f for f in self.fluents if only is None or f in only]
        points = self.time_points(extra)
        base = self.base(extra)
        seeds = []
        for st in self.facts:
            lit = st.formula
            atom = lit.body if isinstance(lit, Not) else lit
            if isinstance(atom, Atom) and atom.pred in fluents and _time_slots(self.sig, atom.pred):
                seeds.append((lit, st.label))
        assumptions = []
        known = set()
        changed = True
        while changed:
            changed = False
            for lit, source in list(seeds):
                atom = lit.body if isinstance(lit, Not) else lit
                slot = _time_slots(self.sig, atom.pred)[0]
                t0 = self.value(atom.args[slot])
                for t in points:
                    vt = self.value(t)
                    if _num(vt) <= _num(t0):
                        continue
                    args = list(atom.args)
                    args[slot] = t
                    moved = Atom(atom.pred, tuple(args))
                    cand = Not(moved) if isinstance(lit, Not) else moved
                    ckey = (isinstance(lit, Not), atom.pred,
                            tuple(self.value(a) for a in args))
                    if ckey in known:
                        continue
                    hyps = base + [Hyp(a.formula, a.label) for a in assumptions]
                    if self._blocked(hyps, cand, vt, points):
                        continue
                    known.add(ckey)
                    assumptions.append(Assumption(cand, source))
                    changed = True
        frames = []
        hyps = base + [Hyp(a.formula, a.label) for a in assumptions]
        for a in assumptions:
            for act in self.occurrence_terms():
                if self.prove(hyps, Modal((act,), neg(a.formula)), points).closed:
                    continue
                law = Assumption(Implies(a.formula, Modal((act,), a.formula)), a.source,
                                 "frame", act)
                frames.append(law)
        everything = hyps + [Hyp(f.formula, f.label) for f in frames]
        sat = check_sat(everything, self.sig, bindings=self.bindings,
                        constraints=self.constraints, time_points=points)
        if sat.closed:
            raise UnsatisfiableScenario("the persistence assumptions contradict the theory: "
                                        + sat.justification())
        return assumptions + frames

    def _blocked(self, hyps, cand, vt, points):
        if self.prove(hyps, neg(cand), points).closed:
            return True
        for act in self.occurrence_terms():
            inst = self.instant(act)
            if inst is not None and _num(inst) <= _num(vt):
                if self.prove(hyps, Modal((act,), neg(cand)), points).closed:
                    return True
        return False

    # -- queries
    def run(self, query, label=None, lemmas=(), closure=None, expected=None, persistency=True):
        """Try to derive ``query`` from the augmented theory."""
        start = time.perf_counter()
        if isinstance(query, str):
            query = FormulaParser(query, self.sig, strict=True).parse_formula()
        extra = (query,)
        points = self.time_points(extra)
        if closure is None:
            closure = self.persistency_closure(extra) if persistency else []
        hyps = [Hyp(f, lab) for lab, f in lemmas]
        hyps += self.base(extra)
        hyps += [Hyp(a.formula, a.label) for a in closure]
        result = self.prove(hyps, query, points)
        d = Derivation(query, label, "derived" if result.closed else "not derived", expected)
        d.result = result
        if result.closed:
            d.justification = summarize(result.used_labels, result.rules)
            d.trace = result.trace_lines()
            d.used = list(result.used_labels)
        else:
            m = result.model
            d.countermodel = f"{len(m.worlds)} worlds"
        d.seconds = time.perf_counter() - start
        return d

    def run_case(self, until=None, persistency=True) -> list:
        """Process the case's queries in order; derived ones become lemmas for later ones."""
        extra = tuple(q.formula for q in self.queries)
        if until is not None:
            extra = extra + (until,)
        closure = self.persistency_closure(extra) if persistency else []
        lemmas, out = [], []
        for st in self.queries:
            expected = "derived" if st.kind == "query" else "not derived"
            d = self.run(st.formula, st.label, lemmas, closure, expected)
            out.append(d)
            if d.derived and st.label:
                lemmas.append((st.label, st.formula))
            if until is not None and _same(st.formula, until):
                return out
        if until is not None:
            out.append(self.run(until, None, lemmas, closure))
        return out


def _same(a, b):
    return render(a) == render(b)


def _num(v):
    return v if isinstance(v, Fraction) else Fraction(0)


# ------------------------------------------------------------------ reports


@dataclass
class CaseReport:
    name: str
    derivations: list = field(default_factory=list)
    skipped: str | None = None
    seconds: float = 0.0
    bindings: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)

    @property
    def ok(self):
        return self.skipped is None and all(d.as_expected for d in self.derivations)

    def text(self) -> str:
        head = f"case {self.name}"
        if self.constraints:
            head += ": " + "; ".join(str(c) for c in self.constraints)
        if self.bindings:
            head += "  [" + ", ".join(f"{k}={render_number(v)}" for k, v in self.bindings.items()) + "]"
        lines = [head]
        if self.skipped:
            lines.append(f"  skipped: {self.skipped}")
        for d in self.derivations:
            lines.append("  " + d.line())
        return "\n".join(lines)


def run_all_cases(theory, persistency=True) -> list:
    """One :class:`CaseReport` per case of ``theory`` (cases that cannot run are skipped)."""
    if isinstance(theory, str):
        theory = load_theory(theory)
    reports = []
    for case in theory.cases:
        s = Scenario(theory, case)
        rep = CaseReport(case.name, bindings=dict(s.bindings), constraints=list(s.constraints))
        start = time.perf_counter()
        problems = s.problems()
        if problems:
            rep.skipped = "; ".join(problems)
        else:
            try:
                rep.derivations = s.run_case(persistency=persistency)
            except UnsatisfiableScenario as exc:
                rep.skipped = f"unsatisfiable scenario: {exc}"
        rep.seconds = time.perf_counter() - start
        reports.append(rep)
    return reports


def summary_table(reports) -> str:
    rows = [("case", "derived", "not derived", "as expected", "seconds")]
    for r in reports:
        if r.skipped:
            rows.append((r.name, "-", "-", "skipped", f"{r.seconds:.2f}"))
            continue
        n_yes = sum(d.derived for d in r.derivations)
        rows.append((r.name, str(n_yes), str(len(r.derivations) - n_yes),
                     "yes" if r.ok else "no", f"{r.seconds:.2f}"))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)


def report_records(reports) -> list:
    out = []
    for r in reports:
        if r.skipped:
            out.append({"schema": SCHEMA, "case": r.name, "skipped": r.skipped})
        for d in r.derivations:
            out.append(d.record(r.name))
    return out


def write_records(records, fh):
    for rec in records:
        fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
