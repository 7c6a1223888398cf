"""Independent model search used to cross-check the tableau.

``search_model`` looks for a model of a set of grounded formulas with at most
``max_worlds`` worlds by translating the semantic clauses into propositional
clauses (one variable per accessibility pair, action transition and ground
atom per world) and handing them to a SAT solver. Being a complete search over
all structures up to the bound, it plays the role of exhaustive enumeration;
``enumerative_search`` walks :func:`semantics.enumerate_models` literally and
is used to validate the SAT encoding on small bounds.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from pysat.formula import IDPool
from pysat.solvers import Solver

from .semantics import DalModel, enumerate_models, evaluate, validate_model
from .syntax import (OBJ, ActionTerm, And, Atom, Bottom, Box, Compare, Const, Exists,
                     Forall, Iff, Implies, Modal, Not, Or, Signature, TimeExpr, Top, Var,
                     diamond, instantiate, modal_depth, possibly, render)


class _Encoder:
    def __init__(self, k, objects, solver):
        self.k = k
        self.objects = [Const(o, OBJ) for o in objects]
        self.pool = IDPool()
        self.s = solver
        self.true = self.pool.id(("true",))
        self.s.add_clause([self.true])
        self.memo = {}
        self.actions = set()
        self.atoms = set()
        for i in range(k):
            self.s.add_clause([self.R(i, i)])
        for i in range(k):
            for j in range(k):
                for l in range(k):
                    if len({i, j, l}) > 1:
                        self.s.add_clause([-self.R(i, j), -self.R(j, l), self.R(i, l)])

    def R(self, i, j):
        return self.pool.id(("R", i, j))

    def A(self, key, i, j):
        if key not in self.actions:
            self.actions.add(key)
            for u in range(self.k):
                for v in range(self.k):
                    self.s.add_clause([-self.pool.id(("A", key, u, v)), self.R(u, v)])
        return self.pool.id(("A", key, i, j))

    def V(self, key, i):
        self.atoms.add(key)
        return self.pool.id(("V", key, i))

    def fresh(self):
        return self.pool.id(("aux", len(self.memo), self.pool.top + 1))

    def conj(self, lits):
        lits = [l for l in lits if l != self.true]
        if any(l == -self.true for l in lits):
            return -self.true
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        v = self.fresh()
        for l in lits:
            self.s.add_clause([-v, l])
        self.s.add_clause([v] + [-l for l in lits])
        return v

    def disj(self, lits):
        return -self.conj([-l for l in lits])

    def enc(self, phi, i):
        hit = self.memo.get((phi, i))
        if hit is None:
            hit = self._enc(phi, i)
            self.memo[(phi, i)] = hit
        return hit

    def _enc(self, phi, i):
        if isinstance(phi, Top):
            return self.true
        if isinstance(phi, Bottom):
            return -self.true
        if isinstance(phi, Atom):
            return self.V((phi.pred, tuple(_value(a) for a in phi.args)), i)
        if isinstance(phi, Compare):
            a, b = _value(phi.lhs), _value(phi.rhs)
            if phi.op == "=":
                ok = a == b
            elif isinstance(a, Fraction) and isinstance(b, Fraction):
                ok = a < b if phi.op == "<" else a <= b
            else:
                raise ValueError(f"cannot decide {render(phi)}")
            return self.true if ok else -self.true
        if isinstance(phi, Not):
            return -self.enc(phi.body, i)
        if isinstance(phi, And):
            return self.conj([self.enc(phi.left, i), self.enc(phi.right, i)])
        if isinstance(phi, Or):
            return self.disj([self.enc(phi.left, i), self.enc(phi.right, i)])
        if isinstance(phi, Implies):
            return self.disj([-self.enc(phi.left, i), self.enc(phi.right, i)])
        if isinstance(phi, Iff):
            l, r = self.enc(phi.left, i), self.enc(phi.right, i)
            return self.disj([self.conj([l, r]), self.conj([-l, -r])])
        if isinstance(phi, (Forall, Exists)):
            if phi.var.sort != OBJ:
                raise ValueError("time quantifiers are outside the oracle's fragment")
            parts = [self.enc(instantiate(phi.body, phi.var.name, o), i) for o in self.objects]
            return self.conj(parts) if isinstance(phi, Forall) else self.disj(parts)
        if isinstance(phi, Box):
            return self.conj([self.disj([-self.R(i, j), self.enc(phi.body, j)])
                              for j in range(self.k)])
        if isinstance(phi, Modal):
            if not phi.actions:
                return self.enc(phi.body, i)
            first = phi.actions[0]
            rest = Modal(phi.actions[1:], phi.body) if len(phi.actions) > 1 else phi.body
            key = (first.symbol, tuple(_value(a) for a in first.args))
            return self.conj([self.disj([-self.A(key, i, j), self.enc(rest, j)])
                              for j in range(self.k)])
        raise TypeError(f"not a formula: {phi!r}")

    def model(self, assignment, objects, sig):
        true = {v for v in assignment if v > 0}
        worlds = tuple(f"w{i}" for i in range(self.k))
        rel = frozenset((worlds[i], worlds[j]) for i in range(self.k) for j in range(self.k)
                        if self.R(i, j) in true)
        transitions = {}
        for key in sorted(self.actions, key=str):
            for i in range(self.k):
                targets = frozenset(worlds[j] for j in range(self.k)
                                    if self.pool.id(("A", key, i, j)) in true)
                if targets:
                    transitions[(key[0], key[1], worlds[i])] = targets
        valuation = {w: frozenset(key for key in self.atoms if self.pool.id(("V", key, i)) in true)
                     for i, w in enumerate(worlds)}
        return DalModel(worlds, tuple(objects), rel, transitions, valuation, signature=sig)


def _value(t):
    if isinstance(t, Const):
        if t.sort == OBJ:
            return t.name
        raise ValueError(f"unbound time constant {t.name}")
    if isinstance(t, TimeExpr):
        if not t.is_numeric:
            raise ValueError(f"symbolic time term {t}")
        return t.value
    raise ValueError(f"unsupported term {t!r}")


def _objects(sig, domain):
    if domain is None:
        return list(sig.objects)
    return list(sig.with_domain(domain).objects[:domain])


def search_model(formulas, sig, max_worlds=4, domain=None, min_worlds=1, solver="m22"):
    """Smallest model (at most ``max_worlds`` worlds) making ``formulas`` true at ``w0``.

    Returns ``(model, k)`` or ``(None, None)``.
    """
    formulas = list(formulas)
    objects = _objects(sig, domain)
    for k in range(min_worlds, max_worlds + 1):
        with Solver(name=solver) as s:
            enc = _Encoder(k, objects, s)
            for phi in formulas:
                s.add_clause([enc.enc(phi, 0)])
            if s.solve():
                return enc.model(s.get_model(), objects, sig), k
    return None, None


def enumerative_search(formulas, sig, max_worlds, domain, cap=2_000_000):
    """Literal walk over :func:`enumerate_models`; returns ``(model, world)`` or ``(None, None)``."""
    formulas = list(formulas)
    for m in enumerate_models(sig, max_worlds, domain, cap=cap):
        for w in m.worlds:
            if all(evaluate(m, w, phi) for phi in formulas):
                return m, w
    return None, None


# ------------------------------------------------------------------ corpus


def corpus_signature() -> Signature:
    """Two actions (one nullary, one unary), a unary and two nullary predicates, two objects."""
    return Signature(preds={"P": (OBJ,), "Q": (), "S": ()}, actions={"a": (), "b": (OBJ,)},
                     objects=["c1", "c2"])


class _Gen:
    def __init__(self, rng, sig):
        self.rng = rng
        self.sig = sig
        self.objects = [Const(o, OBJ) for o in sig.objects]

    def term(self, vars_):
        pool = self.objects + [Var(v, OBJ) for v in vars_]
        return self.rng.choice(pool)

    def atom(self, vars_):
        name = self.rng.choice(sorted(self.sig.preds))
        args = tuple(self.term(vars_) for _ in self.sig.preds[name])
        return Atom(name, args)

    def action(self, vars_):
        name = self.rng.choice(sorted(self.sig.actions))
        return ActionTerm(name, tuple(self.term(vars_) for _ in self.sig.actions[name]))

    def formula(self, depth, size, vars_=()):
        r = self.rng.random()
        if size <= 1 or r < 0.2:
            if self.rng.random() < 0.05:
                return self.rng.choice([Top(), Bottom()])
            return self.atom(vars_)
        kinds = ["not", "and", "or", "imp", "iff", "forall", "exists"]
        if depth > 0:
            kinds += ["box", "dia", "nec", "pos", "nec", "pos"]
        if depth > 1:
            kinds += ["seq"]
        kind = self.rng.choice(kinds)
        sub = size - 1
        if kind == "not":
            return Not(self.formula(depth, sub, vars_))
        if kind in ("and", "or", "imp", "iff"):
            left = self.formula(depth, sub // 2, vars_)
            right = self.formula(depth, sub - sub // 2, vars_)
            return {"and": And, "or": Or, "imp": Implies, "iff": Iff}[kind](left, right)
        if kind in ("forall", "exists"):
            v = f"x{len(vars_) + 1}"
            body = self.formula(depth, sub, vars_ + (v,))
            return (Forall if kind == "forall" else Exists)(Var(v, OBJ), body)
        if kind == "box":
            return Box(self.formula(depth - 1, sub, vars_))
        if kind == "dia":
            return possibly(self.formula(depth - 1, sub, vars_))
        if kind == "nec":
            return Modal((self.action(vars_),), self.formula(depth - 1, sub, vars_))
        if kind == "pos":
            return diamond((self.action(vars_),), self.formula(depth - 1, sub, vars_))
        acts = (self.action(vars_), self.action(vars_))
        body = self.formula(depth - 2, sub, vars_)
        if self.rng.random() < 0.5:
            return Modal(acts, body)
        return diamond(acts, body)


def _schema(gen, vars_=()):
    """Negation of a modal schema instance with random subformulas (valid or not)."""
    rng = gen.rng
    p = gen.formula(0, 3, vars_)
    q = gen.formula(0, 3, vars_)
    a, b = gen.action(vars_), gen.action(vars_)
    options = [
        Implies(Box(p), Modal((a,), p)),
        Implies(Modal((a,), Implies(p, q)), Implies(Modal((a,), p), Modal((a,), q))),
        Implies(Box(p), p),
        Implies(Box(p), Box(Box(p))),
        Iff(Modal((a, b), p), Modal((a,), Modal((b,), p))),
        Implies(Modal((), p), p),
        Implies(Modal((a,), p), Box(p)),
        Implies(p, Box(p)),
        Implies(diamond((a,), p), Modal((a,), p)),
        Or(Modal((a,), p), Modal((a,), Not(p))),
        Implies(possibly(Box(p)), Box(possibly(p))),
        Implies(Modal((a,), p), Modal((b,), p)),
    ]
    return Not(rng.choice(options))


def random_corpus(n=500, seed=0, max_depth=2, max_size=9, sig=None):
    """``n`` grounded formulas of modal depth at most ``max_depth`` (deterministic in ``seed``).

    A third are single random formulas, a third conjunctions of three, and a
    third negated schema instances, which keeps both verdicts well represented.
    """
    from .syntax import free_vars
    sig = sig or corpus_signature()
    rng = random.Random(seed)
    gen = _Gen(rng, sig)
    out = []
    while len(out) < n:
        shape = len(out) % 3
        if shape == 0:
            phi = gen.formula(max_depth, rng.randint(2, max_size))
        elif shape == 1:
            parts = [gen.formula(max_depth, rng.randint(2, 5)) for _ in range(3)]
            phi = And(And(parts[0], parts[1]), parts[2])
        else:
            phi = _schema(gen)
        if free_vars(phi) or modal_depth(phi) > max_depth:
            continue
        out.append(phi)
    return out


# ------------------------------------------------------------- comparison


@dataclass
class Disagreement:
    index: int
    formula: object
    kind: str
    detail: str

    def __str__(self):
        return f"#{self.index} {self.kind}: {render(self.formula)} ({self.detail})"


@dataclass
class OracleReport:
    total: int = 0
    sat: int = 0
    unsat: int = 0
    verified: int = 0
    beyond_bounds: int = 0
    disagreements: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def summary(self) -> str:
        return (f"{self.total} formulas: {self.sat} sat ({self.verified} countermodels verified), "
                f"{self.unsat} unsat, {self.beyond_bounds} beyond bounds, "
                f"{len(self.disagreements)} disagreements, {self.seconds:.1f}s")


def compare(formulas, sig, max_worlds=4, domain=2, max_prefixes=None):
    """Run the tableau and the model search on every formula and collect disagreements.

    A disagreement is one of: the tableau closes but the search finds a model;
    the tableau's model fails validation or evaluation; or the tableau's model
    has at most ``max_worlds`` worlds and the search still finds nothing.
    A tableau model larger than the bound with no model inside the bound is
    counted as beyond bounds, not as a disagreement.
    """
    from .tableau import check_sat
    sig = sig.with_domain(domain)
    sig.objects = sig.objects[:domain]
    report = OracleReport()
    start = time.perf_counter()
    for i, phi in enumerate(formulas):
        report.total += 1
        result = check_sat([phi], sig, max_prefixes=max_prefixes)
        model, _ = search_model([phi], sig, max_worlds=max_worlds)
        if result.closed:
            report.unsat += 1
            if model is not None:
                report.disagreements.append(Disagreement(i, phi, "tableau-unsat/oracle-model",
                                                         f"{len(model.worlds)}-world model found"))
            continue
        report.sat += 1
        m = result.model
        problems = validate_model(m)
        if problems or not evaluate(m, "0", phi):
            report.disagreements.append(Disagreement(i, phi, "bad-countermodel",
                                                     "; ".join(map(str, problems)) or "eval false"))
            continue
        report.verified += 1
        if model is None:
            if len(m.worlds) <= max_worlds:
                report.disagreements.append(Disagreement(i, phi, "tableau-sat/oracle-none",
                                                         f"tableau model has {len(m.worlds)} worlds"))
            else:
                report.beyond_bounds += 1
    report.seconds = time.perf_counter() - start
    return report
