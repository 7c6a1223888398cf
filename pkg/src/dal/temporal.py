"""Time layer: rational time expressions, ordering constraints, the reachability
order between worlds, time stamps, and action laws with duration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .semantics import reflexive_transitive_closure
from .syntax import (OBJ, TIME, ActionTerm, Compare, Const, Implies, Modal, SortError, TimeExpr, Var,
                     as_time, free_var_sorts, instantiate, render, render_number,
                     render_term)


class UnboundTimeConstant(KeyError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(f"unbound time constant(s): {', '.join(self.names)}")

    def __str__(self):
        return self.args[0]


class MissingStamp(KeyError):
    def __str__(self):
        return self.args[0]


def eval_time(e, bindings) -> Fraction:
    """Exact value of a time expression under ``bindings`` (name -> rational)."""
    e = as_time(e)
    missing = (e.constants() | e.variables()) - set(bindings)
    if missing:
        raise UnboundTimeConstant(missing)
    return e.bind(bindings).value


_OPS = {"<": lambda x: x < 0, "<=": lambda x: x <= 0, "=": lambda x: x == 0}


@dataclass(frozen=True)
class TimeConstraint:
    """``lhs op rhs`` kept alongside the normal form ``lhs - rhs op 0``."""

    op: str
    lhs: TimeExpr
    rhs: TimeExpr
    label: str | None = None

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"unknown comparison {self.op!r}")
        object.__setattr__(self, "lhs", as_time(self.lhs))
        object.__setattr__(self, "rhs", as_time(self.rhs))

    @classmethod
    def from_compare(cls, c: Compare, label=None) -> "TimeConstraint":
        return cls(c.op, c.lhs, c.rhs, label)

    @property
    def difference(self) -> TimeExpr:
        return self.lhs - self.rhs

    @property
    def normal(self) -> tuple:
        """``(op, lhs - rhs)``; two constraints with equal normal forms say the same."""
        return self.op, self.difference

    def holds(self, bindings) -> bool:
        return _OPS[self.op](eval_time(self.difference, bindings))

    def decide(self, op, diff: TimeExpr):
        """Does this constraint settle ``diff op 0``? True, False or None (unknown)."""
        mine = self.difference
        if diff == mine:
            table = {("<", "<"): True, ("<", "<="): True, ("<", "="): False,
                     ("<=", "<="): True, ("=", "<"): False, ("=", "<="): True, ("=", "="): True}
            return table.get((self.op, op))
        if diff == -mine:
            # diff op 0  <=>  mine op' 0 with the sides swapped
            table = {("<", "<"): False, ("<", "<="): False, ("<", "="): False,
                     ("=", "<"): False, ("=", "<="): True, ("=", "="): True}
            return table.get((self.op, op))
        return None

    def compare(self) -> Compare:
        return Compare(self.op, self.lhs, self.rhs)

    def __str__(self):
        text = f"{render_term(self.lhs)} {self.op} {render_term(self.rhs)}"
        return f"({self.label}) {text}" if self.label else text


def check_constraints(constraints, bindings):
    """None when all constraints hold, else the first violated one (in the given order)."""
    for c in constraints:
        if not c.holds(bindings):
            return c
    return None


def check_infinitesimal(name, bindings, points=None):
    """Check that ``bindings[name]`` is positive and below every other gap.

    The gaps are taken between distinct values of ``points`` (time expressions
    not mentioning ``name``; by default the other bound constants and 0).
    Returns None when fine, otherwise a message.
    """
    if name not in bindings:
        return f"{name} is not bound"
    eps = Fraction(bindings[name])
    if eps <= 0:
        return f"{name} = {render_number(eps)} is not positive"
    if points is None:
        values = {Fraction(0)} | {Fraction(q) for n, q in bindings.items() if n != name}
    else:
        values = {eval_time(p, bindings) for p in points if name not in as_time(p).constants()}
    for x, y in itertools.combinations(sorted(values), 2):
        if y - x <= eps:
            return (f"{name} = {render_number(eps)} is not smaller than the gap "
                    f"{render_number(y - x)} between {render_number(x)} and {render_number(y)}")
    return None


# ---------------------------------------------------------------- worlds


def reach_order(m) -> frozenset:
    """Reflexive-transitive closure of all action transitions of ``m``."""
    edges = {(w, v) for _, _, w, v in m.action_edges()}
    return reflexive_transitive_closure(m.worlds, edges)


def check_time_homomorphism(m):
    """None if ``w`` reachable-before ``w'`` implies time(w) <= time(w'), else the first bad pair."""
    missing = [w for w in m.worlds if w not in m.stamps]
    if missing:
        raise MissingStamp(f"no time stamp for world(s) {', '.join(missing)}")
    order = {w: i for i, w in enumerate(m.worlds)}
    for w, v in sorted(reach_order(m), key=lambda p: (order[p[0]], order[p[1]])):
        if m.stamps[w] > m.stamps[v]:
            return w, v
    return None


def stamp_chain(m, start, start_time=0, durations=None):
    """Stamp worlds reachable from ``start`` by adding each action's duration.

    ``durations`` maps an action symbol to a function of the argument tuple
    returning the duration; by default the second argument (``a(t, d, ...)``).
    Returns a new stamp dict; worlds reached twice keep the first stamp.
    """
    stamps = {start: Fraction(start_time)}
    todo = [start]
    while todo:
        w = todo.pop(0)
        for symbol, args, src, v in m.action_edges():
            if src != w or v in stamps:
                continue
            if durations and symbol in durations:
                delta = durations[symbol](args)
            else:
                delta = args[1] if len(args) > 1 else 0
            stamps[v] = stamps[w] + Fraction(delta)
            todo.append(v)
    return stamps


# ----------------------------------------------------------- action laws


@dataclass(frozen=True)
class ActionLaw:
    """``pre -> [action] post``, an action with instant and duration arguments.

    The action's first two arguments are the instant ``t`` and the duration
    ``d``; remaining arguments are the objects involved.
    """

    pre: object
    action: ActionTerm
    post: object

    @classmethod
    def from_formula(cls, phi) -> "ActionLaw":
        if not (isinstance(phi, Implies) and isinstance(phi.right, Modal)
                and len(phi.right.actions) == 1):
            raise ValueError(f"not of the form pre -> [a(t,d,...)] post: {render(phi)}")
        return cls(phi.left, phi.right.actions[0], phi.right.body)

    @property
    def formula(self):
        return Implies(self.pre, Modal((self.action,), self.post))

    def variables(self) -> dict:
        return free_var_sorts(self.formula)

    def problems(self) -> list:
        """Ways in which the law departs from the general schema (non-fatal)."""
        out = []
        args = self.action.args
        if len(args) < 2:
            out.append("action needs an instant and a duration argument")
            return out
        for k, what in ((0, "instant"), (1, "duration")):
            try:
                as_time(args[k])
            except (TypeError, SortError, ValueError):
                out.append(f"{what} argument {render_term(args[k])} is not a time term")
        pre_objs = _object_vars(self.pre)
        act_objs = set()
        for a in args[2:]:
            if isinstance(a, Var):
                act_objs.add(a.name)
        post_objs = _object_vars(self.post)
        missing = (pre_objs | act_objs) - post_objs
        if missing:
            out.append("object variables of precondition and action missing from the result: "
                       + ", ".join(sorted(missing)))
        return out


def _object_vars(phi) -> set:
    return {n for n, s in free_var_sorts(phi).items() if s == OBJ}


def instantiate_law(law, bindings):
    """Ground ``law`` (an ActionLaw or formula) with ``bindings`` (variable -> term or rational).

    Time expressions are reduced: ``t+d`` with t=6, d=3 becomes ``9``.
    """
    phi = law.formula if isinstance(law, ActionLaw) else law
    sorts = free_var_sorts(phi)
    missing = set(sorts) - set(bindings)
    if missing:
        raise KeyError(f"no binding for variable(s) {', '.join(sorted(missing))}")
    for name in sorted(sorts):
        value = bindings[name]
        if isinstance(value, (int, Fraction, str)) and sorts[name] == TIME:
            value = as_time(Fraction(value))
        elif isinstance(value, str):
            value = Const(value, OBJ)
        phi = instantiate(phi, name, value)
    return phi


def relevant_time_points(occurrences, extra=(), infinitesimal=None):
    """Candidate instants: each occurrence instant, instant + duration and the
    latter shifted by the infinitesimal, together with ``extra``."""
    out = []
    for act in occurrences:
        if len(act.args) < 2:
            continue
        t, d = as_time(act.args[0]), as_time(act.args[1])
        out.extend([t, t + d])
        if infinitesimal is not None:
            out.append(t + d + as_time(infinitesimal))
    out.extend(as_time(e) for e in extra)
    seen, uniq = set(), []
    for e in out:
        if e not in seen:
            seen.add(e)
            uniq.append(e)
    return uniq
