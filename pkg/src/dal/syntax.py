"""Terms, formulas and the syntactic operations of the action logic.

Formulas are immutable values. Time positions always hold a :class:`TimeExpr`
(a linear combination of time constants/variables plus a rational offset);
object positions hold :class:`Var`, :class:`Const` or :class:`App`.

The diamonds ``<A>phi`` and ``dia phi`` are not separate node types: they are
built as ``~[A]~phi`` and ``~box ~phi`` (see :func:`diamond` and
:func:`possibly`), and the printer shows those shapes with diamond notation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

OBJ = "obj"
TIME = "time"
SORTS = (OBJ, TIME)


class SortError(ValueError):
    pass


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str
    sort: str = OBJ

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str
    sort: str = OBJ

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    """Application of a declared function symbol (object sorted)."""

    symbol: str
    args: tuple

    def __str__(self):
        return render_term(self)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value)


class TimeExpr:
    """``offset + sum(coeff * atom)`` over time-sorted constants and variables.

    Like terms are merged and zero coefficients dropped. The order in which
    atoms were first written is kept for printing only; equality and hashing
    ignore it, so ``t+d == d+t``.
    """

    __slots__ = ("offset", "parts", "_key")

    def __init__(self, offset=0, parts: Iterable[tuple] = ()):
        merged: dict = {}
        for atom, coeff in parts:
            if not isinstance(atom, (Var, Const)) or atom.sort != TIME:
                raise SortError(f"time expression over non-time term {atom!r}")
            merged[atom] = merged.get(atom, Fraction(0)) + _as_fraction(coeff)
        self.offset = _as_fraction(offset)
        self.parts = tuple((a, c) for a, c in merged.items() if c != 0)
        self._key = (self.offset, frozenset(self.parts))

    @classmethod
    def atom(cls, atom) -> "TimeExpr":
        return cls(0, [(atom, 1)])

    @classmethod
    def number(cls, value) -> "TimeExpr":
        return cls(value)

    @property
    def sort(self):
        return TIME

    @property
    def is_numeric(self) -> bool:
        return not self.parts

    @property
    def value(self) -> Fraction:
        if self.parts:
            raise ValueError(f"time expression {self} is not numeric")
        return self.offset

    def __eq__(self, other):
        return isinstance(other, TimeExpr) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __add__(self, other):
        other = as_time(other)
        return TimeExpr(self.offset + other.offset, self.parts + other.parts)

    __radd__ = __add__

    def __neg__(self):
        return TimeExpr(-self.offset, [(a, -c) for a, c in self.parts])

    def __sub__(self, other):
        return self + (-as_time(other))

    def __rsub__(self, other):
        return as_time(other) - self

    def scale(self, k) -> "TimeExpr":
        k = _as_fraction(k)
        return TimeExpr(self.offset * k, [(a, c * k) for a, c in self.parts])

    def variables(self) -> set:
        return {a.name for a, _ in self.parts if isinstance(a, Var)}

    def constants(self) -> set:
        return {a.name for a, _ in self.parts if isinstance(a, Const)}

    def substitute(self, name: str, replacement) -> "TimeExpr":
        replacement = as_time(replacement)
        out = TimeExpr(self.offset)
        for atom, coeff in self.parts:
            if isinstance(atom, Var) and atom.name == name:
                out = out + replacement.scale(coeff)
            else:
                out = out + TimeExpr(0, [(atom, coeff)])
        return out

    def bind(self, bindings) -> "TimeExpr":
        """Replace every bound time constant by its value (partial evaluation)."""
        out = TimeExpr(self.offset)
        for atom, coeff in self.parts:
            if isinstance(atom, Const) and atom.name in bindings:
                out = out + TimeExpr(_as_fraction(bindings[atom.name]) * coeff)
            else:
                out = out + TimeExpr(0, [(atom, coeff)])
        return out

    def __repr__(self):
        return f"TimeExpr({render_time(self)!r})"

    def __str__(self):
        return render_time(self)


def as_time(value) -> TimeExpr:
    if isinstance(value, TimeExpr):
        return value
    if isinstance(value, (int, Fraction)):
        return TimeExpr(value)
    if isinstance(value, (Var, Const)):
        if value.sort != TIME:
            raise SortError(f"{value.name} is not time sorted")
        return TimeExpr.atom(value)
    raise SortError(f"cannot use {value!r} as a time expression")


Term = Union[Var, Const, App, TimeExpr]


def term_sort(t) -> str:
    if isinstance(t, TimeExpr):
        return TIME
    if isinstance(t, App):
        return OBJ
    return t.sort


def term_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, TimeExpr):
        return t.variables()
    if isinstance(t, App):
        out = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    raise TypeError(f"not a term: {t!r}")


def term_substitute(t, name: str, replacement):
    if isinstance(t, Var):
        if t.name != name:
            return t
        if term_sort(replacement) != t.sort:
            raise SortError(f"cannot put {render_term(replacement)} in {t.sort} position of {name}")
        return replacement
    if isinstance(t, Const):
        return t
    if isinstance(t, TimeExpr):
        if name not in t.variables():
            return t
        if term_sort(replacement) != TIME:
            raise SortError(f"cannot put object term {render_term(replacement)} in time position of {name}")
        return t.substitute(name, replacement)
    if isinstance(t, App):
        return App(t.symbol, tuple(term_substitute(a, name, replacement) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


# ------------------------------------------------------------- formulas


class Formula:
    """Base class of formula nodes."""

    __slots__ = ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Compare(Formula):
    """``lhs op rhs`` with op one of ``<``, ``<=``, ``=``."""

    op: str
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class ActionTerm:
    symbol: str
    args: tuple = ()

    def __str__(self):
        return render_action(self)


@dataclass(frozen=True)
class Modal(Formula):
    """``[a1;...;an] body``; an empty ``actions`` tuple is the empty operator."""

    actions: tuple
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)


def neg(phi: Formula) -> Formula:
    """Negation that strips an outer ``~`` instead of stacking one."""
    return phi.body if isinstance(phi, Not) else Not(phi)


def diamond(actions, body: Formula) -> Formula:
    if isinstance(actions, ActionTerm):
        actions = (actions,)
    return Not(Modal(tuple(actions), Not(body)))


def possibly(body: Formula) -> Formula:
    return Not(Box(Not(body)))


def necessarily(actions, body: Formula) -> Formula:
    if isinstance(actions, ActionTerm):
        actions = (actions,)
    return Modal(tuple(actions), body)


def conj(*fs: Formula) -> Formula:
    fs = [f for f in fs if f != TOP]
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    fs = [f for f in fs if f != BOTTOM]
    if not fs:
        return BOTTOM
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def is_diamond(phi) -> bool:
    return isinstance(phi, Not) and isinstance(phi.body, Modal) and isinstance(phi.body.body, Not)


def is_possibly(phi) -> bool:
    return isinstance(phi, Not) and isinstance(phi.body, Box) and isinstance(phi.body.body, Not)


def children(phi: Formula) -> tuple:
    if isinstance(phi, (Not, Box, Modal, Forall, Exists)):
        return (phi.body,)
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    return ()


def subformulas(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        stack.extend(reversed(children(f)))


def action_terms(phi: Formula) -> list:
    """Action terms in order of first occurrence (duplicates dropped)."""
    seen = []
    for f in subformulas(phi):
        if isinstance(f, Modal):
            for a in f.actions:
                if a not in seen:
                    seen.append(a)
    return seen


def atoms(phi: Formula) -> list:
    seen = []
    for f in subformulas(phi):
        if isinstance(f, Atom) and f not in seen:
            seen.append(f)
    return seen


def modal_depth(phi: Formula) -> int:
    if isinstance(phi, Modal):
        return max(len(phi.actions), 0) + modal_depth(phi.body)
    if isinstance(phi, Box):
        return 1 + modal_depth(phi.body)
    return max((modal_depth(c) for c in children(phi)), default=0)


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


# ------------------------------------------------------ free variables


def _action_vars(a: ActionTerm) -> set:
    out = set()
    for t in a.args:
        out |= term_vars(t)
    return out


def free_vars(phi) -> set:
    """Names of the variables occurring free in ``phi`` (incl. action arguments)."""
    if isinstance(phi, ActionTerm):
        return _action_vars(phi)
    if isinstance(phi, (Top, Bottom)):
        return set()
    if isinstance(phi, Atom):
        out = set()
        for t in phi.args:
            out |= term_vars(t)
        return out
    if isinstance(phi, Compare):
        return term_vars(phi.lhs) | term_vars(phi.rhs)
    if isinstance(phi, QUANTIFIERS):
        return free_vars(phi.body) - {phi.var.name}
    if isinstance(phi, Modal):
        out = free_vars(phi.body)
        for a in phi.actions:
            out |= _action_vars(a)
        return out
    out = set()
    for c in children(phi):
        out |= free_vars(c)
    return out


def free_var_sorts(phi) -> dict:
    """Free variables of ``phi`` mapped to their sorts."""
    out = {}
    names = free_vars(phi)

    def visit(t):
        if isinstance(t, Var):
            if t.name in names:
                out.setdefault(t.name, t.sort)
        elif isinstance(t, TimeExpr):
            for a, _ in t.parts:
                if isinstance(a, Var) and a.name in names:
                    out.setdefault(a.name, TIME)
        elif isinstance(t, App):
            for a in t.args:
                visit(a)

    for f in subformulas(phi):
        if isinstance(f, Atom):
            for a in f.args:
                visit(a)
        elif isinstance(f, Compare):
            visit(f.lhs)
            visit(f.rhs)
        elif isinstance(f, Modal):
            for act in f.actions:
                for a in act.args:
                    visit(a)
    return out


def is_grounded(phi) -> bool:
    return not free_vars(phi)


def bound_vars(phi: Formula) -> set:
    return {f.var.name for f in subformulas(phi) if isinstance(f, QUANTIFIERS)}


# -------------------------------------------------------- substitution


def _fresh(name: str, avoid: set) -> str:
    i = 1
    while f"{name}{i}" in avoid:
        i += 1
    return f"{name}{i}"


def _subst_action(a: ActionTerm, name, t) -> ActionTerm:
    return ActionTerm(a.symbol, tuple(term_substitute(x, name, t) for x in a.args))


def instantiate(phi: Formula, x, t) -> Formula:
    """Replace every free occurrence of variable ``x`` in ``phi`` by term ``t``.

    Bound occurrences are left alone; a quantifier whose variable would
    capture a variable of ``t`` is renamed first.
    """
    name = x.name if isinstance(x, Var) else x
    if isinstance(t, (int, Fraction)):
        t = TimeExpr(t)
    if name not in free_vars(phi):
        return phi
    return _inst(phi, name, t, term_vars(t))


def _inst(phi, name, t, tvars):
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(term_substitute(a, name, t) for a in phi.args))
    if isinstance(phi, Compare):
        return Compare(phi.op, term_substitute(phi.lhs, name, t), term_substitute(phi.rhs, name, t))
    if isinstance(phi, Not):
        return Not(_inst(phi.body, name, t, tvars))
    if isinstance(phi, BINARY):
        return type(phi)(_inst(phi.left, name, t, tvars), _inst(phi.right, name, t, tvars))
    if isinstance(phi, Box):
        return Box(_inst(phi.body, name, t, tvars))
    if isinstance(phi, Modal):
        return Modal(tuple(_subst_action(a, name, t) for a in phi.actions), _inst(phi.body, name, t, tvars))
    if isinstance(phi, QUANTIFIERS):
        v = phi.var
        if v.name == name or name not in free_vars(phi.body):
            return phi
        body = phi.body
        if v.name in tvars:
            fresh = _fresh(v.name, tvars | free_vars(body) | bound_vars(body))
            nv = Var(fresh, v.sort)
            body = _inst(body, v.name, TimeExpr.atom(nv) if v.sort == TIME else nv, {fresh})
            v = nv
        return type(phi)(v, _inst(body, name, t, tvars))
    raise TypeError(f"not a formula: {phi!r}")


def substitute(phi: Formula, bindings: dict) -> Formula:
    """Apply :func:`instantiate` for every ``name -> term`` pair, in order."""
    for name, t in bindings.items():
        phi = instantiate(phi, name, t)
    return phi


def map_terms(phi: Formula, fn) -> Formula:
    """Rebuild ``phi`` with ``fn`` applied to every top-level argument term."""
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(fn(a) for a in phi.args))
    if isinstance(phi, Compare):
        return Compare(phi.op, fn(phi.lhs), fn(phi.rhs))
    if isinstance(phi, Not):
        return Not(map_terms(phi.body, fn))
    if isinstance(phi, BINARY):
        return type(phi)(map_terms(phi.left, fn), map_terms(phi.right, fn))
    if isinstance(phi, Box):
        return Box(map_terms(phi.body, fn))
    if isinstance(phi, Modal):
        acts = tuple(ActionTerm(a.symbol, tuple(fn(x) for x in a.args)) for a in phi.actions)
        return Modal(acts, map_terms(phi.body, fn))
    if isinstance(phi, QUANTIFIERS):
        return type(phi)(phi.var, map_terms(phi.body, fn))
    raise TypeError(f"not a formula: {phi!r}")


def bind_time(phi: Formula, bindings: dict) -> Formula:
    """Replace bound time constants by their values everywhere in ``phi``."""
    if not bindings:
        return phi
    return map_terms(phi, lambda t: t.bind(bindings) if isinstance(t, TimeExpr) else t)


# ------------------------------------------------------------ modalities


def flatten_modalities(phi: Formula) -> Formula:
    """Rewrite ``[a1;...;an]psi`` to ``[a1]...[an]psi`` and ``[eps]psi`` to ``psi``."""
    if isinstance(phi, Modal):
        body = flatten_modalities(phi.body)
        for a in reversed(phi.actions):
            body = Modal((a,), body)
        return body
    if isinstance(phi, (Top, Bottom, Atom, Compare)):
        return phi
    if isinstance(phi, Not):
        return Not(flatten_modalities(phi.body))
    if isinstance(phi, BINARY):
        return type(phi)(flatten_modalities(phi.left), flatten_modalities(phi.right))
    if isinstance(phi, Box):
        return Box(flatten_modalities(phi.body))
    if isinstance(phi, QUANTIFIERS):
        return type(phi)(phi.var, flatten_modalities(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


# -------------------------------------------------------------- signature


@dataclass
class Signature:
    """Declared symbols. ``preds``/``actions`` map names to argument sorts."""

    preds: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)  # name -> tuple of arg sorts (result is obj)
    objects: list = field(default_factory=list)
    times: list = field(default_factory=list)

    def copy(self) -> "Signature":
        return Signature(dict(self.preds), dict(self.actions), dict(self.functions),
                         list(self.objects), list(self.times))

    def const_sort(self, name):
        if name in self.objects:
            return OBJ
        if name in self.times:
            return TIME
        return None

    def add_object(self, name):
        if name not in self.objects:
            self.objects.append(name)

    def add_time(self, name):
        if name not in self.times:
            self.times.append(name)

    def with_domain(self, n: int) -> "Signature":
        """Copy with at least ``n`` object constants (``c1``, ``c2``, ... added)."""
        out = self.copy()
        i = 1
        while len(out.objects) < n:
            name = f"c{i}"
            if name not in out.objects and name not in out.times:
                out.objects.append(name)
            i += 1
        return out

    def problems(self) -> list:
        out = []
        clash = set(self.preds) & set(self.actions)
        if clash:
            out.append(f"action symbols also declared as predicates: {sorted(clash)}")
        both = set(self.objects) & set(self.times)
        if both:
            out.append(f"constants declared with two sorts: {sorted(both)}")
        for table in (self.preds, self.actions, self.functions):
            for name, sorts in table.items():
                bad = [s for s in sorts if s not in SORTS]
                if bad:
                    out.append(f"{name}: unknown sorts {bad}")
        return out

    def check(self, phi: Formula) -> None:
        """Raise ``ValueError`` if ``phi`` uses undeclared symbols or wrong arities."""
        for f in subformulas(phi):
            if isinstance(f, Atom):
                self._check_args("predicate", f.pred, self.preds, f.args)
            elif isinstance(f, Modal):
                for a in f.actions:
                    self._check_args("action", a.symbol, self.actions, a.args)
            elif isinstance(f, Compare):
                for t in (f.lhs, f.rhs):
                    self._check_term(t)

    def _check_args(self, kind, name, table, args):
        if name not in table:
            raise ValueError(f"undeclared {kind} {name}")
        sorts = table[name]
        if len(sorts) != len(args):
            raise ValueError(f"{kind} {name} expects {len(sorts)} arguments, got {len(args)}")
        for s, t in zip(sorts, args):
            if term_sort(t) != s:
                raise SortError(f"{kind} {name}: {render_term(t)} is not of sort {s}")
            self._check_term(t)

    def _check_term(self, t):
        if isinstance(t, Const) and self.const_sort(t.name) != t.sort:
            raise ValueError(f"undeclared {t.sort} constant {t.name}")
        if isinstance(t, TimeExpr):
            for name in t.constants():
                if name not in self.times:
                    raise ValueError(f"undeclared time constant {name}")
        if isinstance(t, App):
            if t.symbol not in self.functions:
                raise ValueError(f"undeclared function {t.symbol}")
            if len(self.functions[t.symbol]) != len(t.args):
                raise ValueError(f"function {t.symbol} arity mismatch")
            for a in t.args:
                self._check_term(a)


# ---------------------------------------------------------------- printer


def render_number(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_time(e: TimeExpr) -> str:
    pieces = []
    for atom, c in e.parts:
        if c == 1:
            s = atom.name
        elif c == -1:
            s = "-" + atom.name
        else:
            s = f"{render_number(c)}*{atom.name}"
        pieces.append(s)
    if e.offset != 0 or not pieces:
        pieces.append(render_number(e.offset))
    out = pieces[0]
    for p in pieces[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def render_term(t) -> str:
    if isinstance(t, TimeExpr):
        return render_time(t)
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, App):
        return f"{t.symbol}({','.join(render_term(a) for a in t.args)})"
    if isinstance(t, Fraction):
        return render_number(t)
    return str(t)


def render_action(a: ActionTerm) -> str:
    if not a.args:
        return a.symbol
    return f"{a.symbol}({','.join(render_term(x) for x in a.args)})"


def render_operator(actions: tuple) -> str:
    if not actions:
        return "eps"
    return ";".join(render_action(a) for a in actions)


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_UNARY = 5


def _prec(phi) -> int:
    return _PREC.get(type(phi), _UNARY + 1)


def render(phi: Formula) -> str:
    """Canonical ASCII text; :func:`dal.parser.parse_formula` reads it back."""
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Atom):
        if not phi.args:
            return phi.pred
        return f"{phi.pred}({','.join(render_term(a) for a in phi.args)})"
    if isinstance(phi, Compare):
        return f"{render_term(phi.lhs)} {phi.op} {render_term(phi.rhs)}"
    if isinstance(phi, Not):
        if is_diamond(phi):
            return f"<{render_operator(phi.body.actions)}> " + _unary_body(phi.body.body.body)
        if is_possibly(phi):
            return "dia " + _unary_body(phi.body.body.body)
        return "~" + _unary_body(phi.body)
    if isinstance(phi, Modal):
        return f"[{render_operator(phi.actions)}] " + _unary_body(phi.body)
    if isinstance(phi, Box):
        return "box " + _unary_body(phi.body)
    if isinstance(phi, QUANTIFIERS):
        kw = "forall" if isinstance(phi, Forall) else "exists"
        var = phi.var.name
        if phi.var.sort != OBJ:
            var += f":{phi.var.sort}"
        return f"{kw} {var} " + _unary_body(phi.body)
    if isinstance(phi, BINARY):
        p = _PREC[type(phi)]
        left, right = render(phi.left), render(phi.right)
        lp, rp = _prec(phi.left), _prec(phi.right)
        if isinstance(phi, (And, Or)):
            lpar, rpar = lp < p, rp <= p
        elif isinstance(phi, Implies):
            lpar, rpar = lp <= p, rp < p
        else:
            lpar, rpar = lp <= p, rp <= p
        if lpar:
            left = f"({left})"
        if rpar:
            right = f"({right})"
        return f"{left} {_OPS[type(phi)]} {right}"
    raise TypeError(f"not a formula: {phi!r}")


def _unary_body(phi) -> str:
    text = render(phi)
    if isinstance(phi, BINARY) or isinstance(phi, Compare):
        return f"({text})"
    return text
