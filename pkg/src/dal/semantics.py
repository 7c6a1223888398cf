"""Finite Kripke structures for the action logic and their evaluation.

A :class:`DalModel` has one object domain shared by all worlds, per-world
predicate extensions, action transitions indexed by ground action terms, and
an accessibility relation ``R`` (reflexive, transitive) that contains every
action transition.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .syntax import (OBJ, TIME, And, App, Atom, Bottom, Box, Compare, Const,
                     Exists, Forall, Iff, Implies, Modal, Not, Or, Signature, TimeExpr, Top,
                     Var, instantiate, render_number, render_term, free_vars,
                     free_var_sorts)


class EvalError(ValueError):
    """Formula and model do not fit together (unbound symbol, open term, ...)."""


class BoundsTooLarge(ValueError):
    def __init__(self, estimate, cap):
        self.estimate = estimate
        self.cap = cap
        super().__init__(f"enumeration would yield {estimate} models (cap {cap})")


@dataclass(frozen=True)
class Violation:
    kind: str  # inclusion | reflexivity | transitivity | arity | domain
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass(eq=False)
class DalModel:
    worlds: tuple
    objects: tuple
    relation: frozenset  # pairs (w, v)
    transitions: dict = field(default_factory=dict)  # (symbol, args, w) -> frozenset
    valuation: dict = field(default_factory=dict)  # w -> frozenset of (pred, args)
    functions: dict = field(default_factory=dict)  # w -> {(symbol, args): object}
    stamps: dict = field(default_factory=dict)  # w -> Fraction (the time homomorphism)
    time_bindings: dict = field(default_factory=dict)  # time constant -> Fraction
    time_points: tuple = ()  # range of time-sorted quantifiers
    signature: Signature | None = None

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        self.objects = tuple(self.objects)
        self.relation = frozenset(self.relation)
        self._succ = {}
        for w, v in self.relation:
            self._succ.setdefault(w, []).append(v)

    def accessible(self, w) -> list:
        return self._succ.get(w, [])

    def successors(self, symbol, args, w) -> frozenset:
        return self.transitions.get((symbol, tuple(args), w), frozenset())

    def holds_atom(self, w, pred, args) -> bool:
        return (pred, tuple(args)) in self.valuation.get(w, ())

    def action_edges(self):
        for (symbol, args, w), targets in self.transitions.items():
            for v in targets:
                yield symbol, args, w, v

    def __repr__(self):
        return (f"DalModel(worlds={list(self.worlds)}, |R|={len(self.relation)}, "
                f"transitions={sum(len(t) for t in self.transitions.values())})")


# ------------------------------------------------------------ validation


def validate_model(m: DalModel) -> list:
    """Every violated structural condition, with coordinates; empty means ok."""
    out = []
    worlds = set(m.worlds)
    if not worlds:
        out.append(Violation("domain", "no worlds"))
    if not m.objects:
        out.append(Violation("domain", "empty object domain"))
    for w, v in sorted(m.relation):
        if w not in worlds or v not in worlds:
            out.append(Violation("domain", f"R edge ({w},{v}) leaves the world set"))
    for w in m.worlds:
        if (w, w) not in m.relation:
            out.append(Violation("reflexivity", f"({w},{w}) not in R"))
    for w, v in sorted(m.relation):
        for u in m.accessible(v):
            if (w, u) not in m.relation:
                out.append(Violation("transitivity", f"({w},{v}),({v},{u}) in R but ({w},{u}) not"))
    sig = m.signature
    objects = set(m.objects)
    for (symbol, args, w), targets in sorted(m.transitions.items(), key=_sort_key):
        if sig is not None:
            if symbol not in sig.actions:
                out.append(Violation("arity", f"undeclared action {symbol}"))
            elif len(sig.actions[symbol]) != len(args):
                out.append(Violation("arity", f"{symbol} takes {len(sig.actions[symbol])} arguments, "
                                              f"transition at {w} has {len(args)}"))
        for x in args:
            if isinstance(x, str) and x not in objects:
                out.append(Violation("domain", f"{symbol}{_fmt_args(args)} at {w}: {x} not an object"))
        if w not in worlds:
            out.append(Violation("domain", f"transition source {w} is not a world"))
        for v in sorted(targets):
            if v not in worlds:
                out.append(Violation("domain", f"transition target {v} is not a world"))
            elif (w, v) not in m.relation:
                out.append(Violation("inclusion", f"{symbol}{_fmt_args(args)}: {w} -> {v} but ({w},{v}) not in R"))
    for w, facts in sorted(m.valuation.items(), key=lambda kv: str(kv[0])):
        if w not in worlds:
            out.append(Violation("domain", f"valuation for unknown world {w}"))
        for pred, args in sorted(facts, key=str):
            if sig is not None:
                if pred not in sig.preds:
                    out.append(Violation("arity", f"undeclared predicate {pred}"))
                elif len(sig.preds[pred]) != len(args):
                    out.append(Violation("arity", f"{pred} takes {len(sig.preds[pred])} arguments at {w}"))
            for x in args:
                if isinstance(x, str) and x not in objects:
                    out.append(Violation("domain", f"{pred}{_fmt_args(args)} at {w}: {x} not an object"))
    for w, table in m.functions.items():
        for (symbol, args), value in table.items():
            if value not in objects:
                out.append(Violation("domain", f"{symbol}{_fmt_args(args)} at {w} = {value}, not an object"))
    for w in m.stamps:
        if w not in worlds:
            out.append(Violation("domain", f"time stamp for unknown world {w}"))
    return out


def _sort_key(item):
    (symbol, args, w), _ = item
    return (symbol, tuple(str(a) for a in args), str(w))


def _fmt_args(args):
    if not args:
        return ""
    return "(" + ",".join(render_term(a) if not isinstance(a, str) else a for a in args) + ")"


# ------------------------------------------------------------- evaluation


def denote(m: DalModel, w, t, env=None):
    """Value of a term at world ``w``: an object name or a time value.

    ``env`` maps bound variable names to values (object names or Fractions).
    A time term over constants the model does not bind stays symbolic.
    """
    if isinstance(t, Const):
        if t.sort == OBJ:
            if t.name not in m.objects:
                raise EvalError(f"object constant {t.name} is not in the model's domain")
            return t.name
        t = TimeExpr.atom(t)
    if isinstance(t, TimeExpr):
        return _denote_time(m, t, env or {})
    if isinstance(t, Var):
        if env and t.name in env:
            return env[t.name]
        raise EvalError(f"free variable {t.name} (formula not grounded)")
    if isinstance(t, App):
        args = tuple(denote(m, w, a, env) for a in t.args)
        try:
            return m.functions[w][(t.symbol, args)]
        except KeyError:
            raise EvalError(f"function {t.symbol}{_fmt_args(args)} undefined at {w}") from None
    if isinstance(t, (Fraction, int)):
        return Fraction(t)
    raise EvalError(f"not a term: {t!r}")


def _denote_time(m, t, env):
    total = t.offset
    rest = []
    for atom, c in t.parts:
        if isinstance(atom, Var):
            if atom.name not in env:
                raise EvalError(f"open time term {t}")
            v = env[atom.name]
            if isinstance(v, TimeExpr):
                total += c * v.offset
                rest.extend((a, c * k) for a, k in v.parts)
            else:
                total += c * v
        elif atom.name in m.time_bindings:
            total += c * Fraction(m.time_bindings[atom.name])
        else:
            rest.append((atom, c))
    if rest:
        e = TimeExpr(total, rest)
        return e.value if e.is_numeric else e
    return total


def _compare(op, a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return {"<": a < b, "<=": a <= b, "=": a == b}[op]
    if op == "=":
        if isinstance(a, str) and isinstance(b, str):
            return a == b
        if a == b:
            return True
    raise EvalError(f"cannot decide {render_term(a)} {op} {render_term(b)} without time bindings")


def _domain(m, var):
    if var.sort == TIME:
        if not m.time_points:
            raise EvalError(f"time quantifier over {var.name} but the model has no time points")
        return [TimeExpr(q) for q in m.time_points]
    return [Const(o, OBJ) for o in m.objects]


def _values(m, var):
    if var.sort == TIME:
        if not m.time_points:
            raise EvalError(f"time quantifier over {var.name} but the model has no time points")
        return [Fraction(q) for q in m.time_points]
    return list(m.objects)


def evaluate(m: DalModel, w, phi, env=None) -> bool:
    """Truth value of the grounded formula ``phi`` at world ``w``.

    Open formulas can be evaluated by giving values for their free variables
    in ``env``.
    """
    return _ev(m, w, phi, env or {})


def _ev(m, w, phi, env) -> bool:
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Atom):
        return m.holds_atom(w, phi.pred, tuple(denote(m, w, a, env) for a in phi.args))
    if isinstance(phi, Compare):
        return _compare(phi.op, denote(m, w, phi.lhs, env), denote(m, w, phi.rhs, env))
    if isinstance(phi, Not):
        return not _ev(m, w, phi.body, env)
    if isinstance(phi, And):
        return _ev(m, w, phi.left, env) and _ev(m, w, phi.right, env)
    if isinstance(phi, Or):
        return _ev(m, w, phi.left, env) or _ev(m, w, phi.right, env)
    if isinstance(phi, Implies):
        return (not _ev(m, w, phi.left, env)) or _ev(m, w, phi.right, env)
    if isinstance(phi, Iff):
        return _ev(m, w, phi.left, env) == _ev(m, w, phi.right, env)
    if isinstance(phi, Forall):
        name = phi.var.name
        return all(_ev(m, w, phi.body, {**env, name: o}) for o in _values(m, phi.var))
    if isinstance(phi, Exists):
        name = phi.var.name
        return any(_ev(m, w, phi.body, {**env, name: o}) for o in _values(m, phi.var))
    if isinstance(phi, Box):
        return all(_ev(m, v, phi.body, env) for v in m.accessible(w))
    if isinstance(phi, Modal):
        return _eval_sequence(m, w, phi.actions, phi.body, env)
    raise EvalError(f"not a formula: {phi!r}")


def _eval_sequence(m, w, actions, body, env=None):
    env = env or {}
    if not actions:
        return _ev(m, w, body, env)
    first = actions[0]
    args = tuple(denote(m, w, a, env) for a in first.args)
    if m.signature is not None and first.symbol not in m.signature.actions:
        raise EvalError(f"action {first.symbol} is not in the model's signature")
    return all(_eval_sequence(m, v, actions[1:], body, env) for v in m.successors(first.symbol, args, w))


# ---------------------------------------------------- global labelling


def _bits(m):
    idx = m.__dict__.get("_bits")
    if idx is None:
        pos = {w: i for i, w in enumerate(m.worlds)}
        succ = [0] * len(m.worlds)
        for w, v in m.relation:
            if w in pos and v in pos:
                succ[pos[w]] |= 1 << pos[v]
        trans = {}
        for (symbol, args, w), targets in m.transitions.items():
            mask = 0
            for v in targets:
                mask |= 1 << pos[v]
            trans[(symbol, tuple(args), w)] = mask
        idx = (pos, succ, trans, (1 << len(m.worlds)) - 1)
        m.__dict__["_bits"] = idx
    return idx


def extension(m: DalModel, phi, env=None) -> frozenset:
    """Set of worlds where ``phi`` holds, computed bottom-up over subformulas.

    This is a second evaluator, independent of :func:`evaluate`'s
    world-by-world recursion; each subformula is labelled once per model.
    """
    mask = _ext(m, phi, env or {})
    return frozenset(w for i, w in enumerate(m.worlds) if mask >> i & 1)


def _ext(m, phi, env) -> int:
    try:
        rule = _EXT[type(phi)]
    except KeyError:
        raise EvalError(f"not a formula: {phi!r}") from None
    return rule(m, phi, env, _bits(m))


def _ext_local(m, phi, env, bits):
    out = 0
    for w, i in bits[0].items():
        if _ev(m, w, phi, env):
            out |= 1 << i
    return out


def _ext_atom(m, phi, env, bits):
    if any(isinstance(a, App) for a in phi.args):
        return _ext_local(m, phi, env, bits)
    key = (phi.pred, tuple(denote(m, None, a, env) for a in phi.args))
    out = 0
    val = m.valuation
    for w, i in bits[0].items():
        if key in val.get(w, ()):
            out |= 1 << i
    return out


def _ext_quant(m, phi, env, bits):
    name = phi.var.name
    forall = isinstance(phi, Forall)
    out = bits[3] if forall else 0
    for o in _values(m, phi.var):
        part = _ext(m, phi.body, {**env, name: o})
        out = out & part if forall else out | part
    return out


def _ext_box(m, phi, env, bits):
    pos, succ, _, _ = bits
    body = _ext(m, phi.body, env)
    out = 0
    for i in pos.values():
        if succ[i] & ~body == 0:
            out |= 1 << i
    return out


def _ext_modal(m, phi, env, bits):
    pos, _, trans, _ = bits
    target = _ext(m, phi.body, env)
    for act in reversed(phi.actions):
        if m.signature is not None and act.symbol not in m.signature.actions:
            raise EvalError(f"action {act.symbol} is not in the model's signature")
        out = 0
        for w, i in pos.items():
            args = tuple(denote(m, w, a, env) for a in act.args)
            if trans.get((act.symbol, args, w), 0) & ~target == 0:
                out |= 1 << i
        target = out
    return target


_EXT = {
    Top: lambda m, phi, env, bits: bits[3],
    Bottom: lambda m, phi, env, bits: 0,
    Atom: _ext_atom,
    Compare: _ext_local,
    Not: lambda m, phi, env, bits: bits[3] & ~_ext(m, phi.body, env),
    And: lambda m, phi, env, bits: _ext(m, phi.left, env) & _ext(m, phi.right, env),
    Or: lambda m, phi, env, bits: _ext(m, phi.left, env) | _ext(m, phi.right, env),
    Implies: lambda m, phi, env, bits: (bits[3] & ~_ext(m, phi.left, env)) | _ext(m, phi.right, env),
    Iff: lambda m, phi, env, bits: bits[3] & ~(_ext(m, phi.left, env) ^ _ext(m, phi.right, env)),
    Forall: _ext_quant,
    Exists: _ext_quant,
    Box: _ext_box,
    Modal: _ext_modal,
}


def ground_instances(m: DalModel, phi):
    """All instances of ``phi`` with its free variables replaced by domain elements."""
    names = sorted(free_vars(phi))
    if not names:
        yield {}, phi
        return
    sorts = free_var_sorts(phi)
    ranges = [_domain(m, Var(n, sorts.get(n, OBJ))) for n in names]
    for combo in itertools.product(*ranges):
        inst = phi
        for n, t in zip(names, combo):
            inst = instantiate(inst, n, t)
        yield dict(zip(names, combo)), inst


def valid_in_model(m: DalModel, phi) -> bool:
    """True iff every ground instance of ``phi`` holds in every world."""
    return find_counterexample(m, phi) is None


def find_counterexample(m: DalModel, phi):
    """``(world, instance)`` where ``phi`` fails, or None."""
    for _, inst in ground_instances(m, phi):
        for w in m.worlds:
            if not evaluate(m, w, inst):
                return w, inst
    return None


def explain(m: DalModel, w, phi):
    """Follow a false formula down to a false subformula: ``(world, subformula)``.

    Returns None when ``phi`` is true at ``w``.
    """
    if evaluate(m, w, phi):
        return None
    while True:
        nxt = None
        if isinstance(phi, And):
            nxt = (w, phi.left) if not evaluate(m, w, phi.left) else (w, phi.right)
        elif isinstance(phi, Forall):
            for o in _domain(m, phi.var):
                inst = instantiate(phi.body, phi.var.name, o)
                if not evaluate(m, w, inst):
                    nxt = (w, inst)
                    break
        elif isinstance(phi, Box):
            v = next(v for v in m.accessible(w) if not evaluate(m, v, phi.body))
            nxt = (v, phi.body)
        elif isinstance(phi, Modal) and phi.actions:
            first = phi.actions[0]
            args = tuple(denote(m, w, a) for a in first.args)
            rest = Modal(phi.actions[1:], phi.body) if len(phi.actions) > 1 else phi.body
            v = next(v for v in m.successors(first.symbol, args, w) if not evaluate(m, v, rest))
            nxt = (v, rest)
        if nxt is None:
            return w, phi
        w, phi = nxt


def reflexive_transitive_closure(worlds, edges) -> frozenset:
    rel = {(w, w) for w in worlds} | set(edges)
    succ = {w: {v for (u, v) in rel if u == w} for w in worlds}
    changed = True
    while changed:
        changed = False
        for w in worlds:
            extra = set()
            for v in succ[w]:
                extra |= succ.get(v, set())
            if not extra <= succ[w]:
                succ[w] |= extra
                changed = True
    return frozenset((w, v) for w in worlds for v in succ[w])


def close_relation(m: DalModel) -> DalModel:
    """Copy of ``m`` whose R is the reflexive-transitive closure of R and all transitions."""
    edges = set(m.relation) | {(w, v) for _, _, w, v in m.action_edges()}
    return replace(m, relation=reflexive_transitive_closure(m.worlds, edges))


# ------------------------------------------------------------ enumeration


@lru_cache(maxsize=None)
def preorders(k: int) -> tuple:
    """All reflexive transitive relations on worlds ``0..k-1`` (as frozensets of pairs)."""
    off = [(i, j) for i in range(k) for j in range(k) if i != j]
    ident = {(i, i) for i in range(k)}
    out = []
    for mask in range(1 << len(off)):
        rel = ident | {off[b] for b in range(len(off)) if mask >> b & 1}
        if all((i, l) in rel for (i, j) in rel for (jj, l) in rel if jj == j):
            out.append(frozenset(rel))
    return tuple(out)


def _ground_symbols(table, objects):
    out = []
    for name, sorts in table.items():
        if any(s != OBJ for s in sorts):
            raise ValueError(f"cannot enumerate over time-sorted symbol {name}")
        for args in itertools.product(objects, repeat=len(sorts)):
            out.append((name, args))
    return out


def enumeration_size(sig: Signature, max_worlds: int, domain_size: int) -> int:
    objects = _enum_objects(sig, domain_size)
    n_atoms = len(_ground_symbols(sig.preds, objects))
    n_acts = len(_ground_symbols(sig.actions, objects))
    total = 0
    for k in range(1, max_worlds + 1):
        for rel in preorders(k):
            total += 2 ** (n_acts * len(rel)) * 2 ** (k * n_atoms)
    return total


def _enum_objects(sig, domain_size):
    base = sig.with_domain(domain_size).objects
    return tuple(base[:domain_size])


def _subsets(items):
    items = list(items)
    for mask in range(1 << len(items)):
        yield frozenset(items[b] for b in range(len(items)) if mask >> b & 1)


def enumerate_models(sig: Signature, max_worlds: int, domain_size: int, cap: int = 2_000_000):
    """Every valid model with at most ``max_worlds`` worlds over ``domain_size`` objects.

    Raw enumeration (no isomorphism reduction) in a fixed order: world count,
    then R, then transitions, then valuations. Raises :class:`BoundsTooLarge`
    before yielding anything if the stream would exceed ``cap`` models.
    """
    if max_worlds < 1 or domain_size < 1:
        return
    estimate = enumeration_size(sig, max_worlds, domain_size)
    if estimate > cap:
        raise BoundsTooLarge(estimate, cap)
    yield from _enumerate(sig, max_worlds, domain_size)


def _enumerate(sig, max_worlds, domain_size):
    objects = _enum_objects(sig, domain_size)
    ground_atoms = _ground_symbols(sig.preds, objects)
    ground_acts = _ground_symbols(sig.actions, objects)
    for k in range(1, max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(k))
        for rel in preorders(k):
            relation = frozenset((worlds[i], worlds[j]) for i, j in rel)
            succ = {w: sorted(v for (u, v) in relation if u == w) for w in worlds}
            slots = [(name, args, w) for (name, args) in ground_acts for w in worlds]
            choices = [list(_subsets(succ[w])) for (_, _, w) in slots]
            for trans in itertools.product(*choices):
                transitions = {slot: t for slot, t in zip(slots, trans) if t}
                for vals in itertools.product(list(_subsets(ground_atoms)), repeat=k):
                    yield DalModel(worlds, objects, relation, dict(transitions),
                                   dict(zip(worlds, vals)), signature=sig)


# ---------------------------------------------------------- model files

_LINE_ACT = re.compile(r"^act\s+(.+?)\s*:\s*(\S+)\s*->\s*\{([^}]*)\}\s*$")
_LINE_REL = re.compile(r"^rel\s+R\s*:\s*(\S+)\s*->\s*(.+)$")
_LINE_HOLDS = re.compile(r"^holds\s+(\S+)\s*:\s*(.+)$")
_LINE_TIME = re.compile(r"^time\s+(\S+)\s*=\s*(.+)$")
_LINE_FUN = re.compile(r"^fun\s+(\S+)\s*:\s*(.+?)\s*=\s*(\S+)\s*$")


def parse_model(text: str, close: bool = False) -> DalModel:
    """Read the model file format (see ``render_model``).

    With ``close=True`` R is replaced by the reflexive-transitive closure of
    the listed R edges and action transitions.
    """
    from .parser import FormulaParser, DalSyntaxError, parse_theory

    sig = Signature()
    worlds, objects, rel = [], [], set()
    transitions, valuation, functions, stamps = {}, {}, {}, {}
    bindings, points = {}, []
    decl_lines = []

    def err(msg, lineno):
        return DalSyntaxError(msg, 0, lineno, 1)

    def time_value(text, lineno):
        try:
            e = FormulaParser(text, sig, strict=False).parse_time().bind(bindings)
            return e.value
        except (ValueError, DalSyntaxError):
            raise err(f"expected a rational time value, got {text!r}", lineno)

    def value_of(t, lineno):
        if isinstance(t, TimeExpr):
            e = t.bind(bindings)
            return e.value if e.is_numeric else e
        if isinstance(t, Const):
            if t.sort == TIME:
                return value_of(TimeExpr.atom(t), lineno)
            return t.name
        raise err(f"unsupported argument {render_term(t)}", lineno)

    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw = line.split()[0]
        rest = line[len(kw):].strip()
        if kw in ("pred", "action", "func", "const"):
            decl_lines.append(line)
            th = parse_theory(line, sig)
            sig = th.signature
        elif kw == "worlds":
            worlds.extend(n for n in rest.replace(",", " ").split())
        elif kw == "objects":
            for n in rest.replace(",", " ").split():
                objects.append(n)
                sig.add_object(n)
        elif kw == "bind":
            name, _, value = rest.partition("=")
            sig.add_time(name.strip())
            bindings[name.strip()] = time_value(value.strip(), lineno)
        elif kw == "timepoints":
            points.extend(time_value(p.strip(), lineno) for p in rest.split(",") if p.strip())
        elif (m := _LINE_TIME.match(line)):
            stamps[m.group(1)] = time_value(m.group(2), lineno)
        elif (m := _LINE_REL.match(line)):
            for v in m.group(2).replace(",", " ").split():
                rel.add((m.group(1), v))
        elif (m := _LINE_ACT.match(line)):
            act = FormulaParser(m.group(1), sig, strict=False).parse_action()
            args = tuple(value_of(a, lineno) for a in act.args)
            targets = frozenset(v.strip() for v in m.group(3).split(",") if v.strip())
            key = (act.symbol, args, m.group(2))
            transitions[key] = transitions.get(key, frozenset()) | targets
        elif (m := _LINE_HOLDS.match(line)):
            for piece in _split_atoms(m.group(2)):
                atom = FormulaParser(piece, sig, strict=False).parse_formula()
                if not isinstance(atom, Atom):
                    raise err(f"holds expects atoms, got {piece!r}", lineno)
                args = tuple(value_of(a, lineno) for a in atom.args)
                valuation.setdefault(m.group(1), set()).add((atom.pred, args))
        elif (m := _LINE_FUN.match(line)):
            term = FormulaParser(m.group(2), sig, strict=False).object_term()
            if not isinstance(term, App):
                raise err("fun expects f(args) = object", lineno)
            args = tuple(value_of(a, lineno) for a in term.args)
            functions.setdefault(m.group(1), {})[(term.symbol, args)] = m.group(3)
        else:
            raise err(f"unknown model line {line!r}", lineno)
    for w in list(rel):
        for x in w:
            if x not in worlds:
                worlds.append(x)
    m = DalModel(tuple(worlds), tuple(objects), frozenset(rel), transitions,
                 {w: frozenset(v) for w, v in valuation.items()}, functions, stamps,
                 bindings, tuple(points), sig)
    return close_relation(m) if close else m


def _split_atoms(text):
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def load_model(path, close=False) -> DalModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), close=close)


def _fmt_value(x):
    if isinstance(x, Fraction):
        return render_number(x)
    if isinstance(x, TimeExpr):
        return render_term(x)
    return str(x)


def _fmt_call(name, args):
    if not args:
        return name
    return f"{name}({','.join(_fmt_value(a) for a in args)})"


def render_model(m: DalModel) -> str:
    out = []
    if m.signature is not None:
        for kw, table in (("pred", m.signature.preds), ("action", m.signature.actions)):
            for name, sorts in table.items():
                out.append(f"{kw} {name}({', '.join(sorts)})" if sorts else f"{kw} {name}")
    out.append("worlds " + ", ".join(m.worlds))
    out.append("objects " + ", ".join(m.objects))
    for name, q in m.time_bindings.items():
        out.append(f"bind {name} = {render_number(q)}")
    if m.time_points:
        out.append("timepoints " + ", ".join(render_number(q) for q in m.time_points))
    for w in m.worlds:
        if w in m.stamps:
            out.append(f"time {w} = {render_number(m.stamps[w])}")
    for w in m.worlds:
        targets = [v for v in m.worlds if (w, v) in m.relation]
        if targets:
            out.append(f"rel R: {w} -> {', '.join(targets)}")
    for (symbol, args, w), targets in m.transitions.items():
        if targets:
            ordered = [v for v in m.worlds if v in targets]
            out.append(f"act {_fmt_call(symbol, args)}: {w} -> {{{', '.join(ordered)}}}")
    for w in m.worlds:
        facts = sorted(m.valuation.get(w, ()), key=lambda f: (f[0], [str(a) for a in f[1]]))
        if facts:
            out.append(f"holds {w}: " + ", ".join(_fmt_call(p, a) for p, a in facts))
    for w, table in m.functions.items():
        for (symbol, args), value in table.items():
            out.append(f"fun {w}: {_fmt_call(symbol, args)} = {value}")
    return "\n".join(out) + "\n"
