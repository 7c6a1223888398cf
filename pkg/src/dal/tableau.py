"""Labelled tableau for grounded formulas over a finite constant domain.

Every formula on a branch carries a prefix naming the world it holds at.
Prefixes form a tree: ``0`` is the root, ``0.1`` a successor created either
through an action edge (for a diamond ``<a>phi``) or through a plain
accessibility edge (for ``dia phi``). Action edges count as accessibility
edges too, so boxed formulas travel along both.

Rules, in the order they are tried:

* closure: ``phi`` and ``~phi`` at one prefix, ``false``, or a comparison that
  is false under the constraints or the time bindings;
* alpha rules (conjunction-like, incl. ``forall`` over the domain, ``[a;b]``
  to ``[a][b]`` and ``[eps]phi`` to ``phi``);
* T: ``box phi`` gives ``phi`` at the same prefix;
* nu rules across existing edges: K (``[a]phi`` along an a-edge), A2
  (``box phi`` re-asserted along an a-edge) and 4 (``box phi`` re-asserted
  along an accessibility edge);
* beta rules: first unit propagation, then branching;
* pi rules (``<a>phi``, ``dia phi``) create a new prefix.

A prefix whose formula set equals that of an ancestor is blocked and its pi
formulas are not expanded; in the extracted model the blocked prefix is
identified with its blocker. The depth of the prefix tree is therefore at
most ``2**n`` where ``n`` counts the distinct formulas that can occur on the
branch (subformulas of the input, their negations and boxed re-assertions);
``max_prefixes`` bounds the work in practice.

Closed branches record which branching decisions their clash depends on, so
the search skips alternatives that cannot help (backjumping) and the
reported proof keeps only the lines that contribute to the closure.
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .semantics import DalModel, EvalError, evaluate, reflexive_transitive_closure
from .syntax import (OBJ, TIME, And, Atom, Bottom, Box, Compare, Const, Exists, Forall, Iff,
                     Implies, Modal, Not, Or, Top, TimeExpr, as_time, bind_time, free_vars,
                     instantiate, neg, render, render_action, render_number)
from .temporal import TimeConstraint

DEFAULT_MAX_PREFIXES = 500


class TableauError(ValueError):
    """Input outside the decidable fragment or not matching the signature."""


class OpenTimeConstraint(TableauError):
    pass


class LimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Hyp:
    formula: object
    label: str | None = None


class Node:
    __slots__ = ("id", "prefix", "formula", "key", "rule", "premises", "deps", "label", "cites")

    def __init__(self, id, prefix, formula, key, rule, premises, deps, label=None, cites=()):
        self.id = id
        self.prefix = prefix
        self.formula = formula
        self.key = key
        self.rule = rule
        self.premises = premises
        self.deps = deps
        self.label = label
        self.cites = cites

    def __repr__(self):
        return f"<{self.id} {self.prefix}: {render(self.formula)} [{self.rule}]>"


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    action: object  # ActionTerm for an action edge, None for a plain R edge
    action_key: object
    via: Node


@dataclass
class Clash:
    prefix: str
    nodes: tuple
    cites: tuple
    deps: frozenset


@dataclass
class Leaf:
    clash: Clash


@dataclass
class Split:
    beta: Node
    branches: list  # (component node, subtree)


# ----------------------------------------------------------------- context


class _Context:
    """Per-proof settings and caches shared by all branches."""

    def __init__(self, sig, bindings, constraints, time_points, max_prefixes):
        self.sig = sig
        self.bindings = {k: Fraction(v) for k, v in (bindings or {}).items()}
        self.constraints = list(constraints)
        self.time_points = [as_time(t) for t in time_points]
        self.max_prefixes = max_prefixes
        self.objects = [Const(o, OBJ) for o in sig.objects]
        self.next_id = 0
        self.next_split = 0
        self._keys = {}
        self._kinds = {}
        self._cmp = {}
        self.branches = 0

    def new_id(self):
        self.next_id += 1
        return self.next_id

    def key(self, phi):
        k = self._keys.get(phi)
        if k is None:
            k = bind_time(phi, self.bindings) if self.bindings else phi
            self._keys[phi] = k
        return k

    def domain(self, var):
        if var.sort == TIME:
            if not self.time_points:
                raise TableauError(f"time quantifier over {var.name} needs relevant time points")
            return self.time_points
        if not self.objects:
            raise TableauError("the signature has no object constants")
        return self.objects

    def decide(self, c: Compare):
        """(truth value, citation) of a ground comparison."""
        hit = self._cmp.get(c)
        if hit is not None:
            return hit
        hit = self._decide(c)
        self._cmp[c] = hit
        return hit

    def _decide(self, c):
        if isinstance(c.lhs, Const) and c.lhs.sort == OBJ:
            if c.op != "=" or not (isinstance(c.rhs, Const) and c.rhs.sort == OBJ):
                raise TableauError(f"bad object comparison {render(c)}")
            return c.lhs.name == c.rhs.name, "una"
        diff = as_time(c.lhs) - as_time(c.rhs)
        for con in self.constraints:
            verdict = con.decide(c.op, diff)
            if verdict is not None:
                return verdict, f"({con.label})" if con.label else "constraint"
        bound = diff.bind(self.bindings)
        if bound.is_numeric:
            x = bound.value
            return {"<": x < 0, "<=": x <= 0, "=": x == 0}[c.op], "arith"
        raise OpenTimeConstraint(f"cannot decide {render(c)}: no binding and no constraint settles it")

    def classify(self, phi):
        k = self._kinds.get(phi)
        if k is None:
            k = self._classify(phi)
            self._kinds[phi] = k
        return k

    def _instances(self, q, negate):
        out = []
        for o in self.domain(q.var):
            inst = instantiate(q.body, q.var.name, o)
            out.append(neg(inst) if negate else inst)
        return tuple(out)

    def _classify(self, phi):
        if isinstance(phi, Top):
            return ("true",)
        if isinstance(phi, Bottom):
            return ("false",)
        if isinstance(phi, Atom):
            return ("lit",)
        if isinstance(phi, Compare):
            return ("cmp", phi, True)
        if isinstance(phi, And):
            return ("alpha", "α", (phi.left, phi.right))
        if isinstance(phi, Or):
            return ("beta", (phi.left, phi.right))
        if isinstance(phi, Implies):
            return ("beta", (neg(phi.left), phi.right))
        if isinstance(phi, Iff):
            return ("beta", (And(phi.left, phi.right), And(neg(phi.left), neg(phi.right))))
        if isinstance(phi, Forall):
            return ("alpha", "∀", self._instances(phi, False))
        if isinstance(phi, Exists):
            return ("beta", self._instances(phi, False))
        if isinstance(phi, Box):
            return ("box", phi.body)
        if isinstance(phi, Modal):
            if not phi.actions:
                return ("alpha", "ε", (phi.body,))
            if len(phi.actions) > 1:
                return ("alpha", "A1", (Modal(phi.actions[:1], Modal(phi.actions[1:], phi.body)),))
            return ("nec", phi.actions[0], phi.body)
        if isinstance(phi, Not):
            b = phi.body
            if isinstance(b, Top):
                return ("false",)
            if isinstance(b, Bottom):
                return ("true",)
            if isinstance(b, Atom):
                return ("lit",)
            if isinstance(b, Compare):
                return ("cmp", b, False)
            if isinstance(b, Not):
                return ("alpha", "¬¬", (b.body,))
            if isinstance(b, And):
                return ("beta", (neg(b.left), neg(b.right)))
            if isinstance(b, Or):
                return ("alpha", "α", (neg(b.left), neg(b.right)))
            if isinstance(b, Implies):
                return ("alpha", "α", (b.left, neg(b.right)))
            if isinstance(b, Iff):
                return ("beta", (And(b.left, neg(b.right)), And(neg(b.left), b.right)))
            if isinstance(b, Forall):
                return ("beta", self._instances(b, True))
            if isinstance(b, Exists):
                return ("alpha", "∀", self._instances(b, True))
            if isinstance(b, Box):
                return ("pi", None, neg(b.body))
            if isinstance(b, Modal):
                if not b.actions:
                    return ("alpha", "ε", (neg(b.body),))
                if len(b.actions) > 1:
                    inner = Modal(b.actions[:1], Modal(b.actions[1:], b.body))
                    return ("alpha", "A1", (Not(inner),))
                return ("pi", b.actions[0], neg(b.body))
        raise TableauError(f"not a formula: {phi!r}")

    def action_key(self, act):
        k = self._keys.get(act)
        if k is None:
            if self.bindings:
                k = (act.symbol, tuple(a.bind(self.bindings) if isinstance(a, TimeExpr) else a
                                       for a in act.args))
            else:
                k = (act.symbol, act.args)
            self._keys[act] = k
        return k


# ------------------------------------------------------------------ branch


class _Branch:
    def __init__(self, ctx):
        self.ctx = ctx
        self.at = {}  # (prefix, key) -> Node
        self.parent = {"0": None}
        self.nchildren = {}
        self.edges = {}  # prefix -> tuple of Edge
        self.boxes = {}  # prefix -> tuple of Node
        self.necs = {}  # prefix -> tuple of Node
        self.betas = []
        self.pis = []
        self.blocked = {}
        self.queue = []
        self.clash = None

    def copy(self):
        b = _Branch.__new__(_Branch)
        b.ctx = self.ctx
        b.at = dict(self.at)
        b.parent = dict(self.parent)
        b.nchildren = dict(self.nchildren)
        b.edges = dict(self.edges)
        b.boxes = dict(self.boxes)
        b.necs = dict(self.necs)
        b.betas = list(self.betas)
        b.pis = list(self.pis)
        b.blocked = dict(self.blocked)
        b.queue = []
        b.clash = None
        return b

    # -- adding formulas
    def add(self, prefix, phi, rule, premises=(), deps=frozenset(), label=None, cites=()):
        ctx = self.ctx
        key = ctx.key(phi)
        if (prefix, key) in self.at:
            return None
        node = Node(ctx.new_id(), prefix, phi, key, rule, premises, deps, label, cites)
        self.at[(prefix, key)] = node
        if self.clash is not None:
            return node
        kind = ctx.classify(phi)
        tag = kind[0]
        if tag == "false":
            self.clash = Clash(prefix, (node,), (), deps)
        elif tag == "cmp":
            value, cite = ctx.decide(kind[1])
            if value != kind[2]:
                self.clash = Clash(prefix, (node,), (cite,), deps)
        else:
            other = self.at.get((prefix, ctx.key(neg(phi))))
            if other is not None:
                self.clash = Clash(prefix, (other, node), (), deps | other.deps)
            elif tag in ("alpha", "box", "nec"):
                self.queue.append(node)
            elif tag == "beta":
                self.betas.append(node)
            elif tag == "pi":
                self.pis.append(node)
        return node

    def drain(self):
        ctx = self.ctx
        while self.queue and self.clash is None:
            node = self.queue.pop(0)
            kind = ctx.classify(node.formula)
            p = node.prefix
            if kind[0] == "alpha":
                for comp in kind[2]:
                    self.add(p, comp, kind[1], (node,), node.deps)
            elif kind[0] == "box":
                self.boxes[p] = self.boxes.get(p, ()) + (node,)
                self.add(p, kind[1], "T", (node,), node.deps)
                for e in self.edges.get(p, ()):
                    self._push_box(node, e)
            elif kind[0] == "nec":
                self.necs[p] = self.necs.get(p, ()) + (node,)
                for e in self.edges.get(p, ()):
                    self._push_nec(node, e)

    def _push_box(self, node, e):
        rule = "A2" if e.action is not None else "4"
        self.add(e.target, node.formula, rule, (node, e.via), node.deps | e.via.deps)

    def _push_nec(self, node, e):
        if e.action is None:
            return
        _, act, body = self.ctx.classify(node.formula)
        if self.ctx.action_key(act) == e.action_key:
            self.add(e.target, body, "K", (node, e.via), node.deps | e.via.deps)

    # -- beta rules
    def _component_status(self, prefix, comp):
        """'sat', ('closed', node or None, cite) or 'open'."""
        ctx = self.ctx
        kind = ctx.classify(comp)
        if kind[0] == "true":
            return "sat"
        if kind[0] == "false":
            return ("closed", None, None)
        if kind[0] == "cmp":
            value, cite = ctx.decide(kind[1])
            return "sat" if value == kind[2] else ("closed", None, cite)
        if (prefix, ctx.key(comp)) in self.at:
            return "sat"
        other = self.at.get((prefix, ctx.key(neg(comp))))
        if other is not None:
            return ("closed", other, None)
        return "open"

    def unit_pass(self):
        """One sweep of unit propagation over pending beta formulas."""
        progress = False
        keep = []
        for node in self.betas:
            if self.clash is not None:
                keep.append(node)
                continue
            comps = self.ctx.classify(node.formula)[1]
            open_comps, used, cites, done = [], [], [], False
            for c in comps:
                st = self._component_status(node.prefix, c)
                if st == "sat":
                    done = True
                    break
                if st == "open":
                    open_comps.append(c)
                else:
                    if st[1] is not None:
                        used.append(st[1])
                    if st[2] is not None:
                        cites.append(st[2])
            if done:
                progress = True
                continue
            if len(open_comps) > 1:
                keep.append(node)
                continue
            deps = node.deps
            for u in used:
                deps = deps | u.deps
            progress = True
            if not open_comps:
                self.clash = Clash(node.prefix, (node, *used), tuple(cites), deps)
                continue
            self.add(node.prefix, open_comps[0], "β", (node, *used), deps, cites=tuple(cites))
            self.drain()
        self.betas = keep
        return progress

    # -- pi rules
    def formula_set(self, prefix):
        return frozenset(k for (p, k) in self.at if p == prefix)

    def blocker(self, prefix):
        if prefix in self.blocked:
            return self.blocked[prefix]
        mine = self.formula_set(prefix)
        anc = self.parent[prefix]
        found = None
        while anc is not None:
            if self.formula_set(anc) == mine:
                found = anc
                break
            anc = self.parent[anc]
        self.blocked[prefix] = found
        return found

    def apply_pi(self):
        for i, node in enumerate(self.pis):
            if self.blocker(node.prefix) is not None:
                continue
            del self.pis[i]
            self._expand_pi(node)
            return True
        return False

    def _expand_pi(self, node):
        ctx = self.ctx
        _, act, witness = ctx.classify(node.formula)
        p = node.prefix
        n = self.nchildren.get(p, 0) + 1
        self.nchildren[p] = n
        child = f"{p}.{n}"
        if len(self.parent) >= ctx.max_prefixes:
            raise LimitExceeded(f"more than {ctx.max_prefixes} prefixes on one branch")
        self.parent[child] = p
        edge = Edge(p, child, act, ctx.action_key(act) if act is not None else None, node)
        self.edges[p] = self.edges.get(p, ()) + (edge,)
        self.add(child, witness, "π", (node,), node.deps)
        for b in self.boxes.get(p, ()):
            self._push_box(b, edge)
        for k in self.necs.get(p, ()):
            self._push_nec(k, edge)
        self.drain()

    # -- saturation
    def saturate(self):
        """Apply rules until a clash, a needed split (returns the beta node) or saturation."""
        while True:
            self.drain()
            if self.clash is not None:
                return None
            if self.unit_pass():
                continue
            if self.betas:
                return self.betas[0]
            if self.apply_pi():
                continue
            return None


# ------------------------------------------------------------------ search


@dataclass
class _Closed:
    core: frozenset
    tree: object


def _solve(branch):
    ctx = branch.ctx
    ctx.branches += 1
    beta = branch.saturate()
    if branch.clash is not None:
        return _Closed(branch.clash.deps, Leaf(branch.clash))
    if beta is None:
        return branch
    sid = ctx.next_split
    ctx.next_split += 1
    comps = ctx.classify(beta.formula)[1]
    core = set(beta.deps)
    subtrees = []
    for i, comp in enumerate(comps):
        b = branch.copy() if i < len(comps) - 1 else branch
        b.betas.remove(beta)
        node = b.add(beta.prefix, comp, "β", (beta,), beta.deps | {sid})
        result = _solve(b)
        if isinstance(result, _Branch):
            return result
        if sid not in result.core:
            return result
        core |= result.core - {sid}
        subtrees.append((node, result.tree))
    return _Closed(frozenset(core), Split(beta, subtrees))


# ----------------------------------------------------------------- results


@dataclass
class ProofResult:
    verdict: str  # sat / unsat / valid / invalid / entailed / not entailed
    closed: bool
    model: DalModel | None = None
    root: str = "0"
    tree: object = None
    used_labels: list = field(default_factory=list)
    rules: list = field(default_factory=list)
    verified: bool | None = None
    stats: dict = field(default_factory=dict)

    @property
    def affirmative(self) -> bool:
        return self.verdict in ("sat", "valid", "entailed")

    def trace_lines(self) -> list:
        if self.tree is None:
            return []
        lines = []
        _render_tree(self.tree, lines, {}, [0], "")
        return lines

    def trace(self) -> str:
        if self.tree is None:
            if self.model is None:
                return ""
            from .semantics import render_model
            return "open branch; model:\n" + render_model(self.model)
        return "\n".join(self.trace_lines())

    def justification(self) -> str:
        """Short citation of the premises and modal rules, e.g. ``from (1) and (9)``."""
        return summarize(self.used_labels, self.rules)


_RULE_NAMES = (("K", "K"), ("A2", "(A2)"), ("A1", "(A1)"), ("ε", "(A3)"))


def _cite(label) -> str:
    if label.startswith("persist:"):
        return f"persistency from ({label[8:]})"
    if label.startswith("frame:"):
        return f"frame law for ({label[6:]})"
    return f"({label})"


def summarize(labels, rules) -> str:
    """``from (2), (10), K and (A2)`` style citation of premises and action rules.

    Assumptions made by persistency are cited as ``persistency from (4)``; when
    nothing else is used the result reads ``by persistency from (4)``.
    """
    parts = [_cite(lab) for lab in labels]
    parts += [name for r, name in _RULE_NAMES if r in rules]
    if not parts:
        return ""
    only_persistency = len(parts) == len(labels) and all(l.startswith("persist:") for l in labels)
    word = "by" if only_persistency else "from"
    if len(parts) == 1:
        return f"{word} {parts[0]}"
    return f"{word} " + ", ".join(parts[:-1]) + " and " + parts[-1]


def _cone(nodes):
    seen = {}
    stack = list(nodes)
    while stack:
        n = stack.pop()
        if n.id in seen:
            continue
        seen[n.id] = n
        stack.extend(n.premises)
    return seen


def _tree_nodes(tree):
    if isinstance(tree, Leaf):
        return _cone(tree.clash.nodes), set(tree.clash.cites)
    nodes = _cone([tree.beta])
    cites = set()
    for comp, sub in tree.branches:
        nodes.update(_cone([comp]))
        more, c = _tree_nodes(sub)
        nodes.update(more)
        cites |= c
    return nodes, cites


def _justify(node, numbering):
    if node.rule == "hyp":
        return f"({node.label})" if node.label else "hyp"
    if node.rule == "goal":
        return "negated goal"
    parts = [node.rule] + [str(numbering[p.id]) for p in node.premises] + list(node.cites)
    return ", ".join(parts)


def _emit(nodes, lines, numbering, counter, indent):
    for n in sorted(nodes, key=lambda n: n.id):
        if n.id in numbering:
            continue
        counter[0] += 1
        numbering[n.id] = counter[0]
        lines.append(f"{indent}{numbering[n.id]}. ⟨{n.prefix}⟩: {render(n.formula)}  "
                     f"[{_justify(n, numbering)}]")


def _render_tree(tree, lines, numbering, counter, indent):
    if isinstance(tree, Leaf):
        clash = tree.clash
        _emit(_cone(clash.nodes).values(), lines, numbering, counter, indent)
        refs = [str(numbering[n.id]) for n in clash.nodes] + list(clash.cites)
        lines.append(f"{indent}×  ⟨{clash.prefix}⟩ closed  [{', '.join(refs)}]")
        return
    _emit(_cone([tree.beta]).values(), lines, numbering, counter, indent)
    total = len(tree.branches)
    for i, (comp, sub) in enumerate(tree.branches, start=1):
        lines.append(f"{indent}branch {i}/{total} on {numbering[tree.beta.id]}:")
        local = dict(numbering)
        _emit([comp], lines, local, counter, indent + "  ")
        _render_tree(sub, lines, local, counter, indent + "  ")


def _label_key(lab):
    try:
        return (0, float(lab), lab)
    except ValueError:
        return (1, 0.0, lab)


# ------------------------------------------------------------- entry points


def _hyps(gamma):
    out = []
    for g in gamma:
        if isinstance(g, Hyp):
            out.append(g)
        elif isinstance(g, tuple) and len(g) == 2:
            out.append(Hyp(g[1], g[0]))
        else:
            out.append(Hyp(g))
    return out


def _check_input(phi, sig):
    names = free_vars(phi)
    if names:
        raise TableauError(f"formula is not grounded (free: {', '.join(sorted(names))}): {render(phi)}")
    try:
        sig.check(phi)
    except ValueError as exc:
        raise TableauError(str(exc)) from None


def _max_prefixes(value):
    if value is not None:
        return value
    return int(os.environ.get("DAL_MAX_PREFIXES", DEFAULT_MAX_PREFIXES))


def _run(gamma, goal, sig, bindings, constraints, time_points, max_prefixes, verify=True):
    hyps = _hyps(gamma)
    for h in hyps:
        _check_input(h.formula, sig)
    if goal is not None:
        _check_input(goal, sig)
    cons = [c if isinstance(c, TimeConstraint) else TimeConstraint.from_compare(c)
            for c in constraints]
    ctx = _Context(sig, bindings, cons, time_points, _max_prefixes(max_prefixes))
    branch = _Branch(ctx)
    inputs = []
    if goal is not None:
        inputs.append(branch.add("0", neg(goal), "goal"))
        branch.drain()
    # saturating hypothesis by hypothesis lets earlier ones (lemmas) own shared consequences
    for h in hyps:
        n = branch.add("0", h.formula, "hyp", label=h.label)
        if n is not None:
            inputs.append(n)
        branch.drain()
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        result = _solve(branch)
    finally:
        sys.setrecursionlimit(old)
    stats = {"nodes": ctx.next_id, "branches": ctx.branches}
    if isinstance(result, _Closed):
        nodes, cites = _tree_nodes(result.tree)
        labels = {n.label for n in nodes.values() if n.rule == "hyp" and n.label}
        labels |= {c.strip("()") for c in cites if c.startswith("(")}
        for n in nodes.values():
            labels |= {c.strip("()") for c in n.cites if c.startswith("(")}
        rules = {n.rule for n in nodes.values()}
        if "arith" in cites or any("arith" in n.cites for n in nodes.values()):
            rules.add("arith")
        return ProofResult("unsat", True, tree=result.tree,
                           used_labels=sorted(labels, key=_label_key),
                           rules=sorted(rules), stats=stats)
    model = extract_model(result)
    stats["prefixes"] = len(result.parent)
    verified = None
    if verify:
        try:
            ok = all(evaluate(model, "0", h.formula) for h in hyps)
            if goal is not None:
                ok = ok and not evaluate(model, "0", goal)
            verified = ok
        except EvalError:
            verified = None
    return ProofResult("sat", False, model=model, verified=verified, stats=stats)


def _denote_arg(a, bindings):
    if isinstance(a, Const):
        return a.name
    if isinstance(a, TimeExpr):
        e = a.bind(bindings)
        return e.value if e.is_numeric else e
    raise TableauError(f"unsupported argument {a!r}")


def extract_model(branch) -> DalModel:
    """Model read off an open saturated branch (blocked prefixes merged into their blockers)."""
    ctx = branch.ctx

    def home(p):
        while branch.blocked.get(p) is not None:
            p = branch.blocked[p]
        return p

    worlds = [p for p in branch.parent if branch.blocked.get(p) is None]
    transitions, edges = {}, set()
    for src, out in branch.edges.items():
        for e in out:
            tgt = home(e.target)
            edges.add((src, tgt))
            if e.action is not None:
                args = tuple(_denote_arg(a, ctx.bindings) for a in e.action.args)
                k = (e.action.symbol, args, src)
                transitions[k] = transitions.get(k, frozenset()) | {tgt}
    valuation = {w: set() for w in worlds}
    for (p, _), node in branch.at.items():
        if p in valuation and isinstance(node.formula, Atom):
            args = tuple(_denote_arg(a, ctx.bindings) for a in node.formula.args)
            valuation[p].add((node.formula.pred, args))
    points = ()
    if ctx.time_points:
        bound = [t.bind(ctx.bindings) for t in ctx.time_points]
        if all(b.is_numeric for b in bound):
            points = tuple(sorted({b.value for b in bound}))
    stamps = _stamps(branch, worlds, home) if ctx.bindings else {}
    return DalModel(tuple(worlds), tuple(ctx.sig.objects),
                    reflexive_transitive_closure(worlds, edges), transitions,
                    {w: frozenset(v) for w, v in valuation.items()}, {}, stamps,
                    dict(ctx.bindings), points, ctx.sig)


def _stamps(branch, worlds, home):
    """Root at 0; an action edge a(t, d, ...) leads to time t+d, a plain edge keeps the time."""
    ctx = branch.ctx
    stamps = {"0": Fraction(0)}
    for p in worlds:  # parents are inserted before children
        for e in branch.edges.get(p, ()):
            if e.target not in worlds:
                continue
            value = stamps.get(p)
            if e.action is not None and len(e.action.args) >= 2:
                try:
                    end = (as_time(e.action.args[0]) + as_time(e.action.args[1])).bind(ctx.bindings)
                    if end.is_numeric:
                        value = end.value
                except Exception:
                    pass
            if value is not None:
                stamps[e.target] = value
    return stamps


def check_sat(gamma, sig, bindings=None, constraints=(), time_points=(), max_prefixes=None):
    """Satisfiability of a set of grounded formulas (``(label, formula)`` pairs allowed)."""
    return _run(gamma, None, sig, bindings, constraints, time_points, max_prefixes)


def prove_valid(phi, sig, bindings=None, constraints=(), time_points=(), max_prefixes=None):
    r = _run([], phi, sig, bindings, constraints, time_points, max_prefixes)
    r.verdict = "valid" if r.closed else "invalid"
    return r


def entails(gamma, phi, sig, bindings=None, constraints=(), time_points=(), max_prefixes=None):
    r = _run(gamma, phi, sig, bindings, constraints, time_points, max_prefixes)
    r.verdict = "entailed" if r.closed else "not entailed"
    return r


def render_edge(e: Edge) -> str:
    return f"{e.source} -{render_action(e.action) if e.action else 'R'}-> {e.target}"


__all__ = ["check_sat", "prove_valid", "entails", "ProofResult", "Hyp", "TableauError",
           "OpenTimeConstraint", "LimitExceeded", "extract_model", "summarize", "render_number"]
