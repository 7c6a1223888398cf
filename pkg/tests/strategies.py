"""Hypothesis strategies shared by the property tests."""
from fractions import Fraction

from hypothesis import strategies as st

from dal.syntax import (BOTTOM, OBJ, TIME, TOP, ActionTerm, And, Atom, Box, Compare, Const,
                        Exists, Forall, Iff, Implies, Modal, Not, Or, Signature, TimeExpr, Var)

SIG = Signature(preds={"P": (), "Q": (), "R": (OBJ,), "H": (TIME, OBJ)},
                actions={"a": (), "b": (OBJ,), "T": (TIME, TIME, OBJ)},
                objects=["c1", "c2"], times=["ds", "db"])

OBJ_VARS = [Var("x"), Var("y")]
TIME_VARS = [Var("t", TIME)]


def obj_terms(ground):
    consts = [Const(o) for o in SIG.objects]
    return st.sampled_from(consts if ground else consts + OBJ_VARS)


def time_terms(ground):
    atoms = [Const(t, TIME) for t in SIG.times] + ([] if ground else TIME_VARS)
    offsets = st.sampled_from([Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3)])
    parts = st.lists(st.tuples(st.sampled_from(atoms), st.sampled_from([1, 2])), max_size=2)
    return st.builds(TimeExpr, offsets, parts)


def action_terms(ground):
    o, t = obj_terms(ground), time_terms(ground)
    return st.one_of(st.just(ActionTerm("a", ())),
                     st.builds(lambda c: ActionTerm("b", (c,)), o),
                     st.builds(lambda t1, t2, c: ActionTerm("T", (t1, t2, c)), t, t, o))


def atoms_(ground):
    o, t = obj_terms(ground), time_terms(ground)
    return st.one_of(st.just(Atom("P", ())), st.just(Atom("Q", ())),
                     st.builds(lambda c: Atom("R", (c,)), o),
                     st.builds(lambda e, c: Atom("H", (e, c)), t, o),
                     st.builds(Compare, st.sampled_from(["<", "<=", "="]), t, t),
                     st.just(TOP), st.just(BOTTOM))


def formulas(ground=False, max_leaves=12):
    """Arbitrary ASTs over :data:`SIG`, including quantifiers and action sequences."""
    def extend(children):
        ops = st.lists(action_terms(ground), min_size=0, max_size=3).map(tuple)
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(Box, children),
            st.builds(Modal, ops, children),
            st.builds(Forall, st.sampled_from(OBJ_VARS + TIME_VARS), children),
            st.builds(Exists, st.sampled_from(OBJ_VARS), children),
        )
    return st.recursive(atoms_(ground), extend, max_leaves=max_leaves)


# Propositional-modal fragment for model-level checks: P, Q, R(obj), actions a, b(obj).
SMALL_SIG = Signature(preds={"P": (), "R": (OBJ,)}, actions={"a": (), "b": (OBJ,)},
                      objects=["c1", "c2"])


def small_formulas(max_leaves=8):
    c = st.sampled_from([Const("c1"), Const("c2")])
    base = st.one_of(st.just(Atom("P", ())), st.builds(lambda o: Atom("R", (o,)), c),
                     st.just(TOP), st.just(BOTTOM))
    acts = st.one_of(st.just(ActionTerm("a", ())), st.builds(lambda o: ActionTerm("b", (o,)), c))

    def extend(children):
        return st.one_of(st.builds(Not, children), st.builds(And, children, children),
                         st.builds(Or, children, children), st.builds(Implies, children, children),
                         st.builds(Box, children),
                         st.builds(Modal, st.lists(acts, max_size=2).map(tuple), children))
    return st.recursive(base, extend, max_leaves=max_leaves)


@st.composite
def models(draw, sig=SMALL_SIG, max_worlds=3):
    """A random valid model over ``sig`` (nullary/object arguments only)."""
    import itertools

    from dal.semantics import DalModel, preorders

    k = draw(st.integers(1, max_worlds))
    worlds = tuple(f"w{i}" for i in range(k))
    rel = draw(st.sampled_from(preorders(k)))
    relation = frozenset((worlds[i], worlds[j]) for i, j in rel)
    objects = tuple(sig.objects)
    transitions = {}
    for name, sorts in sig.actions.items():
        for args in itertools.product(objects, repeat=len(sorts)):
            for w in worlds:
                succ = sorted(v for (u, v) in relation if u == w)
                chosen = frozenset(draw(st.lists(st.sampled_from(succ), unique=True)))
                if chosen:
                    transitions[(name, args, w)] = chosen
    ground = [(p, args) for p, sorts in sig.preds.items()
              for args in itertools.product(objects, repeat=len(sorts))]
    valuation = {w: frozenset(draw(st.lists(st.sampled_from(ground), unique=True))) for w in worlds}
    return DalModel(worlds, objects, relation, transitions, valuation, signature=sig)
