"""Instances of the axiom schemas A1-A5 and of K, T and 4, over a small signature."""
from __future__ import annotations

from .syntax import (OBJ, ActionTerm, And, Atom, Box, Const, Forall, Iff, Implies, Modal, Not,
                     Signature, Var, instantiate)


def axiom_signature() -> Signature:
    """Two actions, two objects, two predicates."""
    return Signature(preds={"P": (), "R": (OBJ,)}, actions={"a": (), "b": (OBJ,)},
                     objects=["c1", "c2"])


def _pieces(sig):
    c1, c2 = (Const(o, OBJ) for o in sig.objects[:2])
    a = ActionTerm("a", ())
    b1, b2 = ActionTerm("b", (c1,)), ActionTerm("b", (c2,))
    P = Atom("P", ())
    R1, R2 = Atom("R", (c1,)), Atom("R", (c2,))
    alphas = [P, Not(R1), And(P, R2), Modal((b1,), P), Box(Implies(P, R1))]
    operators = [(a,), (b1,), (a, b2), (b2, a), ()]
    return c1, c2, a, b1, b2, alphas, operators


def axiom_instances(sig=None) -> list:
    """``(schema name, formula)`` pairs, all valid."""
    sig = sig or axiom_signature()
    c1, c2, a, b1, b2, alphas, operators = _pieces(sig)
    out = []
    for A1 in ((a,), (b1,)):
        for A2 in ((b2,), (a, b1)):
            for al in alphas[:3]:
                out.append(("A1", Iff(Modal(A1 + A2, al), Modal(A1, Modal(A2, al)))))
    for op in operators:
        for al in alphas:
            out.append(("A2", Implies(Box(al), Modal(op, al))))
    for al in alphas:
        out.append(("A3", Implies(Modal((), al), al)))
    x = Var("x", OBJ)
    bodies = [Atom("R", (x,)), Modal((ActionTerm("b", (x,)),), Atom("P", ())),
              Implies(Atom("R", (x,)), Modal((a,), Atom("R", (x,))))]
    for body in bodies:
        for c in (c1, c2):
            out.append(("A4", Implies(Forall(x, body), instantiate(body, "x", c))))
    xops = [(a,), (b1,), (a, b2), ()]
    for body in bodies[:1] + [Box(Atom("R", (x,))), And(Atom("R", (x,)), Atom("P", ()))]:
        for op in xops:
            out.append(("A5", Iff(Forall(x, Modal(op, body)), Modal(op, Forall(x, body)))))
        out.append(("A5", Iff(Forall(x, Box(body)), Box(Forall(x, body)))))
    for op in ((a,), (b1,), (a, b2)):
        for p, q in ((alphas[0], alphas[1]), (alphas[2], alphas[3])):
            out.append(("K", Implies(Modal(op, Implies(p, q)), Implies(Modal(op, p), Modal(op, q)))))
    for p, q in ((alphas[0], alphas[1]), (alphas[2], alphas[4])):
        out.append(("K", Implies(Box(Implies(p, q)), Implies(Box(p), Box(q)))))
    for al in alphas:
        out.append(("T", Implies(Box(al), al)))
        out.append(("4", Implies(Box(al), Box(Box(al)))))
    return out
