"""Timed action laws: a train moving from Marseille to Paris.

Instantiates the move law, checks it in a two-world model whose worlds carry
time stamps, and shows the stamp checker rejecting a world that goes back in
time.

    python3 demos/travel.py
"""
from dal import DATA
from dal.parser import parse_formula
from dal.semantics import evaluate, load_model
from dal.syntax import OBJ, TIME, Signature, render
from dal.temporal import ActionLaw, check_time_homomorphism, instantiate_law

sig = Signature(preds={"at": (TIME, OBJ, OBJ)}, actions={"move": (TIME, TIME, OBJ, OBJ, OBJ)})
law = ActionLaw.from_formula(parse_formula("at(t,x,y) -> [move(t,d,x,y,z)] at(t+d,x,z)", sig,
                                           free_variables=True))
for problem in law.problems():
    print("note:", problem)

ground = instantiate_law(law, {"t": 6, "d": 3, "x": "TGV", "y": "Marseille", "z": "Paris"})
print("instance:", render(ground))

m = load_model(DATA / "move_chain.model")
print("holds at w0:", evaluate(m, "w0", ground))
print("stamps:", {w: str(v) for w, v in m.stamps.items()},
      "monotone" if check_time_homomorphism(m) is None else "not monotone")

m.stamps = {"w0": 6, "w1": 5}
print("after moving w1 to 5, first offending pair:", check_time_homomorphism(m))
