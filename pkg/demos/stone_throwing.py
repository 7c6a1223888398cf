"""Suzy and Billy throw stones at a bottle.

Runs the three timing cases of the shipped theory, shows the persistence
assumptions each case adds, and prints the proof of the step that makes the
case interesting.  Finally the same question about Billy is asked of a theory
in which only Billy throws, to show the conclusion being withdrawn once Suzy's
throw is added.

    python3 demos/stone_throwing.py
"""
from dal import DATA
from dal.parser import load_theory
from dal.scenario import Scenario, run_all_cases, summary_table
from dal.syntax import render

theory = load_theory(DATA / "suzy_billy.dal")

for case in theory.cases:
    s = Scenario(theory, case)
    print(f"== {case.name}: " + "; ".join(str(c) for c in s.constraints))
    for a in s.persistency_closure():
        print(f"   assume {render(a.formula)}  [{a.label}]")
    for d in s.run_case():
        print("   " + d.line())
    print()

# The proof that Suzy's throw breaks the bottle before Billy's stone lands.
s = Scenario(theory, "case1")
step = s.run_case(until=s.queries[4].formula)[-1]
print(f"proof of ({step.label}):")
print("\n".join("   " + line for line in step.trace))
print()

query = "[T(t1,db,billy)] H(t1+db,billy)"
alone = Scenario(load_theory(DATA / "billy_only.dal"), "case1").run(query)
both = Scenario(theory, "case1").run(query)
print(f"Billy throwing alone:  {query} is {alone.verdict} ({alone.justification})")
print(f"with Suzy throwing:    {query} is {both.verdict} (countermodel: {both.countermodel})")
print()
print(summary_table(run_all_cases(theory)))
