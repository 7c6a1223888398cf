"""Compare the tableau with SAT-based bounded model search on a random corpus.

Each formula is decided twice: by the tableau, and by looking for a model with
at most four worlds.  Countermodels built by the tableau are evaluated against
the formula.  Pass a seed and a corpus size to vary the run.

    python3 demos/oracle_check.py [seed] [count]
"""
import sys

from dal.oracle import compare, corpus_signature, random_corpus
from dal.syntax import render

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
count = int(sys.argv[2]) if len(sys.argv) > 2 else 500

sig = corpus_signature()
corpus = random_corpus(count, seed=seed)
print("a few corpus members:")
for phi in corpus[:6]:
    print("   " + render(phi))

report = compare(corpus, sig, max_worlds=4, domain=2)
print(report.summary())
for d in report.disagreements:
    print("   " + str(d))
