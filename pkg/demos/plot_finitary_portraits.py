"""
Finitary maps and their portraits
=================================

A machine that copies its input after l letters is determined by its
portrait on words of length at most l.  Conjugacy of such maps reduces
to tree automorphisms acting on the regular parts of the portraits.
"""

from epiconj import automata
from epiconj.automata import MealyMachine
from epiconj.conjugacy import conjugacy_classes

swap = MealyMachine(
    ("0", "1"), ("S", "I"),
    {("S", "0"): ("I", "1"), ("S", "1"): ("I", "0"), ("I", "0"): ("I", "0"), ("I", "1"): ("I", "1")},
    "S",
)
l = automata.finitary_bound(swap)
p = automata.portrait(swap, l)
print("bound", l, "portrait", dict(p.mapping))
print("extends by identity:", p("0110"), "==", automata.apply(swap, "0110"))

# All partial tree maps of depth 2 form a finite inverse monoid.
T = automata.tree_monoid("01", 2)
rel = conjugacy_classes(T)
print(f"depth-2 tree monoid: {len(T)} elements, {rel.class_count} classes")
agree = all(
    automata.conjugate_finitary(T.elements[a], T.elements[b], 2) == (rel.classes[a] == rel.classes[b])
    for a in range(0, len(T), 7)
    for b in range(len(T))
)
print("portrait criterion agrees with the oracle on the sampled rows:", agree)
