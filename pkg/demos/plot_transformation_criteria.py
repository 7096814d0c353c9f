"""
Reading conjugacy off the graph of action
=========================================

A partial map of {1..n} draws a graph of cycles and chains.  Cycles
survive in the regular part; for partial permutations the chains also
matter, but only for conjugacy by the symmetric group.
"""

from epiconj import transform
from epiconj.conjugacy import conjugacy_classes, g_conjugacy
from epiconj.transform import PartialTransformation as PT

p = PT((2, 1, 4, 5, 0))
g = transform.action_graph(p)
print("map", p, "cycles", g.cycles, "chains", g.chains)
print("regular part", transform.regular_part(p))

# Two partial permutations with the same cycles but different chains:
S = transform.enumerate_family("IS", 3)
a, b = PT((2, 0, 0)), PT((0, 0, 0))
ia, ib = S.index(a), S.index(b)
labels = conjugacy_classes(S).classes
print(a, "~", b, ":", labels[ia] == labels[ib])
print(a, "~_G", b, ":", g_conjugacy(S, ia, ib))

# Group elements of T_3 reduce to permutations of their range.
q = PT((2, 2, 3))
print(q, "is a group element:", transform.is_group_element_direct(q, "T"))
print("its range restriction", transform.restrict_to_range(q, "T"))
