"""
Partial linear maps over F_2
============================

A partial automorphism is conjugate to another exactly when their
regular parts, the restrictions to the stable domains, are similar
under GL(n, 2).  The search over GL is exhaustive.
"""

from epiconj import linear
from epiconj.conjugacy import conjugacy_classes
from epiconj.linear import PartialLinearMap as PLM

shift = PLM.parse("dom=1,0,0;0,1,0;act=0,1,0;0,0,1", 2)
t, dom = linear.stabilization(shift)
print(f"{shift}: domain stabilizes at t={t}, dim {dom.dim}")
print("regular part:", linear.regular_part_linear(shift))

S = linear.enumerate_linear("PAut", 2, 2)
rel = conjugacy_classes(S)
print(f"PAut(F_2^2): {len(S)} elements, {rel.class_count} classes")
for members in rel.members():
    f = S.elements[members[0]]
    print(f"  {str(f):<28} regular part dim {linear.regular_part_linear(f).domain.dim}  size={len(members)}")

swap, shear = PLM.parse("0,1;1,0", 2), PLM.parse("1,0;1,1", 2)
print("conjugator taking swap to shear:", linear.gl_conjugator(swap, shear))
