"""
Conjugacy classes by brute force
================================

The oracle sweeps every pair (x, y), joins xy with yx, and takes
connected components.  Here it runs on the three transformation
monoids of a 3-element set.
"""

from epiconj import transform
from epiconj.conjugacy import conjugacy_classes

for family in ("IS", "T", "PT"):
    S = transform.enumerate_family(family, 3)
    rel = conjugacy_classes(S)
    print(f"{family}_3: {len(S)} elements, {rel.class_count} classes")
    for members in rel.members():
        rep = S.elements[members[0]]
        print(f"  {str(rep):<10} cycles={transform.cyclic_type(rep)}  size={len(members)}")

# Every class is pinned down by the cycle lengths of its members:
S = transform.enumerate_family("PT", 3)
labels = conjugacy_classes(S).classes
types = {transform.cyclic_type(p) for p in S.elements}
print("distinct cyclic types in PT_3:", len(types), "| classes:", labels.max() + 1)
