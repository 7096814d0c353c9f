"""
Green's relations as eggboxes
=============================

Each D-class is drawn as a grid: rows are R-classes, columns are
L-classes, and a starred cell is an H-class holding an idempotent,
so a maximal subgroup.
"""

from epiconj import transform
from epiconj.report import eggbox, format_eggbox

S = transform.enumerate_family("IS", 2)
print(format_eggbox(eggbox(S)))

# In IS_n the D-classes are the rank layers.
for box in eggbox(transform.enumerate_family("IS", 3)):
    print(f"{box['rows']} x {box['cols']} grid, {box['size']} elements")
