"""Conjugacy in finite epigroups: an exhaustive oracle and the criteria it checks.

The core works on any tabulated semigroup.  Three families of concrete
elements plug into it: partial transformations of a finite set, partial
linear maps over a small prime field, and partial Mealy machines with
their tree portraits.
"""

from . import automata, conjugacy, linear, semigroup, transform
from .conjugacy import (
    ConjugacyRelations,
    conjugacy_classes,
    conjugate_by_criterion,
    conjugate_by_g_criterion,
    g_conjugacy,
    primary_conjugacy_edges,
    structural_checks,
    witness_search,
)
from .errors import EpiconjError
from .semigroup import (
    FiniteSemigroup,
    build_semigroup,
    epigroup_profile,
    from_table,
    green,
    is_group_element,
)

__version__ = "0.1.0"

__all__ = [
    "automata",
    "conjugacy",
    "linear",
    "semigroup",
    "transform",
    "ConjugacyRelations",
    "EpiconjError",
    "FiniteSemigroup",
    "build_semigroup",
    "conjugacy_classes",
    "conjugate_by_criterion",
    "conjugate_by_g_criterion",
    "epigroup_profile",
    "from_table",
    "g_conjugacy",
    "green",
    "is_group_element",
    "primary_conjugacy_edges",
    "structural_checks",
    "witness_search",
]
