import itertools

import numpy as np
import pytest

from epiconj import automata, linear, transform
from epiconj.semigroup import build_semigroup, from_table
from epiconj.transform import PartialTransformation as PT


def rectangular_band(rows=2, cols=2):
    elems = list(itertools.product(range(rows), range(cols)))
    idx = {e: i for i, e in enumerate(elems)}
    table = [[idx[(a[0], b[1])] for b in elems] for a in elems]
    return from_table(table, elems)


def cyclic_group(order):
    table = [[(i + j) % order for j in range(order)] for i in range(order)]
    return from_table(table)


def brandt_with_identity():
    """B_2 with an identity adjoined, realized inside IS_2."""
    gens = [PT((0, 0)), PT((1, 0)), PT((2, 0)), PT((0, 1)), PT((0, 2)), PT((1, 2))]
    return build_semigroup(gens, transform.compose)


def null_semigroup():
    """{0, a} with every product equal to 0: not regular."""
    return from_table([[0, 0], [0, 0]], ["0", "a"])


@pytest.fixture(scope="session")
def families():
    out = {}
    for fam in ("IS", "T", "PT"):
        for n in (2, 3):
            out[f"{fam}{n}"] = transform.enumerate_family(fam, n)
    for fam in ("PAut", "End", "PEnd"):
        out[f"{fam}22"] = linear.enumerate_linear(fam, 2, 2)
    return out


@pytest.fixture(scope="session")
def tree2():
    return automata.tree_monoid("01", 2)


@pytest.fixture(scope="session")
def corpus(families, tree2):
    """Every semigroup the cross-validation suites run over."""
    out = dict(families)
    out["rectband22"] = rectangular_band()
    out["rectband23"] = rectangular_band(2, 3)
    out["Z3"] = cyclic_group(3)
    out["Z4"] = cyclic_group(4)
    out["B2one"] = brandt_with_identity()
    out["null2"] = null_semigroup()
    out["tree2"] = tree2
    return out


def find(S, payload):
    return S.index(payload)


def ordered_pairs(n):
    ar = np.arange(n)
    return np.repeat(ar, n), np.tile(ar, n)
