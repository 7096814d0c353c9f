import itertools

import numpy as np
import pytest

from epiconj import transform
from epiconj.conjugacy import (
    conjugacy_classes,
    conjugate_by_criterion,
    conjugate_by_g_criterion,
    g_conjugacy,
    primary_conjugacy_edges,
    structural_checks,
    unit_group,
    witness_search,
)
from epiconj.errors import NoIdentity, NotFactorizable, NotGroupElement, NotInverse, NotRegular
from epiconj.semigroup import is_group_element
from epiconj.transform import PartialTransformation as PT

from .conftest import brandt_with_identity, cyclic_group, null_semigroup, rectangular_band


def naive_primary(S):
    """Per-pair search for a = xy, b = yx, plus the diagonal."""
    n = len(S)
    T = S.table.tolist()
    out = {(a, a) for a in range(n)}
    for a in range(n):
        for b in range(a, n):
            if any(T[x][y] == a and T[y][x] == b for x in range(n) for y in range(n)):
                out.add((a, b))
    return out


def naive_closure_labels(n, pairs):
    adj = {i: set() for i in range(n)}
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    label = [-1] * n
    c = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        stack = [s]
        label[s] = c
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if label[y] < 0:
                    label[y] = c
                    stack.append(y)
        c += 1
    return label


@pytest.mark.parametrize("maker", [
    lambda: transform.enumerate_family("IS", 2),
    lambda: transform.enumerate_family("T", 2),
    lambda: transform.enumerate_family("PT", 2),
    rectangular_band,
    brandt_with_identity,
    null_semigroup,
    lambda: cyclic_group(4),
])
def test_edge_sweep_matches_per_pair_search(maker):
    S = maker()
    pairs = naive_primary(S)
    assert primary_conjugacy_edges(S) == frozenset(pairs)
    labels = naive_closure_labels(len(S), pairs)
    oracle = conjugacy_classes(S).classes
    assert np.array_equal(oracle, labels)


def test_commutative_edges_are_diagonal():
    S = cyclic_group(5)
    assert primary_conjugacy_edges(S) == frozenset((a, a) for a in range(5))


def test_is2_transposition_not_primary_with_identity(families):
    S = families["IS2"]
    t, e = S.index(PT((2, 1))), S.identity
    assert (min(t, e), max(t, e)) not in primary_conjugacy_edges(S)


def test_rectangular_band_all_pairs_primary():
    S = rectangular_band()
    assert primary_conjugacy_edges(S) == frozenset(itertools.combinations_with_replacement(range(4), 2))


@pytest.mark.parametrize("name, count", [("IS3", 7), ("T3", 6), ("PT3", 7)])
def test_oracle_class_counts(families, name, count):
    assert conjugacy_classes(families[name]).class_count == count


def test_g_classes_refine_classes(corpus):
    for name, S in corpus.items():
        rel = conjugacy_classes(S)
        if S.identity is None:
            assert rel.g_classes is None
            continue
        for a, b in itertools.product(range(len(S)), repeat=2):
            if rel.g_classes[a] == rel.g_classes[b]:
                assert rel.classes[a] == rel.classes[b], name


def test_g_conjugacy_examples(families):
    S = families["IS3"]
    e = S.identity
    assert g_conjugacy(S, e, e)
    # 2-cycles on different 2-subsets
    assert g_conjugacy(S, S.index(PT((2, 1, 3))), S.index(PT((1, 3, 2))))
    assert not g_conjugacy(S, S.index(PT((2, 1, 3))), S.index(PT((2, 3, 1))))


def test_g_conjugacy_matches_symmetric_group_search(families):
    S = families["IS3"]
    sym = transform.symmetric_group(3)
    for a, b in itertools.product(range(len(S)), repeat=2):
        pa, pb = S.elements[a], S.elements[b]
        brute = any(g.inverse() * pb * g == pa for g in sym)
        assert g_conjugacy(S, a, b) == brute


def test_g_conjugacy_needs_identity():
    with pytest.raises(NoIdentity):
        g_conjugacy(rectangular_band(), 0, 1)
    with pytest.raises(NoIdentity):
        unit_group(null_semigroup())


def test_witness_examples(families):
    S = families["IS3"]
    e = S.index(PT((1, 2, 0)))
    w = witness_search(S, e, e)
    assert w is not None
    a, b = S.index(PT((2, 1, 3))), S.index(PT((1, 3, 2)))
    w = witness_search(S, a, b)
    assert w is not None
    assert S.mul(w.u, a, w.v) == b and S.mul(w.v, b, w.u) == a
    assert witness_search(S, a, S.identity) is None


def test_witness_idempotent_self_pair_is_first_hit(families):
    # the search returns the lexicographically first pair; (e, e) is always a hit
    S = families["IS2"]
    for e in S.idempotents:
        w = witness_search(S, int(e), int(e))
        assert (w.u, w.v) <= (int(e), int(e))


def test_witness_requires_group_elements(families):
    S = families["IS2"]
    with pytest.raises(NotGroupElement):
        witness_search(S, S.index(PT((2, 0))), S.identity)


def test_criterion_examples(families):
    S = families["IS3"]
    zero = S.zero
    nil1, nil2 = S.index(PT((2, 0, 0))), S.index(PT((0, 3, 0)))
    assert conjugate_by_criterion(S, nil1, nil2)
    assert conjugate_by_criterion(S, nil1, zero)
    assert not conjugate_by_criterion(S, nil1, S.index(PT((1, 0, 0))))


def test_criterion_needs_regular():
    S = null_semigroup()
    with pytest.raises(NotRegular):
        conjugate_by_criterion(S, 0, 1)


def test_g_criterion_examples(families):
    S = families["IS3"]
    a, b = S.index(PT((2, 1, 0))), S.index(PT((0, 3, 2)))
    assert conjugate_by_g_criterion(S, a, b)
    assert not conjugate_by_g_criterion(S, S.zero, S.identity)
    for x in range(len(S)):
        assert conjugate_by_g_criterion(S, x, x)


def test_g_criterion_hypotheses(families):
    with pytest.raises(NotInverse):
        conjugate_by_g_criterion(families["T3"], 0, 1)
    with pytest.raises(NotFactorizable):
        conjugate_by_g_criterion(brandt_with_identity(), 0, 1)


def test_structural_flags():
    for n in (2, 3):
        flags = structural_checks(transform.enumerate_family("IS", n))
        assert flags.regular and flags.inverse and flags.factorizable
        assert not flags.completely_regular and not flags.band
    # IS_1 = {identity, empty map} is a two-element semilattice
    flags = structural_checks(transform.enumerate_family("IS", 1))
    assert flags.band and flags.completely_regular and flags.factorizable
    flags = structural_checks(cyclic_group(3))
    assert flags.regular and flags.inverse and flags.factorizable and flags.completely_regular
    assert not flags.band
    trivial = structural_checks(cyclic_group(1))
    assert trivial.band
    flags = structural_checks(rectangular_band())
    assert flags.regular and flags.band and flags.completely_regular
    assert not flags.inverse and not flags.factorizable
    b2 = structural_checks(brandt_with_identity())
    assert b2.inverse and not b2.factorizable
    assert not structural_checks(null_semigroup()).regular


def test_inverse_flag_matches_unique_inverses(corpus):
    from epiconj.conjugacy import inverses

    for name, S in corpus.items():
        flags = structural_checks(S)
        counts = inverses(S).sum(axis=1)
        assert flags.inverse == bool(np.all(counts == 1)), name


def test_group_element_check_in_witness(families):
    S = families["PT3"]
    groups = [a for a in range(len(S)) if is_group_element(S, a)]
    assert 0 < len(groups) < len(S)
