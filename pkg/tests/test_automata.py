import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epiconj import automata
from epiconj.automata import MealyMachine, Portrait, apply
from epiconj.conjugacy import conjugacy_classes, structural_checks
from epiconj.errors import (
    AlphabetMismatch,
    BadAlphabet,
    DepthCapExceeded,
    LengthCapExceeded,
    NotInjectiveAtLength,
    NotLocallyInjective,
)

A = automata.appendix_a_machine()
IDENT = automata.identity_machine()
SWAP = MealyMachine(
    ("0", "1"), ("S", "I"),
    {("S", "0"): ("I", "1"), ("S", "1"): ("I", "0"), ("I", "0"): ("I", "0"), ("I", "1"): ("I", "1")},
    "S",
)
# binary adding machine, least significant letter first
ODOMETER = MealyMachine(
    ("0", "1"), ("a", "I"),
    {("a", "0"): ("I", "1"), ("a", "1"): ("a", "0"), ("I", "0"): ("I", "0"), ("I", "1"): ("I", "1")},
    "a",
)
# collapses both letters to 0: not locally injective
COLLAPSE = MealyMachine(("0", "1"), ("q",), {("q", "0"): ("q", "0"), ("q", "1"): ("q", "0")}, "q")


def all_words(alphabet, max_len):
    for m in range(max_len + 1):
        yield from automata.words(alphabet, m)


@st.composite
def machines(draw, max_states=3, alphabet=("0", "1")):
    """Random partial machines whose output letters are injective per state."""
    k = draw(st.integers(1, max_states))
    states = tuple(f"s{i}" for i in range(k))
    moves = {}
    for q in states:
        outs = draw(st.permutations(alphabet))
        for x, y in zip(alphabet, outs):
            if draw(st.booleans()) or draw(st.booleans()):
                moves[(q, x)] = (draw(st.sampled_from(states)), y)
    return MealyMachine(alphabet, states, moves, states[0])


@st.composite
def finitary_machines(draw, max_depth=3, alphabet=("0", "1")):
    """Layered machines: layer i feeds layer i+1 or the copying state I."""
    depth = draw(st.integers(0, max_depth))
    states = tuple(f"L{i}" for i in range(depth)) + ("I",)
    moves = {("I", x): ("I", x) for x in alphabet}
    for i in range(depth):
        outs = draw(st.permutations(alphabet))
        for x, y in zip(alphabet, outs):
            if draw(st.integers(0, 3)) == 0:
                continue
            nxt = "I" if i == depth - 1 else draw(st.sampled_from([f"L{i + 1}", "I"]))
            moves[(f"L{i}", x)] = (nxt, y)
    return MealyMachine(alphabet, states, moves, states[0])


def run_by_halves(M, w):
    """Letter-by-letter run consulting transition and output separately."""
    q, out = M.initial, []
    for x in w:
        nxt, y = M.transition(q, x), M.output(q, x)
        if nxt is None or y is None:
            return None
        out.append(y)
        q = nxt
    return "".join(out)


def test_appendix_a_tables():
    assert (A.transition("A", "0"), A.output("A", "0")) == ("D", "1")
    assert (A.transition("C", "0"), A.output("C", "0")) == ("C", "0")
    assert A.transition("D", "1") is None and A.output("D", "1") is None
    assert A.transition("B", "0") is None
    assert A.states == ("A", "B", "C", "D") and A.initial == "A"
    assert len(A.moves) == 6


def test_apply_examples():
    assert apply(A, "11") == "00"
    assert apply(A, "00") == "11"
    assert apply(A, "0001") is None
    assert apply(A, "") == ""
    with pytest.raises(BadAlphabet):
        apply(A, "012")


def test_machine_tables():
    nxt, out = A.tables()
    assert nxt.shape == (4, 2)
    assert nxt[1, 0] == -1 and out[1, 0] == -1
    assert nxt[0, 0] == 3 and out[0, 0] == 1


def test_machine_validation():
    with pytest.raises(BadAlphabet):
        MealyMachine(("0", "01"), ("q",), {}, "q")
    with pytest.raises(BadAlphabet):
        MealyMachine(("0", "1"), ("q",), {("q", "2"): ("q", "0")}, "q")
    with pytest.raises(ValueError):
        MealyMachine(("0", "1"), ("q",), {}, "r")


@settings(max_examples=60, deadline=None)
@given(machines())
def test_apply_is_length_preserving_and_prefix_compatible(M):
    for w in all_words(M.alphabet, 6):
        v = apply(M, w)
        assert v == run_by_halves(M, w)
        if v is None:
            continue
        assert len(v) == len(w)
        for i in range(len(w)):
            assert apply(M, w[:i]) == v[:i]


@settings(max_examples=30, deadline=None)
@given(machines())
def test_level_map_matches_apply(M):
    for m in range(6):
        names = automata.words(M.alphabet, m)
        image = automata.level_map(M, m)
        for i, w in enumerate(names):
            v = apply(M, w)
            assert (image[i] == -1) == (v is None)
            if v is not None:
                assert names[image[i]] == v


def test_level_map_cap():
    with pytest.raises(LengthCapExceeded):
        automata.level_map(A, 12, max_words=2**10)


def test_decompose():
    # 0 -> 1 -> 0 cycle, chain 2 -> 3 -> 4 -> undefined
    on_cycle, comp = automata.decompose(np.array([1, 0, 3, 4, -1]))
    assert on_cycle.tolist() == [True, True, False, False, False]
    assert comp.tolist() == [2, 2, 3, 3, 3]


def test_orbit_report_examples():
    r2 = automata.orbit_report(A, 2)
    assert r2.orbit_of("11") == ("cycle", 2)
    r4 = automata.orbit_report(A, 4)
    assert r4.orbit_of("1111") == ("cycle", 4)
    kind, size = r4.orbit_of("1101")
    assert kind == "chain" and size >= 2
    ident = automata.orbit_report(IDENT, 3)
    assert ident.cycles == (1,) * 8 and ident.chains == () and ident.max_chain == 0
    with pytest.raises(ValueError):
        r2.orbit_of("111")


def test_orbit_report_partitions_points():
    for m in range(1, 9):
        r = automata.orbit_report(A, m)
        assert sum(r.cycles) + sum(r.chains) == 2**m


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_appendix_a_cycle_and_chain_lengths(k):
    r = automata.orbit_report(A, 2 * k)
    assert r.orbit_of("1" * (2 * k)) == ("cycle", 2**k)
    kind, size = automata.orbit_report(A, 2 * k + 2).orbit_of("1" * (2 * k) + "01")
    assert kind == "chain" and size >= 2**k


def test_orbit_report_rejects_non_injective():
    with pytest.raises(NotInjectiveAtLength):
        automata.orbit_report(COLLAPSE, 2)


def test_probe_examples():
    probe = automata.group_bound_probe(IDENT, 6)
    assert probe.bounded_by == 1 and probe.unbounded_evidence is None
    probe = automata.group_bound_probe(A, 12)
    assert probe.bounded_by is None
    assert probe.max_chains == (0, 1, 1, 2, 2, 4, 4, 8, 8, 16, 16, 32)
    for k in range(1, 6):
        assert probe.unbounded_evidence[2 * k + 1] >= 2**k
    with pytest.raises(ValueError):
        automata.group_bound_probe(A, 0)


def test_probe_on_total_finitary_machine():
    l = automata.finitary_bound(SWAP)
    probe = automata.group_bound_probe(SWAP, 8)
    assert probe.bounded_by is not None and probe.bounded_by <= l


DEAD = MealyMachine(("0", "1"), ("q",), {}, "q")


@pytest.mark.parametrize("M, bound", [(IDENT, 0), (A, None), (SWAP, 1), (ODOMETER, None), (DEAD, 1)])
def test_finitary_bound_examples(M, bound):
    assert automata.finitary_bound(M) == bound


def test_compose_examples():
    AA = automata.compose_machines(A, A)
    assert apply(AA, "11") == "11"
    for M in (A, SWAP, ODOMETER):
        MI = automata.compose_machines(M, IDENT)
        for w in all_words("01", 8):
            assert apply(MI, w) == apply(M, w)
    with pytest.raises(AlphabetMismatch):
        automata.compose_machines(A, automata.identity_machine("ab"))


def test_invert_examples():
    assert automata.invert_machine(IDENT) == IDENT
    assert apply(automata.invert_machine(A), "00") == "11"
    with pytest.raises(NotLocallyInjective):
        automata.invert_machine(COLLAPSE)


def test_machine_times_inverse_is_partial_identity():
    P = automata.compose_machines(A, automata.invert_machine(A))
    for w in all_words("01", 8):
        v = apply(P, w)
        assert v == (w if apply(A, w) is not None else None)


@settings(max_examples=40, deadline=None)
@given(machines(), machines())
def test_compose_is_word_level_composition(M1, M2):
    C = automata.compose_machines(M1, M2)
    for w in all_words("01", 8):
        v = apply(M1, w)
        assert apply(C, w) == (None if v is None else apply(M2, v))


@settings(max_examples=40, deadline=None)
@given(machines())
def test_invert_is_word_level_inverse(M):
    inv = automata.invert_machine(M)
    forward = {}
    for w in all_words("01", 8):
        v = apply(M, w)
        if v is not None:
            forward[v] = w
    for v in all_words("01", 8):
        assert apply(inv, v) == forward.get(v)
    assert automata.invert_machine(inv) == M


def test_portrait_examples():
    p = automata.portrait(A, 2)
    assert dict(p.mapping) == {"": "", "0": "1", "1": "0", "00": "11", "11": "00"}
    ident = automata.portrait(IDENT, 3)
    assert all(w == v for w, v in ident.mapping.items()) and len(ident.mapping) == 15


@settings(max_examples=40, deadline=None)
@given(finitary_machines())
def test_portrait_extends_by_identity(M):
    l = automata.finitary_bound(M)
    assert l is not None
    p = automata.portrait(M, l)
    for w in all_words("01", l + 3):
        assert p(w) == apply(M, w)


def test_portrait_validation():
    with pytest.raises(ValueError):
        Portrait(("0", "1"), 2, {"0": "1", "00": "00"})
    with pytest.raises(NotInjectiveAtLength):
        Portrait(("0", "1"), 1, {"0": "0", "1": "0"})
    with pytest.raises(ValueError):
        Portrait(("0", "1"), 1, {"00": "00"})


def test_portrait_algebra():
    p = automata.portrait(SWAP, 2)
    assert p * p == automata.portrait(IDENT, 2)
    q = automata.portrait(A, 2)
    assert q * q.inverse() == Portrait(("0", "1"), 2, {w: w for w in q.mapping})
    assert Portrait.from_vertex_array(("0", "1"), 2, q.vertex_array()) == q
    assert q.truncate(1) == Portrait(("0", "1"), 1, {"0": "1", "1": "0"})


def test_regular_part_portrait():
    q = automata.portrait(A, 2)
    # 0 <-> 1 and 00 <-> 11 are cycles, so the portrait is its own regular part
    assert automata.regular_part_portrait(q) == q
    chain = Portrait(("0", "1"), 1, {"0": "1"})
    assert automata.regular_part_portrait(chain) == Portrait(("0", "1"), 1, {})


@pytest.mark.parametrize("depth, count", [(0, 1), (1, 2), (2, 8), (3, 128)])
def test_tree_automorphisms(depth, count):
    H = automata.tree_automorphisms("01", depth)
    assert len(H) == count
    assert len({row.tobytes() for row in H}) == count
    for row in H:
        p = Portrait.from_vertex_array(("0", "1"), depth, row)
        assert len(p.mapping) == 2 ** (depth + 1) - 1
    with pytest.raises(DepthCapExceeded):
        automata.tree_automorphisms("01", 5)


def test_conjugate_finitary_examples():
    sw, ident = automata.portrait(SWAP, 2), automata.portrait(IDENT, 2)
    assert automata.conjugate_finitary(sw, sw, 2)
    assert not automata.conjugate_finitary(sw, ident, 2)
    empty1 = Portrait(("0", "1"), 2, {})
    empty2 = Portrait(("0", "1"), 2, {"": ""})
    assert automata.conjugate_finitary(empty1, empty2, 2)
    with pytest.raises(DepthCapExceeded):
        automata.conjugate_finitary(sw, sw, 3)


def test_tree_monoid_structure(tree2):
    assert len(tree2) == 127
    flags = structural_checks(tree2)
    assert flags.regular and flags.inverse and flags.factorizable


def test_conjugate_finitary_matches_oracle(tree2):
    labels = conjugacy_classes(tree2).classes
    assert conjugacy_classes(tree2).class_count == 19
    els = tree2.elements
    for a, b in itertools.product(range(len(els)), repeat=2):
        assert automata.conjugate_finitary(els[a], els[b], 2) == (labels[a] == labels[b])


def test_file_format_round_trip(tmp_path):
    for M in (A, IDENT, SWAP, ODOMETER):
        text = automata.dump_machine(M)
        assert automata.parse_machine(text) == M
    path = tmp_path / "m.mealy"
    path.write_text(automata.dump_machine(A))
    assert automata.load_machine(path) == A


def test_file_format_comments_and_errors():
    text = "# adder\nalphabet: 0 1\ninitial: a\na,0 -> b,1  # carry done\na,1 -> a,0\nb,0 -> b,0\nb,1 -> b,1\n"
    M = automata.parse_machine(text)
    assert apply(M, "110") == "001"
    with pytest.raises(ValueError):
        automata.parse_machine("alphabet: 0 1\nq,0 -> q,0\n")
    with pytest.raises(ValueError):
        automata.parse_machine("alphabet: 0 1\ninitial: q\nq,0 q,0\n")
    with pytest.raises(ValueError):
        automata.parse_machine("alphabet: 0 1\ninitial: q\nq,0 -> q,0\nq,0 -> q,1\n")
    with pytest.raises(BadAlphabet):
        automata.parse_machine("alphabet: 0 1\ninitial: q\nq,2 -> q,0\n")
