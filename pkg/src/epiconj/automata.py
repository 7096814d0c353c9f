"""Partial Mealy machines and the length-preserving word maps they induce.

A move ``(q, x) -> (q', y)`` exists only when both the next state and the
output letter are defined; the run on a word dies at the first missing
move.  Letters are single characters and words are plain strings.

Words of a fixed length ``m`` are indexed lexicographically with the
first letter most significant, so the induced map on ``X^m`` becomes an
integer array that can be analysed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from itertools import permutations, product
from math import factorial
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import (
    AlphabetMismatch,
    BadAlphabet,
    DepthCapExceeded,
    LengthCapExceeded,
    NotInjectiveAtLength,
    NotLocallyInjective,
)
from .semigroup import FiniteSemigroup, build_semigroup

MAX_WORDS = 2**22
TREE_CAP = 2**15

Move = tuple[str, str]


@dataclass(frozen=True)
class MealyMachine:
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    moves: Mapping[tuple[str, str], Move]
    initial: str

    def __post_init__(self):
        if any(len(x) != 1 for x in self.alphabet):
            raise BadAlphabet("letters must be single characters")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise BadAlphabet("repeated letter in alphabet")
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} is not a state")
        for (q, x), (r, y) in self.moves.items():
            if q not in self.states or r not in self.states:
                raise ValueError(f"move {q},{x} -> {r},{y} uses an unknown state")
            if x not in self.alphabet or y not in self.alphabet:
                raise BadAlphabet(f"move {q},{x} -> {r},{y} uses an unknown letter")
        object.__setattr__(self, "moves", MappingProxyType(dict(self.moves)))

    def __hash__(self) -> int:
        return hash((self.alphabet, self.states, tuple(sorted(self.moves.items())), self.initial))

    def __eq__(self, other) -> bool:
        return isinstance(other, MealyMachine) and (
            self.alphabet,
            self.states,
            dict(self.moves),
            self.initial,
        ) == (other.alphabet, other.states, dict(other.moves), other.initial)

    def transition(self, q: str, x: str) -> str | None:
        move = self.moves.get((q, x))
        return move[0] if move else None

    def output(self, q: str, x: str) -> str | None:
        move = self.moves.get((q, x))
        return move[1] if move else None

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Next-state and output index tables, ``-1`` where no move exists."""
        s_idx = {q: i for i, q in enumerate(self.states)}
        x_idx = {x: i for i, x in enumerate(self.alphabet)}
        nxt = np.full((len(self.states), len(self.alphabet)), -1, dtype=np.int64)
        out = np.full_like(nxt, -1)
        for (q, x), (r, y) in self.moves.items():
            nxt[s_idx[q], x_idx[x]] = s_idx[r]
            out[s_idx[q], x_idx[x]] = x_idx[y]
        return nxt, out


def _check_word(M: MealyMachine, w: str) -> None:
    bad = set(w) - set(M.alphabet)
    if bad:
        raise BadAlphabet(f"letters {sorted(bad)} not in alphabet {M.alphabet}")


def apply(M: MealyMachine, w: str, state: str | None = None) -> str | None:
    """Run the machine on ``w``; ``None`` if some move on the way is missing."""
    _check_word(M, w)
    q = M.initial if state is None else state
    out = []
    for x in w:
        move = M.moves.get((q, x))
        if move is None:
            return None
        q, y = move
        out.append(y)
    return "".join(out)


def identity_machine(alphabet="01") -> MealyMachine:
    alphabet = tuple(alphabet)
    return MealyMachine(alphabet, ("I",), {("I", x): ("I", x) for x in alphabet}, "I")


def appendix_a_machine() -> MealyMachine:
    """Four-state partial machine over {0,1} whose word map is not group-bound."""
    text = resources.files("epiconj").joinpath("data/appendix_a.mealy").read_text()
    return parse_machine(text)


def parse_machine(text: str) -> MealyMachine:
    """Read the ``state,input -> nextstate,output`` text format."""
    alphabet = None
    initial = None
    states: list[str] = []
    moves: dict[tuple[str, str], Move] = {}

    def note(q):
        if q not in states:
            states.append(q)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line and "->" not in line:
            head, _, rest = line.partition(":")
            head = head.strip().lower()
            if head == "alphabet":
                alphabet = tuple(rest.split())
            elif head == "initial":
                initial = rest.strip()
                note(initial)
            elif head == "states":
                for q in rest.split():
                    note(q)
            else:
                raise ValueError(f"line {lineno}: unknown header {head!r}")
            continue
        lhs, arrow, rhs = line.partition("->")
        if not arrow:
            raise ValueError(f"line {lineno}: expected 'state,input -> nextstate,output'")
        q, x = (s.strip() for s in lhs.split(","))
        r, y = (s.strip() for s in rhs.split(","))
        if (q, x) in moves:
            raise ValueError(f"line {lineno}: duplicate move for ({q},{x})")
        note(q)
        note(r)
        moves[(q, x)] = (r, y)
    if alphabet is None or initial is None:
        raise ValueError("machine file needs 'alphabet:' and 'initial:' headers")
    return MealyMachine(alphabet, tuple(states), moves, initial)


def load_machine(path: str | Path) -> MealyMachine:
    return parse_machine(Path(path).read_text())


def dump_machine(M: MealyMachine) -> str:
    lines = [
        "alphabet: " + " ".join(M.alphabet),
        "initial: " + M.initial,
        "states: " + " ".join(M.states),
    ]
    for q in M.states:
        for x in M.alphabet:
            move = M.moves.get((q, x))
            if move:
                lines.append(f"{q},{x} -> {move[0]},{move[1]}")
    return "\n".join(lines) + "\n"


def words(alphabet, m: int) -> list[str]:
    return ["".join(w) for w in product(alphabet, repeat=m)]


def level_map(M: MealyMachine, m: int, max_words: int = MAX_WORDS) -> np.ndarray:
    """Induced partial map on ``X^m`` as an index array (``-1`` = undefined)."""
    k = len(M.alphabet)
    total = k**m
    if total > max_words:
        raise LengthCapExceeded(f"{k}^{m} words exceeds cap {max_words}")
    nxt, out = M.tables()
    idx = np.arange(total, dtype=np.int64)
    state = np.full(total, M.states.index(M.initial), dtype=np.int64)
    alive = np.ones(total, dtype=bool)
    image = np.zeros(total, dtype=np.int64)
    for i in range(m):
        letter = (idx // k ** (m - 1 - i)) % k
        s = np.where(alive, state, 0)
        y = out[s, letter]
        alive &= y >= 0
        state = nxt[s, letter]
        image = image * k + np.maximum(y, 0)
    return np.where(alive, image, -1)


def _word_index(M: MealyMachine, w: str) -> int:
    out = 0
    for x in w:
        out = out * len(M.alphabet) + M.alphabet.index(x)
    return out


def _check_injective(image: np.ndarray, m: int) -> None:
    defined = image[image >= 0]
    if len(np.unique(defined)) != len(defined):
        raise NotInjectiveAtLength(f"induced map is not injective on words of length {m}")


def decompose(image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a partial injection on ``range(N)`` into cycles and chains.

    Returns per-point arrays: whether the point lies on a cycle, and the
    vertex count of its component.
    """
    n = len(image)
    img = image.tolist()
    has_pre = np.zeros(n, dtype=bool)
    has_pre[image[image >= 0]] = True
    on_cycle = np.zeros(n, dtype=bool)
    comp_len = np.zeros(n, dtype=np.int64)
    seen = bytearray(n)
    for start in np.flatnonzero(~has_pre).tolist():
        path = []
        x = start
        while x >= 0:
            path.append(x)
            seen[x] = 1
            x = img[x]
        comp_len[path] = len(path)
    for start in range(n):
        if seen[start]:
            continue
        path = []
        x = start
        while not seen[x]:
            path.append(x)
            seen[x] = 1
            x = img[x]
        on_cycle[path] = True
        comp_len[path] = len(path)
    return on_cycle, comp_len


@dataclass(frozen=True, eq=False)
class OrbitReport:
    """Cycle/chain decomposition of the induced map on words of one length."""

    length: int
    cycles: tuple[int, ...]
    chains: tuple[int, ...]
    max_chain: int
    alphabet: tuple[str, ...] = field(repr=False)
    on_cycle: np.ndarray = field(repr=False)
    component_length: np.ndarray = field(repr=False)

    def orbit_of(self, word: str) -> tuple[str, int]:
        """``("cycle" | "chain", vertex count)`` for the component holding ``word``."""
        if len(word) != self.length:
            raise ValueError(f"word {word!r} does not have length {self.length}")
        i = 0
        for x in word:
            i = i * len(self.alphabet) + self.alphabet.index(x)
        kind = "cycle" if self.on_cycle[i] else "chain"
        return kind, int(self.component_length[i])


def _component_sizes(on_cycle, comp_len, which: bool) -> tuple[int, ...]:
    # each component of size L contributes L points
    sizes = comp_len[on_cycle == which]
    values, counts = np.unique(sizes, return_counts=True)
    out = []
    for v, c in zip(values.tolist(), counts.tolist()):
        out.extend([v] * (c // v))
    return tuple(out)


def orbit_report(M: MealyMachine, m: int, max_words: int = MAX_WORDS) -> OrbitReport:
    image = level_map(M, m, max_words)
    _check_injective(image, m)
    on_cycle, comp_len = decompose(image)
    chains = _component_sizes(on_cycle, comp_len, False)
    return OrbitReport(
        length=m,
        cycles=_component_sizes(on_cycle, comp_len, True),
        chains=chains,
        max_chain=max(chains, default=0),
        alphabet=M.alphabet,
        on_cycle=on_cycle,
        component_length=comp_len,
    )


@dataclass(frozen=True)
class GroupBoundProbe:
    """Longest chain per word length ``1..max_length``.

    ``bounded_by`` is set when the maxima stop growing within the probe;
    otherwise ``unbounded_evidence`` holds the growth sequence.  Neither is
    a proof: boundedness concerns all lengths.
    """

    max_chains: tuple[int, ...]
    bounded_by: int | None
    unbounded_evidence: tuple[int, ...] | None


def group_bound_probe(M: MealyMachine, max_length: int, max_words: int = MAX_WORDS) -> GroupBoundProbe:
    if max_length < 1:
        raise ValueError("max_length must be positive")
    maxima = tuple(orbit_report(M, m, max_words).max_chain for m in range(1, max_length + 1))
    early = max(maxima[: max(1, max_length // 2)])
    if maxima[-1] > early:
        return GroupBoundProbe(maxima, None, maxima)
    return GroupBoundProbe(maxima, max(1, max(maxima)), None)


def compose_machines(M1: MealyMachine, M2: MealyMachine) -> MealyMachine:
    """Product machine running ``M1`` and feeding its output to ``M2``."""
    if set(M1.alphabet) != set(M2.alphabet):
        raise AlphabetMismatch(f"{M1.alphabet} versus {M2.alphabet}")
    name = lambda q1, q2: f"{q1}|{q2}"  # noqa: E731
    start = (M1.initial, M2.initial)
    order = [start]
    seen = {start}
    moves = {}
    i = 0
    while i < len(order):
        q1, q2 = order[i]
        i += 1
        for x in M1.alphabet:
            m1 = M1.moves.get((q1, x))
            if m1 is None:
                continue
            m2 = M2.moves.get((q2, m1[1]))
            if m2 is None:
                continue
            nxt = (m1[0], m2[0])
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
            moves[(name(q1, q2), x)] = (name(*nxt), m2[1])
    states = tuple(name(*q) for q in order)
    return MealyMachine(M1.alphabet, states, moves, name(*start))


def invert_machine(M: MealyMachine) -> MealyMachine:
    """Swap input and output letters on every move."""
    moves = {}
    for (q, x), (r, y) in M.moves.items():
        if (q, y) in moves:
            raise NotLocallyInjective(f"state {q} outputs {y!r} on two letters")
        moves[(q, y)] = (r, x)
    return MealyMachine(M.alphabet, M.states, moves, M.initial)


def identity_states(M: MealyMachine) -> frozenset[str]:
    """Largest state set whose moves are all defined, copy the input letter and stay inside.

    A state missing a move is excluded: the run would die there, which is
    not the identity beyond any depth.
    """
    keep = {q for q in M.states if all(
        M.output(q, x) == x for x in M.alphabet
    )}
    changed = True
    while changed:
        changed = False
        for (q, _), (r, _) in M.moves.items():
            if q in keep and r not in keep:
                keep.discard(q)
                changed = True
    return frozenset(keep)


def finitary_bound(M: MealyMachine) -> int | None:
    """Least ``l`` such that after ``l`` letters the run only copies its input.

    ``None`` when no such depth exists; a state outside the identity set
    reachable at depth ``>= |Q|`` is reachable at every larger depth.
    """
    ident = identity_states(M)
    level = {M.initial}
    for depth in range(len(M.states) + 1):
        if level <= ident:
            return depth
        level = {M.moves[(q, x)][0] for q in level for x in M.alphabet if (q, x) in M.moves}
    return None


def _vertex_layout(k: int, depth: int) -> list[int]:
    offsets = [0]
    for m in range(depth + 1):
        offsets.append(offsets[-1] + k**m)
    return offsets


@dataclass(frozen=True)
class Portrait:
    """A partial, injective, prefix-compatible, length-preserving map on ``X^{<=depth}``.

    ``mapping`` lists the defined words (the empty word always maps to
    itself).
    """

    alphabet: tuple[str, ...]
    depth: int
    mapping: Mapping[str, str]

    def __post_init__(self):
        mapping = dict(self.mapping)
        mapping.setdefault("", "")
        for w, v in mapping.items():
            if len(w) != len(v) or len(w) > self.depth:
                raise ValueError(f"{w!r} -> {v!r} is not length preserving within depth")
            if w and (w[:-1] not in mapping or mapping[w[:-1]] != v[:-1]):
                raise ValueError(f"{w!r} -> {v!r} is not prefix compatible")
        by_level: dict[int, set[str]] = {}
        for v in mapping.values():
            seen = by_level.setdefault(len(v), set())
            if v in seen:
                raise NotInjectiveAtLength(f"two words map to {v!r}")
            seen.add(v)
        object.__setattr__(self, "mapping", MappingProxyType(mapping))

    def __hash__(self) -> int:
        return hash((self.alphabet, self.depth, tuple(sorted(self.mapping.items()))))

    def __eq__(self, other) -> bool:
        return isinstance(other, Portrait) and (
            self.alphabet, self.depth, dict(self.mapping)
        ) == (other.alphabet, other.depth, dict(other.mapping))

    def encode(self) -> bytes:
        return self.vertex_array().astype(np.int16).tobytes()

    def __call__(self, w: str) -> str | None:
        if len(w) <= self.depth:
            return self.mapping.get(w)
        head = self.mapping.get(w[: self.depth])
        return None if head is None else head + w[self.depth:]

    def __mul__(self, other: "Portrait") -> "Portrait":
        """Apply ``self`` first, then ``other``."""
        if self.alphabet != other.alphabet or self.depth != other.depth:
            raise AlphabetMismatch("portraits differ in alphabet or depth")
        out = {}
        for w, v in self.mapping.items():
            u = other.mapping.get(v)
            if u is not None:
                out[w] = u
        return Portrait(self.alphabet, self.depth, out)

    def inverse(self) -> "Portrait":
        return Portrait(self.alphabet, self.depth, {v: w for w, v in self.mapping.items()})

    def truncate(self, depth: int) -> "Portrait":
        return Portrait(
            self.alphabet, depth, {w: v for w, v in self.mapping.items() if len(w) <= depth}
        )

    def vertex_array(self) -> np.ndarray:
        """Map on tree vertices (by length, then lexicographic) with ``-1`` undefined."""
        k = len(self.alphabet)
        offsets = _vertex_layout(k, self.depth)
        out = np.full(offsets[-1], -1, dtype=np.int64)
        for w, v in self.mapping.items():
            out[offsets[len(w)] + _index(self.alphabet, w)] = offsets[len(v)] + _index(self.alphabet, v)
        return out

    @classmethod
    def from_vertex_array(cls, alphabet, depth: int, arr) -> "Portrait":
        names = [w for m in range(depth + 1) for w in words(alphabet, m)]
        return cls(tuple(alphabet), depth, {names[i]: names[j] for i, j in enumerate(arr) if j >= 0})


def _index(alphabet, w: str) -> int:
    out = 0
    for x in w:
        out = out * len(alphabet) + alphabet.index(x)
    return out


def portrait(M: MealyMachine, depth: int, max_words: int = MAX_WORDS) -> Portrait:
    mapping = {}
    for m in range(depth + 1):
        image = level_map(M, m, max_words)
        _check_injective(image, m)
        names = words(M.alphabet, m)
        for i, j in enumerate(image.tolist()):
            if j >= 0:
                mapping[names[i]] = names[j]
    return Portrait(M.alphabet, depth, mapping)


def regular_part_portrait(f: Portrait) -> Portrait:
    """Restriction to vertices lying on cycles, level by level."""
    arr = f.vertex_array()
    on_cycle, _ = decompose(arr)
    return Portrait.from_vertex_array(f.alphabet, f.depth, np.where(on_cycle, arr, -1))


def tree_automorphisms(alphabet, depth: int, cap: int = TREE_CAP) -> np.ndarray:
    """Every automorphism of the depth-limited tree as a vertex permutation.

    Rows follow a mixed-radix order over the per-vertex letter
    permutations, vertices taken by length then lexicographically.
    """
    k = len(alphabet)
    offsets = _vertex_layout(k, depth)
    internal = offsets[-2] if depth else 0
    count = factorial(k) ** internal
    if count > cap:
        raise DepthCapExceeded(f"{count} tree automorphisms at depth {depth} exceeds cap {cap}")
    perms = np.array(list(permutations(range(k))), dtype=np.int64)
    radix = len(perms)
    idx = np.arange(count, dtype=np.int64)
    H = np.zeros((count, offsets[-1]), dtype=np.int64)
    for m in range(depth):
        for j in range(k**m):
            v = offsets[m] + j
            digit = (idx // radix ** (internal - 1 - v)) % radix
            img_word = H[:, v] - offsets[m]
            for x in range(k):
                child = offsets[m + 1] + j * k + x
                H[:, child] = offsets[m + 1] + img_word * k + perms[digit, x]
    return H


def _tree_conjugates(f_arr: np.ndarray, H: np.ndarray) -> np.ndarray:
    out = np.full(H.shape, -1, dtype=np.int64)
    defined = f_arr >= 0
    rows = np.arange(len(H))[:, None]
    out[rows, H[:, defined]] = H[:, f_arr[defined]]
    return out


def conjugate_finitary(f: Portrait, g: Portrait, search_depth: int, cap: int = TREE_CAP) -> bool:
    """Unit conjugacy of the regular parts, searched over all tree automorphisms."""
    if f.alphabet != g.alphabet:
        raise AlphabetMismatch(f"{f.alphabet} versus {g.alphabet}")
    if search_depth > min(f.depth, g.depth):
        raise DepthCapExceeded("search depth exceeds the portrait depth")
    H = tree_automorphisms(f.alphabet, search_depth, cap)
    rf = regular_part_portrait(f.truncate(search_depth)).vertex_array()
    rg = regular_part_portrait(g.truncate(search_depth)).vertex_array()
    return bool(np.any(np.all(_tree_conjugates(rf, H) == rg, axis=1)))


def _partial_tree_maps(alphabet, depth: int) -> list[dict[str, str]]:
    """All partial tree automorphisms rooted at the empty word, as word maps."""
    if depth == 0:
        return [{"": ""}]
    below = _partial_tree_maps(alphabet, depth - 1)
    out = []
    k = len(alphabet)
    for targets in product([None, *alphabet], repeat=k):
        used = [t for t in targets if t is not None]
        if len(used) != len(set(used)):
            continue
        chosen = [(x, t) for x, t in zip(alphabet, targets) if t is not None]
        for subs in product(below, repeat=len(chosen)):
            m = {"": ""}
            for (x, t), sub in zip(chosen, subs):
                for w, v in sub.items():
                    m[x + w] = t + v
            out.append(m)
    return out


def tree_monoid(alphabet="01", depth: int = 2, cap: int = 20000) -> FiniteSemigroup:
    """The inverse monoid of all depth-``depth`` portraits, tabulated."""
    alphabet = tuple(alphabet)
    elems = [Portrait(alphabet, depth, m) for m in _partial_tree_maps(alphabet, depth)]
    if len(elems) > cap:
        raise DepthCapExceeded(f"{len(elems)} portraits exceeds cap {cap}")
    return build_semigroup(elems, Portrait.__mul__, cap=cap)
