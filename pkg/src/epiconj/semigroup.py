"""Finite semigroups given by multiplication tables.

Elements are addressed by index; ``table[i, j]`` is the index of the
product of element ``i`` and element ``j``.  Green's relations and the
idempotent-power data are computed lazily and cached on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ClosureCapExceeded, NonAssociative

DEFAULT_CAP = 20000
FULL_ASSOC_LIMIT = 300
ASSOC_SAMPLES = 10**6


def canonical_key(payload: Any) -> Hashable:
    """Hash-index key of a payload: its ``encode()`` bytes when available."""
    encode = getattr(payload, "encode", None)
    if callable(encode) and not isinstance(payload, (str, bytes)):
        return encode()
    return payload


def first_occurrence_labels(keys: np.ndarray) -> np.ndarray:
    """Relabel a key array so class ids appear in order of first element."""
    keys = np.asarray(keys)
    if keys.ndim == 1:
        _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    else:
        _, first, inverse = np.unique(
            keys, axis=0, return_index=True, return_inverse=True
        )
    inverse = inverse.reshape(-1)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return rank[inverse]


def join_components(n: int, src: Iterable[int], dst: Iterable[int]) -> np.ndarray:
    """Connected components of the undirected graph on ``range(n)``.

    Labels are canonical: class ids are numbered by smallest member.
    """
    src = np.asarray(src, dtype=np.int64).reshape(-1)
    dst = np.asarray(dst, dtype=np.int64).reshape(-1)
    graph = coo_matrix(
        (np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n)
    ).tocsr()
    _, labels = connected_components(graph, directed=False)
    return first_occurrence_labels(labels)


def check_associativity(
    table: np.ndarray,
    full_limit: int = FULL_ASSOC_LIMIT,
    samples: int = ASSOC_SAMPLES,
    seed: int = 0,
) -> bool:
    """Full triple check up to ``full_limit`` elements, random triples above."""
    n = len(table)
    if n <= full_limit:
        for i in range(n):
            # (i j) k  versus  i (j k), all j, k at once
            if not np.array_equal(table[table[i]], table[i][table]):
                return False
        return True
    rng = np.random.default_rng(seed)
    i, j, k = rng.integers(0, n, size=(3, samples))
    return bool(np.all(table[table[i, j], k] == table[i, table[j, k]]))


class FiniteSemigroup:
    """An element list together with its multiplication table."""

    def __init__(
        self,
        elements: Sequence[Any],
        table: np.ndarray,
        key: Callable[[Any], Hashable] = canonical_key,
    ):
        table = np.array(table, dtype=np.int32)
        n = len(elements)
        if table.shape != (n, n):
            raise ValueError(f"table shape {table.shape} does not match {n} elements")
        if n and (table.min() < 0 or table.max() >= n):
            raise ValueError("table entries out of range")
        table.setflags(write=False)
        self.elements = tuple(elements)
        self.table = table
        self._key = key
        self._index = {key(x): i for i, x in enumerate(self.elements)}
        self.identity = self._find_identity()
        self.zero = self._find_zero()

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return (
            f"FiniteSemigroup(size={len(self)}, identity={self.identity}, "
            f"zero={self.zero})"
        )

    def index(self, payload: Any) -> int:
        return self._index[self._key(payload)]

    def mul(self, *idx: int) -> int:
        out = idx[0]
        for j in idx[1:]:
            out = int(self.table[out, j])
        return out

    def power(self, a: int, k: int) -> int:
        if k < 1:
            raise ValueError("powers start at 1")
        out = a
        for _ in range(k - 1):
            out = int(self.table[out, a])
        return out

    def _find_identity(self) -> int | None:
        ar = np.arange(len(self))
        left = np.all(self.table == ar[None, :], axis=1)
        right = np.all(self.table == ar[:, None], axis=0)
        hits = np.flatnonzero(left & right)
        return int(hits[0]) if len(hits) else None

    def _find_zero(self) -> int | None:
        n = len(self)
        ar = np.arange(n)
        left = np.all(self.table == ar[:, None], axis=1)
        right = np.all(self.table == ar[None, :], axis=0)
        hits = np.flatnonzero(left & right)
        return int(hits[0]) if len(hits) else None

    @cached_property
    def idempotents(self) -> np.ndarray:
        ar = np.arange(len(self))
        return np.flatnonzero(self.table[ar, ar] == ar)

    @cached_property
    def green(self) -> "GreenStructure":
        return green(self)

    @cached_property
    def profile(self) -> "EpigroupProfile":
        return epigroup_profile(self)


def from_table(table, elements: Sequence[Any] | None = None, check: bool = True):
    """Wrap a raw multiplication table, e.g. a hand-written band or group."""
    table = np.asarray(table)
    if elements is None:
        elements = list(range(len(table)))
    if check and not check_associativity(table):
        raise NonAssociative("table is not associative")
    return FiniteSemigroup(elements, table)


def build_semigroup(
    generators: Iterable[Any],
    multiply: Callable[[Any, Any], Any],
    cap: int = DEFAULT_CAP,
    key: Callable[[Any], Hashable] = canonical_key,
    check: bool = True,
) -> FiniteSemigroup:
    """Close ``generators`` under ``multiply`` and tabulate the result.

    The closure right-multiplies by generators only, recording for every
    new element the (parent, generator) pair that produced it.  Table
    columns are then filled by walking those words through the right
    Cayley graph, so only ``|S| * |generators|`` products are evaluated.
    """
    elements: list[Any] = []
    index: dict[Hashable, int] = {}
    parent: list[int] = []
    via: list[int] = []

    def add(x, p, g):
        k = key(x)
        i = index.get(k)
        if i is None:
            if len(elements) >= cap:
                raise ClosureCapExceeded(f"closure exceeds cap of {cap} elements")
            i = len(elements)
            index[k] = i
            elements.append(x)
            parent.append(p)
            via.append(g)
        return i

    gens: list[Any] = []
    gen_pos: dict[int, int] = {}
    for g in generators:
        i = add(g, -1, -1)
        if i not in gen_pos:
            gen_pos[i] = len(gens)
            gens.append(g)
    if not gens:
        raise ValueError("at least one generator is required")

    cayley: list[list[int]] = []
    i = 0
    while i < len(elements):
        x = elements[i]
        cayley.append([add(multiply(x, g), i, gp) for gp, g in enumerate(gens)])
        i += 1

    n = len(elements)
    right = np.array(cayley, dtype=np.int32)
    table = np.empty((n, n), dtype=np.int32)
    for j in range(n):
        if j in gen_pos:
            table[:, j] = right[:, gen_pos[j]]
        else:
            table[:, j] = right[table[:, parent[j]], via[j]]
    if check:
        # columns were filled through Cayley words, which presumes
        # associativity; compare against direct products before trusting them
        if n * n <= FULL_ASSOC_LIMIT**2:
            pairs = np.ndindex(n, n)
        else:
            rng = np.random.default_rng(0)
            pairs = rng.integers(0, n, size=(4096, 2)).tolist()
        for i, j in pairs:
            if index[key(multiply(elements[i], elements[j]))] != table[i, j]:
                raise NonAssociative("multiplication is not associative on the closure")
        if not check_associativity(table):
            raise NonAssociative("multiplication is not associative on the closure")
    return FiniteSemigroup(elements, table, key=key)


@dataclass(frozen=True, eq=False)
class GreenStructure:
    """Class-id arrays for R, L, H and D, plus the idempotent indices."""

    r_class: np.ndarray
    l_class: np.ndarray
    h_class: np.ndarray
    d_class: np.ndarray
    idempotents: frozenset

    def classes(self, relation: str) -> list[list[int]]:
        labels = getattr(self, f"{relation.lower()}_class")
        out: list[list[int]] = [[] for _ in range(int(labels.max()) + 1)]
        for i, c in enumerate(labels):
            out[c].append(i)
        return out


def green(S: FiniteSemigroup) -> GreenStructure:
    """Green's relations by comparing principal one-sided ideals."""
    n = len(S)
    ar = np.arange(n)
    right_ideals = np.zeros((n, n), dtype=bool)
    right_ideals[ar[:, None], S.table] = True
    right_ideals[ar, ar] = True
    left_ideals = np.zeros((n, n), dtype=bool)
    left_ideals[ar[:, None], S.table.T] = True
    left_ideals[ar, ar] = True
    r = first_occurrence_labels(np.packbits(right_ideals, axis=1))
    l = first_occurrence_labels(np.packbits(left_ideals, axis=1))
    h = first_occurrence_labels(np.stack([r, l], axis=1))
    # D = R o L: join each element to the first member of its R- and L-class
    r_rep = np.unique(r, return_index=True)[1][r]
    l_rep = np.unique(l, return_index=True)[1][l]
    d = join_components(n, np.concatenate([ar, ar]), np.concatenate([r_rep, l_rep]))
    return GreenStructure(
        r_class=r,
        l_class=l,
        h_class=h,
        d_class=d,
        idempotents=frozenset(int(e) for e in S.idempotents),
    )


def is_group_element(S: FiniteSemigroup, a: int) -> bool:
    """True iff ``a`` and ``a*a`` share an H-class."""
    h = S.green.h_class
    return bool(h[a] == h[S.table[a, a]])


def group_elements(S: FiniteSemigroup) -> np.ndarray:
    ar = np.arange(len(S))
    h = S.green.h_class
    return np.flatnonzero(h[ar] == h[S.table[ar, ar]])


@dataclass(frozen=True, eq=False)
class EpigroupProfile:
    """Per-element height, idempotent power ``e_a`` and regular part ``a*e_a``."""

    height: np.ndarray
    idempotent_power: np.ndarray
    regular_part: np.ndarray


def epigroup_profile(S: FiniteSemigroup) -> EpigroupProfile:
    n = len(S)
    h = S.green.h_class
    h_identity = {int(h[e]): int(e) for e in S.idempotents}
    height = np.zeros(n, dtype=np.int32)
    e_power = np.zeros(n, dtype=np.int32)
    for a in range(n):
        p, t = a, 1
        while int(h[p]) not in h_identity:
            p = int(S.table[p, a])
            t += 1
            if t > n + 1:
                raise RuntimeError("no group power found; table is inconsistent")
        height[a] = t
        e_power[a] = h_identity[int(h[p])]
    regular = S.table[np.arange(n), e_power].astype(np.int32)
    return EpigroupProfile(height=height, idempotent_power=e_power, regular_part=regular)
