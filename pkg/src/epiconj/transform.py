"""Partial transformations of {1..n}: the IS_n, T_n and PT_n families.

Maps act on the right and compose left to right: ``x(p*q) = q(p(x))``.
An image value of 0 marks an undefined point, which is also the CLI
notation (``[2,0,1]`` sends 1 to 2, leaves 2 undefined, sends 3 to 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product, combinations

from .errors import NotGroupElement, NotInjective, SizeMismatch
from .semigroup import DEFAULT_CAP, FiniteSemigroup, build_semigroup

FAMILIES = ("IS", "T", "PT")


@dataclass(frozen=True)
class PartialTransformation:
    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        if n < 1:
            raise ValueError("ground set must be non-empty")
        if any(not 0 <= y <= n for y in self.image):
            raise ValueError(f"image values must lie in 0..{n}: {self.image}")

    @classmethod
    def parse(cls, text: str) -> "PartialTransformation":
        return cls(tuple(json.loads(text)))

    @classmethod
    def identity(cls, n: int) -> "PartialTransformation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[int, int]) -> "PartialTransformation":
        return cls(tuple(mapping.get(x, 0) for x in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.image)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self.image, 1) if y)

    @property
    def range(self) -> frozenset[int]:
        return frozenset(y for y in self.image if y)

    @property
    def injective(self) -> bool:
        defined = [y for y in self.image if y]
        return len(defined) == len(set(defined))

    @property
    def total(self) -> bool:
        return all(self.image)

    def __call__(self, x: int) -> int | None:
        return self.image[x - 1] or None

    def __mul__(self, other: "PartialTransformation") -> "PartialTransformation":
        return compose(self, other)

    def encode(self) -> bytes:
        return bytes((self.n, *self.image))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.image)) + "]"

    def inverse(self) -> "PartialTransformation":
        if not self.injective:
            raise NotInjective(f"{self} is not injective")
        back = {y: x for x, y in enumerate(self.image, 1) if y}
        return PartialTransformation.from_mapping(self.n, back)


def compose(p: PartialTransformation, q: PartialTransformation) -> PartialTransformation:
    """Apply ``p`` first, then ``q``."""
    if p.n != q.n:
        raise SizeMismatch(f"cannot compose maps on {p.n} and {q.n} points")
    qi = q.image
    return PartialTransformation(tuple(qi[y - 1] if y else 0 for y in p.image))


@dataclass(frozen=True)
class ActionGraph:
    """Cycle and chain data of the functional graph of a partial map.

    ``chains`` holds vertex counts and is ``None`` for non-injective maps.
    ``components`` lists the vertex sets of the weakly connected components.
    """

    cycles: tuple[int, ...]
    chains: tuple[int, ...] | None
    components: tuple[tuple[int, ...], ...]

    @property
    def cyclic_type(self) -> tuple[int, ...]:
        return self.cycles


def _cycle_points(p: PartialTransformation) -> list[list[int]]:
    seen: set[int] = set()
    cycles = []
    for start in range(1, p.n + 1):
        if start in seen:
            continue
        path: dict[int, int] = {}
        x = start
        while x and x not in seen and x not in path:
            path[x] = len(path)
            x = p.image[x - 1]
        if x and x in path:
            cycle = list(path)[path[x]:]
            cycles.append(cycle)
        seen.update(path)
    return cycles


def action_graph(p: PartialTransformation) -> ActionGraph:
    n = p.n
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in enumerate(p.image, 1):
        if y:
            parent[find(x)] = find(y)
    comps: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        comps.setdefault(find(x), []).append(x)
    components = tuple(tuple(c) for c in comps.values())
    cycles = _cycle_points(p)
    chains = None
    if p.injective:
        on_cycle = {x for c in cycles for x in c}
        chains = tuple(sorted(len(c) for c in components if c[0] not in on_cycle))
    return ActionGraph(
        cycles=tuple(sorted(len(c) for c in cycles)),
        chains=chains,
        components=components,
    )


def cyclic_type(p: PartialTransformation) -> tuple[int, ...]:
    return tuple(sorted(len(c) for c in _cycle_points(p)))


def chain_type(p: PartialTransformation) -> tuple[int, ...]:
    chains = action_graph(p).chains
    if chains is None:
        raise NotInjective("chain type is only defined for injective maps")
    return chains


def stable_range(p: PartialTransformation) -> frozenset[int]:
    """Points lying on cycles of the graph of action."""
    return frozenset(x for c in _cycle_points(p) for x in c)


def _kernel_blocks(p: PartialTransformation) -> dict[int, set[int]]:
    blocks: dict[int, set[int]] = {}
    for x, y in enumerate(p.image, 1):
        if y:
            blocks.setdefault(y, set()).add(x)
    return blocks


def is_group_element_direct(p: PartialTransformation, family: str) -> bool:
    """Group-element test read off the map itself, no table needed.

    IS: every chain is a single vertex.  T/PT: the range is a transversal
    of the kernel, i.e. each kernel block holds exactly one range point.
    """
    if family == "IS":
        return all(c == 1 for c in chain_type(p))
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    ran = p.range
    return all(len(block & ran) == 1 for block in _kernel_blocks(p).values())


def restrict_to_range(p: PartialTransformation, family: str = "PT") -> PartialTransformation:
    """The permutation of ``ran p`` induced by a group element ``p``."""
    if not is_group_element_direct(p, family):
        raise NotGroupElement(f"{p} is not a group element of {family}_{p.n}")
    ran = p.range
    return PartialTransformation(
        tuple(y if x in ran else 0 for x, y in enumerate(p.image, 1))
    )


def regular_part_types(p: PartialTransformation) -> tuple[tuple[int, ...], tuple[int, ...] | None]:
    """Cyclic and chain types predicted for ``p * e_p``.

    The cycles survive unchanged; for injective ``p`` every other point
    becomes a one-vertex chain.  Chain type is ``None`` when ``p`` is not
    injective.
    """
    cycles = cyclic_type(p)
    if not p.injective:
        return cycles, None
    return cycles, (1,) * (p.n - sum(cycles))


def idempotent_power(p: PartialTransformation) -> PartialTransformation:
    """The unique idempotent among the powers of ``p``."""
    powers = [p]
    seen = {p: 0}
    while True:
        nxt = compose(powers[-1], p)
        if nxt in seen:
            break
        seen[nxt] = len(powers)
        powers.append(nxt)
    index, period = seen[nxt], len(powers) - seen[nxt]
    # smallest multiple of the period inside the cyclic part (0-based exponent j means p^(j+1))
    j = next(j for j in range(index, index + period) if (j + 1) % period == 0)
    return powers[j]


def regular_part(p: PartialTransformation) -> PartialTransformation:
    """``p * e_p`` computed from the map alone.

    For a partial permutation this is ``p`` restricted to its stable range.
    """
    if p.injective:
        stran = stable_range(p)
        return PartialTransformation(
            tuple(y if x in stran else 0 for x, y in enumerate(p.image, 1))
        )
    return compose(p, idempotent_power(p))


def conjugate_by_type(p: PartialTransformation, q: PartialTransformation, family: str = "PT") -> bool:
    if p.n != q.n:
        raise SizeMismatch("maps act on different ground sets")
    return cyclic_type(p) == cyclic_type(q)


def g_conjugate_by_type(p: PartialTransformation, q: PartialTransformation) -> bool:
    """Conjugacy under the symmetric group, for partial permutations."""
    if not (p.injective and q.injective):
        raise NotInjective("both maps must be partial permutations")
    if p.n != q.n:
        raise SizeMismatch("maps act on different ground sets")
    return cyclic_type(p) == cyclic_type(q) and chain_type(p) == chain_type(q)


def g_conjugate_key(p: PartialTransformation) -> tuple:
    """Key whose equality is conjugacy under the symmetric group."""
    return cyclic_type(p), chain_type(p)


def elements(family: str, n: int) -> list[PartialTransformation]:
    """All members of the family, in lexicographic order of image tuples."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    values = range(0 if family != "T" else 1, n + 1)
    out = []
    for image in product(values, repeat=n):
        if family == "IS":
            defined = [y for y in image if y]
            if len(defined) != len(set(defined)):
                continue
        out.append(PartialTransformation(image))
    return out


def enumerate_family(family: str, n: int, cap: int = DEFAULT_CAP) -> FiniteSemigroup:
    """Materialize ``family``_n as a tabulated semigroup."""
    return build_semigroup(elements(family, n), compose, cap=cap)


def family_size(family: str, n: int) -> int:
    """Closed-form sizes: |IS_n| = sum C(n,k)^2 k!, |T_n| = n^n, |PT_n| = (n+1)^n."""
    from math import comb, factorial

    if family == "IS":
        return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
    if family == "T":
        return n**n
    if family == "PT":
        return (n + 1) ** n
    raise ValueError(f"unknown family {family!r}")


def symmetric_group(n: int) -> list[PartialTransformation]:
    return [PartialTransformation(p) for p in permutations(range(1, n + 1))]


def partial_identities(n: int) -> list[PartialTransformation]:
    out = []
    for k in range(n + 1):
        for dom in combinations(range(1, n + 1), k):
            out.append(PartialTransformation.from_mapping(n, {x: x for x in dom}))
    return out
