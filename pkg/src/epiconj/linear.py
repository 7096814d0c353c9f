"""Partial linear maps of F_p^n: the PAut, End and PEnd families.

Vectors are rows and maps act on the right, so ``x(fg) = (xf)g`` and a
total map with matrix ``M`` sends ``x`` to ``x @ M``.  Internally a map is
stored as its value table over all ``p**n`` vectors (``-1`` where
undefined); this table is canonical and makes composition a lookup.
The RREF domain and the action matrix are derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import prod

import numpy as np

from .errors import AmbientMismatch, GroupTooLarge, NotInjective
from .semigroup import DEFAULT_CAP, FiniteSemigroup, build_semigroup

FAMILIES = ("PAut", "End", "PEnd")
GL_CAP = 10**6

Matrix = tuple[tuple[int, ...], ...]


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@lru_cache(maxsize=None)
def _space(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """All vectors of F_p^n in index order, and the index weights."""
    if not is_prime(p):
        raise ValueError(f"field size {p} is not prime")
    vecs = np.array(list(product(range(p), repeat=n)), dtype=np.int64).reshape(-1, n)
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return vecs, weights


def vector_index(v, p: int) -> int:
    out = 0
    for c in v:
        out = out * p + int(c) % p
    return out


def rref(rows, p: int, ncols: int) -> Matrix:
    """Reduced row echelon form over F_p, zero rows dropped."""
    m = [[int(c) % p for c in r] for r in rows]
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][col], -1, p)
        m[r] = [(c * inv) % p for c in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r])


def rank(rows, p: int, ncols: int) -> int:
    return len(rref(rows, p, ncols))


@dataclass(frozen=True)
class Subspace:
    n: int
    p: int
    basis: Matrix

    @classmethod
    def span(cls, rows, n: int, p: int) -> "Subspace":
        return cls(n, p, rref(rows, p, n))

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(n, p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(n, p, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def indices(self) -> frozenset[int]:
        return frozenset(_span_indices(self.basis, self.n, self.p).tolist())

    def __contains__(self, v) -> bool:
        return vector_index(v, self.p) in self.indices

    def __le__(self, other: "Subspace") -> bool:
        return self.indices <= other.indices

    def __and__(self, other: "Subspace") -> "Subspace":
        vecs, _ = _space(self.n, self.p)
        common = sorted(self.indices & other.indices)
        return Subspace.span(vecs[common].tolist(), self.n, self.p)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.n, self.p)

    def __str__(self) -> str:
        return format_matrix(self.basis)


def _span_indices(rows, n: int, p: int) -> np.ndarray:
    vecs, weights = _space(n, p)
    k = len(rows)
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    coeffs, _ = _space(k, p)
    combos = (coeffs @ np.array(rows, dtype=np.int64)) % p
    return combos @ weights


class PartialLinearMap:
    """A linear map from a subspace of F_p^n into F_p^n."""

    def __init__(self, n: int, p: int, graph):
        self.n = n
        self.p = p
        self.graph = tuple(int(g) for g in graph)

    @classmethod
    def from_matrices(cls, domain_rows, images, p: int, n: int | None = None) -> "PartialLinearMap":
        """Map sending the i-th domain row to the i-th image row.

        Domain rows must be linearly independent.
        """
        domain_rows = [tuple(int(c) % p for c in r) for r in domain_rows]
        images = [tuple(int(c) % p for c in r) for r in images]
        if n is None:
            n = len((domain_rows or images)[0])
        if len(domain_rows) != len(images):
            raise ValueError("domain basis and images differ in length")
        if rank(domain_rows, p, n) != len(domain_rows):
            raise ValueError("domain rows are not linearly independent")
        vecs, weights = _space(n, p)
        graph = np.full(len(vecs), -1, dtype=np.int64)
        k = len(domain_rows)
        if k == 0:
            graph[0] = 0
        else:
            coeffs, _ = _space(k, p)
            src = ((coeffs @ np.array(domain_rows)) % p) @ weights
            dst = ((coeffs @ np.array(images)) % p) @ weights
            graph[src] = dst
        return cls(n, p, graph)

    @classmethod
    def from_matrix(cls, matrix, p: int) -> "PartialLinearMap":
        n = len(matrix)
        return cls.from_matrices(Subspace.full(n, p).basis, matrix, p, n)

    @classmethod
    def identity_on(cls, subspace: Subspace) -> "PartialLinearMap":
        return cls.from_matrices(subspace.basis, subspace.basis, subspace.p, subspace.n)

    @classmethod
    def parse(cls, text: str, p: int) -> "PartialLinearMap":
        """``dom=<rows>;act=<rows>``, or a bare square matrix for a total map."""
        text = text.replace(" ", "")
        if text.startswith("dom="):
            dom_text, sep, act_text = text[4:].partition(";act=")
            if not sep:
                raise ValueError(f"missing ';act=' in {text!r}")
            dom = parse_matrix(dom_text)
            act = parse_matrix(act_text)
            n = len((dom or act or [[]])[0]) if (dom or act) else None
            if n is None:
                raise ValueError("empty partial map needs an ambient dimension")
            return cls.from_matrices(dom, act, p, n)
        return cls.from_matrix(parse_matrix(text), p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialLinearMap)
            and (self.n, self.p, self.graph) == (other.n, other.p, other.graph)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.p, self.graph))

    def __mul__(self, other: "PartialLinearMap") -> "PartialLinearMap":
        return compose_linear(self, other)

    def encode(self) -> bytes:
        return bytes((self.n, self.p)) + bytes(g + 1 for g in self.graph)

    @cached_property
    def domain(self) -> Subspace:
        vecs, _ = _space(self.n, self.p)
        defined = [i for i, g in enumerate(self.graph) if g >= 0]
        return Subspace.span(vecs[defined].tolist(), self.n, self.p)

    @cached_property
    def action(self) -> Matrix:
        vecs, _ = _space(self.n, self.p)
        return tuple(
            tuple(vecs[self.graph[vector_index(r, self.p)]].tolist())
            for r in self.domain.basis
        )

    @cached_property
    def range(self) -> Subspace:
        return Subspace.span(self.action, self.n, self.p)

    @cached_property
    def kernel(self) -> Subspace:
        vecs, _ = _space(self.n, self.p)
        zeros = [i for i, g in enumerate(self.graph) if g == 0]
        return Subspace.span(vecs[zeros].tolist(), self.n, self.p)

    @property
    def injective(self) -> bool:
        return self.range.dim == self.domain.dim

    @property
    def total(self) -> bool:
        return all(g >= 0 for g in self.graph)

    def __call__(self, v):
        g = self.graph[vector_index(v, self.p)]
        if g < 0:
            return None
        vecs, _ = _space(self.n, self.p)
        return tuple(vecs[g].tolist())

    def restrict(self, subspace: Subspace) -> "PartialLinearMap":
        keep = subspace.indices
        return PartialLinearMap(
            self.n, self.p, (g if i in keep else -1 for i, g in enumerate(self.graph))
        )

    def power(self, k: int) -> "PartialLinearMap":
        out = self
        for _ in range(k - 1):
            out = compose_linear(out, self)
        return out

    def __str__(self) -> str:
        return f"dom={format_matrix(self.domain.basis)};act={format_matrix(self.action)}"

    def __repr__(self) -> str:
        return f"PartialLinearMap(n={self.n}, p={self.p}, {self})"


def parse_matrix(text: str) -> list[list[int]]:
    text = text.strip()
    if not text:
        return []
    return [[int(c) for c in row.split(",")] for row in text.split(";")]


def format_matrix(rows) -> str:
    return ";".join(",".join(str(c) for c in r) for r in rows)


def compose_linear(f: PartialLinearMap, g: PartialLinearMap) -> PartialLinearMap:
    """Apply ``f`` first, then ``g``; defined where ``f(x)`` lies in ``dom g``."""
    if (f.n, f.p) != (g.n, g.p):
        raise AmbientMismatch(f"F_{f.p}^{f.n} versus F_{g.p}^{g.n}")
    gg = g.graph
    return PartialLinearMap(f.n, f.p, (gg[y] if y >= 0 else -1 for y in f.graph))


def stabilization(f: PartialLinearMap) -> tuple[int, Subspace]:
    """Least ``t`` with ``dom f^t = dom f^(t+1)``, and that domain."""
    power = f
    t = 1
    while True:
        nxt = compose_linear(power, f)
        if nxt.domain == power.domain:
            return t, power.domain
        power = nxt
        t += 1


def _is_group_partial_endo(f: PartialLinearMap) -> bool:
    ran, ker, dom = f.range, f.kernel, f.domain
    return ran <= dom and (ran & ker).dim == 0


def is_group_element_linear(f: PartialLinearMap, family: str) -> bool:
    """PAut: ``dom f = ran f``.  End/PEnd: ``dom f = ran f (+) ker f``."""
    if family == "PAut":
        return f.domain == f.range
    if family in ("End", "PEnd"):
        return _is_group_partial_endo(f)
    raise ValueError(f"unknown family {family!r}")


def group_power(f: PartialLinearMap) -> tuple[int, PartialLinearMap]:
    """Least ``t`` with ``f^t`` a group element, and ``f^t`` itself."""
    power, t = f, 1
    while not _is_group_partial_endo(power):
        power = compose_linear(power, f)
        t += 1
    return t, power


def projection(onto: Subspace, along: Subspace) -> PartialLinearMap:
    """Idempotent with domain ``onto (+) along``, image ``onto`` and kernel ``along``."""
    rows = onto.basis + along.basis
    images = onto.basis + tuple((0,) * onto.n for _ in along.basis)
    return PartialLinearMap.from_matrices(rows, images, onto.p, onto.n)


def idempotent_power(f: PartialLinearMap) -> PartialLinearMap:
    """The idempotent ``e_f``: the projection onto ``ran f^t`` along ``ker f^t``."""
    _, ft = group_power(f)
    return projection(ft.range, ft.kernel)


def regular_part_linear(f: PartialLinearMap) -> PartialLinearMap:
    """``f * e_f`` built from the stabilized subspaces.

    For an injective ``f`` this is the restriction of ``f`` to the stable
    domain, an automorphism of that subspace.
    """
    if f.injective:
        _, dom = stabilization(f)
        return f.restrict(dom)
    return compose_linear(f, idempotent_power(f))


def restrict_to_own_range(f: PartialLinearMap) -> PartialLinearMap:
    return f.restrict(f.range)


def gl_order(n: int, p: int) -> int:
    return prod(p**n - p**i for i in range(n))


@lru_cache(maxsize=None)
def general_linear_group(n: int, p: int, cap: int = GL_CAP) -> tuple[Matrix, ...]:
    """All invertible ``n x n`` matrices over F_p, lexicographic by entries."""
    if gl_order(n, p) > cap:
        raise GroupTooLarge(f"|GL({n},{p})| = {gl_order(n, p)} exceeds cap {cap}")
    out = []
    for entries in product(range(p), repeat=n * n):
        m = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if rank(m, p, n) == n:
            out.append(m)
    return tuple(out)


@lru_cache(maxsize=None)
def _gl_vector_action(n: int, p: int, cap: int = GL_CAP) -> np.ndarray:
    """Row ``k`` is the permutation ``x -> x @ U_k`` of vector indices."""
    vecs, weights = _space(n, p)
    mats = np.array(general_linear_group(n, p, cap), dtype=np.int64)
    return ((vecs[None, :, :] @ mats) % p) @ weights


def _conjugates(f: PartialLinearMap, cap: int = GL_CAP) -> np.ndarray:
    """Row ``k`` is the value table of ``U_k^-1 f U_k``."""
    U = _gl_vector_action(f.n, f.p, cap)
    graph = np.array(f.graph, dtype=np.int64)
    defined = graph >= 0
    out = np.full(U.shape, -1, dtype=np.int64)
    rows = np.arange(len(U))[:, None]
    # x U  ->  f(x) U, for every unit U at once
    out[rows, U[:, defined]] = U[:, graph[defined]]
    return out


def gl_conjugator(f: PartialLinearMap, g: PartialLinearMap, cap: int = GL_CAP) -> Matrix | None:
    """First ``U`` in GL order with ``g = U^-1 f U``, or ``None``."""
    if (f.n, f.p) != (g.n, g.p):
        raise AmbientMismatch(f"F_{f.p}^{f.n} versus F_{g.p}^{g.n}")
    hits = np.flatnonzero(np.all(_conjugates(f, cap) == np.array(g.graph), axis=1))
    if not len(hits):
        return None
    return general_linear_group(f.n, f.p, cap)[hits[0]]


def gl_conjugate(f: PartialLinearMap, g: PartialLinearMap, cap: int = GL_CAP) -> bool:
    return gl_conjugator(f, g, cap) is not None


def gl_canonical(f: PartialLinearMap, cap: int = GL_CAP) -> bytes:
    """Lexicographically least value table in the GL-conjugacy orbit of ``f``."""
    conj = (_conjugates(f, cap) + 1).astype(np.uint8)
    return min(row.tobytes() for row in conj)


def conjugate_paut(f: PartialLinearMap, g: PartialLinearMap) -> bool:
    if not (f.injective and g.injective):
        raise NotInjective("both maps must be partial automorphisms")
    return gl_conjugate(regular_part_linear(f), regular_part_linear(g))


def end_invariant(f: PartialLinearMap) -> PartialLinearMap:
    """Regular part of ``f`` restricted to its own range."""
    return restrict_to_own_range(regular_part_linear(f))


def conjugate_end(f: PartialLinearMap, g: PartialLinearMap, family: str = "End") -> bool:
    if family not in ("End", "PEnd"):
        raise ValueError(f"family must be End or PEnd, got {family!r}")
    return gl_conjugate(end_invariant(f), end_invariant(g))


def subspaces(n: int, p: int, dim: int | None = None) -> list[Subspace]:
    """Every subspace of F_p^n as an RREF basis, by dimension then pivots."""
    out = []
    dims = range(n + 1) if dim is None else (dim,)
    for k in dims:
        for pivots in combinations(range(n), k):
            free = [
                (i, j)
                for i, pc in enumerate(pivots)
                for j in range(pc + 1, n)
                if j not in pivots
            ]
            for values in product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = 1
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                out.append(Subspace(n, p, tuple(tuple(r) for r in rows)))
    return out


def elements_linear(family: str, n: int, p: int) -> list[PartialLinearMap]:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    domains = [Subspace.full(n, p)] if family == "End" else subspaces(n, p)
    out = []
    for dom in domains:
        k = dom.dim
        for entries in product(range(p), repeat=k * n):
            images = [entries[i * n:(i + 1) * n] for i in range(k)]
            if family == "PAut" and rank(images, p, n) != k:
                continue
            out.append(PartialLinearMap.from_matrices(dom.basis, images, p, n))
    return out


def enumerate_linear(family: str, n: int, p: int, cap: int = DEFAULT_CAP) -> FiniteSemigroup:
    return build_semigroup(elements_linear(family, n, p), compose_linear, cap=cap)


def subspace_count(n: int, k: int, p: int) -> int:
    """Gaussian binomial coefficient: number of k-dim subspaces of F_p^n."""
    num = prod(p**n - p**i for i in range(k))
    den = prod(p**k - p**i for i in range(k))
    return num // den


def paut_size(n: int, p: int) -> int:
    """Sum over k of (#k-subspaces)^2 * |GL(k, p)|."""
    return sum(subspace_count(n, k, p) ** 2 * gl_order(k, p) for k in range(n + 1))
