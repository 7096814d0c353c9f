"""Conjugacy relations on a finite semigroup.

``conjugacy_classes`` is the brute-force oracle: one sweep over all
ordered pairs ``(x, y)`` links ``xy`` with ``yx``, and the classes are
the connected components of that graph.  Every criterion in this package
is tested against it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoIdentity,
    NotFactorizable,
    NotGroupElement,
    NotInverse,
    NotRegular,
)
from .semigroup import FiniteSemigroup, is_group_element, join_components


def _memo(S: FiniteSemigroup, name: str, compute):
    cache = S.__dict__.setdefault("_conjugacy_cache", {})
    if name not in cache:
        cache[name] = compute(S)
    return cache[name]


@dataclass(frozen=True, eq=False)
class ConjugacyRelations:
    primary_pairs: frozenset
    classes: np.ndarray
    g_classes: np.ndarray | None

    @property
    def class_count(self) -> int:
        return int(self.classes.max()) + 1 if len(self.classes) else 0

    def same_class(self, a: int, b: int) -> bool:
        return bool(self.classes[a] == self.classes[b])

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.class_count)]
        for i, c in enumerate(self.classes):
            out[c].append(i)
        return out


def _edge_arrays(S: FiniteSemigroup) -> tuple[np.ndarray, np.ndarray]:
    n = len(S)
    xy = S.table.ravel()
    yx = S.table.T.ravel()
    ar = np.arange(n, dtype=S.table.dtype)
    return np.concatenate([xy, ar]), np.concatenate([yx, ar])


def primary_conjugacy_edges(S: FiniteSemigroup) -> frozenset:
    """Unordered pairs ``(min, max)`` with ``a = xy, b = yx``, plus the diagonal."""
    a, b = _edge_arrays(S)
    pairs = np.unique(np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1), axis=0)
    return frozenset(map(tuple, pairs.tolist()))


def unit_group(S: FiniteSemigroup) -> np.ndarray:
    if S.identity is None:
        raise NoIdentity("semigroup has no identity element")
    h = S.green.h_class
    return np.flatnonzero(h == h[S.identity])


def _unit_inverses(S: FiniteSemigroup) -> tuple[np.ndarray, np.ndarray]:
    units = unit_group(S)
    sub = S.table[np.ix_(units, units)]
    inv = units[np.argmax(sub == S.identity, axis=1)]
    return units, inv


def _g_classes(S: FiniteSemigroup) -> np.ndarray:
    units, inv = _unit_inverses(S)
    n = len(S)
    ar = np.arange(n)
    # conj[k, b] = g^-1 b g for the k-th unit g
    conj = S.table[S.table[inv][:, ar], units[:, None]]
    return join_components(n, np.broadcast_to(ar, conj.shape), conj)


def conjugacy_classes(S: FiniteSemigroup) -> ConjugacyRelations:
    def compute(S):
        a, b = _edge_arrays(S)
        classes = join_components(len(S), a, b)
        g = _g_classes(S) if S.identity is not None else None
        return ConjugacyRelations(
            primary_pairs=primary_conjugacy_edges(S), classes=classes, g_classes=g
        )

    return _memo(S, "relations", compute)


def g_conjugacy(S: FiniteSemigroup, a: int, b: int) -> bool:
    """True iff ``a = g^-1 b g`` for some unit ``g``."""
    units, inv = _unit_inverses(S)
    return bool(np.any(S.table[S.table[inv, b], units] == a))


@dataclass(frozen=True)
class Witness:
    u: int
    v: int


def _is_mutually_inverse_witness(S, a, b, u, v) -> bool:
    m = S.mul
    return m(u, v, u) == u and m(v, u, v) == v and m(u, a, v) == b and m(v, b, u) == a


def witness_search(S: FiniteSemigroup, a: int, b: int) -> Witness | None:
    """First ``(u, v)`` in index order with ``uvu=u, vuv=v, b=uav, a=vbu``."""
    for x in (a, b):
        if not is_group_element(S, x):
            raise NotGroupElement(f"element {x} is not a group element")
    T = S.table
    ar = np.arange(len(S))
    uvu = T[T, ar[:, None]]
    vuv = T[T.T, ar[None, :]]
    uav = T[T[:, a], :]
    vbu = T[T[:, b][None, :], ar[:, None]]
    mask = (uvu == ar[:, None]) & (vuv == ar[None, :]) & (uav == b) & (vbu == a)
    hit = np.argmax(mask.ravel())
    if not mask.ravel()[hit]:
        return None
    u, v = divmod(int(hit), len(S))
    return Witness(u, v)


@dataclass(frozen=True)
class StructuralFlags:
    regular: bool
    inverse: bool
    factorizable: bool
    completely_regular: bool
    band: bool


def _regular_mask(S: FiniteSemigroup) -> np.ndarray:
    ar = np.arange(len(S))
    axa = S.table[S.table, ar[:, None]]
    return np.any(axa == ar[:, None], axis=1)


def inverses(S: FiniteSemigroup) -> np.ndarray:
    """Boolean matrix ``M[a, x]``: ``x`` is an inverse of ``a``."""
    ar = np.arange(len(S))
    axa = S.table[S.table, ar[:, None]]
    xax = S.table[S.table.T, ar[None, :]]
    return (axa == ar[:, None]) & (xax == ar[None, :])


def _structural_checks(S: FiniteSemigroup) -> StructuralFlags:
    n = len(S)
    ar = np.arange(n)
    regular = bool(np.all(_regular_mask(S)))
    idem = S.idempotents
    band = len(idem) == n
    h = S.green.h_class
    completely_regular = bool(np.all(h[ar] == h[S.table[ar, ar]]))
    inverse = False
    if regular:
        sub = S.table[np.ix_(idem, idem)]
        inverse = bool(np.array_equal(sub, sub.T))
    factorizable = False
    if inverse and S.identity is not None:
        inv = np.argmax(inverses(S), axis=1)
        units, unit_inv = _unit_inverses(S)
        s_sinv = S.table[ar, inv]
        s_ginv = S.table[ar[:, None], unit_inv[None, :]]
        factorizable = bool(np.all(np.any(s_ginv == s_sinv[:, None], axis=1)))
    return StructuralFlags(
        regular=regular,
        inverse=inverse,
        factorizable=factorizable,
        completely_regular=completely_regular,
        band=band,
    )


def structural_checks(S: FiniteSemigroup) -> StructuralFlags:
    return _memo(S, "flags", _structural_checks)


def conjugate_by_criterion(S: FiniteSemigroup, a: int, b: int) -> bool:
    """Conjugacy in a regular epigroup via a witness for the regular parts."""
    if not structural_checks(S).regular:
        raise NotRegular("semigroup is not regular")
    reg = S.profile.regular_part
    return witness_search(S, int(reg[a]), int(reg[b])) is not None


def conjugate_by_g_criterion(S: FiniteSemigroup, a: int, b: int) -> bool:
    """Conjugacy in a factorizable inverse monoid via unit conjugation of regular parts."""
    flags = structural_checks(S)
    if not flags.inverse:
        raise NotInverse("semigroup is not an inverse semigroup")
    if not flags.factorizable:
        raise NotFactorizable("inverse semigroup is not factorizable")
    reg = S.profile.regular_part
    return g_conjugacy(S, int(reg[a]), int(reg[b]))
