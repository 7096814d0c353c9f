"""Family registry, class reports and oracle-versus-criterion audits."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from . import linear, transform
from .conjugacy import conjugacy_classes, structural_checks
from .semigroup import DEFAULT_CAP, FiniteSemigroup

SCHEMA = 1
TRANSFORM_FAMILIES = transform.FAMILIES
LINEAR_FAMILIES = linear.FAMILIES
ALL_FAMILIES = TRANSFORM_FAMILIES + LINEAR_FAMILIES


def thread_count() -> int:
    raw = os.environ.get("EPICONJ_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"EPICONJ_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"EPICONJ_THREADS must be a positive integer, got {raw!r}")
    return value


def build_family(family: str, n: int, field_size: int = 2, cap: int = DEFAULT_CAP) -> FiniteSemigroup:
    if family in TRANSFORM_FAMILIES:
        return transform.enumerate_family(family, n, cap=cap)
    if family in LINEAR_FAMILIES:
        return linear.enumerate_linear(family, n, field_size, cap=cap)
    raise ValueError(f"unknown family {family!r}; expected one of {ALL_FAMILIES}")


def family_params(family: str, n: int, field_size: int) -> dict[str, int]:
    if family in LINEAR_FAMILIES:
        return {"n": n, "field": field_size}
    return {"n": n}


def _gl_signature(f: linear.PartialLinearMap) -> str:
    dim = f.domain.dim
    order, power = 1, f
    ident = linear.PartialLinearMap.identity_on(f.domain)
    while power != ident:
        power = linear.compose_linear(power, f)
        order += 1
    fixed = sum(1 for i, g in enumerate(f.graph) if g == i)
    return f"dim={dim},order={order},fixed={fixed}"


@dataclass(frozen=True)
class FamilyCriterion:
    """A per-element key whose equality is the family's conjugacy criterion."""

    name: str
    key: Callable[[Any], Any]
    signature: Callable[[Any], str]


def criteria_for(family: str) -> list[FamilyCriterion]:
    """The criteria audited by ``check`` for each family, main criterion first."""
    if family == "IS":
        return [
            FamilyCriterion(
                "cyclic-type",
                transform.cyclic_type,
                lambda p: f"cycles={list(transform.cyclic_type(p))}",
            ),
            FamilyCriterion(
                "unit-conjugacy-of-regular-parts",
                lambda p: transform.g_conjugate_key(transform.regular_part(p)),
                lambda p: f"cycles={list(transform.cyclic_type(p))}",
            ),
        ]
    if family in ("T", "PT"):
        return [
            FamilyCriterion(
                "cyclic-type",
                transform.cyclic_type,
                lambda p: f"cycles={list(transform.cyclic_type(p))}",
            )
        ]
    if family == "PAut":
        return [
            FamilyCriterion(
                "gl-conjugacy-of-regular-parts",
                lambda f: linear.gl_canonical(linear.regular_part_linear(f)),
                lambda f: _gl_signature(linear.regular_part_linear(f)),
            )
        ]
    if family in ("End", "PEnd"):
        return [
            FamilyCriterion(
                "gl-conjugacy-of-range-restricted-regular-parts",
                lambda f: linear.gl_canonical(linear.end_invariant(f)),
                lambda f: _gl_signature(linear.end_invariant(f)),
            )
        ]
    raise ValueError(f"unknown family {family!r}")


def element_keys(S: FiniteSemigroup, key: Callable[[Any], Any], threads: int = 1) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(key, S.elements))
    return [key(x) for x in S.elements]


@dataclass
class Audit:
    criterion: str
    pairs: int
    agreement: bool
    counterexample: list[str] | None = None


def audit_criterion(S: FiniteSemigroup, crit: FamilyCriterion, threads: int = 1) -> Audit:
    """Compare the criterion with the oracle on every ordered pair."""
    keys = element_keys(S, crit.key, threads)
    key_ids = np.unique(np.array([repr(k) for k in keys]), return_inverse=True)[1]
    oracle = conjugacy_classes(S).classes
    same_key = key_ids[:, None] == key_ids[None, :]
    same_class = oracle[:, None] == oracle[None, :]
    bad = np.argwhere(same_key != same_class)
    n = len(S)
    if len(bad):
        a, b = bad[0]
        return Audit(crit.name, n * n, False, [str(S.elements[a]), str(S.elements[b])])
    return Audit(crit.name, n * n, True, None)


@dataclass
class ClassEntry:
    representative: str
    size: int
    signature: str


@dataclass
class ConjugacyReport:
    family: str
    params: dict[str, int]
    size: int
    class_count: int
    classes: list[ClassEntry] = field(default_factory=list)
    audit: list[Audit] | None = None
    flags: dict[str, bool] | None = None
    timing: float = 0.0
    schema: int = SCHEMA

    def __post_init__(self):
        if sum(c.size for c in self.classes) != self.size:
            raise ValueError("class sizes do not add up to the semigroup size")
        for a in self.audit or []:
            if not a.agreement and a.counterexample is None:
                raise ValueError("a failed audit must carry a counterexample")

    @property
    def agreement(self) -> bool | None:
        if self.audit is None:
            return None
        return all(a.agreement for a in self.audit)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ConjugacyReport":
        data = dict(data)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        data["classes"] = [ClassEntry(**c) for c in data["classes"]]
        if data.get("audit") is not None:
            data["audit"] = [Audit(**a) for a in data["audit"]]
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConjugacyReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        params = ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        if self.audit is not None:
            w.writerow(["schema", "family", "params", "criterion", "pairs", "agreement", "counterexample"])
            for a in self.audit:
                cx = "" if a.counterexample is None else " vs ".join(a.counterexample)
                w.writerow([self.schema, self.family, params, a.criterion, a.pairs, a.agreement, cx])
        else:
            w.writerow(["schema", "family", "params", "class", "representative", "size", "signature"])
            for i, c in enumerate(self.classes):
                w.writerow([self.schema, self.family, params, i, c.representative, c.size, c.signature])
        return buf.getvalue()


def classes_report(
    family: str,
    n: int,
    field_size: int = 2,
    cap: int = DEFAULT_CAP,
    audit: bool = False,
    threads: int = 1,
) -> ConjugacyReport:
    """Enumerate a family, run the oracle, label classes; optionally audit criteria."""
    start = time.perf_counter()
    S = build_family(family, n, field_size, cap)
    rel = conjugacy_classes(S)
    crits = criteria_for(family)
    entries = [
        ClassEntry(str(S.elements[m[0]]), len(m), crits[0].signature(S.elements[m[0]]))
        for m in rel.members()
    ]
    audits = [audit_criterion(S, c, threads) for c in crits] if audit else None
    flags = asdict(structural_checks(S))
    return ConjugacyReport(
        family=family,
        params=family_params(family, n, field_size),
        size=len(S),
        class_count=rel.class_count,
        classes=entries,
        audit=audits,
        flags=flags,
        timing=round(time.perf_counter() - start, 6),
    )


def eggbox(S: FiniteSemigroup) -> list[dict]:
    """D-classes as grids of H-classes: rows are R-classes, columns L-classes."""
    g = S.green
    out = []
    for d_members in g.classes("D"):
        rs = sorted({int(g.r_class[i]) for i in d_members})
        ls = sorted({int(g.l_class[i]) for i in d_members})
        grid = [[[] for _ in ls] for _ in rs]
        for i in d_members:
            grid[rs.index(int(g.r_class[i]))][ls.index(int(g.l_class[i]))].append(i)
        cells = [
            [
                {"elements": [str(S.elements[i]) for i in cell], "group": any(i in g.idempotents for i in cell)}
                for cell in row
            ]
            for row in grid
        ]
        out.append({"size": len(d_members), "rows": len(rs), "cols": len(ls), "cells": cells})
    return out


def format_eggbox(boxes: list[dict]) -> str:
    lines = []
    for k, box in enumerate(boxes):
        lines.append(f"D-class {k}: {box['size']} elements, {box['rows']} R x {box['cols']} L")
        for row in box["cells"]:
            cells = []
            for cell in row:
                mark = "*" if cell["group"] else " "
                cells.append(f"{mark}{' '.join(cell['elements'])}")
            lines.append("  | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
