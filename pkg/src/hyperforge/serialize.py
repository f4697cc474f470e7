"""JSON interchange for structures.

Schema::

    {"name": str, "kind": str (optional), "elements": [str], "zero": str, "one": str,
     "neg": {elt: elt}, "add": {"a|b": [elts]}, "mul": {"a|b": [elts]}}

Cells missing from ``add``/``mul`` are filled from the symmetric cell.  A cell
that is empty (or missing on both sides) is a totality violation.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import catalog
from .core import KINDS, Report, Structure, StructureError, check_axioms


class LoadViolation(StructureError):
    """The file parsed but describes an invalid structure."""

    def __init__(self, report: Report, message: str):
        super().__init__(message)
        self.report = report


def to_dict(S: Structure) -> dict:
    n = S.names
    cells = {}
    for label, T in (("add", S.add), ("mul", S.mul)):
        cells[label] = {f"{n[a]}|{n[b]}": [n[c] for c in np.flatnonzero(T[a, b])]
                        for a in range(S.size) for b in range(S.size)}
    return {
        "name": S.name,
        "kind": S.kind,
        "elements": list(n),
        "zero": n[S.zero],
        "one": n[S.one],
        "neg": {n[a]: n[int(S.neg[a])] for a in range(S.size)},
        "add": cells["add"],
        "mul": cells["mul"],
    }


def dumps(payload) -> str:
    """Canonical JSON text: sorted keys, fixed separators."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def from_dict(data: dict) -> Structure:
    try:
        names = [str(x) for x in data["elements"]]
        zero, one = data["zero"], data["one"]
        neg_map = data["neg"]
        add_cells, mul_cells = data["add"], data["mul"]
    except (KeyError, TypeError) as exc:
        raise StructureError(f"structure JSON lacks field {exc}") from None
    pos = {x: i for i, x in enumerate(names)}
    if len(pos) != len(names):
        raise StructureError("duplicate element names")

    def idx(x):
        if x not in pos:
            raise StructureError(f"unknown element {x!r}")
        return pos[x]

    n = len(names)
    rep = Report()
    tables = []
    for label, cells in (("add", add_cells), ("mul", mul_cells)):
        T = np.zeros((n, n, n), dtype=np.bool_)
        given = np.zeros((n, n), dtype=np.bool_)
        for key, vals in cells.items():
            parts = key.split("|")
            if len(parts) != 2:
                raise StructureError(f"bad cell key {key!r}")
            a, b = idx(parts[0]), idx(parts[1])
            given[a, b] = True
            for v in vals:
                T[a, b, idx(v)] = True
        for a in range(n):
            for b in range(n):
                if not given[a, b] and given[b, a]:
                    T[a, b] = T[b, a]
        empty = np.argwhere(~T.any(axis=2))
        if len(empty):
            a, b = (int(v) for v in empty[0])
            rep.add(f"{label}.totality", (names[a], names[b]))
        tables.append(T)
    if not rep.passed:
        raise LoadViolation(rep, f"empty cell in {rep.violations[0][0]} at {rep.violations[0][1]}")
    neg = [idx(neg_map[x]) if x in neg_map else -1 for x in names]
    if -1 in neg:
        raise StructureError(f"neg is missing element {names[neg.index(-1)]!r}")
    kind = data.get("kind", "superring")
    if kind not in KINDS:
        raise StructureError(f"unknown kind {kind!r}")
    return Structure(names, tables[0], tables[1], neg, zero=idx(zero), one=idx(one),
                     name=str(data.get("name", "")), kind=kind)


def load_structure(ref: str, verify: bool = True) -> Structure:
    """``catalog:<name>`` or a path to a structure JSON file."""
    if ref.lower().startswith("catalog:"):
        S = catalog.by_name(ref)
    else:
        path = Path(ref)
        try:
            text = path.read_text()
        except OSError as exc:
            raise StructureError(f"cannot read {ref}: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructureError(f"malformed JSON in {ref}: {exc}") from None
        S = from_dict(data)
    if verify:
        rep = check_axioms(S, S.kind)
        if not rep.passed:
            axiom, w = rep.violations[0]
            raise LoadViolation(rep, f"{S.name or ref} fails {S.kind} axiom {axiom} at {w}")
    return S


def digest(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(dumps(p).encode())
    return h.hexdigest()[:16]
