"""Quadratic forms over special hyperfields.

Forms are tuples of nonzero element indices.  Binary isometry is
``<a,b> == <c,d>`` iff ``ab = cd`` and ``ac`` lies in ``1 + cd``; longer forms
are isometric when a chain of binary replacements (and reorderings) connects
them.  The special-group axioms checked by :func:`classify_hyperfield` are

* SG0  binary isometry is an equivalence relation
* SG1  <a,b> == <b,a>
* SG2  <a,-a> == <1,-1>
* SG3  <a,b> == <c,d>  implies  ab = cd
* SG4  <a,b> == <c,d>  implies  <a,-c> == <-b,d>
* SG5  <a,b> == <c,d>  implies  <ea,eb> == <ec,ed>
* SG6  ternary isometry is transitive, where <a1,a2,a3> == <b1,b2,b3> iff some
  x, y, z give <a1,x> == <b1,y>, <a2,a3> == <x,z> and <b2,b3> == <y,z>
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Structure, StructureError, check_axioms, fold, fold_sets

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(StructureError):
    """A search ran out of its state budget."""


def budget() -> int:
    raw = os.environ.get("HYPERFORGE_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        val = int(float(raw))
    except ValueError:
        raise StructureError(f"HYPERFORGE_BUDGET must be a number, got {raw!r}") from None
    if val < 1:
        raise StructureError("HYPERFORGE_BUDGET must be positive")
    return val


class _Group:
    """Multiplicative group of a pre-special hyperfield with the binary
    isometry relation, all on group positions ``0..g-1``."""

    def __init__(self, F: Structure):
        if not F.is_mul_single_valued():
            raise StructureError(f"{F.name} is not a hyperfield (set-valued products)")
        self.F = F
        self.elems = np.array(F.nonzero(), dtype=np.int64)
        g = len(self.elems)
        self.g = g
        self.pos = -np.ones(F.size, dtype=np.int64)
        self.pos[self.elems] = np.arange(g)
        table = F.mul_table()
        self.mul = self.pos[table[np.ix_(self.elems, self.elems)]]
        if (self.mul < 0).any():
            raise StructureError(f"{F.name} has zero divisors")
        self.neg = self.pos[F.neg[self.elems]]
        self.one = int(self.pos[F.one])
        # one_plus[x] = positions in 1 + x (nonzero part)
        plus = F.add[F.one][self.elems][:, self.elems]
        ij = self.mul
        # iso[i, j, k]:  <i, j> == <k, ijk>  iff  ik in 1 + ij
        self.iso = np.zeros((g, g, g), dtype=np.bool_)
        for i in range(g):
            for j in range(g):
                self.iso[i, j] = plus[ij[i, j]][self.mul[i]]

    def binary(self, i, j, k, l) -> bool:
        return self.mul[i, j] == self.mul[k, l] and bool(self.iso[i, j, k])

    def counts(self, form) -> np.ndarray:
        c = np.zeros(self.g, dtype=np.int64)
        for x in form:
            c[self.pos[x]] += 1
        return c


_GROUPS: dict = {}


def group(F: Structure) -> _Group:
    key = id(F)
    hit = _GROUPS.get(key)
    if hit is None or hit.F is not F:
        hit = _Group(F)
        _GROUPS[key] = hit
    return hit


def as_form(F: Structure, entries) -> tuple:
    out = tuple(F.index(x) for x in entries)
    if F.zero in out:
        raise StructureError("forms take nonzero entries only")
    return out


def parse_form(F: Structure, text: str) -> tuple:
    items = [t.strip() for t in text.strip().strip("<>").split(",") if t.strip()]
    return as_form(F, items)


def format_form(F: Structure, form) -> str:
    return "<" + ",".join(F.names[x] for x in form) + ">"


def value_set(F: Structure, form) -> frozenset:
    """D(form): the sum of the entries, without 0.  Empty form gives the empty set."""
    form = as_form(F, form)
    if not form:
        return frozenset()
    return fold(F, "sum", form) - {F.zero}


def binary_isometric(F: Structure, a, b, c, d) -> bool:
    a, b, c, d = (F.index(x) for x in (a, b, c, d))
    G = group(F)
    p = G.pos
    return G.binary(p[a], p[b], p[c], p[d])


def scale(F: Structure, e, form) -> tuple:
    e = F.index(e)
    return tuple(int(F.mul_table()[e, x]) for x in form)


def negate(F: Structure, form) -> tuple:
    return tuple(int(F.neg[x]) for x in form)


def isometric(F: Structure, phi, psi, max_states: int | None = None) -> bool:
    """Chain isometry, decided by breadth-first search over multisets."""
    phi, psi = as_form(F, phi), as_form(F, psi)
    if len(phi) != len(psi):
        raise StructureError("isometry needs forms of equal dimension")
    if len(phi) == 0:
        return True
    if len(phi) == 1:
        return phi == psi
    G = group(F)
    if len(phi) == 2:
        p = G.pos
        return G.binary(p[phi[0]], p[phi[1]], p[psi[0]], p[psi[1]])
    a, b = G.counts(phi), G.counts(psi)
    if (a == b).all():
        return True
    limit = budget() if max_states is None else max_states
    found, _, _, over = _kernels.bfs_forms(a, G.mul, G.iso, G.neg, 0,
                                           _kernels.multiset_key(b, len(phi) + 1), limit)
    if over:
        raise BudgetExceeded(f"isometry search exceeded {limit} states")
    return found


def isotropic_bfs(F: Structure, phi, max_states: int | None = None) -> bool:
    """Some isometric form contains a pair x, -x."""
    phi = as_form(F, phi)
    if len(phi) < 2:
        return False
    G = group(F)
    limit = budget() if max_states is None else max_states
    found, _, _, over = _kernels.bfs_forms(G.counts(phi), G.mul, G.iso, G.neg, 1, 0, limit)
    if over:
        raise BudgetExceeded(f"isotropy search exceeded {limit} states")
    return found


def is_isotropic(F: Structure, phi) -> bool:
    """0 lies in the sum of the entries."""
    phi = as_form(F, phi)
    return len(phi) >= 2 and F.zero in fold(F, "sum", phi)


def state_count(F: Structure, dim: int) -> int:
    """Number of multisets of size ``dim`` over the nonzero elements."""
    from math import comb
    g = len(F.nonzero())
    return comb(g + dim - 1, dim)


# ---------------------------------------------------------------- representation

def represent(F: Structure, x: int, form) -> tuple:
    """An isometric copy of ``form`` whose first entry is ``x``, for ``x`` in D(form).

    Built by peeling entries: ``x in b1 + y`` with ``y`` in the sum of the
    remaining entries, then ``<b1, y> == <x, b1*y*x>``.  Each binary step is
    checked against the isometry relation.
    """
    form = tuple(form)
    if not form:
        raise StructureError("empty form represents nothing")
    b1, rest = form[0], form[1:]
    if x == b1:
        return form
    if not rest:
        raise StructureError(f"{F.names[x]} is not represented by {format_form(F, form)}")
    Y = fold(F, "sum", rest)
    mt = F.mul_table()
    for y in sorted(Y):
        if y == F.zero or not F.add[b1, y, x]:
            continue
        tail = represent(F, y, rest)
        partner = int(mt[mt[b1, y], x])
        if not binary_isometric(F, b1, y, x, partner):
            raise StructureError("binary step failed: the hyperfield is not special")
        return (x, partner) + tail[1:]
    raise StructureError(f"{F.names[x]} is not represented by {format_form(F, form)}")


@dataclass(frozen=True)
class WittDecomposition:
    anisotropic: tuple
    hyperbolic_count: int
    # isometric rewriting: hyperbolic planes first, then the anisotropic part
    certificate: tuple = ()

    @property
    def dim_w(self) -> int:
        return len(self.anisotropic)


def witt_decompose(F: Structure, phi, cross_check: bool = False) -> WittDecomposition:
    """Split off hyperbolic planes until the residue is anisotropic.

    With ``cross_check`` the constructive result is compared with the BFS
    isometry search (budget permitting).
    """
    phi = as_form(F, phi)
    residue = phi
    planes = []
    while len(residue) >= 2 and F.zero in fold(F, "sum", residue):
        a1, rest = residue[0], residue[1:]
        copy = represent(F, int(F.neg[a1]), rest)
        planes.append((a1, copy[0]))
        residue = copy[1:]
    cert = tuple(x for pl in planes for x in pl) + residue
    out = WittDecomposition(tuple(sorted(residue)), len(planes), cert)
    if cross_check and len(phi) >= 2:
        if not isometric(F, phi, cert):
            raise AssertionError("decomposition certificate is not isometric to the input")
        if residue and isotropic_bfs(F, residue):
            raise AssertionError("residue found isotropic by search")
    return out


def dim_w(F: Structure, phi) -> int:
    return witt_decompose(F, phi).dim_w


def witt_equivalent(F: Structure, phi, psi) -> bool:
    a = witt_decompose(F, phi).anisotropic
    b = witt_decompose(F, psi).anisotropic
    return len(a) == len(b) and isometric(F, a, b)


def is_hyperbolic(F: Structure, phi) -> bool:
    return witt_decompose(F, phi).dim_w == 0


def pfister(F: Structure, gens, scalar=None) -> tuple:
    """<1,g1> x <1,g2> x ...; entry k is the product of the gens whose bit is set in k."""
    gens = [F.index(x) for x in gens]
    mt = F.mul_table()
    entries = []
    for k in range(1 << len(gens)):
        e = F.one
        for i, x in enumerate(gens):
            if k >> i & 1:
                e = int(mt[e, x])
        entries.append(e)
    if scalar is not None:
        s = F.index(scalar)
        entries = [int(mt[s, e]) for e in entries]
    return as_form(F, entries)


# ---------------------------------------------------------------- classification

def _sg_axioms(F: Structure, transitivity_limit: int = 8) -> list:
    """Violated special-group axioms as (name, witness names)."""
    G = group(F)
    g, m, nm = G.g, G.mul, G.neg
    names = [F.names[x] for x in G.elems]
    out = []
    # full binary relation R[i, j, k, l]
    R = np.zeros((g, g, g, g), dtype=np.bool_)
    for i in range(g):
        for j in range(g):
            for k in range(g):
                if G.iso[i, j, k]:
                    R[i, j, k, m[m[i, j], k]] = True
    flat = R.reshape(g * g, g * g)
    if not flat.diagonal().all():
        i = int(np.flatnonzero(~flat.diagonal())[0])
        out.append(("SG0.reflexive", (names[i // g], names[i % g])))
    bad = np.argwhere(flat & ~flat.T)
    if len(bad):
        p, q = bad[0]
        out.append(("SG0.symmetric", (names[p // g], names[p % g], names[q // g], names[q % g])))
    two = (flat.astype(np.float32) @ flat.astype(np.float32)) > 0
    bad = np.argwhere(two & ~flat)
    if len(bad):
        p, q = bad[0]
        out.append(("SG0.transitive", (names[p // g], names[p % g], names[q // g], names[q % g])))
    for i in range(g):
        for j in range(g):
            if not R[i, j, j, i]:
                out.append(("SG1", (names[i], names[j])))
                break
        else:
            continue
        break
    for i in range(g):
        if not R[i, nm[i], G.one, nm[G.one]]:
            out.append(("SG2", (names[i],)))
            break
    hits = np.argwhere(R)
    for i, j, k, l in hits:
        if m[i, j] != m[k, l]:
            out.append(("SG3", tuple(names[t] for t in (i, j, k, l))))
            break
    for i, j, k, l in hits:
        if not R[i, nm[k], nm[j], l]:
            out.append(("SG4", tuple(names[t] for t in (i, j, k, l))))
            break
    done = False
    for i, j, k, l in hits:
        for e in range(g):
            if not R[m[e, i], m[e, j], m[e, k], m[e, l]]:
                out.append(("SG5", tuple(names[t] for t in (i, j, k, l, e))))
                done = True
                break
        if done:
            break
    if g <= transitivity_limit:
        T = _ternary_relation(G, R)
        two = (T.astype(np.float32) @ T.astype(np.float32)) > 0
        bad = np.argwhere(two & ~T)
        if len(bad):
            p, q = (int(v) for v in bad[0])
            trip = lambda v: (names[v // (g * g)], names[v // g % g], names[v % g])
            out.append(("SG6", trip(p) + trip(q)))
    return out


def _ternary_relation(G: _Group, R) -> np.ndarray:
    """T[(a1,a2,a3), (b1,b2,b3)] for the existential ternary isometry."""
    g, m = G.g, G.mul
    T = np.zeros((g, g, g, g, g, g), dtype=np.bool_)
    for a1, a2, a3 in itertools.product(range(g), repeat=3):
        for x in range(g):
            z = m[m[a2, a3], x]
            if not R[a2, a3, x, z]:
                continue
            for b1 in range(g):
                y = m[m[a1, x], b1]
                if not R[a1, x, b1, y]:
                    continue
                # <b2, b3> == <y, z>
                for b2 in range(g):
                    b3 = m[m[y, z], b2]
                    if R[b2, b3, y, z]:
                        T[a1, a2, a3, b1, b2, b3] = True
    return T.reshape(g ** 3, g ** 3)


def classify_hyperfield(F: Structure, transitivity_limit: int = 8) -> dict:
    """Flags pre_special, special, formally_real, real_reduced, rooted, plus the
    list of violated special-group axioms."""
    nz = F.nonzero()
    is_hf = check_axioms(F, "hyperfield").passed
    pre = is_hf and F.neg[F.one] != F.one and all(F.mul_set(a, a) == {F.one} for a in nz)
    sg = _sg_axioms(F, transitivity_limit) if pre else []
    from .marshall import sums_of_squares
    formally_real = bool(F.neg[F.one] not in sums_of_squares(F))
    real_reduced = pre and F.add_set(F.one, F.one) == {F.one}
    rooted = all(a in F.add_set(a, b) and b in F.add_set(a, b) for a in nz for b in nz)
    return {
        "hyperfield": is_hf,
        "pre_special": bool(pre),
        "special": bool(pre and not sg),
        "formally_real": formally_real,
        "real_reduced": bool(real_reduced),
        "rooted": bool(rooted),
        "sg_violations": sg,
        "sg6_checked": bool(pre) and len(nz) <= transitivity_limit,
    }


def require_special(F: Structure) -> dict:
    flags = classify_hyperfield(F)
    if not flags["special"]:
        raise StructureError(f"{F.name} is not a special hyperfield: {flags['sg_violations'] or 'not pre-special'}")
    return flags
