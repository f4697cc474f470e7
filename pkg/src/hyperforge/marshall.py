"""Marshall quotients of superrings by coherent multiplicative subsets."""
from __future__ import annotations

import numpy as np

from . import _kernels
from .core import Morphism, Report, Structure, StructureError, check_axioms, quotient_by_labels


def _mask(S, M):
    return S.mask(M)


def nonzero_squares(S: Structure) -> frozenset:
    sq = np.zeros(S.size, dtype=np.bool_)
    for a in range(S.size):
        sq |= S.mul[a, a]
    sq[S.zero] = False
    return S.members(sq)


def sums_of_squares(S: Structure) -> frozenset:
    """Closure of the squares under addition, without 0."""
    T = np.zeros(S.size, dtype=np.bool_)
    for a in range(S.size):
        T |= S.mul[a, a]
    while True:
        nxt = T | _kernels.image(S.add, T, T)
        if (nxt == T).all():
            break
        T = nxt
    T = T.copy()
    T[S.zero] = False
    return S.members(T)


def resolve_subset(S: Structure, spec: str) -> frozenset:
    """``squares``, ``sumsquares`` or ``explicit:a,b,c``."""
    if spec == "squares":
        return nonzero_squares(S)
    if spec == "sumsquares":
        return sums_of_squares(S)
    if spec.startswith("explicit:"):
        items = [x for x in spec[len("explicit:"):].split(",") if x.strip()]
        return frozenset(S.index(x.strip()) for x in items)
    raise StructureError(f"unknown subset spec {spec!r}")


def _row_image(S, x, P):
    """x * P as a mask."""
    return _kernels.image(S.mul, S.mask([x]), P)


def matching_subsets(S: Structure, M, x: int, a: int):
    """Largest pair ``(P, Q)`` of subsets of ``M`` with ``xP = aQ``.

    Both sides shrink from ``M`` until ``xP`` lies in ``aQ`` and vice versa; the
    result contains every other solution, so a non-empty solution exists iff
    the returned ``P`` is non-empty.
    """
    members = sorted(M)
    xcells = {s: S.mul[x, s] for s in members}
    acells = {s: S.mul[a, s] for s in members}
    P = set(members)
    Q = set(members)
    while True:
        aQ = np.zeros(S.size, dtype=np.bool_)
        for q in Q:
            aQ |= acells[q]
        P2 = {p for p in P if not (xcells[p] & ~aQ).any()}
        xP = np.zeros(S.size, dtype=np.bool_)
        for p in P2:
            xP |= xcells[p]
        Q2 = {q for q in Q if not (acells[q] & ~xP).any()}
        if P2 == P and Q2 == Q:
            return frozenset(P), frozenset(Q)
        P, Q = P2, Q2


def is_multiplicative(S: Structure, M) -> bool:
    M = frozenset(M)
    return S.one in M and S.prod_sets(M, M) <= M


def is_coherent(S: Structure, M) -> Report:
    M = frozenset(S.index(x) for x in M)
    rep = Report(info={"size": len(M)})
    if S.one not in M:
        rep.add("contains_one", ())
    prod = S.prod_sets(M, M)
    if not prod <= M:
        bad = min(prod - M)
        rep.add("multiplicative", (S.names[bad],))
    mmask = S.mask(M)
    for a in range(S.size):
        reach = S.members(_kernels.image(S.mul, S.mask([a]), mmask))
        for x in sorted(reach):
            P, _ = matching_subsets(S, M, x, a)
            if not P:
                rep.add("coherence", (S.names[x], S.names[a]))
                break
        if rep.failed("coherence"):
            break
    squares = nonzero_squares(S)
    rep.info["squares_contained"] = squares <= M
    rep.info["nontrivial"] = S.zero not in M
    return rep


# ---------------------------------------------------------------- equivalence

def sim_a(S, M, a, b) -> bool:
    """Non-empty X, Y in M with aX = bY."""
    P, _ = matching_subsets(S, M, a, b)
    return bool(P)


def sim(S: Structure, M, a, b) -> bool:
    """Some ``as`` meets some ``bt`` (s, t in M)."""
    a, b = S.index(a), S.index(b)
    mmask = S.mask(M)
    return bool((_kernels.image(S.mul, S.mask([a]), mmask) & _kernels.image(S.mul, S.mask([b]), mmask)).any())


def _product_family(S, M):
    fam = {}
    for s in sorted(M):
        for t in sorted(M):
            cell = S.mul[s, t]
            fam.setdefault(cell.tobytes(), cell)
    return list(fam.values())


def sim_c(S, M, a, b, _family=None) -> bool:
    """Some ``a(st)`` equals some ``b(pq)``."""
    fam = _product_family(S, M) if _family is None else _family
    left = {_kernels.image(S.mul, S.mask([a]), X).tobytes() for X in fam}
    return any(_kernels.image(S.mul, S.mask([b]), Y).tobytes() in left for Y in fam)


def sim_criteria_agree(S: Structure, M) -> Report:
    """Compare the three descriptions of the equivalence on every pair."""
    M = frozenset(S.index(x) for x in M)
    fam = _product_family(S, M)
    rep = Report(info={"pairs": S.size * S.size})
    for a in range(S.size):
        for b in range(S.size):
            vals = (sim_a(S, M, a, b), sim(S, M, a, b), sim_c(S, M, a, b, fam))
            if len(set(vals)) > 1:
                rep.add("sim_criteria", (S.names[a], S.names[b]) + tuple(str(v) for v in vals))
                return rep
    return rep


def sim_labels(S: Structure, M) -> np.ndarray:
    """Class id per element via union-find; classes numbered by least member."""
    n = S.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    mmask = S.mask(M)
    orbit = [_kernels.image(S.mul, S.mask([a]), mmask) for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if (orbit[a] & orbit[b]).any():
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    roots = [find(x) for x in range(n)]
    first = {}
    return np.array([first.setdefault(r, len(first)) for r in roots], dtype=np.int64)


# ---------------------------------------------------------------- quotient

def one_sided_tables(S: Structure, M, labels) -> tuple:
    """Tables from the one-sided description: ``[c] in [a]+[b]`` iff
    ``cs`` lies in ``aM + bM`` for some s in M (and ``cs`` in ``abM`` for products)."""
    mmask = S.mask(M)
    k = int(labels.max()) + 1
    reps = [int(np.flatnonzero(labels == i)[0]) for i in range(k)]
    orbit = [_kernels.image(S.mul, S.mask([x]), mmask) for x in range(S.size)]
    single = [[S.mul[x, s] for s in sorted(M)] for x in range(S.size)]
    add = np.zeros((k, k, k), dtype=np.bool_)
    mul = np.zeros((k, k, k), dtype=np.bool_)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            target_add = _kernels.image(S.add, orbit[a], orbit[b])
            ab = S.mul[a, b]
            target_mul = _kernels.image(S.mul, ab, mmask)
            for l, c in enumerate(reps):
                add[i, j, l] = any(not (cs & ~target_add).any() for cs in single[c])
                mul[i, j, l] = any(not (cs & ~target_mul).any() for cs in single[c])
    return add, mul


def marshall_quotient(S: Structure, M, name: str | None = None, cross_check: bool = True):
    """``S/_m M``; returns ``(quotient, projection)``.

    Tables follow the congruence rule (some representatives realise the
    relation).  With ``cross_check`` the one-sided description is also built and
    any disagreement is stored in ``quotient.diagnostics``.
    """
    M = frozenset(S.index(x) for x in M)
    if S.zero in M:
        raise StructureError("subset contains 0: the quotient would be trivial")
    if S.one not in M:
        raise StructureError("subset must contain 1")
    labels = sim_labels(S, M)
    Q, pi = quotient_by_labels(S, labels, name=name or f"{S.name}/m")
    Q.kind = "superring"
    Q.diagnostics = []
    if cross_check:
        add2, mul2 = one_sided_tables(S, M, labels)
        for label, A, B in (("add", Q.add, add2), ("mul", Q.mul, mul2)):
            diff = np.argwhere(A != B)
            if len(diff):
                i, j, l = (int(v) for v in diff[0])
                Q.diagnostics.append({"table": label, "cell": (Q.names[i], Q.names[j], Q.names[l]),
                                      "congruence": bool(A[i, j, l]), "one_sided": bool(B[i, j, l])})
    return Q, pi


def singleton_products(Q: Structure) -> list:
    """Cells of the multiplication table that are not singletons."""
    sizes = Q.mul.sum(axis=2)
    return [(Q.names[a], Q.names[b]) for a, b in np.argwhere(sizes != 1)]


def induced_morphism(f: Morphism, pi: Morphism, M) -> Morphism:
    """The map on classes with ``f = induced o pi`` (requires ``f(M) = {1}``)."""
    A, B = f.source, f.target
    M = frozenset(A.index(x) for x in M)
    if f.image(M) != {B.one}:
        raise StructureError("morphism does not send the subset to 1")
    Q = pi.target
    out = -np.ones(Q.size, dtype=np.int64)
    for a in range(A.size):
        c = pi.map[a]
        if out[c] >= 0 and out[c] != f.map[a]:
            raise StructureError(f"morphism is not constant on the class of {A.names[a]}")
        out[c] = f.map[a]
    return Morphism(Q, B, out)


def canonical_surjection(S: Structure, small, large):
    """``S/_m small -> S/_m large`` for ``small`` inside ``large``."""
    small = frozenset(S.index(x) for x in small)
    large = frozenset(S.index(x) for x in large)
    if not small <= large:
        raise StructureError("first subset must be contained in the second")
    Q1, p1 = marshall_quotient(S, small)
    Q2, p2 = marshall_quotient(S, large)
    return induced_morphism(p2, p1, small)


def check_structure_inheritance(S: Structure, Q: Structure) -> dict:
    """Which of full / superdomain / superfield pass on ``S`` and on ``Q``."""
    out = {}
    for kind in ("full", "superdomain", "superfield"):
        out[kind] = (check_axioms(S, kind).passed, check_axioms(Q, kind).passed)
    return out
