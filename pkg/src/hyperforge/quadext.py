"""Quadratic extensions F(w), w^2 = alpha, of special hyperfields, their
square-class quotients and towers of them.

Element ``a + b w`` of F(w) has index ``a + b * |F|``, so the base embeds as
the first ``|F|`` indices and 0, 1 keep their indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import forms
from .catalog import find_isomorphism
from .core import Morphism, Structure, StructureError, check_morphism
from .marshall import is_coherent, marshall_quotient, nonzero_squares, sums_of_squares


class DegenerateScalar(StructureError):
    """A tower scalar collapsed to [0] or [1] at its stage."""


def _classify(F: Structure) -> dict:
    cached = getattr(F, "_flags", None)
    if cached is None:
        cached = forms.classify_hyperfield(F)
        F._flags = cached
    return cached


def _pair_name(F: Structure, a: int, b: int) -> str:
    if b == F.zero:
        return F.names[a]
    bw = "w" if b == F.one else "-w" if b == F.neg[F.one] and F.names[b] == "-1" else F.names[b] + "w"
    if a == F.zero:
        return bw
    return F.names[a] + (bw if bw.startswith("-") else "+" + bw)


@dataclass
class Extension:
    base: Structure
    alpha: int
    carrier: Structure

    @property
    def n(self) -> int:
        return self.base.size

    def pair(self, x: int):
        return x % self.n, x // self.n

    def element(self, a, b) -> int:
        return self.base.index(a) + self.n * self.base.index(b)

    @property
    def omega(self) -> int:
        return self.n * self.base.one


def extend(F: Structure, alpha, check: bool = True) -> Extension:
    """F(w) with w^2 = alpha as formal pairs.

    ``(a,b) + (c,d)`` is the box ``(a+c) x (b+d)``;
    ``(a,b)(c,d) = {(u,v) : u in ac + alpha*b*d, v in ad + bc}``.
    """
    al = F.index(alpha)
    if al in (F.zero, F.one):
        raise StructureError("alpha must differ from 0 and 1 (X^2 - alpha would be reducible)")
    if check and not _classify(F)["special"]:
        raise StructureError(f"{F.name} is not a special hyperfield")
    n = F.size
    mt = F.mul_table()
    idx = np.arange(n * n)
    a, b = idx % n, idx // n
    A, C = a[:, None], a[None, :]
    B, D = b[:, None], b[None, :]
    U = F.add[A, C]                                   # (N, N, n)
    V = F.add[B, D]
    add = (V[:, :, :, None] & U[:, :, None, :]).reshape(n * n, n * n, n * n)
    U = F.add[mt[A, C], mt[al, mt[B, D]]]
    V = F.add[mt[A, D], mt[B, C]]
    mul = (V[:, :, :, None] & U[:, :, None, :]).reshape(n * n, n * n, n * n)
    neg = F.neg[a] + n * F.neg[b]
    names = [_pair_name(F, int(x), int(y)) for x, y in zip(a, b)]
    E = Structure(names, add, mul, neg, zero=F.zero, one=F.one,
                  name=f"{F.name}(sqrt {F.names[al]})", kind="superfield")
    return Extension(F, al, E)


def embedding(E: Extension) -> Morphism:
    return Morphism(E.base, E.carrier, np.arange(E.n))


def omega_is_root(E: Extension) -> bool:
    from .poly import evaluate
    p = (int(E.carrier.neg[E.alpha]), E.carrier.zero, E.carrier.one)
    return E.carrier.zero in evaluate(E.carrier, p, E.omega)


# ---------------------------------------------------------------- squares

def one_plus_alpha(E: Extension) -> frozenset:
    return E.base.add_set(E.base.one, E.alpha)


def two_f(F: Structure) -> frozenset:
    out = set()
    for x in range(F.size):
        out |= F.add_set(x, x)
    return frozenset(out)


def _box(E: Extension, U, V) -> frozenset:
    return frozenset(u + E.n * v for u in U for v in V)


def square_sets(E: Extension) -> dict:
    """Enumerated squares and sums of squares next to their closed forms."""
    S = E.carrier
    sq = set()
    for x in range(S.size):
        sq |= S.mul_set(x, x)
    opa = one_plus_alpha(E)
    tf = two_f(E.base)
    return {
        "squares": frozenset(sq),
        "sum_squares": sums_of_squares(S) | {S.zero},
        "one_plus_alpha": opa,
        "two_F": tf,
        "squares_closed": _box(E, opa, tf),
        "sum_squares_closed": _box(E, opa, range(E.n)),
    }


def s_quotient(E: Extension, reduced: bool = False, mode: str = "base", subset: str = "closed"):
    """S_F(w) with the class map from the base.

    ``mode="base"`` (default) is the Marshall quotient of F by the part of the
    squares of F(w) lying in F.  With ``subset="closed"`` that part is read
    off the closed form ``(1 + alpha) + (2)F w``, giving ``(1 + alpha)``
    minus 0; ``subset="enumerated"`` intersects the enumerated squares (or sums
    of squares) with F instead.  The two differ only when ``(1 + alpha)`` has
    members other than 1 that are not squares, e.g. alpha = -1 over a fan.

    ``mode="carrier"`` quotients the whole of F(w) by its nonzero squares (or
    sums of squares when ``reduced``); that subset is not closed under
    products, and the relation then identifies 1 with -1.

    Returns ``(hyperfield, base class map, projection)``; ``hyperfield.warnings``
    lists failed hypotheses.
    """
    S = E.carrier
    warnings = []
    sums = sums_of_squares(S)
    if S.neg[S.one] in sums:
        warnings.append("-1 is a sum of squares: quotient is not formally real")
    tag = f"S[{E.carrier.name}]" + ("red" if reduced else "")
    if mode == "base":
        if subset == "closed":
            M = one_plus_alpha(E) - {E.base.zero}
        elif subset == "enumerated":
            M = frozenset(x for x in (sums if reduced else nonzero_squares(S)) if x < E.n)
        else:
            raise StructureError(f"unknown subset reading {subset!r}")
        Q, pi = marshall_quotient(E.base, M, name=tag)
        base_map = pi
    elif mode == "carrier":
        M = sums if reduced else nonzero_squares(S)
        coh = is_coherent(S, M)
        if not coh.passed:
            warnings.append("subset is not Marshall coherent: " + ", ".join(
                f"{v['axiom']} at {tuple(v['witness'])}" for v in coh.to_dict()["violations"]))
        Q, pi = marshall_quotient(S, M, name=tag)
        base_map = Morphism(E.base, Q, pi.map[:E.n])
    else:
        raise StructureError(f"unknown quotient mode {mode!r}")
    Q.kind = "hyperfield"
    Q.warnings = warnings
    return Q, base_map, pi


def class_eq_direct(E: Extension, a, b) -> bool:
    """Some s, t in (1 + alpha) minus 0 with as = bt."""
    F = E.base
    a, b = F.index(a), F.index(b)
    mt = F.mul_table()
    opa = sorted(one_plus_alpha(E) - {F.zero})
    return any(mt[a, s] == mt[b, t] for s in opa for t in opa)


def ext_binary_isometric(E: Extension, a, b, c, d, variant: int = 3) -> bool:
    """Some r, s, t in (1 + alpha) minus 0 with the chosen binary isometry over F.

    variant 2: <ar,bs> == <ct,d>;  3: <ar,bs> == <c,dt>;
    4: <a,br> == <cs,dt>;  5: <ar,b> == <cs,dt>.
    """
    F = E.base
    a, b, c, d = (F.index(x) for x in (a, b, c, d))
    mt = F.mul_table()
    opa = sorted(one_plus_alpha(E) - {F.zero})
    iso = forms.binary_isometric
    for r, s, t in itertools.product(opa, repeat=3):
        if variant == 2:
            ok = iso(F, mt[a, r], mt[b, s], mt[c, t], d)
        elif variant == 3:
            ok = iso(F, mt[a, r], mt[b, s], c, mt[d, t])
        elif variant == 4:
            ok = iso(F, a, mt[b, r], mt[c, s], mt[d, t])
        elif variant == 5:
            ok = iso(F, mt[a, r], b, mt[c, s], mt[d, t])
        else:
            raise StructureError("variant must be 2, 3, 4 or 5")
        if ok:
            return True
    return False


def square_identities(F: Structure, alpha, max_terms: int = 2) -> dict:
    """Set identities for squares in F(w), keyed a-h, each as a bool.

    a: sums of squares of nonzero pairs lie in their closed form;
    b: sums of squares equal (1 + alpha) x F;
    c: squares equal (1 + alpha) x (2)F;
    d: squares equal sums of squares exactly when (2)F is all of F;
    e: -1 is a sum of squares exactly when -1 is in 1 + alpha;
    f: w is not a square;
    g: F -> S_F(w) is a full, non-injective morphism;
    h: for rooted F with -1 not in 1 + alpha, S_F(w) is real reduced.

    a and c are compared on nonzero elements: 0 = 0^2 is a square while
    (0, 0) lies in the closed form only when 0 is in 1 + alpha.
    """
    E = extend(F, alpha)
    S = E.carrier
    sets = square_sets(E)
    zero = {S.zero}
    mt = F.mul_table()
    out = {}
    # a: sums of squares of nonzero pairs sit inside (1+alpha) + 2[sum a_i b_i] w
    nz = F.nonzero()
    pairs = [(x, y) for x in nz for y in nz]
    ok = True
    for k in range(1, max_terms + 1):
        for combo in itertools.product(pairs, repeat=k):
            lhs = frozenset([S.zero])
            for x, y in combo:
                el = x + E.n * y
                lhs = S.sum_sets(lhs, S.mul_set(el, el))
            inner = frozenset([F.zero])
            for x, y in combo:
                inner = F.sum_sets(inner, {int(mt[x, y])})
            rhs = _box(E, sets["one_plus_alpha"], F.sum_sets(inner, inner))
            if not lhs <= rhs:
                ok = False
                break
        if not ok:
            break
    out["a"] = ok
    out["b"] = sets["sum_squares"] - zero == sets["sum_squares_closed"] - zero
    out["c"] = sets["squares"] - zero == sets["squares_closed"] - zero
    out["d"] = (sets["squares"] == sets["sum_squares"]) == (sets["two_F"] == frozenset(range(F.size)))
    minus_one = int(S.neg[S.one])
    out["e"] = (minus_one in sets["sum_squares"]) == (minus_one in sets["one_plus_alpha"])
    out["f"] = E.omega not in sets["squares"]
    Q, base_map, _ = s_quotient(E)
    out["g"] = check_morphism(base_map, full=True).passed and not base_map.is_injective()
    flags = _classify(F)
    if minus_one not in sets["one_plus_alpha"] and flags["rooted"]:
        out["h"] = (Q.add_set(Q.one, Q.one) == {Q.one}) and forms.classify_hyperfield(Q)["real_reduced"]
    else:
        out["h"] = True
    return out


# ---------------------------------------------------------------- towers

@dataclass
class Stage:
    field: Structure
    class_map: np.ndarray     # previous stage -> this stage
    scalar: int               # index of the scalar in the previous stage


@dataclass
class Tower:
    base: Structure
    alphas: tuple
    stages: list = field(default_factory=list)

    @property
    def top(self) -> Structure:
        return self.stages[-1].field if self.stages else self.base

    def to_top(self) -> np.ndarray:
        """Composite class map base -> last stage."""
        m = np.arange(self.base.size)
        for st in self.stages:
            m = st.class_map[m]
        return m

    def image_map(self, k: int) -> np.ndarray:
        """Class map base -> stage k (0 is the base)."""
        m = np.arange(self.base.size)
        for st in self.stages[:k]:
            m = st.class_map[m]
        return m


_STAGE_CACHE: dict = {}


def _stage(F: Structure, scalar: int):
    key = (id(F), scalar)
    hit = _STAGE_CACHE.get(key)
    if hit is not None and hit[0] is F:
        return hit[1], hit[2]
    E = extend(F, scalar)
    Q, base_map, _ = s_quotient(E)
    _STAGE_CACHE[key] = (F, Q, base_map.map)
    return Q, base_map.map


def iterate_tower(F: Structure, alphas) -> Tower:
    alphas = tuple(F.index(a) for a in alphas)
    T = Tower(F, alphas)
    current = F
    m = np.arange(F.size)
    for k, a in enumerate(alphas):
        scalar = int(m[a])
        if scalar in (current.zero, current.one):
            raise DegenerateScalar(
                f"stage {k + 1}: {F.names[a]} has class {current.names[scalar]} in {current.name}")
        Q, cmap = _stage(current, scalar)
        T.stages.append(Stage(Q, cmap, scalar))
        m = cmap[m]
        current = Q
    return T


def pfister_values(F: Structure, alphas) -> frozenset:
    return forms.value_set(F, forms.pfister(F, alphas))


def tower_class_eq(T: Tower, a, b) -> dict:
    """``ab in D(<<alphas>>)`` in the base next to equality of the images in
    the last stage, plus the two-witness variant ``as = bt``."""
    F = T.base
    a, b = F.index(a), F.index(b)
    mt = F.mul_table()
    D = pfister_values(F, T.alphas) if T.alphas else frozenset([F.one])
    direct = int(mt[a, b]) in D
    witnesses = any(mt[a, s] == mt[b, t] for s in D for t in D)
    m = T.to_top()
    return {"closed_form": direct, "witnesses": witnesses, "quotient": bool(m[a] == m[b])}


def tower_formally_real(T: Tower) -> dict:
    F = T.base
    if T.alphas:
        closed = int(F.neg[F.one]) not in pfister_values(F, T.alphas)
    else:
        closed = _classify(F)["formally_real"]
    return {"closed_form": closed, "quotient": forms.classify_hyperfield(T.top)["formally_real"]}


def tower_swap_iso(F: Structure, alpha, beta) -> Morphism:
    """Isomorphism between the last stages of the towers [alpha, beta] and [beta, alpha]."""
    a, b = F.index(alpha), F.index(beta)
    if a == b:
        T = iterate_tower(F, [a])
        return Morphism(T.top, T.top, np.arange(T.top.size))
    T1 = iterate_tower(F, [a, b])
    T2 = iterate_tower(F, [b, a])
    iso = find_isomorphism(T1.top, T2.top)
    if iso is None:
        raise AssertionError(f"no isomorphism between the swapped towers over {F.name}")
    return iso


def permuted_towers(F: Structure, alphas) -> list:
    """Last stages of every ordering of ``alphas`` with isomorphisms to the first."""
    alphas = [F.index(a) for a in alphas]
    first = iterate_tower(F, alphas).top
    out = []
    for perm in itertools.permutations(alphas):
        top = iterate_tower(F, perm).top
        iso = find_isomorphism(first, top)
        out.append((tuple(F.names[x] for x in perm), top, iso))
    return out
