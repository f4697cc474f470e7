"""Polynomials over a finite superring.

A polynomial is a tuple of element indices (position = exponent) with trailing
zeros trimmed; the zero polynomial is ``()``.  Sums and products of
polynomials are sets, and because both operations are defined coefficient by
coefficient those sets are boxes: one coefficient-set per exponent.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass

import numpy as np

from .core import Morphism, Structure, StructureError, check_axioms, fold_sets

Poly = tuple


class _Bits:
    """Element sets of ``F`` as int bitmasks, with memoized set sums."""

    def __init__(self, F: Structure):
        self.F = F
        n = F.size
        self.add = [[_mask_of(F.add_set(a, b)) for b in range(n)] for a in range(n)]
        self.mul = [[_mask_of(F.mul_set(a, b)) for b in range(n)] for a in range(n)]
        self.zero = 1 << F.zero
        self._sums = {}
        self._sets = {}
        self._negs = {}
        self._sorted = {}
        self.divisions = {}   # (f, g, limit) -> (q, r) or None

    def sum(self, A: int, B: int) -> int:
        key = (A, B)
        hit = self._sums.get(key)
        if hit is None:
            hit = 0
            for a in _bits_of(A):
                row = self.add[a]
                for b in _bits_of(B):
                    hit |= row[b]
            self._sums[key] = hit
        return hit

    def neg(self, A: int) -> int:
        hit = self._negs.get(A)
        if hit is None:
            hit = _mask_of(int(self.F.neg[a]) for a in _bits_of(A))
            self._negs[A] = hit
        return hit

    def sorted(self, A: int) -> tuple:
        hit = self._sorted.get(A)
        if hit is None:
            hit = tuple(_bits_of(A))
            self._sorted[A] = hit
        return hit

    def to_set(self, A: int) -> frozenset:
        hit = self._sets.get(A)
        if hit is None:
            hit = frozenset(_bits_of(A))
            self._sets[A] = hit
        return hit


def _mask_of(elements) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def _bits_of(A: int):
    i = 0
    while A:
        if A & 1:
            yield i
        A >>= 1
        i += 1


_BITS: dict = {}


def _bits(F: Structure) -> _Bits:
    hit = _BITS.get(id(F))
    if hit is None or hit.F is not F:
        hit = _Bits(F)
        _BITS[id(F)] = hit
    return hit


def trim(F: Structure, coeffs) -> Poly:
    c = list(coeffs)
    while c and c[-1] == F.zero:
        c.pop()
    return tuple(c)


def make_poly(F: Structure, coeffs) -> Poly:
    return trim(F, [F.index(x) for x in coeffs])


def degree(p: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(p) - 1


def monomial(F: Structure, c: int, k: int) -> Poly:
    return trim(F, [F.zero] * k + [c])


def coeff(F: Structure, p: Poly, i: int) -> int:
    return p[i] if i < len(p) else F.zero


@dataclass(frozen=True)
class BoxPoly:
    """Coefficientwise set of polynomials; exponents past the end are {0}."""
    sets: tuple

    def __len__(self):
        return len(self.sets)

    def contains(self, F: Structure, t: Poly) -> bool:
        if len(t) > len(self.sets):
            return False
        return all(coeff(F, t, i) in s for i, s in enumerate(self.sets))

    def count(self) -> int:
        return int(np.prod([len(s) for s in self.sets])) if self.sets else 1

    def members(self, F: Structure):
        """All member polynomials, trimmed, in lexicographic index order."""
        for combo in itertools.product(*[sorted(s) for s in self.sets]):
            yield trim(F, combo)

    def degrees(self, F: Structure):
        return {degree(t) for t in self.members(F)}


def singleton(p: Poly) -> BoxPoly:
    return BoxPoly(tuple(frozenset([c]) for c in p))


def box_add(F: Structure, P: Poly, Q: Poly) -> BoxPoly:
    n = max(len(P), len(Q))
    return BoxPoly(tuple(F.add_set(coeff(F, P, i), coeff(F, Q, i)) for i in range(n)))


def box_add_sets(F: Structure, A: BoxPoly, B: BoxPoly) -> BoxPoly:
    bits = _bits(F)
    a, b = A.sets, B.sets
    out = []
    for i in range(max(len(a), len(b))):
        x = _mask_of(a[i]) if i < len(a) else bits.zero
        y = _mask_of(b[i]) if i < len(b) else bits.zero
        out.append(bits.to_set(bits.sum(x, y)))
    return BoxPoly(tuple(out))


def box_neg(F: Structure, A: BoxPoly) -> BoxPoly:
    return BoxPoly(tuple(F.neg_set(s) for s in A.sets))


def box_mul(F: Structure, P: Poly, Q: Poly) -> BoxPoly:
    """Coefficient ``n`` is the set ``a_0 b_n + a_1 b_{n-1} + ... + a_n b_0``."""
    if not P or not Q:
        return BoxPoly(())
    bits = _bits(F)
    out = []
    for n in range(len(P) + len(Q) - 1):
        acc = bits.zero
        for i in range(max(0, n - len(Q) + 1), min(n, len(P) - 1) + 1):
            acc = bits.sum(acc, bits.mul[P[i]][Q[n - i]])
        out.append(bits.to_set(acc))
    return BoxPoly(tuple(out))


def brute_add(F: Structure, P: Poly, Q: Poly, max_len: int) -> set:
    """Reference enumerator: every t of length <= max_len with t_i in P_i + Q_i."""
    out = set()
    for combo in itertools.product(range(F.size), repeat=max_len):
        if all(combo[i] in F.add_set(coeff(F, P, i), coeff(F, Q, i)) for i in range(max_len)):
            out.add(trim(F, combo))
    return out


def brute_mul(F: Structure, P: Poly, Q: Poly, max_len: int) -> set:
    """Reference enumerator for products, straight from the membership condition."""
    out = set()
    for combo in itertools.product(range(F.size), repeat=max_len):
        ok = True
        for n in range(max_len):
            acc = {F.zero}
            for i in range(n + 1):
                prod = F.mul_set(coeff(F, P, i), coeff(F, Q, n - i))
                acc = set(F.sum_sets(acc, prod))
            if combo[n] not in acc:
                ok = False
                break
        if ok:
            out.add(trim(F, combo))
    return out


def degree_bounds(F: Structure, P: Poly, Q: Poly, op: str):
    """Bounds satisfied by the degree of every member of ``P op Q``."""
    if not P or not Q:
        raise StructureError("degree bounds need nonzero polynomials")
    if op == "add":
        return (min(degree(P), degree(Q)) if degree(P) != degree(Q) else 0, max(degree(P), degree(Q)))
    if op == "mul":
        hi = degree(P) + degree(Q)
        if check_axioms(F, "superdomain").passed:
            return (hi, hi)
        return (0, hi)
    raise StructureError("op must be 'add' or 'mul'")


# ---------------------------------------------------------------- evaluation

def power_set(F: Structure, a: int, k: int) -> frozenset:
    acc = frozenset([F.one])
    for _ in range(k):
        acc = F.prod_sets(acc, {a})
    return acc


def evaluate(F: Structure, f: Poly, a) -> frozenset:
    a = F.index(a)
    return fold_sets(F, "sum", [F.prod_sets({c}, power_set(F, a, i)) for i, c in enumerate(f)])


def roots(F: Structure, f: Poly) -> list:
    return [a for a in range(F.size) if F.zero in evaluate(F, f, a)]


def x_minus(F: Structure, alpha: int) -> Poly:
    return (int(F.neg[alpha]), F.one)


def effective_root_witness(F: Structure, f: Poly, alpha):
    """Smallest ``g`` with ``deg g = deg f - 1`` and ``f in (X - alpha) g``."""
    alpha = F.index(alpha)
    d = degree(f)
    if d < 1:
        return None
    lin = x_minus(F, alpha)
    for g in all_polys(F, d - 1):
        if box_mul(F, lin, g).contains(F, f):
            return g
    return None


# ---------------------------------------------------------------- division

def _inverse(F: Structure, b: int) -> int:
    for x in range(F.size):
        if F.mul[b, x, F.one]:
            return x
    raise StructureError(f"{F.names[b]} has no inverse")


def division_holds(F: Structure, f: Poly, q: Poly, g: Poly, r: Poly) -> bool:
    """Check ``f in q g + r`` with ``r = 0`` or ``deg r < deg g``."""
    if r and degree(r) >= degree(g):
        return False
    bits = _bits(F)
    lq, lg = len(q), len(g)
    width = max(len(f), len(r), lq + lg - 1 if q and g else 0)
    if len(f) > width:
        return False
    z = F.zero
    for k in range(width):
        acc = bits.zero
        for i in range(max(0, k - lg + 1), min(k, lq - 1) + 1):
            acc = bits.sum(acc, bits.mul[q[i]][g[k - i]])
        acc = bits.sum(acc, 1 << (r[k] if k < len(r) else z))
        if not acc >> (f[k] if k < len(f) else z) & 1:
            return False
    return True


def euclid_divide(F: Structure, f: Poly, g: Poly, _limit: int = 64):
    """A pair ``(q, r)`` with ``f in q g + r`` and ``r = 0`` or ``deg r < deg g``.

    Follows the usual leading-term induction; every set choice takes the
    smallest indices first and alternatives are tried only if the canonical
    branch fails the membership check.
    """
    f = trim(F, f)
    g = trim(F, g)
    if not g:
        raise StructureError("division by the zero polynomial")
    result = _divide_uncached(F, f, g, _limit)
    if result is None:
        raise StructureError("no division witness found")
    return result


def _divide(F, f, g, limit):
    memo = _bits(F).divisions
    key = (f, g, limit)
    if key not in memo:
        memo[key] = _divide_uncached(F, f, g, limit)
    return memo[key]


def _divide_uncached(F, f, g, limit):
    n, m = degree(f), degree(g)
    if n < m:
        return ((), f)
    bits = _bits(F)
    inv = _inverse(F, g[-1])
    shift = n - m
    for c in sorted(F.mul_set(f[-1], inv)):
        # coefficient sets of f - c X^shift g; the top one must contain 0
        row = bits.mul[c]
        sets = [bits.sum(1 << f[i], bits.neg(row[g[i - shift]] if i >= shift else bits.zero))
                for i in range(n + 1)]
        if not sets[n] & bits.zero:
            continue
        choices = [bits.sorted(x) for x in sets[:n]]
        for t in itertools.islice(itertools.product(*choices), limit):
            sub = _divide(F, trim(F, t), g, limit)
            if sub is None:
                continue
            q0, r = sub
            q = list(q0) + [F.zero] * (shift + 1 - len(q0))
            q[shift] = c
            q = trim(F, q)
            if division_holds(F, f, q, g, r):
                return (q, r)
    return None


# ---------------------------------------------------------------- irreducibility

def all_polys(F: Structure, deg: int):
    """Every polynomial of exact degree ``deg``."""
    for low in itertools.product(range(F.size), repeat=deg):
        for lead in F.nonzero():
            yield low + (lead,)


def factorization(F: Structure, f: Poly):
    """First ``(g, h)`` with ``deg g, deg h >= 1`` and ``f in g h``, or None."""
    d = degree(f)
    for dg in range(1, d // 2 + 1):
        for g in all_polys(F, dg):
            for dh in range(d - dg, d):
                for h in all_polys(F, dh):
                    if box_mul(F, g, h).contains(F, f):
                        return (g, h)
    return None


def is_irreducible(F: Structure, f: Poly) -> bool:
    f = trim(F, f)
    if degree(f) < 1:
        raise StructureError("irreducibility needs degree >= 1")
    return factorization(F, f) is None


def has_no_roots(F: Structure, f: Poly) -> bool:
    return not roots(F, f)


# ---------------------------------------------------------------- quotient superfield

def index_of(F: Structure, p: Poly, width: int) -> int:
    k = 0
    for i in range(width - 1, -1, -1):
        k = k * F.size + coeff(F, p, i)
    return k


def poly_of_index(F: Structure, k: int, width: int) -> Poly:
    out = []
    for _ in range(width):
        out.append(k % F.size)
        k //= F.size
    return trim(F, out)


def _box_indices(F, sets, width):
    """Indices of all members of a box of length <= width (as a flat array)."""
    idx = np.zeros(1, dtype=np.int64)
    scale = 1
    for i in range(width):
        s = np.array(sorted(sets[i]) if i < len(sets) else [F.zero], dtype=np.int64)
        idx = (idx[:, None] + s[None, :] * scale).ravel()
        scale *= F.size
    return idx


def quotient_superfield(F: Structure, p: Poly, check_irreducible: bool = True):
    """``F[X]/<p>`` on the representatives of degree ``<= deg p - 1``.

    Addition is the coefficientwise box.  The product of ``u`` and ``v``
    collects every remainder ``r`` with ``t in q p + r`` for some ``t`` in the
    box ``u v`` and some ``q``.  Returns ``(structure, class_of)`` where
    ``class_of`` maps a polynomial of any degree to the set of its remainders.
    """
    p = trim(F, p)
    width = degree(p)
    if width < 1:
        raise StructureError("modulus must have degree >= 1")
    if check_irreducible and not is_irreducible(F, p):
        raise StructureError("modulus is reducible")
    N = F.size ** width
    polys = [poly_of_index(F, k, width) for k in range(N)]
    names = [format_poly(F, t, var="X", compact=True) for t in polys]

    add = np.zeros((N, N, N), dtype=np.bool_)
    for u in range(N):
        for v in range(u, N):
            cells = box_add(F, polys[u], polys[v]).sets
            add[u, v, _box_indices(F, cells, width)] = True
            add[v, u] = add[u, v]

    # q ranges over degree <= width - 1 (the product box has degree <= 2*width - 2)
    qs = [poly_of_index(F, k, width - 1) for k in range(F.size ** (width - 1))] if width > 1 else [()]
    qp = [box_mul(F, q, p) for q in qs]

    def remainders(B: BoxPoly) -> np.ndarray:
        out = np.zeros(N, dtype=np.bool_)
        z = frozenset([F.zero])
        for Q in qp:
            L = max(len(B), len(Q))
            ok = True
            for i in range(width, L):
                bi = B.sets[i] if i < len(B) else z
                hi = Q.sets[i] if i < len(Q) else z
                if not bi & hi:
                    ok = False
                    break
            if not ok:
                continue
            R = [F.sum_sets(B.sets[i] if i < len(B) else z, F.neg_set(Q.sets[i] if i < len(Q) else z))
                 for i in range(width)]
            out[_box_indices(F, R, width)] = True
        return out

    mul = np.zeros((N, N, N), dtype=np.bool_)
    for u in range(N):
        for v in range(u, N):
            mul[u, v] = remainders(box_mul(F, polys[u], polys[v]))
            mul[v, u] = mul[u, v]
    neg = [index_of(F, tuple(int(F.neg[c]) for c in t), width) for t in polys]
    Q = Structure(names, add, mul, neg, zero=0, one=index_of(F, (F.one,), width),
                  name=f"{F.name}[X]/<{format_poly(F, p)}>", kind="superfield")

    def class_of(t: Poly) -> frozenset:
        return Q.members(remainders(singleton(trim(F, t))))
    return Q, class_of


def literal_coset_collapse(F: Structure, p: Poly) -> list:
    """Nonzero members of ``p - p`` of degree below ``deg p``.

    Any such member lies in the ideal generated by ``p``; when the list is
    non-empty the coset quotient identifies representatives that the
    representative quotient keeps apart.
    """
    p = trim(F, p)
    box = box_add(F, p, tuple(int(F.neg[c]) for c in p))
    return [t for t in box.members(F) if t and degree(t) < degree(p)]


def principal_ideal_check(S: Structure) -> dict:
    """Every ideal generated by one or two elements is generated by one."""
    from .core import ideal_generate
    principal = {ideal_generate(S, [x]) for x in range(S.size)}
    for x in range(S.size):
        for y in range(x + 1, S.size):
            I = ideal_generate(S, [x, y])
            if I not in principal:
                return {"principal": False, "witness": (S.names[x], S.names[y])}
    return {"principal": True, "ideals": len(principal)}


# ---------------------------------------------------------------- text syntax

_TERM = re.compile(r"^(?P<c>.*?)\*?X(?:\^(?P<e>\d+))?$")


def parse_poly(F: Structure, text: str) -> Poly:
    """Parse ``"X^2 + a*X - 1"`` (names from ``F``) or a JSON list of names."""
    text = text.strip()
    if text.startswith("["):
        try:
            names = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructureError(f"bad polynomial JSON: {exc}") from None
        return make_poly(F, names)
    if not text:
        raise StructureError("empty polynomial")
    coeffs: dict = {}
    body = re.sub(r"(?<=[\w)])\s*-\s*(?=[\w(])", " + -", text)
    for raw in body.split("+"):
        term = raw.strip().replace(" ", "")
        if not term:
            raise StructureError(f"malformed polynomial {text!r}")
        negate = False
        m = _TERM.match(term)
        if m:
            c, e = m["c"], int(m["e"]) if m["e"] else 1
            if c in ("", "-"):
                negate = c == "-"
                c = F.names[F.one]
        else:
            c, e = term, 0
        if c not in F.names and c.startswith("-"):
            negate, c = not negate, c[1:]
        val = F.index(c)
        if negate:
            val = int(F.neg[val])
        if e in coeffs:
            raise StructureError(f"repeated exponent {e} in {text!r}")
        coeffs[e] = val
    top = max(coeffs)
    return trim(F, [coeffs.get(i, F.zero) for i in range(top + 1)])


def format_poly(F: Structure, p: Poly, var: str = "X", compact: bool = False) -> str:
    if not p:
        return F.names[F.zero]
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == F.zero:
            continue
        name = F.names[c]
        mon = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mon:
            term = name
        elif c == F.one:
            term = mon
        elif name == "-1" and c == F.neg[F.one]:
            term = "-" + mon
        else:
            term = name + ("" if compact else "*") + mon
        parts.append(term)
    if compact:
        return "+".join(parts)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out
