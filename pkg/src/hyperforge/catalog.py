"""Named finite structures and a small isomorphism finder."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .core import Morphism, Structure, StructureError

FAMILIES = ("K", "Q2", "Hp", "Kaleidoscope", "Fan", "ModRing", "FieldSquareClasses")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def krasner() -> Structure:
    """K = {0, 1} with 1 + 1 = {0, 1}."""
    def add(a, b):
        if a == 0 or b == 0:
            return [a | b]
        return [0, 1]
    return Structure.from_rules(["0", "1"], add, lambda a, b: [a & b], lambda a: a,
                                name="K", kind="hyperfield")


def sign_hyperfield() -> Structure:
    """Q2 = {0, 1, -1}: signs, with 1 - 1 the whole carrier."""
    names = ["0", "1", "-1"]
    sign = [0, 1, -1]
    idx = {0: 0, 1: 1, -1: 2}

    def add(a, b):
        x, y = sign[a], sign[b]
        if x == 0 or y == 0 or x == y:
            return [idx[x or y]]
        return [0, 1, 2]
    return Structure.from_rules(names, add, lambda a, b: [idx[sign[a] * sign[b]]],
                                lambda a: idx[-sign[a]], name="Q2", kind="hyperfield")


def hp(p: int) -> Structure:
    """H_p on {0..p-1}: a + a is everything, distinct nonzero a + b = {a, b},
    multiplication mod p, every element its own negative."""
    if not _is_prime(p):
        raise StructureError(f"H_p needs a prime parameter, got {p}")

    def add(a, b):
        if a == 0 or b == 0:
            return [a + b]
        return range(p) if a == b else [a, b]
    return Structure.from_rules([str(i) for i in range(p)], add, lambda a, b: [a * b % p],
                                lambda a: a, name=f"H{p}", kind="hyperfield")


def _kaleido_values(n):
    vals = [0]
    for k in range(1, n + 1):
        vals += [k, -k]
    return vals


def kaleidoscope(n: int) -> Structure:
    """X_n = {-n..n}; sums keep the larger absolute value, a - a is [-|a|, |a|],
    products are sgn(ab) * max(|a|, |b|)."""
    if n < 1:
        raise StructureError("kaleidoscope parameter must be >= 1")
    vals = _kaleido_values(n)
    idx = {v: i for i, v in enumerate(vals)}

    def add(i, j):
        a, b = vals[i], vals[j]
        if b == -a:
            return [idx[v] for v in range(-abs(a), abs(a) + 1)]
        return [i if abs(b) <= abs(a) else j]

    def mul(i, j):
        a, b = vals[i], vals[j]
        if a == 0 or b == 0:
            return [0]
        s = 1 if a * b > 0 else -1
        return [idx[s * max(abs(a), abs(b))]]
    return Structure.from_rules([str(v) for v in vals], add, mul, lambda i: idx[-vals[i]],
                                name=f"X{n}", kind="multiring")


def fan_element_name(mask: int, sign: int) -> str:
    body = "".join(chr(ord("a") + i) for i in range(mask.bit_length()) if mask >> i & 1) or "1"
    return ("-" if sign else "") + body


def fan(order: int) -> Structure:
    """Real reduced hyperfield of the fan on ``order`` = 2^k group elements.

    Nonzero element ``1 + 2*mask + sign`` is ``(-1)^sign`` times the product of
    the generators a, b, c, ... in ``mask``.
    """
    k = order.bit_length() - 1
    if order < 2 or 1 << k != order:
        raise StructureError(f"fan order must be a power of two >= 2, got {order}")
    g = order
    n = g + 1
    names = ["0"] + [fan_element_name(i >> 1, i & 1) for i in range(g)]
    full = list(range(n))

    def add(a, b):
        if a == 0 or b == 0:
            return [a + b]
        if a == b:
            return [a]
        if (a - 1) ^ (b - 1) == 1:
            return full
        return [a, b]

    def mul(a, b):
        if a == 0 or b == 0:
            return [0]
        return [1 + ((a - 1) ^ (b - 1))]

    def neg(a):
        return 0 if a == 0 else 1 + ((a - 1) ^ 1)
    return Structure.from_rules(names, add, mul, neg, name=f"FAN{order}", kind="hyperfield")


def mod_ring(n: int) -> Structure:
    """Z/n as a strict multiring."""
    if n < 2:
        raise StructureError("Z/n needs n >= 2")
    return Structure.from_rules([str(i) for i in range(n)], lambda a, b: [(a + b) % n],
                                lambda a, b: [a * b % n], lambda a: -a % n,
                                name=f"Zmod{n}", kind="ring")


def field_square_classes(p: int) -> Structure:
    """Z/p modulo its nonzero squares, via the Marshall quotient."""
    if not _is_prime(p) or p == 2:
        raise StructureError(f"square classes need an odd prime, got {p}")
    from .marshall import marshall_quotient, nonzero_squares
    R = mod_ring(p)
    Q, _ = marshall_quotient(R, nonzero_squares(R))
    return Structure(Q.names, Q.add, Q.mul, Q.neg, Q.zero, Q.one, name=f"SQ{p}", kind="hyperfield")


@dataclass(frozen=True)
class CatalogKey:
    family: str
    param: int = 0


def make(key: CatalogKey) -> Structure:
    fam, p = key.family, key.param
    builders = {
        "K": lambda: krasner(),
        "Q2": lambda: sign_hyperfield(),
        "Hp": lambda: hp(p),
        "Kaleidoscope": lambda: kaleidoscope(p),
        "Fan": lambda: fan(p),
        "ModRing": lambda: mod_ring(p),
        "FieldSquareClasses": lambda: field_square_classes(p),
    }
    if fam not in builders:
        raise StructureError(f"unknown family {fam!r}")
    return builders[fam]()


_NAME_PATTERNS = [
    (r"K", lambda m: CatalogKey("K")),
    (r"Q2", lambda m: CatalogKey("Q2")),
    (r"H(\d+)", lambda m: CatalogKey("Hp", int(m[1]))),
    (r"X(\d+)", lambda m: CatalogKey("Kaleidoscope", int(m[1]))),
    (r"FAN(\d+)", lambda m: CatalogKey("Fan", int(m[1]))),
    (r"ZMOD(\d+)", lambda m: CatalogKey("ModRing", int(m[1]))),
    (r"SQ(\d+)", lambda m: CatalogKey("FieldSquareClasses", int(m[1]))),
]

LISTED = ["K", "Q2", "H3", "H5", "X1", "X2", "X3", "FAN2", "FAN4", "FAN8", "FAN16",
          "Zmod4", "Zmod6", "SQ3", "SQ5", "SQ7", "SQ11"]

_cache: dict = {}


def by_name(name: str) -> Structure:
    """Resolve short names such as ``Q2``, ``H3``, ``X2``, ``FAN4``, ``Zmod6``, ``SQ7``."""
    key = name.strip()
    if key.lower().startswith("catalog:"):
        key = key[len("catalog:"):]
    upper = key.upper()
    if upper in _cache:
        return _cache[upper]
    for pat, build in _NAME_PATTERNS:
        m = re.fullmatch(pat, upper)
        if m:
            S = make(build(m))
            _cache[upper] = S
            return S
    raise StructureError(f"unknown catalog name {name!r}")


# ---------------------------------------------------------------- tropical probe

INF = 10 ** 18  # stands for the absorbing "infinity" (the zero of the tropical hyperfield)
PROBE_BOUND = 10 ** 6


@dataclass(frozen=True)
class TropicalCell:
    values: frozenset
    unbounded: bool = False


def tropical_probe(g: int, h: int, op: str, window: int = 8) -> TropicalCell:
    """One cell of the tropical hyperfield on Z with ``INF`` as zero.

    ``g (+) g`` is the ray ``{x >= g}``; it is truncated to ``window`` values
    past ``g`` plus ``INF``, with ``unbounded`` set.
    """
    for v in (g, h):
        if v != INF and abs(v) > PROBE_BOUND:
            raise StructureError(f"probe value {v} outside +-{PROBE_BOUND}")
    if op == "times":
        return TropicalCell(frozenset([INF if INF in (g, h) else g + h]))
    if op != "plus":
        raise StructureError("op must be 'plus' or 'times'")
    if g != h:
        return TropicalCell(frozenset([min(g, h)]))
    if g == INF:
        return TropicalCell(frozenset([INF]))
    return TropicalCell(frozenset(range(g, g + window + 1)) | {INF}, unbounded=True)


# ---------------------------------------------------------------- isomorphism

def _signature(S: Structure, x: int, colors):
    cells = []
    for y in range(S.size):
        a = S.add[x, y]
        m = S.mul[x, y]
        cells.append((colors[y], int(a.sum()), tuple(sorted(colors[np.flatnonzero(a)])),
                      int(m.sum()), tuple(sorted(colors[np.flatnonzero(m)]))))
    return (colors[x], colors[S.neg[x]], tuple(sorted(cells)))


def _initial(S):
    return [0 if x == S.zero else 1 if x == S.one else 2 for x in range(S.size)]


def find_isomorphism(A: Structure, B: Structure):
    """A bijection preserving 0, 1, negation and both tables cellwise, or None.

    Candidates are pruned by color refinement and tried identity-first, so the
    result is deterministic.
    """
    n = A.size
    if n != B.size:
        return None
    if A.add.sum() != B.add.sum() or A.mul.sum() != B.mul.sum():
        return None
    # refine both with a shared palette: compare signature multisets per round
    ca = np.array(_initial(A))
    cb = np.array(_initial(B))
    while True:
        sa = [_signature(A, x, ca) for x in range(n)]
        sb = [_signature(B, x, cb) for x in range(n)]
        if sorted(sa) != sorted(sb):
            return None
        palette = {s: i for i, s in enumerate(sorted(set(sa)))}
        na = np.array([palette[s] for s in sa])
        nb_ = np.array([palette[s] for s in sb])
        stable = len(set(na.tolist())) == len(set(ca.tolist()))
        ca, cb = na, nb_
        if stable:
            break
    # identity first, then the rest of the color class in index order
    cand = [[x] * int(cb[x] == ca[x]) + [y for y in range(n) if y != x and cb[y] == ca[x]]
            for x in range(n)]

    order = sorted(range(n), key=lambda x: (len(cand[x]), x))
    f = -np.ones(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)

    def consistent(x, y):
        if f[A.neg[x]] >= 0 and f[A.neg[x]] != B.neg[y]:
            return False
        done = np.flatnonzero(f >= 0)
        fd = f[done]
        for T_A, T_B in ((A.add, B.add), (A.mul, B.mul)):
            if not (T_A[x, x][done] == T_B[y, y][fd]).all():
                return False
            if not (T_A[x][np.ix_(done, done)] == T_B[y][np.ix_(fd, fd)]).all():
                return False
            if not (T_A[x][done][:, x] == T_B[y][fd][:, y]).all():
                return False
        return True

    def place(x, y):
        f[x] = y
        used[y] = True

    def search(pos):
        if pos == n:
            return True
        x = order[pos]
        if f[x] >= 0:
            return search(pos + 1)
        for y in cand[x]:
            if used[y] or not consistent(x, y):
                continue
            place(x, y)
            nx, ny = int(A.neg[x]), int(B.neg[y])
            paired = False
            if f[nx] < 0:
                if used[ny] or cb[ny] != ca[nx]:
                    f[x] = -1
                    used[y] = False
                    continue
                if not consistent(nx, ny):
                    f[x] = -1
                    used[y] = False
                    continue
                place(nx, ny)
                paired = True
            if search(pos + 1):
                return True
            if paired:
                f[nx] = -1
                used[ny] = False
            f[x] = -1
            used[y] = False
        return False

    if not search(0):
        return None
    m = Morphism(A, B, f.copy())
    # final certificate
    if not ((A.add == B.add[f][:, f][:, :, f]).all() and (A.mul == B.mul[f][:, f][:, :, f]).all()):
        return None  # pragma: no cover
    return m
