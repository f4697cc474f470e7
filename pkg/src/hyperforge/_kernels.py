"""Hot loops over set-valued operation tables.

Every kernel has two implementations: a numba ``@njit`` version and a pure
numpy one.  ``HYPERFORGE_KERNELS=numpy`` (or a missing numba) selects the
numpy path; both must return identical results, which the test-suite checks.

Tables are boolean arrays ``T[a, b, c]`` meaning ``c in a*b``.
"""
import os

import numpy as np

BACKEND = os.environ.get("HYPERFORGE_KERNELS", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ValueError(f"HYPERFORGE_KERNELS must be 'numba' or 'numpy', got {BACKEND!r}")

if BACKEND == "numba":
    try:
        import numba as nb
    except ImportError:  # pragma: no cover - numba is a declared dependency
        BACKEND = "numpy"

NO_WITNESS = (-1, -1, -1)


# ---------------------------------------------------------------- numpy path

def _image_np(T, A, B):
    ia = np.flatnonzero(A)
    ib = np.flatnonzero(B)
    if ia.size == 0 or ib.size == 0:
        return np.zeros(T.shape[2], dtype=np.bool_)
    return T[np.ix_(ia, ib)].any(axis=(0, 1))


def _left_right_np(T, a):
    """(a*b)*c and a*(b*c) for fixed ``a`` as (n, n, n) boolean blocks."""
    n = T.shape[0]
    Tf = T.astype(np.float32)
    left = (Tf[a] @ Tf.reshape(n, n * n)).reshape(n, n, n) > 0
    right = (Tf.reshape(n * n, n) @ Tf[a]).reshape(n, n, n) > 0
    return left, right


def _assoc_witness_np(T):
    n = T.shape[0]
    for a in range(n):
        left, right = _left_right_np(T, a)
        bad = (left & ~right).any(axis=2)
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return (a, int(b), int(c))
    return NO_WITNESS


def _distrib_witness_np(A, M, full):
    # witness order (c, a, b): c*(a+b) versus c*a + c*b
    n = A.shape[0]
    Af = A.astype(np.float32)
    Mf = M.astype(np.float32)
    for c in range(n):
        # lhs[a, b, :] = union over x in a+b of c*x
        lhs = (Af.reshape(n * n, n) @ Mf[c]).reshape(n, n, n) > 0
        # rhs[a, b, :] = union over u in c*a, v in c*b of u+v
        tmp = (Mf[c] @ Af.reshape(n, n * n)).reshape(n, n, n)  # [a, v, z]
        rhs = np.einsum("bv,avz->abz", Mf[c], tmp) > 0
        bad = (lhs & ~rhs).any(axis=2)
        if full:
            bad |= (rhs & ~lhs).any(axis=2)
        if bad.any():
            a, b = np.argwhere(bad)[0]
            return (c, int(a), int(b))
    return NO_WITNESS


def _bfs_np(start, gmul, iso, neg, mode, target, budget):
    g = start.shape[0]
    base = int(start.sum()) + 1

    def key(counts):
        k = 0
        for i in range(g - 1, -1, -1):
            k = k * base + int(counts[i])
        return k

    start_key = key(start)
    seen = {start_key}
    queue = [start.copy()]
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        if mode == 0:
            if key(cur) == target:
                return True, cur, len(seen), False
        else:
            for i in range(g):
                if cur[i] > 0 and cur[neg[i]] > 0:
                    return True, cur, len(seen), False
        present = np.flatnonzero(cur)
        for x in range(present.size):
            i = present[x]
            for y in range(x, present.size):
                j = present[y]
                if i == j and cur[i] < 2:
                    continue
                for k in np.flatnonzero(iso[i, j]):
                    l = gmul[gmul[i, j], k]
                    nxt = cur.copy()
                    nxt[i] -= 1
                    nxt[j] -= 1
                    nxt[k] += 1
                    nxt[l] += 1
                    kk = key(nxt)
                    if kk not in seen:
                        if len(seen) >= budget:
                            return False, start, len(seen), True
                        seen.add(kk)
                        queue.append(nxt)
    return False, start, len(seen), False


# ---------------------------------------------------------------- numba path

if BACKEND == "numba":

    @nb.njit(cache=True)
    def _image_nb(T, A, B):
        n = T.shape[2]
        out = np.zeros(n, dtype=np.bool_)
        for a in range(T.shape[0]):
            if not A[a]:
                continue
            for b in range(T.shape[1]):
                if not B[b]:
                    continue
                for z in range(n):
                    if T[a, b, z]:
                        out[z] = True
        return out

    @nb.njit(cache=True)
    def _assoc_witness_nb(T):
        n = T.shape[0]
        left = np.zeros(n, dtype=np.bool_)
        right = np.zeros(n, dtype=np.bool_)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    left[:] = False
                    right[:] = False
                    for x in range(n):
                        if T[a, b, x]:
                            for z in range(n):
                                if T[x, c, z]:
                                    left[z] = True
                    for y in range(n):
                        if T[b, c, y]:
                            for z in range(n):
                                if T[a, y, z]:
                                    right[z] = True
                    for z in range(n):
                        if left[z] and not right[z]:
                            return (a, b, c)
        return (-1, -1, -1)

    @nb.njit(cache=True)
    def _distrib_witness_nb(A, M, full):
        n = A.shape[0]
        lhs = np.zeros(n, dtype=np.bool_)
        rhs = np.zeros(n, dtype=np.bool_)
        for c in range(n):
            for a in range(n):
                for b in range(n):
                    lhs[:] = False
                    rhs[:] = False
                    for x in range(n):
                        if A[a, b, x]:
                            for z in range(n):
                                if M[c, x, z]:
                                    lhs[z] = True
                    for u in range(n):
                        if M[c, a, u]:
                            for v in range(n):
                                if M[c, b, v]:
                                    for z in range(n):
                                        if A[u, v, z]:
                                            rhs[z] = True
                    for z in range(n):
                        if lhs[z] and not rhs[z]:
                            return (c, a, b)
                        if full and rhs[z] and not lhs[z]:
                            return (c, a, b)
        return (-1, -1, -1)

    @nb.njit(cache=True)
    def _key_nb(counts, base):
        k = 0
        for i in range(counts.shape[0] - 1, -1, -1):
            k = k * base + counts[i]
        return k

    @nb.njit(cache=True)
    def _bfs_nb(start, gmul, iso, neg, mode, target, budget):
        g = start.shape[0]
        base = 1
        for i in range(g):
            base += start[i]
        seen = dict()
        seen[_key_nb(start, base)] = True
        queue = np.empty((min(budget, 1024) + 1, g), dtype=np.int64)
        queue[0, :] = start
        tail = 1
        head = 0
        nxt = np.empty(g, dtype=np.int64)
        while head < tail:
            cur = queue[head]
            head += 1
            if mode == 0:
                if _key_nb(cur, base) == target:
                    return True, cur.copy(), len(seen), False
            else:
                for i in range(g):
                    if cur[i] > 0 and cur[neg[i]] > 0:
                        return True, cur.copy(), len(seen), False
            for i in range(g):
                if cur[i] == 0:
                    continue
                for j in range(i, g):
                    if cur[j] == 0 or (i == j and cur[i] < 2):
                        continue
                    for k in range(g):
                        if not iso[i, j, k]:
                            continue
                        l = gmul[gmul[i, j], k]
                        nxt[:] = cur
                        nxt[i] -= 1
                        nxt[j] -= 1
                        nxt[k] += 1
                        nxt[l] += 1
                        kk = _key_nb(nxt, base)
                        if kk not in seen:
                            if len(seen) >= budget:
                                return False, start.copy(), len(seen), True
                            seen[kk] = True
                            if tail == queue.shape[0]:
                                grown = np.empty((2 * tail, g), dtype=np.int64)
                                grown[:tail] = queue
                                queue = grown
                                cur = queue[head - 1]
                            queue[tail, :] = nxt
                            tail += 1
        return False, start.copy(), len(seen), False


# ---------------------------------------------------------------- dispatch

def image(T, A, B):
    """Union of ``T[a, b]`` over ``a in A``, ``b in B`` (masks in, mask out)."""
    if BACKEND == "numba":
        return _image_nb(T, A, B)
    return _image_np(T, A, B)


def assoc_witness(T):
    """Lexicographically first ``(a, b, c)`` with ``(ab)c`` not inside ``a(bc)``."""
    if BACKEND == "numba":
        return tuple(int(v) for v in _assoc_witness_nb(T))
    return _assoc_witness_np(T)


def distrib_witness(A, M, full=False):
    """First ``(c, a, b)`` where ``c(a+b)`` is not inside (or, if ``full``, not
    equal to) ``ca + cb``."""
    if BACKEND == "numba":
        return tuple(int(v) for v in _distrib_witness_nb(A, M, bool(full)))
    return _distrib_witness_np(A, M, bool(full))


def bfs_forms(start, gmul, iso, neg, mode, target, budget):
    """Breadth-first search over multisets of group elements.

    ``start`` holds entry counts; a move replaces one pair ``(i, j)`` by
    ``(k, ijk)`` whenever ``iso[i, j, k]``.  ``mode=0`` looks for the state
    whose key equals ``target``; ``mode=1`` looks for a state containing some
    ``x`` together with ``neg[x]``.

    Returns ``(found, state, visited, budget_exceeded)``.
    """
    start = np.ascontiguousarray(start, dtype=np.int64)
    gmul = np.ascontiguousarray(gmul, dtype=np.int64)
    neg = np.ascontiguousarray(neg, dtype=np.int64)
    iso = np.ascontiguousarray(iso, dtype=np.bool_)
    if BACKEND == "numba":
        found, state, visited, over = _bfs_nb(start, gmul, iso, neg, int(mode),
                                              int(target), int(budget))
    else:
        found, state, visited, over = _bfs_np(start, gmul, iso, neg, int(mode),
                                              int(target), int(budget))
    return bool(found), np.asarray(state, dtype=np.int64), int(visited), bool(over)


def multiset_key(counts, base):
    k = 0
    for i in range(len(counts) - 1, -1, -1):
        k = k * base + int(counts[i])
    return k
