"""Hot loops of the census: dominance scans and monotone-table merging.

Each kernel has a numba version (``*_jit``) and a numpy version
(``*_numpy``).  The public name dispatches on :func:`numba_enabled`.  Both
operate on integer rank tables: ``ranks[r, i]`` orders player ``i``'s power
across rules exactly, so comparisons never touch floating point.
"""

import numpy as np

from ._accel import njit, numba_enabled

_CHUNK = 256


@njit(cache=True)
def first_dominators_jit(ranks, incumbents, masks, strong):
    q = incumbents.shape[0]
    m, n = ranks.shape
    out = np.full(q, -1, dtype=np.int64)
    for k in range(q):
        v = incumbents[k]
        t = masks[k]
        for c in range(m):
            ok = True
            strict = False
            for i in range(n):
                if (t >> i) & 1:
                    a = ranks[c, i]
                    b = ranks[v, i]
                    if strong:
                        if a <= b:
                            ok = False
                            break
                    else:
                        if a < b:
                            ok = False
                            break
                        if a > b:
                            strict = True
            if ok and (strong or strict):
                out[k] = c
                break
    return out


def first_dominators_numpy(ranks, incumbents, masks, strong):
    ranks = np.asarray(ranks)
    incumbents = np.asarray(incumbents, dtype=np.int64)
    masks = np.asarray(masks, dtype=np.int64)
    n = ranks.shape[1]
    out = np.full(incumbents.shape[0], -1, dtype=np.int64)
    for t in np.unique(masks):
        cols = [i for i in range(n) if (t >> i) & 1]
        sub = ranks[:, cols]
        where = np.nonzero(masks == t)[0]
        for lo in range(0, where.size, _CHUNK):
            sel = where[lo:lo + _CHUNK]
            base = sub[incumbents[sel]]
            cmp_gt = sub[None, :, :] > base[:, None, :]
            if strong:
                hit = cmp_gt.all(axis=2)
            else:
                hit = (sub[None, :, :] >= base[:, None, :]).all(axis=2) & cmp_gt.any(axis=2)
            found = hit.any(axis=1)
            out[sel[found]] = hit[found].argmax(axis=1)
    return out


def first_dominators(ranks, incumbents, masks, strong=False):
    """For each query ``(incumbents[k], masks[k])`` the first rule index that
    Pareto dominates the incumbent for that coalition, or -1.

    ``strong`` switches to strict improvement for every member.
    """
    incumbents = np.ascontiguousarray(incumbents, dtype=np.int64)
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if incumbents.size == 0:
        return np.empty(0, dtype=np.int64)
    if numba_enabled():
        return first_dominators_jit(np.ascontiguousarray(ranks, dtype=np.int64),
                                    incumbents, masks, bool(strong))
    return first_dominators_numpy(ranks, incumbents, masks, strong)


@njit(cache=True)
def first_pareto_pair_jit(ranks):
    m, n = ranks.shape
    for a in range(m):
        for b in range(m):
            ok = True
            strict = False
            for i in range(n):
                if ranks[a, i] < ranks[b, i]:
                    ok = False
                    break
                if ranks[a, i] > ranks[b, i]:
                    strict = True
            if ok and strict:
                return a, b
    return -1, -1


def first_pareto_pair_numpy(ranks):
    ranks = np.asarray(ranks)
    m = ranks.shape[0]
    for lo in range(0, m, _CHUNK):
        blk = ranks[lo:lo + _CHUNK]
        hit = (blk[:, None, :] >= ranks[None, :, :]).all(axis=2) & \
              (blk[:, None, :] > ranks[None, :, :]).any(axis=2)
        rows = np.nonzero(hit.any(axis=1))[0]
        if rows.size:
            a = rows[0]
            return lo + int(a), int(hit[a].argmax())
    return -1, -1


def first_pareto_pair(ranks):
    """First ordered pair ``(a, b)`` with rule ``a`` dominating ``b`` for the
    grand coalition, scanning ``a`` then ``b`` in index order."""
    if numba_enabled():
        a, b = first_pareto_pair_jit(np.ascontiguousarray(ranks, dtype=np.int64))
        return int(a), int(b)
    return first_pareto_pair_numpy(ranks)


@njit(cache=True)
def monotone_merge_jit(prev, width):
    k = prev.shape[0]
    count = 0
    for a in range(k):
        for b in range(k):
            if prev[a] & ~prev[b] == 0:
                count += 1
    out = np.empty(count, dtype=np.uint64)
    pos = 0
    shift = np.uint64(width)
    for a in range(k):
        for b in range(k):
            if prev[a] & ~prev[b] == 0:
                out[pos] = prev[a] | (prev[b] << shift)
                pos += 1
    return out


def monotone_merge_numpy(prev, width):
    parts = []
    shift = np.uint64(width)
    for lo in range(0, prev.size, _CHUNK):
        a = prev[lo:lo + _CHUNK]
        ok = (a[:, None] & ~prev[None, :]) == 0
        ai, bi = np.nonzero(ok)
        parts.append(a[ai] | (prev[bi] << shift))
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.uint64)


def monotone_merge(prev, width):
    """Monotone tables on one more variable from those on ``width`` bits.

    A table on ``n`` players is monotone iff its halves ``f0`` (player ``n``
    absent) and ``f1`` (present) are monotone with ``f0 <= f1`` bitwise.
    """
    prev = np.ascontiguousarray(prev, dtype=np.uint64)
    if numba_enabled():
        return monotone_merge_jit(prev, width)
    return monotone_merge_numpy(prev, width)
