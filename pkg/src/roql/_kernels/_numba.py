"""Loop kernels compiled with numba.

Every function mirrors one in ``_numpy`` and must return identical results.
Tables are ``uint8`` arrays of length ``2**n``; an input index carries
variable ``x_{i+1}`` in bit ``i``.  ``mask``/``vals`` describe a partial
assignment: bit ``i`` of ``mask`` is set when ``x_{i+1}`` is fixed, and
``vals`` holds the fixed values (zero on the stars).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _positions(n, mask, want):
    count = 0
    for i in range(n):
        if ((mask >> i) & 1) == want:
            count += 1
    out = np.empty(count, dtype=np.int64)
    c = 0
    for i in range(n):
        if ((mask >> i) & 1) == want:
            out[c] = i
            c += 1
    return out


@njit(cache=True)
def _deposit(y, positions):
    out = 0
    for j in range(positions.shape[0]):
        if (y >> j) & 1:
            out |= 1 << positions[j]
    return out


@njit(cache=True)
def essential_mask(bits, n):
    size = 1 << n
    result = 0
    for i in range(n):
        step = 1 << i
        for v in range(size):
            if v & step:
                continue
            if bits[v] != bits[v | step]:
                result |= step
                break
    return result


@njit(cache=True)
def project(bits, n, mask, vals):
    stars = _positions(n, mask, 0)
    k = stars.shape[0]
    out = np.empty(1 << k, dtype=np.uint8)
    for y in range(1 << k):
        out[y] = bits[vals | _deposit(y, stars)]
    return out


@njit(cache=True)
def constant_value(bits, n, mask, vals):
    stars = _positions(n, mask, 0)
    k = stars.shape[0]
    first = bits[vals]
    for y in range(1, 1 << k):
        if bits[vals | _deposit(y, stars)] != first:
            return -1
    return np.int64(first)


@njit(cache=True)
def parity(bits, n, mask, vals):
    stars = _positions(n, mask, 0)
    k = stars.shape[0]
    acc = 0
    for y in range(1 << k):
        acc ^= bits[vals | _deposit(y, stars)]
    return np.int64(acc)


@njit(cache=True)
def _depends_on_all(bits, base, stars):
    k = stars.shape[0]
    for s in range(k):
        found = False
        for y in range(1 << k):
            if (y >> s) & 1:
                continue
            lo = base | _deposit(y, stars)
            if bits[lo] != bits[lo | (1 << stars[s])]:
                found = True
                break
        if not found:
            return False
    return True


@njit(cache=True)
def first_hypercube_base(bits, n, star_mask):
    stars = _positions(n, star_mask, 1)
    others = _positions(n, star_mask, 0)
    for m in range(1 << others.shape[0]):
        base = _deposit(m, others)
        if _depends_on_all(bits, base, stars):
            return base
    return -1


@njit(cache=True)
def all_hypercube_bases(bits, n, star_mask):
    stars = _positions(n, star_mask, 1)
    others = _positions(n, star_mask, 0)
    total = 1 << others.shape[0]
    buf = np.empty(total, dtype=np.int64)
    c = 0
    for m in range(total):
        base = _deposit(m, others)
        if _depends_on_all(bits, base, stars):
            buf[c] = base
            c += 1
    return buf[:c].copy()


@njit(cache=True)
def consistent(tables, idx, vals):
    m = tables.shape[0]
    out = np.ones(m, dtype=np.bool_)
    one = np.uint64(1)
    for r in range(m):
        t = tables[r]
        for j in range(idx.shape[0]):
            if ((t >> idx[j]) & one) != vals[j]:
                out[r] = False
                break
    return out


@njit(cache=True)
def discriminatory_subset(bits, n, subset_mask):
    inside = _positions(n, subset_mask, 1)
    rest = _positions(n, subset_mask, 0)
    if rest.shape[0] == 0:
        return False
    for a in range(1 << inside.shape[0]):
        base = _deposit(a, inside)
        if _depends_on_all(bits, base, rest):
            return False
    return True
