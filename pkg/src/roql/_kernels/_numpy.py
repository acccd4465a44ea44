"""Vectorised numpy versions of the table kernels (fallback path)."""

import numpy as np


def _positions(n, mask, want):
    return np.array([i for i in range(n) if ((mask >> i) & 1) == want], dtype=np.int64)


def _deposit_all(positions):
    k = positions.shape[0]
    y = np.arange(1 << k, dtype=np.int64)
    out = np.zeros(1 << k, dtype=np.int64)
    for j in range(k):
        out |= ((y >> j) & 1) << positions[j]
    return out


def essential_mask(bits, n):
    result = 0
    for i in range(n):
        view = bits.reshape(-1, 2, 1 << i)
        if np.any(view[:, 0, :] != view[:, 1, :]):
            result |= 1 << i
    return result


def project(bits, n, mask, vals):
    return bits[vals | _deposit_all(_positions(n, mask, 0))].astype(np.uint8)


def constant_value(bits, n, mask, vals):
    sub = bits[vals | _deposit_all(_positions(n, mask, 0))]
    if np.all(sub == sub[0]):
        return int(sub[0])
    return -1


def parity(bits, n, mask, vals):
    sub = bits[vals | _deposit_all(_positions(n, mask, 0))]
    return int(np.bitwise_xor.reduce(sub))


def _dependence(values, k):
    # values: (rows, 2**k) -> bool (rows,) true when every local var is essential
    ok = np.ones(values.shape[0], dtype=bool)
    for s in range(k):
        view = values.reshape(values.shape[0], -1, 2, 1 << s)
        ok &= np.any(view[:, :, 0, :] != view[:, :, 1, :], axis=(1, 2))
    return ok


def _candidate_bases(bits, n, star_mask):
    stars = _positions(n, star_mask, 1)
    bases = _deposit_all(_positions(n, star_mask, 0))
    values = bits[bases[:, None] | _deposit_all(stars)[None, :]]
    return bases, _dependence(values, stars.shape[0])


def first_hypercube_base(bits, n, star_mask):
    bases, ok = _candidate_bases(bits, n, star_mask)
    hits = np.flatnonzero(ok)
    return int(bases[hits[0]]) if hits.size else -1


def all_hypercube_bases(bits, n, star_mask):
    bases, ok = _candidate_bases(bits, n, star_mask)
    return bases[ok]


def consistent(tables, idx, vals):
    picked = (tables[:, None] >> idx[None, :]) & np.uint64(1)
    return np.all(picked == vals[None, :].astype(np.uint64), axis=1)


def discriminatory_subset(bits, n, subset_mask):
    rest = _positions(n, subset_mask, 0)
    if rest.shape[0] == 0:
        return False
    bases = _deposit_all(_positions(n, subset_mask, 1))
    values = bits[bases[:, None] | _deposit_all(rest)[None, :]]
    return not bool(np.any(_dependence(values, rest.shape[0])))
