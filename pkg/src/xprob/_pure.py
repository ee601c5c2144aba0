"""Numpy fallbacks for the compiled kernels in ``_ckernels.pyx``.

Results match the compiled versions bit for bit: subset sums are built in
the same order and violation pairs are reported in the same scan order.
"""
import numpy as np

_CHUNK_CELLS = 1 << 22


def subset_sums(atoms):
    atoms = np.ascontiguousarray(atoms, dtype=np.float64)
    out = np.zeros(1 << atoms.shape[0], dtype=np.float64)
    for i, a in enumerate(atoms):
        half = 1 << i
        out[half:2 * half] = out[:half] + a
    return out


def max_abs_subset_sum(d):
    return float(np.abs(subset_sums(d)).max())


def _row_chunks(size):
    step = max(1, _CHUNK_CELLS // size)
    for start in range(0, size, step):
        yield np.arange(start, min(size, start + step), dtype=np.int64)


def _first(mask, rows):
    # rows scanned ascending, columns descending (matches the compiled walk)
    hit_rows = np.flatnonzero(mask.any(axis=1))
    if hit_rows.size == 0:
        return -1, -1
    r = hit_rows[0]
    c = np.flatnonzero(mask[r])[-1]
    return int(rows[r]), int(c)


def ec3_violations(values, tol):
    values = np.ascontiguousarray(values, dtype=np.float64)
    size = values.shape[0]
    cols = np.arange(size, dtype=np.int64)
    n_pos = n_neg = 0
    a_pos = b_pos = a_neg = b_neg = -1
    for bs in _row_chunks(size):
        nested = (cols[None, :] & bs[:, None]) == cols[None, :]
        va = np.broadcast_to(values[None, :], nested.shape)
        vb = values[bs][:, None]
        vd = values[bs[:, None] ^ cols[None, :]]
        pos = nested & (va >= 0) & (vb >= 0) & (vd >= 0) & (va > vb + tol)
        neg = nested & (va <= 0) & (vb <= 0) & (vd <= 0) & (va < vb - tol)
        cp, cn = int(pos.sum()), int(neg.sum())
        if cp and n_pos == 0:
            b_pos, a_pos = _first(pos, bs)
        if cn and n_neg == 0:
            b_neg, a_neg = _first(neg, bs)
        n_pos += cp
        n_neg += cn
    return np.array([n_pos, a_pos, b_pos, n_neg, a_neg, b_neg], dtype=np.int64)


def disjoint_violations(values, sense, tol):
    values = np.ascontiguousarray(values, dtype=np.float64)
    size = values.shape[0]
    cols = np.arange(size, dtype=np.int64)
    count = 0
    fa = fb = -1
    for as_ in _row_chunks(size):
        ok = ((as_[:, None] & cols[None, :]) == 0) & (cols[None, :] > as_[:, None])
        lhs = values[as_[:, None] | cols[None, :]]
        rhs = values[as_][:, None] + values[None, :]
        bad = ok & (lhs < rhs - tol if sense > 0 else lhs > rhs + tol)
        c = int(bad.sum())
        if c and count == 0:
            fa, fb = _first(bad, as_)
        count += c
    return np.array([count, fa, fb], dtype=np.int64)
