"""Basis-blade product kernels.

Multivectors are stored as parallel arrays of bitmasks (bit ``i-1`` set when
generator ``e_i`` is a factor) and float64 coefficients.  Every product in the
package reduces to :func:`blade_product`, which walks all term pairs.

Two interchangeable implementations exist: a numba ``@njit`` loop and a
vectorised numpy fallback.  Setting ``GASUB_DISABLE_NUMBA=1`` (or running
without numba installed) selects the numpy path.  Both are always importable
so the benchmark and tests can compare them directly.
"""

from __future__ import annotations

import os

import numpy as np

GEOMETRIC = 0
OUTER = 1
LEFT_CONTRACTION = 2

# above this width the dense scratch buffer is replaced by a sort-reduce
DENSE_MAX_BITS = 14


def _numba_requested() -> bool:
    return os.environ.get("GASUB_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")


# ---------------------------------------------------------------- numpy path

def _reorder_parity_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = a >> 1
    total = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    while np.any(a):
        total += np.bitwise_count(a & b)
        a = a >> 1
    return total & 1


def _reduce_np(masks: np.ndarray, vals: np.ndarray, nbits: int):
    if masks.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.float64)
    if nbits <= DENSE_MAX_BITS:
        dense = np.bincount(masks, weights=vals, minlength=1 << nbits)
        keep = np.flatnonzero(dense)
        return keep.astype(np.int64), dense[keep]
    uniq, inv = np.unique(masks, return_inverse=True)
    summed = np.bincount(inv, weights=vals, minlength=uniq.size)
    keep = summed != 0.0
    return uniq[keep].astype(np.int64), summed[keep]


def blade_product_numpy(ma, ca, mb, cb, neg_mask, null_mask, mode, nbits):
    """Vectorised product over all term pairs; same contract as the numba kernel."""
    if ma.size == 0 or mb.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.float64)
    a = ma[:, None]
    b = mb[None, :]
    common = a & b
    keep = (common & null_mask) == 0
    if mode == OUTER:
        keep &= common == 0
    elif mode == LEFT_CONTRACTION:
        keep &= common == a
    parity = _reorder_parity_np(a, b) ^ (np.bitwise_count(common & neg_mask) & 1)
    sign = 1.0 - 2.0 * parity
    vals = sign * ca[:, None] * cb[None, :]
    out = np.broadcast_to(a ^ b, keep.shape)
    return _reduce_np(out[keep], vals[keep], nbits)


# ---------------------------------------------------------------- numba path

blade_product_numba = None
if _numba_requested():
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba = None
    if numba is not None:
        njit = numba.njit(cache=True)

        @njit
        def _popcount(x):
            c = 0
            while x:
                x &= x - 1
                c += 1
            return c

        @njit
        def _reorder_parity(a, b):
            a >>= 1
            s = 0
            while a:
                s += _popcount(a & b)
                a >>= 1
            return s & 1

        @njit
        def _reduce_nb(masks, vals, nbits):
            if nbits <= DENSE_MAX_BITS:
                dense = np.zeros(1 << nbits, np.float64)
                for i in range(masks.shape[0]):
                    dense[masks[i]] += vals[i]
                cnt = 0
                for m in range(dense.shape[0]):
                    if dense[m] != 0.0:
                        cnt += 1
                om = np.empty(cnt, np.int64)
                oc = np.empty(cnt, np.float64)
                k = 0
                for m in range(dense.shape[0]):
                    if dense[m] != 0.0:
                        om[k] = m
                        oc[k] = dense[m]
                        k += 1
                return om, oc
            order = np.argsort(masks, kind="mergesort")
            om = np.empty(masks.shape[0], np.int64)
            oc = np.empty(masks.shape[0], np.float64)
            k = -1
            last = -1
            for idx in order:
                m = masks[idx]
                if m != last:
                    k += 1
                    om[k] = m
                    oc[k] = 0.0
                    last = m
                oc[k] += vals[idx]
            k += 1
            keep = oc[:k] != 0.0
            return om[:k][keep], oc[:k][keep]

        @njit
        def blade_product_numba(ma, ca, mb, cb, neg_mask, null_mask, mode, nbits):
            na = ma.shape[0]
            nb = mb.shape[0]
            out_m = np.empty(na * nb, np.int64)
            out_c = np.empty(na * nb, np.float64)
            k = 0
            for i in range(na):
                a = ma[i]
                for j in range(nb):
                    b = mb[j]
                    common = a & b
                    if common & null_mask:
                        continue
                    if mode == 1 and common != 0:
                        continue
                    if mode == 2 and common != a:
                        continue
                    parity = _reorder_parity(a, b) ^ (_popcount(common & neg_mask) & 1)
                    out_m[k] = a ^ b
                    out_c[k] = (1.0 - 2.0 * parity) * ca[i] * cb[j]
                    k += 1
            return _reduce_nb(out_m[:k], out_c[:k], nbits)


BACKEND = "numba" if blade_product_numba is not None else "numpy"
_product = blade_product_numba if blade_product_numba is not None else blade_product_numpy


def blade_product(ma, ca, mb, cb, neg_mask: int, null_mask: int, mode: int, nbits: int):
    """Product of two sparse multivectors; returns sorted ``(masks, coeffs)``.

    ``mode`` selects the full geometric product, the outer product (pairs with
    no shared generator) or the left contraction (pairs where the left blade's
    generators are a subset of the right's).  Terms with a repeated null
    generator vanish; exact zeros are dropped.
    """
    return _product(ma, ca, mb, cb, np.int64(neg_mask), np.int64(null_mask), np.int64(mode), np.int64(nbits))
