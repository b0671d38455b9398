import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from gasub import _kernels
from gasub.algebra import Signature, mask_to_indices

from oracles import basis_product

BACKENDS = [_kernels.blade_product_numpy]
if _kernels.blade_product_numba is not None:
    BACKENDS.append(_kernels.blade_product_numba)


def _call(fn, a, b, sig, mode):
    return fn(a[0], a[1], b[0], b[1], np.int64(sig.neg_mask), np.int64(sig.null_mask), np.int64(mode), np.int64(sig.n))


def _random_sparse(rng, n, density=0.5):
    masks = np.flatnonzero(rng.random(1 << n) < density).astype(np.int64)
    return masks, rng.uniform(-1, 1, masks.size)


@pytest.mark.parametrize("fn", BACKENDS, ids=lambda f: f.__name__)
def test_exhaustive_basis_products_match_reordering_oracle(fn):
    sig = Signature(2, 1, 1)
    squares = sig.squares
    one = np.ones(1)
    for a, b in itertools.product(range(1 << sig.n), repeat=2):
        ia, ib = mask_to_indices(a), mask_to_indices(b)
        s, idx = basis_product(squares, ia, ib)
        for mode in (0, 1, 2):
            m, c = _call(fn, (np.array([a], np.int64), one), (np.array([b], np.int64), one), sig, mode)
            wanted = s
            if mode == 1 and len(idx) != len(ia) + len(ib):
                wanted = 0.0
            if mode == 2 and len(idx) != len(ib) - len(ia):
                wanted = 0.0
            if wanted == 0.0:
                assert m.size == 0
            else:
                assert m.tolist() == [sum(1 << (i - 1) for i in idx)]
                assert c.tolist() == [wanted]


@pytest.mark.skipif(len(BACKENDS) < 2, reason="numba unavailable")
@pytest.mark.parametrize("sig", [Signature(3), Signature(2, 2, 1), Signature(1, 1, 3), Signature._wide(8, 4, 4)], ids=str)
@pytest.mark.parametrize("mode", [0, 1, 2])
def test_backends_agree(sig, mode):
    rng = np.random.default_rng(7)
    density = 0.5 if sig.n <= 6 else 0.01
    for _ in range(20):
        a = _random_sparse(rng, sig.n, density)
        b = _random_sparse(rng, sig.n, density)
        m1, c1 = _call(_kernels.blade_product_numpy, a, b, sig, mode)
        m2, c2 = _call(_kernels.blade_product_numba, a, b, sig, mode)
        assert np.array_equal(m1, m2)
        np.testing.assert_allclose(c1, c2, rtol=1e-13, atol=1e-15)


def test_empty_operands():
    sig = Signature(3)
    empty = (np.empty(0, np.int64), np.empty(0))
    for fn in BACKENDS:
        m, c = _call(fn, empty, (np.array([1], np.int64), np.ones(1)), sig, 0)
        assert m.size == 0 and c.size == 0


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, GASUB_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import gasub; print(gasub.BACKEND)"], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"
