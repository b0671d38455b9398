"""Random multivectors and blades for property tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .algebra import Blade, Multivector, Signature, outer_product


def random_multivector(sig: Signature, rng: np.random.Generator, density: float = 1.0) -> Multivector:
    """Coefficients uniform in [-1, 1] on a random subset of the basis."""
    size = 1 << sig.n
    dense = rng.uniform(-1.0, 1.0, size)
    if density < 1.0:
        dense[rng.random(size) > density] = 0.0
    return Multivector.from_dense(sig, dense)


def _special_vector(sig: Signature, rng: np.random.Generator) -> np.ndarray | None:
    # a vector that squares to zero, when the signature has any
    v = np.zeros(sig.n)
    choices = []
    if sig.r:
        choices.append("null")
    if sig.p and sig.q:
        choices.append("light")
    if not choices:
        return None
    if choices[rng.integers(len(choices))] == "null":
        v[sig.p + sig.q:] = rng.standard_normal(sig.r) * (rng.random(sig.r) < 0.7)
        if not v.any():
            v[sig.p + sig.q + rng.integers(sig.r)] = 1.0
    else:
        i = rng.integers(sig.p)
        j = sig.p + rng.integers(sig.q)
        s = rng.uniform(0.5, 2.0)
        v[i] = s
        v[j] = s * rng.choice([-1.0, 1.0])
    return v


def random_vectors(sig: Signature, k: int, rng: np.random.Generator, special: float = 0.0) -> np.ndarray:
    """``k`` random coordinate rows; with probability ``special`` a row is null."""
    out = rng.standard_normal((k, sig.n))
    for i in range(k):
        if special and rng.random() < special:
            v = _special_vector(sig, rng)
            if v is not None:
                out[i] = v
    return out


def wedge_rows(sig: Signature, rows: np.ndarray) -> Multivector:
    out = Multivector.scalar(sig, 1.0)
    for row in rows:
        out = outer_product(out, Multivector.vector(sig, row))
    return out


def random_blade(sig: Signature, k: int, rng: np.random.Generator, special: float = 0.0) -> Blade:
    """Outer product of ``k`` random vectors (retried until nonzero)."""
    while True:
        rows = random_vectors(sig, k, rng, special)
        if np.linalg.matrix_rank(rows) == k if k else True:
            return Blade._trusted(wedge_rows(sig, rows), k)


def random_blade_pair(sig: Signature, rng: np.random.Generator, special: float = 0.3):
    """Two blades sharing a random common subspace of random dimension.

    Returns ``(A, B, shared_dim)``; ``shared_dim`` is the designed dimension of
    the intersection (generic extra directions cannot enlarge it unless
    ``r + s - shared > n``, which is excluded).
    """
    n = sig.n
    while True:
        r = int(rng.integers(1, n + 1))
        s = int(rng.integers(1, n + 1))
        lo = max(0, r + s - n)
        m = int(rng.integers(lo, min(r, s) + 1))
        rows = random_vectors(sig, r + s - m, rng, special)
        if np.linalg.matrix_rank(rows) != r + s - m:
            continue
        shared, only_a, only_b = rows[:m], rows[m:r], rows[r:]
        # mix the shared directions so neither blade lists them verbatim
        mix_a = rng.standard_normal((m, m)) + 2 * np.eye(m)
        a_rows = np.vstack([mix_a @ shared, only_a]) if m else only_a
        b_rows = np.vstack([only_b, shared]) if m else only_b
        a_rows = a_rows[rng.permutation(r)]
        a = Blade._trusted(wedge_rows(sig, a_rows), r)
        b = Blade._trusted(wedge_rows(sig, b_rows), s)
        return a, b, m


def random_nested_pair(sig: Signature, rng: np.random.Generator, special: float = 0.0):
    """``(A, B)`` with ``B`` inside ``A``, both nonzero, ``step B <= step A``."""
    n = sig.n
    r = int(rng.integers(1, n + 1))
    s = int(rng.integers(0, r + 1))
    while True:
        rows = random_vectors(sig, r, rng, special)
        if np.linalg.matrix_rank(rows) == r:
            break
    mix = rng.standard_normal((s, r))
    a = Blade._trusted(wedge_rows(sig, rows), r)
    b = Blade._trusted(wedge_rows(sig, mix @ rows), s)
    return a, b
