"""Reference subspace operations on explicit spanning sets.

Deliberately naive Gauss-Jordan elimination on coordinate vectors.  Nothing
here touches the product kernels: the only contact with the algebra is reading
a blade's term coefficients in :func:`span_of_blade`, which builds the matrix
of ``x -> x ^ A`` from first principles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Multivector, Signature
from .errors import EmptyInput, NotASubspace

PIVOT_TOL = 1e-10
COMPARE_TOL = 1e-8


def rref(m: np.ndarray, tol: float = PIVOT_TOL) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with partial pivoting; zero rows dropped.

    Pivots smaller than ``tol * max|m|`` are treated as zero.
    """
    a = np.array(m, dtype=np.float64, copy=True)
    if a.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = a.shape
    if a.size == 0:
        return np.zeros((0, cols)), []
    eps = tol * max(np.max(np.abs(a)), 1e-300)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        i = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[i, c]) <= eps:
            a[r:, c] = 0.0
            continue
        a[[r, i]] = a[[i, r]]
        a[r] /= a[r, c]
        for k in range(rows):
            if k != r:
                a[k] -= a[k, c] * a[r]
        a[:, c] = 0.0
        a[r, c] = 1.0
        pivots.append(c)
        r += 1
    return a[:r], pivots


def null_space(m: np.ndarray, tol: float = PIVOT_TOL) -> np.ndarray:
    """Rows spanning ``{x : m x = 0}``, read off the free columns of the RREF."""
    cols = m.shape[1]
    red, pivots = rref(m, tol) if m.shape[0] else (np.zeros((0, cols)), [])
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols))
    for k, f in enumerate(free):
        basis[k, f] = 1.0
        for row, p in enumerate(pivots):
            basis[k, p] = -red[row, f]
    return basis


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace of ``R^n`` held as a canonical RREF row basis."""

    sig: Signature
    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64).reshape(-1, self.sig.n)
        red, _ = rref(v) if v.shape[0] else (np.zeros((0, self.sig.n)), [])
        red.flags.writeable = False
        object.__setattr__(self, "vectors", red)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def contains(self, x: np.ndarray, tol: float = COMPARE_TOL) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if self.dim == 0:
            return bool(np.max(np.abs(x)) <= tol) if x.size else True
        coef, *_ = np.linalg.lstsq(self.vectors.T, x, rcond=None)
        return bool(np.linalg.norm(self.vectors.T @ coef - x) <= tol * max(1.0, np.linalg.norm(x)))

    def __repr__(self):
        return f"SubspaceBasis({self.sig}, dim={self.dim})"


def from_vectors(sig: Signature, vectors) -> SubspaceBasis:
    return SubspaceBasis(sig, np.asarray(vectors, dtype=np.float64).reshape(-1, sig.n))


def _wedge_vector_matrix(a: Multivector) -> np.ndarray:
    # column i holds the coefficients of e_{i+1} ^ A over the (k+1)-blades
    n = a.sig.n
    terms = a.terms
    rows: dict[tuple[int, ...], int] = {}
    entries = []
    for idx, c in terms.items():
        for i in range(1, n + 1):
            if i in idx:
                continue
            before = sum(1 for j in idx if j < i)
            out = tuple(sorted(idx + (i,)))
            r = rows.setdefault(out, len(rows))
            entries.append((r, i - 1, (-1) ** before * c))
    m = np.zeros((len(rows), n))
    for r, col, v in entries:
        m[r, col] += v
    return m


def span_of_blade(a: Multivector) -> SubspaceBasis:
    """``{x : x ^ A = 0}`` as a null space; the scalar blade spans ``{0}``."""
    if not a.terms:
        raise EmptyInput("the zero blade does not determine a subspace")
    scale = max(abs(c) for c in a.terms.values())
    m = _wedge_vector_matrix(a) / scale
    if m.shape[0] == 0:
        # only the pseudoscalar has no room to grow
        return SubspaceBasis(a.sig, np.eye(a.sig.n))
    return SubspaceBasis(a.sig, null_space(m))


def intersection(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    _same_sig(a, b)
    if a.dim == 0 or b.dim == 0:
        return SubspaceBasis(a.sig, np.zeros((0, a.sig.n)))
    # sum(alpha_i a_i) - sum(beta_j b_j) = 0
    combined = np.hstack([a.vectors.T, -b.vectors.T])
    ker = null_space(combined)
    return SubspaceBasis(a.sig, ker[:, : a.dim] @ a.vectors)


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    _same_sig(a, b)
    return SubspaceBasis(a.sig, np.vstack([a.vectors, b.vectors]))


def metric_complement_within(b: SubspaceBasis, a: SubspaceBasis, gram: np.ndarray | None = None) -> SubspaceBasis:
    """``{x in A : x . g . y = 0 for all y in B}``; requires ``B`` inside ``A``."""
    _same_sig(a, b)
    if gram is None:
        gram = np.diag(a.sig.squares)
    if subspace_sum(a, b).dim != a.dim:
        raise NotASubspace("B is not contained in A")
    if a.dim == 0:
        return a
    if b.dim == 0:
        return a
    pairing = b.vectors @ gram @ a.vectors.T
    ker = null_space(pairing)
    return SubspaceBasis(a.sig, ker @ a.vectors)


def symmetric_difference(a: SubspaceBasis, b: SubspaceBasis, gram: np.ndarray | None = None) -> SubspaceBasis:
    return metric_complement_within(intersection(a, b), subspace_sum(a, b), gram)


def same_subspace(a: SubspaceBasis, b: SubspaceBasis, tol: float = COMPARE_TOL) -> bool:
    _same_sig(a, b)
    if a.dim != b.dim:
        return False
    if a.dim == 0:
        return True
    return bool(np.max(np.abs(a.vectors - b.vectors)) <= tol)


def _same_sig(a: SubspaceBasis, b: SubspaceBasis):
    if a.sig != b.sig:
        raise ValueError(f"subspaces of different spaces: {a.sig} vs {b.sig}")
