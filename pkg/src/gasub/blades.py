"""Blades as subspaces: certification, factorization, projectors, outermorphisms."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    Blade,
    Multivector,
    Signature,
    ToleranceConfig,
    blade_inverse,
    geometric_product,
    grade_part,
    left_contraction,
    outer_product,
)
from .errors import NotABlade, NotAProjector, RankMismatch, SignatureMismatch

log = logging.getLogger(__name__)

IDEMPOTENCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Real matrix acting on generators: column ``j`` is the image of ``e_{j+1}``."""

    sig_in: Signature
    sig_out: Signature
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.shape != (self.sig_out.n, self.sig_in.n):
            raise ValueError(f"matrix shape {m.shape} does not map {self.sig_in} to {self.sig_out}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, sig: Signature) -> "LinearOperator":
        return cls(sig, sig, np.eye(sig.n))

    def __call__(self, x: Multivector) -> Multivector:
        return outermorphism_apply(self, x)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        if other.sig_out != self.sig_in:
            raise SignatureMismatch("operator composition across different algebras")
        return LinearOperator(other.sig_in, self.sig_out, self.matrix @ other.matrix)

    def idempotence_error(self) -> float:
        return float(np.linalg.norm(self.matrix @ self.matrix - self.matrix))


class _Outermorphism:
    # memoises images of basis blades; prefixes are shared between terms
    def __init__(self, f: LinearOperator):
        self.f = f
        self.cols = [Multivector.vector(f.sig_out, f.matrix[:, j]) for j in range(f.sig_in.n)]
        self.cache = {0: Multivector.scalar(f.sig_out, 1.0)}

    def image(self, mask: int) -> Multivector:
        hit = self.cache.get(mask)
        if hit is not None:
            return hit
        hi = mask.bit_length() - 1
        img = outer_product(self.image(mask & ~(1 << hi)), self.cols[hi])
        self.cache[mask] = img
        return img

    def apply(self, a: Multivector) -> Multivector:
        masks, vals = [], []
        for m, c in zip(a.masks.tolist(), a.coeffs.tolist()):
            img = self.image(m)
            masks.append(img.masks)
            vals.append(img.coeffs * c)
        if not masks:
            return Multivector.zero(self.f.sig_out)
        masks = np.concatenate(masks)
        vals = np.concatenate(vals)
        if masks.size == 0:
            return Multivector.zero(self.f.sig_out)
        uniq, inv = np.unique(masks, return_inverse=True)
        summed = np.bincount(inv, weights=vals, minlength=uniq.size)
        keep = summed != 0.0
        return Multivector._raw(self.f.sig_out, uniq[keep], summed[keep])


def outermorphism_apply(f: LinearOperator, a: Multivector) -> Multivector:
    """Extend ``f`` to all grades: scalars fixed, ``e_i ^ e_j ... -> f(e_i) ^ f(e_j) ...``."""
    if a.sig != f.sig_in:
        raise SignatureMismatch(f"operator expects {f.sig_in}, got {a.sig}")
    return _Outermorphism(f).apply(a)


# ------------------------------------------------------------ certification

def _dominant_grade(a: Multivector) -> int:
    g = a.term_grades
    weights = np.bincount(g, weights=a.coeffs**2)
    return int(np.argmax(weights))


def _euclidean_view(a: Multivector) -> Multivector:
    # the canonical LIFT to R(n,0,0) is the identity on coordinates
    return Multivector._raw(Signature._wide(a.sig.n), a.masks, a.coeffs)


def is_blade(a: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Decide whether ``a`` is a blade.

    After discarding nothing but rounding noise, ``a`` must be homogeneous of
    some grade ``k``.  It is then moved to the Euclidean algebra of the same
    dimension and checked against the Pluecker relations: for every basis
    ``(k-1)``-blade ``H``, the vector ``H _| A`` must lie in ``A``, i.e.
    ``(H _| A) ^ A == 0``.  For ``k = 2`` this is the vector contraction test
    ``(x _| A) ^ A == 0``.
    """
    if a.is_exact_zero:
        return True
    scale = a.max_abs()
    k = _dominant_grade(a)
    off = a.coeffs[a.term_grades != k]
    if off.size and np.max(np.abs(off)) > tol.threshold(scale):
        return False
    n = a.sig.n
    if k <= 1 or k >= n - 1:
        return True
    ae = _euclidean_view(grade_part(a, k) / scale)
    thresh = tol.threshold(1.0)
    for idx in combinations(range(n), k - 1):
        mask = sum(1 << i for i in idx)
        h = Multivector._raw(ae.sig, np.array([mask], np.int64), np.ones(1))
        v = left_contraction(h, ae)
        if v.is_exact_zero:
            continue
        w = outer_product(v, ae)
        if w.masks.size and w.max_abs() > thresh:
            return False
    return True


def as_blade(a: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> Blade:
    """Certify ``a`` as a blade, dropping sub-tolerance off-grade noise."""
    if isinstance(a, Blade):
        return a
    if not is_blade(a, tol):
        raise NotABlade(f"{a} is not a blade")
    if a.is_exact_zero:
        return Blade._trusted(a, 0)
    k = _dominant_grade(a)
    return Blade._trusted(grade_part(a, k), k)


# ------------------------------------------------------------ projectors

def projector_of_blade(a: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> LinearOperator:
    """Matrix of ``x -> (x _| A) A^-1``.  Null blades raise NotInvertible."""
    a = as_blade(a, tol)
    inv = blade_inverse(a, tol)
    n = a.sig.n
    mat = np.zeros((n, n))
    if a.step == 0:
        return LinearOperator(a.sig, a.sig, mat)
    for j in range(n):
        x = Multivector._raw(a.sig, np.array([1 << j], np.int64), np.ones(1))
        y = geometric_product(left_contraction(x, a), inv)
        mat[:, j] = y.vector_coords()
    return LinearOperator(a.sig, a.sig, mat)


def blade_from_projector(p: LinearOperator, t: int, tol: ToleranceConfig = DEFAULT_TOL) -> Blade:
    """Blade spanning the image of the idempotent ``p``, of known rank ``t``.

    Every canonical basis ``t``-blade is pushed through the outermorphism of
    ``p``; the candidate of largest coefficient norm is returned.  Scale and
    orientation are those of that candidate, except that ``t = 0`` returns the
    scalar 1 exactly.
    """
    if p.sig_in != p.sig_out:
        raise SignatureMismatch("a projector must map an algebra to itself")
    err = p.idempotence_error()
    if err > IDEMPOTENCE_TOL:
        raise NotAProjector(f"||P^2 - P|| = {err:.3g} exceeds {IDEMPOTENCE_TOL}")
    sig = p.sig_in
    if t == 0:
        return Blade._trusted(Multivector.scalar(sig, 1.0), 0)
    if not 0 < t <= sig.n:
        raise RankMismatch(f"step {t} impossible in {sig}")
    om = _Outermorphism(p)
    best, best_norm = None, -1.0
    for idx in combinations(range(sig.n), t):
        cand = om.image(sum(1 << i for i in idx))
        nrm = cand.norm()
        if nrm > best_norm:
            best, best_norm = cand, nrm
    scale = max(1.0, float(np.linalg.norm(p.matrix))) ** t
    if best_norm <= max(tol.abs_eps, tol.subspace_eps * scale):
        raise RankMismatch(f"projector has rank below {t}: largest candidate norm {best_norm:.3g}")
    return Blade._trusted(best, t)


# ------------------------------------------------------------ factorization

def _sq(v: Multivector) -> float:
    return geometric_product(v, v).scalar_part()


def _dot(a: Multivector, b: Multivector) -> float:
    return left_contraction(a, b).scalar_part()


def _null(v: Multivector, tol: ToleranceConfig) -> bool:
    return tol.is_small(_sq(v), v.norm() ** 2)


def spanning_vectors(a: Blade) -> list[Multivector]:
    """Vectors (not necessarily orthogonal) whose outer product is exactly ``a``.

    Uses the Euclidean projection of the generators that make up ``a``'s
    largest coordinate, which works for null blades too.
    """
    k = a.step
    ae = _euclidean_view(a)
    inv = blade_inverse(ae)
    lead = int(a.masks[np.argmax(np.abs(a.coeffs))])
    vecs = []
    for i in range(a.sig.n):
        if lead >> i & 1:
            x = Multivector._raw(ae.sig, np.array([1 << i], np.int64), np.ones(1))
            c = geometric_product(left_contraction(x, ae), inv).vector_coords()
            vecs.append(Multivector.vector(a.sig, c))
    assert len(vecs) == k
    w = vecs[0]
    for v in vecs[1:]:
        w = outer_product(w, v)
    lam = _coef_dot(a, w) / _coef_dot(w, w)
    vecs[0] = vecs[0] * lam
    return vecs


def _coef_dot(a: Multivector, b: Multivector) -> float:
    common, ia, ib = np.intersect1d(a.masks, b.masks, assume_unique=True, return_indices=True)
    return float(np.dot(a.coeffs[ia], b.coeffs[ib]))


def _swap_front(vs: list[Multivector], i: int, start: int = 0) -> list[Multivector]:
    # transposition flips the wedge sign; negating the moved vector restores it
    vs = list(vs)
    if i != start:
        vs[start], vs[i] = vs[i], -vs[start]
    return vs


def _factor_pair(v1: Multivector, v2: Multivector, tol: ToleranceConfig) -> list[Multivector]:
    s1, s2 = _sq(v1), _sq(v2)
    if _null(v1, tol) and _null(v2, tol):
        # (v1 - v2)(v1 + v2) / 2 = v1 ^ v2 + (v1^2 - v2^2) / 2
        return [(v1 - v2) * 0.5, v1 + v2]
    if abs(s1) / v1.norm() ** 2 >= abs(s2) / v2.norm() ** 2:
        return [v1, grade_part(left_contraction(blade_inverse(v1, tol), outer_product(v1, v2)), 1)]
    return [-v2, grade_part(left_contraction(blade_inverse(v2, tol), outer_product(v2, v1)), 1)]


def _factor_wedge(vs: list[Multivector], tol: ToleranceConfig) -> list[Multivector]:
    # returns anticommuting vectors whose geometric product is vs[0] ^ vs[1] ^ ...
    if len(vs) == 1:
        return list(vs)
    scores = [abs(_sq(v)) / v.norm() ** 2 for v in vs]
    vs = _swap_front(vs, int(np.argmax(scores)))
    if len(vs) == 2:
        return _factor_pair(vs[0], vs[1], tol)
    a, rest = vs[0], vs[1:]
    dots = [_dot(a, c) for c in rest]
    if all(tol.is_small(d, a.norm() * c.norm()) for d, c in zip(dots, rest)):
        log.debug("factor: case 1 (leading vector orthogonal to the rest)")
        return [a] + _factor_wedge(rest, tol)
    if not _null(a, tol):
        log.debug("factor: case 2 (invertible leading vector)")
        ainv = blade_inverse(a, tol)
        bs = [grade_part(geometric_product(ainv, outer_product(a, c)), 1) for c in rest]
        return [a] + _factor_wedge(bs, tol)
    log.debug("factor: case 3 (null leading vector)")
    j = int(np.argmax(np.abs(dots)))
    rest = _swap_front(rest, j)
    c, d1 = _factor_pair(a, rest[0], tol)
    plane = geometric_product(c, d1)
    pinv = blade_inverse(plane, tol)
    ds = [grade_part(geometric_product(pinv, outer_product(plane, ci)), 1) for ci in rest[1:]]
    return _factor_wedge([c, d1] + ds, tol)


def factor_blade(a: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> list[Multivector]:
    """Mutually anticommuting vectors whose geometric product is ``a``.

    Follows the constructive outer-product proof: a vector orthogonal to the
    rest is split off directly; an invertible leading vector orthogonalises
    the rest via ``a^-1 (a ^ c)``; a null leading vector is first traded for
    an invertible pair spanning the same plane.
    """
    b = as_blade(a, tol)
    if b.is_exact_zero:
        raise ValueError("the zero blade has no factorization")
    if b.step == 0:
        raise NotABlade("a scalar has no vector factors")
    vecs = spanning_vectors(b)
    factors = _factor_wedge(vecs, tol)
    prod = factors[0]
    for f in factors[1:]:
        prod = geometric_product(prod, f)
    # absorb accumulated rounding in the overall scale
    lam = _coef_dot(b, prod) / _coef_dot(prod, prod)
    factors[0] = factors[0] * lam
    return factors


def with_factors(a: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> Blade:
    """Certified blade carrying its anticommuting factorization."""
    b = as_blade(a, tol)
    return Blade._trusted(b, b.step, factor_blade(b, tol) if b.step and not b.is_exact_zero else ())
