"""Inner division, delta product, meet and join of blades, in any signature.

Euclidean signatures use the direct constructions: ``B^-1 A``, the top grade
of ``AB``, a projector assembled from three blade projectors, and
``A ^ (B \\ (A meet B))``.  Other signatures reach the Euclidean algebra
through a lift, or go through the embedding lift for the metric-dependent
operations when a required inverse does not exist.

Results are returned as computed.  Scale and orientation are arbitrary except
in the disjoint case, where the meet is exactly 1 and the join is ``A ^ B``.
"""

from __future__ import annotations

import logging

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    Blade,
    Multivector,
    ToleranceConfig,
    _check_sig,
    blade_inverse,
    format_plain,
    mask_to_indices,
    geometric_product,
    grade_part,
    left_contraction,
    outer_product,
    pseudoscalar,
)
from .blades import LinearOperator, as_blade, blade_from_projector, projector_of_blade, spanning_vectors
from .errors import GasubError, NotASubspace, NotInvertible
from .lift import Lift, canonical_lift, embedding_lift, lift_forward, lift_inverse

log = logging.getLogger(__name__)


def _zero(a: Multivector) -> Blade:
    return Blade._trusted(Multivector.zero(a.sig), 0)


def _prepare(a, b, tol):
    a, b = as_blade(a, tol), as_blade(b, tol)
    _check_sig(a, b)
    return a, b


def _is_invertible(a: Blade, tol: ToleranceConfig) -> bool:
    return not tol.is_small(geometric_product(a, a).scalar_part(), a.norm() ** 2)


# ------------------------------------------------------------ direct forms

def _delta_direct(a: Blade, b: Blade, tol: ToleranceConfig) -> Blade:
    ab = geometric_product(a, b)
    # noise in AB is relative to |A||B|, which equals |AB| for Euclidean blades
    floor = tol.threshold(a.norm() * b.norm())
    grades = ab.term_grades
    for k in range(a.step + b.step, -1, -2):
        sel = grades == k
        if sel.any() and np.linalg.norm(ab.coeffs[sel]) > floor:
            log.debug("delta product: selected grade %d of AB", k)
            return Blade._trusted(Multivector._raw(a.sig, ab.masks[sel], ab.coeffs[sel]), k)
    raise GasubError("geometric product of the operands vanished; their meet is not invertible")


def _idiv_direct(a: Blade, b: Blade, binv: Multivector) -> Blade:
    k = a.step - b.step
    return Blade._trusted(grade_part(geometric_product(binv, a), k), k)


def _meet_projector(a: Blade, b: Blade, d: Blade, tol: ToleranceConfig):
    # projector matrices of B, A delta B and (A delta B) B^-1
    binv = blade_inverse(b, tol)
    m = Blade._trusted(grade_part(geometric_product(d, binv), a.step), a.step)
    pb = projector_of_blade(b, tol).matrix
    pd = projector_of_blade(d, tol).matrix
    pm = projector_of_blade(m, tol).matrix
    return pb, pd, pm


def _meet_euclidean(a: Blade, b: Blade, tol: ToleranceConfig) -> Blade:
    d = _delta_direct(a, b, tol)
    twice = a.step + b.step - d.step
    if twice % 2:
        raise GasubError(f"inconsistent steps {a.step}, {b.step}, {d.step}")
    pb, pd, pm = _meet_projector(a, b, d, tol)
    p = LinearOperator(a.sig, a.sig, (pb - pd + pm) / 2.0)
    return blade_from_projector(p, twice // 2, tol)


def _join_euclidean(a: Blade, b: Blade, tol: ToleranceConfig) -> Blade:
    c = _meet_euclidean(a, b, tol)
    rest = _idiv_direct(b, c, blade_inverse(c, tol))
    return Blade._trusted(outer_product(a, rest), a.step + rest.step)


def _through_lift(op, a: Blade, b: Blade, lift: Lift | None, tol: ToleranceConfig) -> Blade:
    lift = lift or canonical_lift(a.sig)
    if lift.sig_in != a.sig or not lift.sig_out.is_euclidean or lift.sig_out.n != a.sig.n:
        raise ValueError("meet and join need a lift from the operands' algebra onto R(n,0,0)")
    res = op(lift_forward(lift, a), lift_forward(lift, b), tol)
    return lift_inverse(lift, res, tol)


# ------------------------------------------------------------ public operations

def meet(a: Multivector, b: Multivector, tol: ToleranceConfig = DEFAULT_TOL, lift: Lift | None = None) -> Blade:
    """Blade of the intersection of the subspaces of ``a`` and ``b``.

    Pass ``lift`` to transport through a specific invertible map onto
    ``R(n,0,0)`` instead of the canonical one (Euclidean operands are then
    also transported).
    """
    a, b = _prepare(a, b, tol)
    if a.is_exact_zero or b.is_exact_zero:
        return _zero(a)
    if lift is None and a.sig.is_euclidean:
        return _meet_euclidean(a, b, tol)
    return _through_lift(_meet_euclidean, a, b, lift, tol)


def join(a: Multivector, b: Multivector, tol: ToleranceConfig = DEFAULT_TOL, lift: Lift | None = None) -> Blade:
    """Blade of the span of ``a`` and ``b``, computed as ``A ^ (B \\ (A meet B))``."""
    a, b = _prepare(a, b, tol)
    if a.is_exact_zero or b.is_exact_zero:
        return _zero(a)
    if lift is None and a.sig.is_euclidean:
        return _join_euclidean(a, b, tol)
    return _through_lift(_join_euclidean, a, b, lift, tol)


def _join_projector_euclidean(a: Blade, b: Blade, tol: ToleranceConfig) -> Blade:
    d = _delta_direct(a, b, tol)
    pb, pd, pm = _meet_projector(a, b, d, tol)
    p = LinearOperator(a.sig, a.sig, (pm + pd + pb) / 2.0)
    return blade_from_projector(p, (a.step + b.step + d.step) // 2, tol)


def join_via_projector(a: Multivector, b: Multivector, tol: ToleranceConfig = DEFAULT_TOL,
                       lift: Lift | None = None) -> Blade:
    """Join from its own projector; scale and orientation are always arbitrary."""
    a, b = _prepare(a, b, tol)
    if a.is_exact_zero or b.is_exact_zero:
        return _zero(a)
    if lift is None and a.sig.is_euclidean:
        return _join_projector_euclidean(a, b, tol)
    return _through_lift(_join_projector_euclidean, a, b, lift, tol)


def _check_contained(b: Blade, a: Blade, tol: ToleranceConfig):
    if b.step > a.step:
        raise NotASubspace(f"a {b.step}-blade cannot lie inside a {a.step}-blade")
    if b.step == 0:
        return
    scale = a.norm()
    for v in spanning_vectors(b):
        resid = outer_product(v, a).norm()
        if resid > max(tol.abs_eps, tol.subspace_eps * v.norm() * scale):
            raise NotASubspace(f"{format_plain(b)} is not contained in {format_plain(a)}")


def inner_division(a: Multivector, b: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> Blade:
    """``A \\ B``: the complement of ``B`` inside ``A``, for ``B`` contained in ``A``.

    Uses ``B^-1 A`` when ``B`` is invertible; otherwise
    ``f^-1(f(A) meet f(B) I)`` with ``f`` the embedding lift and ``I`` the
    pseudoscalar of its target algebra.
    """
    a, b = _prepare(a, b, tol)
    if a.is_exact_zero or b.is_exact_zero:
        return _zero(a)
    _check_contained(b, a, tol)
    try:
        binv = blade_inverse(b, tol)
    except NotInvertible:
        log.debug("inner division: null divisor, using the embedding lift")
        f = embedding_lift(a.sig)
        fa, fb = lift_forward(f, a), lift_forward(f, b)
        big = f.sig_out
        dual = grade_part(geometric_product(fb, pseudoscalar(big)), big.n - b.step)
        res = meet(fa, Blade._trusted(dual, big.n - b.step), tol)
        return lift_inverse(f, res, tol)
    return _idiv_direct(a, b, binv)


def delta_product(a: Multivector, b: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> Blade:
    """Blade of the symmetric difference: the complement of the meet inside the join.

    Top nonvanishing grade of ``AB`` whenever the meet is invertible (always,
    for Euclidean signatures); otherwise built from meets and joins in the
    embedding-lift algebra.
    """
    a, b = _prepare(a, b, tol)
    if a.is_exact_zero or b.is_exact_zero:
        return _zero(a)
    if a.sig.is_euclidean:
        return _delta_direct(a, b, tol)
    c = meet(a, b, tol)
    if _is_invertible(c, tol):
        return _delta_direct(a, b, tol)
    log.debug("delta product: null meet, using the embedding lift")
    f = embedding_lift(a.sig)
    fa, fb = lift_forward(f, a), lift_forward(f, b)
    big = f.sig_out
    j = join(fa, fb, tol)
    m = meet(fa, fb, tol)
    dual = Blade._trusted(grade_part(geometric_product(m, pseudoscalar(big)), big.n - m.step), big.n - m.step)
    return lift_inverse(f, meet(j, dual, tol), tol)


def linear_meet(a: Multivector, b: Multivector, pseudo: Multivector | None = None) -> Multivector:
    """``(A I) _| B``: linear in both arguments, zero unless ``a`` and ``b`` span ``I``."""
    _check_sig(a, b)
    if pseudo is None:
        pseudo = pseudoscalar(a.sig)
    return left_contraction(geometric_product(a, pseudo), b)


def linear_join(a: Multivector, b: Multivector) -> Multivector:
    """``A ^ B``: zero whenever the subspaces share a direction."""
    return outer_product(a, b)


def normalize(a: Multivector) -> Multivector:
    """Unit coefficient norm, first coefficient in canonical order positive."""
    if a.is_exact_zero:
        return a
    first = min(zip(a.masks.tolist(), a.coeffs.tolist()), key=lambda t: (bin(t[0]).count("1"), mask_to_indices(t[0])))[1]
    return a._scaled((1.0 if first > 0 else -1.0) / a.norm())
