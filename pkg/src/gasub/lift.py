"""Transport of multivectors between algebras by outermorphisms of vector maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, Blade, Multivector, Signature, ToleranceConfig
from .blades import LinearOperator, _Outermorphism
from .errors import NotInImage, SignatureMismatch

# relative residual allowed when pulling a multivector back through a lift
IMAGE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Lift:
    """A linear injective generator map and its left inverse on the image."""

    sig_in: Signature
    sig_out: Signature
    vmap: LinearOperator
    vmap_inverse: LinearOperator

    @classmethod
    def from_matrix(cls, sig_in: Signature, sig_out: Signature, matrix) -> "Lift":
        m = np.asarray(matrix, dtype=np.float64)
        if m.shape != (sig_out.n, sig_in.n):
            raise ValueError(f"generator map has shape {m.shape}, expected {(sig_out.n, sig_in.n)}")
        if np.linalg.matrix_rank(m) != sig_in.n:
            raise ValueError("generator map is not injective")
        if sig_out.n == sig_in.n:
            inv = np.linalg.inv(m)
        else:
            inv = np.linalg.pinv(m)
        return cls(sig_in, sig_out, LinearOperator(sig_in, sig_out, m), LinearOperator(sig_out, sig_in, inv))

    @property
    def is_embedding(self) -> bool:
        return self.sig_out.n > self.sig_in.n


def canonical_lift(sig: Signature) -> Lift:
    """Generator ``i`` of ``sig`` to generator ``i`` of ``R(n,0,0)``."""
    return Lift.from_matrix(sig, Signature._wide(sig.n), np.eye(sig.n))


def random_lift(sig: Signature, rng: np.random.Generator, target: Signature | None = None) -> Lift:
    """A well-conditioned random invertible lift, by default into ``R(n,0,0)``."""
    target = target or Signature._wide(sig.n)
    if target.n != sig.n:
        raise ValueError("a plain lift needs equal dimensions")
    while True:
        m = rng.standard_normal((sig.n, sig.n)) + 2.0 * np.eye(sig.n)
        if np.linalg.cond(m) < 1e3:
            return Lift.from_matrix(sig, target, m)


def embedding_lift(sig: Signature) -> Lift:
    """e-LIFT from ``R(p,q,r)`` into the nondegenerate ``R(p+r, q+r, 0)``.

    ``p_i -> e_i``, ``q_j -> f_j`` and ``r_k -> e_{p+k} + f_{q+k}``, where the
    target numbers its ``p+r`` positive generators first, then its ``q+r``
    negative ones.  The outermorphism is an algebra isomorphism onto its image.
    """
    p, q, r = sig.p, sig.q, sig.r
    target = Signature._wide(p + r, q + r, 0)
    m = np.zeros((target.n, sig.n))
    f0 = p + r  # column offset of the negative generators in the target
    for i in range(p):
        m[i, i] = 1.0
    for j in range(q):
        m[f0 + j, p + j] = 1.0
    for k in range(r):
        m[p + k, p + q + k] = 1.0
        m[f0 + q + k, p + q + k] = 1.0
    return Lift.from_matrix(sig, target, m)


def lift_forward(lift: Lift, a: Multivector) -> Multivector:
    if a.sig != lift.sig_in:
        raise SignatureMismatch(f"lift expects {lift.sig_in}, got {a.sig}")
    out = _Outermorphism(lift.vmap).apply(a)
    if isinstance(a, Blade):
        return Blade._trusted(out, a.step)
    return out


def lift_inverse(lift: Lift, a: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> Multivector:
    """Pull ``a`` back; raises :class:`NotInImage` if it is not in the lifted subalgebra."""
    if a.sig != lift.sig_out:
        raise SignatureMismatch(f"lift inverse expects {lift.sig_out}, got {a.sig}")
    back = _Outermorphism(lift.vmap_inverse).apply(a)
    if lift.is_embedding:
        resid = (_Outermorphism(lift.vmap).apply(back) - a).norm()
        if resid > max(tol.abs_eps, IMAGE_TOL * a.norm()):
            raise NotInImage(f"residual {resid:.3g} after projecting onto the lifted subalgebra")
    if isinstance(a, Blade):
        return Blade._trusted(back, a.step)
    return back
