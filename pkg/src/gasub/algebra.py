"""Clifford algebra kernel for real signatures ``(p, q, r)``, degenerate included.

Generators are numbered ``1..n``.  The first ``p`` square to +1, the next ``q``
to -1 and the last ``r`` to 0.  A basis blade is the ascending product of the
generators in its index set, encoded as a bitmask.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import NotInvertible, SignatureMismatch

MAX_GENERATORS = 12
# lifted algebras of degenerate signatures may need up to 2n generators
_MAX_INTERNAL_GENERATORS = 2 * MAX_GENERATORS


@dataclass(frozen=True)
class Signature:
    p: int
    q: int = 0
    r: int = 0

    def __post_init__(self):
        for name in ("p", "q", "r"):
            v = getattr(self, name)
            if not isinstance(v, numbers.Integral) or v < 0:
                raise ValueError(f"signature count {name}={v!r} must be a non-negative integer")
        if self.n > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators are supported, got {self.n}")

    @classmethod
    def _wide(cls, p: int, q: int = 0, r: int = 0) -> "Signature":
        # bypasses the public width bound; used for e-LIFT targets only
        if p + q + r > _MAX_INTERNAL_GENERATORS:
            raise ValueError(f"lifted algebra needs {p + q + r} generators, limit is {_MAX_INTERNAL_GENERATORS}")
        sig = object.__new__(cls)
        object.__setattr__(sig, "p", int(p))
        object.__setattr__(sig, "q", int(q))
        object.__setattr__(sig, "r", int(r))
        return sig

    @property
    def n(self) -> int:
        return self.p + self.q + self.r

    @property
    def is_euclidean(self) -> bool:
        return self.q == 0 and self.r == 0

    @property
    def is_degenerate(self) -> bool:
        return self.r > 0

    def generator_square(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"generator index {i} outside 1..{self.n}")
        if i <= self.p:
            return 1
        if i <= self.p + self.q:
            return -1
        return 0

    @property
    def squares(self) -> np.ndarray:
        return np.array([1.0] * self.p + [-1.0] * self.q + [0.0] * self.r)

    @property
    def gram(self) -> np.ndarray:
        return np.diag(self.squares)

    @property
    def neg_mask(self) -> int:
        return ((1 << self.q) - 1) << self.p

    @property
    def null_mask(self) -> int:
        return ((1 << self.r) - 1) << (self.p + self.q)

    def __str__(self):
        return f"R({self.p},{self.q},{self.r})"


@dataclass(frozen=True)
class ToleranceConfig:
    """Zero thresholds.

    A quantity counts as zero when its magnitude is at most
    ``max(abs_eps, rel_eps * scale)`` where ``scale`` is the magnitude of the
    operand it came from.  ``subspace_eps`` is the looser relative bound used
    for incidence checks such as ``b ^ A == 0`` on computed blades.
    """

    rel_eps: float = 1e-10
    abs_eps: float = 1e-14
    subspace_eps: float = 1e-8

    def __post_init__(self):
        if not (self.rel_eps > 0 and self.abs_eps > 0 and self.subspace_eps > 0):
            raise ValueError("tolerances must be strictly positive")

    def threshold(self, scale: float) -> float:
        return max(self.abs_eps, self.rel_eps * scale)

    def is_small(self, value: float, scale: float) -> bool:
        return abs(value) <= self.threshold(scale)


DEFAULT_TOL = ToleranceConfig()


def _popcount(x: int) -> int:
    return bin(x).count("1")


def mask_to_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def indices_to_mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


_EMPTY_M = np.empty(0, np.int64)
_EMPTY_C = np.empty(0, np.float64)


class Multivector:
    """Immutable sparse multivector.

    ``terms`` maps ascending 1-based index tuples to coefficients, e.g.
    ``Multivector(sig, {(): 3.0, (1, 2): 2.0})`` is ``3 + 2 e1^e2``.
    """

    __slots__ = ("sig", "masks", "coeffs")

    def __init__(self, sig: Signature, terms: Mapping[Sequence[int], float] | None = None):
        acc: dict[int, float] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if any(not 1 <= i <= sig.n for i in idx):
                raise IndexError(f"basis {idx} outside generators 1..{sig.n}")
            if len(set(idx)) != len(idx) or list(idx) != sorted(idx):
                raise ValueError(f"basis {idx} must be strictly ascending")
            m = indices_to_mask(idx)
            acc[m] = acc.get(m, 0.0) + float(c)
        masks = np.array(sorted(k for k, v in acc.items() if v != 0.0), dtype=np.int64)
        coeffs = np.array([acc[int(m)] for m in masks], dtype=np.float64)
        self._init(sig, masks, coeffs)

    def _init(self, sig, masks, coeffs):
        masks.flags.writeable = False
        coeffs.flags.writeable = False
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "masks", masks)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def _raw(cls, sig: Signature, masks: np.ndarray, coeffs: np.ndarray) -> "Multivector":
        # masks must be sorted, unique, coefficients nonzero
        obj = object.__new__(Multivector)
        obj._init(sig, np.ascontiguousarray(masks, dtype=np.int64), np.ascontiguousarray(coeffs, dtype=np.float64))
        return obj

    # -------------------------------------------------------- constructors
    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        return cls._raw(sig, _EMPTY_M.copy(), _EMPTY_C.copy())

    @classmethod
    def scalar(cls, sig: Signature, value: float) -> "Multivector":
        if value == 0:
            return cls.zero(sig)
        return cls._raw(sig, np.zeros(1, np.int64), np.array([float(value)]))

    @classmethod
    def basis(cls, sig: Signature, *indices: int) -> "Multivector":
        """Geometric product of the listed generators, in the given order."""
        out = cls.scalar(sig, 1.0)
        for i in indices:
            if not 1 <= i <= sig.n:
                raise IndexError(f"generator e{i} outside 1..{sig.n}")
            out = out * cls._raw(sig, np.array([1 << (i - 1)], np.int64), np.ones(1))
        return out

    @classmethod
    def vector(cls, sig: Signature, coords: Sequence[float]) -> "Multivector":
        coords = np.asarray(coords, dtype=np.float64)
        if coords.shape != (sig.n,):
            raise ValueError(f"expected {sig.n} coordinates, got shape {coords.shape}")
        nz = np.flatnonzero(coords)
        return cls._raw(sig, (np.int64(1) << nz.astype(np.int64)), coords[nz])

    @classmethod
    def from_dense(cls, sig: Signature, dense: np.ndarray) -> "Multivector":
        nz = np.flatnonzero(dense)
        return cls._raw(sig, nz.astype(np.int64), np.asarray(dense, dtype=np.float64)[nz])

    # -------------------------------------------------------- views
    @property
    def terms(self) -> dict[tuple[int, ...], float]:
        return {mask_to_indices(int(m)): float(c) for m, c in zip(self.masks, self.coeffs)}

    @property
    def term_grades(self) -> np.ndarray:
        return np.bitwise_count(self.masks).astype(np.int64)

    def grades(self) -> set[int]:
        return set(int(g) for g in self.term_grades)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(1 << self.sig.n)
        out[self.masks] = self.coeffs
        return out

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector (metric independent)."""
        return float(np.sqrt(np.dot(self.coeffs, self.coeffs)))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def scalar_part(self) -> float:
        if self.masks.size and self.masks[0] == 0:
            return float(self.coeffs[0])
        return 0.0

    def vector_coords(self) -> np.ndarray:
        """Coordinates of the grade-1 part."""
        out = np.zeros(self.sig.n)
        sel = self.term_grades == 1
        for m, c in zip(self.masks[sel], self.coeffs[sel]):
            out[int(m).bit_length() - 1] = c
        return out

    @property
    def is_exact_zero(self) -> bool:
        return self.masks.size == 0

    def is_zero(self, tol: ToleranceConfig = DEFAULT_TOL, scale: float | None = None) -> bool:
        if self.masks.size == 0:
            return True
        return self.max_abs() <= tol.threshold(self.max_abs() if scale is None else scale)

    def chop(self, threshold: float) -> "Multivector":
        keep = np.abs(self.coeffs) > threshold
        return Multivector._raw(self.sig, self.masks[keep], self.coeffs[keep])

    # -------------------------------------------------------- algebra
    def grade(self, k: int) -> "Multivector":
        return grade_part(self, k)

    def reverse(self) -> "Multivector":
        return reverse(self)

    def inverse(self, tol: ToleranceConfig = DEFAULT_TOL) -> "Multivector":
        return blade_inverse(self, tol)

    def _scaled(self, s: float) -> "Multivector":
        if s == 0:
            return Multivector.zero(self.sig)
        c = self.coeffs * s
        keep = c != 0.0
        return Multivector._raw(self.sig, self.masks[keep], c[keep])

    def _coerce(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            _check_sig(self, other)
            return other
        if isinstance(other, numbers.Real):
            return Multivector.scalar(self.sig, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other, -1.0)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(other, self, -1.0)

    def __neg__(self):
        return Multivector._raw(self.sig, self.masks, -self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return Multivector._scaled(self, float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return geometric_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return Multivector._scaled(self, float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return Multivector._scaled(self, 1.0 / float(other))
        return NotImplemented

    def __xor__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return outer_product(self, other)

    def __rxor__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return outer_product(other, self)

    def __or__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return left_contraction(self, other)

    def __ror__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return left_contraction(other, self)

    def __eq__(self, other):
        if isinstance(other, numbers.Real):
            other = Multivector.scalar(self.sig, float(other))
        if not isinstance(other, Multivector):
            return NotImplemented
        return (
            self.sig == other.sig
            and np.array_equal(self.masks, other.masks)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.sig, self.masks.tobytes(), self.coeffs.tobytes()))

    def isclose(self, other, rel: float = 1e-12, abs_: float = 0.0) -> bool:
        """``|self - other| <= rel * max(|self|, |other|) + abs_`` in coefficient norm."""
        other = self._coerce(other)
        diff = (self - other).norm()
        return diff <= rel * max(self.norm(), other.norm()) + abs_

    def __str__(self):
        return format_plain(self)

    def __repr__(self):
        return f"Multivector({self.sig}, {format_plain(self)})"


class Blade(Multivector):
    """A multivector known to be a blade, with its step cached.

    The zero multivector is a blade of every step; it is stored with
    ``step=0`` and ``is_exact_zero`` set.  ``factors`` optionally holds
    mutually anticommuting vectors whose geometric product is the blade.
    """

    __slots__ = ("step", "factors")

    def __init__(self, *args, **kwargs):
        raise TypeError("construct blades with gasub.as_blade() or the blade operations")

    @classmethod
    def _trusted(cls, mv: Multivector, step: int | None = None, factors=None) -> "Blade":
        obj = object.__new__(cls)
        obj._init(mv.sig, mv.masks, mv.coeffs)
        if step is None:
            step = int(mv.term_grades[0]) if mv.masks.size else 0
        object.__setattr__(obj, "step", int(step))
        object.__setattr__(obj, "factors", tuple(factors) if factors is not None else None)
        return obj

    def _scaled(self, s: float) -> "Blade":
        return Blade._trusted(Multivector._scaled(self, s), self.step)

    def __repr__(self):
        return f"Blade({self.sig}, step={self.step}, {format_plain(self)})"


def _check_sig(a: Multivector, b: Multivector):
    if a.sig != b.sig:
        raise SignatureMismatch(f"operands live in different algebras: {a.sig} vs {b.sig}")


def _add(a: Multivector, b: Multivector, sb: float) -> Multivector:
    masks = np.concatenate([a.masks, b.masks])
    vals = np.concatenate([a.coeffs, sb * b.coeffs])
    if masks.size == 0:
        return Multivector.zero(a.sig)
    uniq, inv = np.unique(masks, return_inverse=True)
    summed = np.bincount(inv, weights=vals, minlength=uniq.size)
    keep = summed != 0.0
    return Multivector._raw(a.sig, uniq[keep], summed[keep])


def _product(a: Multivector, b: Multivector, mode: int) -> Multivector:
    _check_sig(a, b)
    sig = a.sig
    m, c = _kernels.blade_product(a.masks, a.coeffs, b.masks, b.coeffs, sig.neg_mask, sig.null_mask, mode, sig.n)
    return Multivector._raw(sig, m, c)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return _product(a, b, _kernels.GEOMETRIC)


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    """Grade-raising part of the geometric product, extended bilinearly."""
    return _product(a, b, _kernels.OUTER)


def left_contraction(a: Multivector, b: Multivector) -> Multivector:
    """``<A B>_{s-r}`` per grade pair; zero whenever ``r > s``."""
    return _product(a, b, _kernels.LEFT_CONTRACTION)


def grade_part(a: Multivector, k: int) -> Multivector:
    sel = a.term_grades == k
    return Multivector._raw(a.sig, a.masks[sel], a.coeffs[sel])


def reverse(a: Multivector) -> Multivector:
    g = a.term_grades
    sign = np.where(((g * (g - 1)) // 2) % 2 == 1, -1.0, 1.0)
    out = Multivector._raw(a.sig, a.masks, a.coeffs * sign)
    if isinstance(a, Blade):
        return Blade._trusted(out, a.step)
    return out


def blade_inverse(a: Multivector, tol: ToleranceConfig = DEFAULT_TOL) -> Multivector:
    """``A / (A A)`` for a blade ``A``; raises :class:`NotInvertible` for null blades."""
    if a.is_exact_zero:
        raise NotInvertible("the zero blade has no inverse")
    sq = geometric_product(a, a).scalar_part()
    if tol.is_small(sq, a.norm() ** 2):
        raise NotInvertible(f"blade squares to {sq:.3g}, which is zero within tolerance")
    return a._scaled(1.0 / sq)


def pseudoscalar(sig: Signature) -> Blade:
    mv = Multivector._raw(sig, np.array([(1 << sig.n) - 1], np.int64), np.ones(1))
    return Blade._trusted(mv, sig.n)


# ------------------------------------------------------------ formatting

def _format_number(x: float) -> str:
    if math.isfinite(x) and x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def format_plain(a: Multivector) -> str:
    """``-2.5 + e1^e3``: terms by grade then index set; coefficients round-trip."""
    if a.masks.size == 0:
        return "0"
    items = sorted(zip(a.masks.tolist(), a.coeffs.tolist()), key=lambda t: (_popcount(t[0]), mask_to_indices(t[0])))
    parts = []
    for i, (m, c) in enumerate(items):
        neg = c < 0 or (c == 0 and math.copysign(1.0, c) < 0)
        mag = abs(c)
        if m == 0:
            body = _format_number(mag)
        else:
            blade = "^".join(f"e{j}" for j in mask_to_indices(m))
            body = blade if mag == 1.0 else f"{_format_number(mag)}*{blade}"
        if i == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)
