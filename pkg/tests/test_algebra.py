import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gasub import (
    Multivector,
    NotInvertible,
    Signature,
    SignatureMismatch,
    ToleranceConfig,
    blade_inverse,
    geometric_product,
    grade_part,
    left_contraction,
    outer_product,
    pseudoscalar,
    reverse,
)
from gasub.sampling import random_blade, random_multivector, random_vectors

from conftest import KERNEL_SIGS, assert_mv_close, e
from oracles import contraction_expansion, product_terms

R3 = Signature(3)
PROPERTY_SIGS = [s for s in KERNEL_SIGS] + [Signature(6), Signature(0, 2, 1), Signature(0, 0, 3)]


class TestExamples:
    def test_generator_squares(self):
        assert e(R3, 1) * e(R3, 1) == 1
        r = Signature(0, 0, 1)
        assert (e(r, 1) * e(r, 1)).is_exact_zero
        assert e(Signature(1, 1), 2) * e(Signature(1, 1), 2) == -1

    def test_bivector_product(self):
        assert e(R3, 1, 2) * e(R3, 2, 3) == e(R3, 1, 3)
        assert str(e(R3, 1, 2) * e(R3, 2, 3)) == "e1^e3"

    def test_outer(self):
        assert e(R3, 1) ^ e(R3, 2) == e(R3, 1, 2)
        assert (e(R3, 1) ^ e(R3, 1)).is_exact_zero
        assert (e(R3, 1) + e(R3, 2)) ^ e(R3, 2) == e(R3, 1, 2)

    def test_contraction(self):
        assert e(R3, 1) | e(R3, 1, 2) == e(R3, 2)
        a = random_multivector(R3, np.random.default_rng(1))
        assert Multivector.scalar(R3, 1.0) | a == a
        assert (e(R3, 1) | Multivector.scalar(R3, 5.0)).is_exact_zero

    def test_grade_part(self):
        x = 3 + 2 * e(R3, 1, 2)
        assert grade_part(x, 2) == 2 * e(R3, 1, 2)
        assert grade_part(x, 0) == 3
        y = e(R3, 1) * e(R3, 3)
        assert grade_part(y, 2) == e(R3, 1, 3)
        assert grade_part(y, 0).is_exact_zero
        assert grade_part(x, -1).is_exact_zero and grade_part(x, 4).is_exact_zero

    def test_reverse(self):
        assert reverse(e(R3, 1, 2)) == -e(R3, 1, 2)
        assert reverse(e(R3, 1)) == e(R3, 1)
        # e3 e2 e1 reordered: three transpositions
        assert reverse(e(R3, 1, 2, 3)) == e(R3, 3, 2, 1) == -e(R3, 1, 2, 3)

    def test_inverse(self):
        assert blade_inverse(e(R3, 1)) == e(R3, 1)
        assert blade_inverse(e(R3, 2) ^ e(R3, 3)) == -e(R3, 2, 3)
        with pytest.raises(NotInvertible):
            blade_inverse(e(Signature(0, 0, 1), 1))
        with pytest.raises(NotInvertible):
            blade_inverse(Multivector.zero(R3))

    def test_pseudoscalar(self):
        assert pseudoscalar(R3).terms == {(1, 2, 3): 1.0}
        assert pseudoscalar(Signature(1, 1)).terms == {(1, 2): 1.0}
        assert pseudoscalar(Signature(2, 1)).terms == {(1, 2, 3): 1.0}
        assert pseudoscalar(R3).step == 3


class TestTypes:
    def test_signature_validation(self):
        with pytest.raises(ValueError):
            Signature(-1)
        with pytest.raises(ValueError):
            Signature(10, 2, 1)
        s = Signature(2, 1, 1)
        assert [s.generator_square(i) for i in range(1, 5)] == [1, 1, -1, 0]
        assert s.n == 4 and s.is_degenerate and not s.is_euclidean

    def test_canonical_form_drops_zeros(self):
        x = Multivector(R3, {(): 0.0, (1,): 2.0, (1, 2): 0.0})
        assert x.terms == {(1,): 2.0}
        assert (e(R3, 1) - e(R3, 1)).is_exact_zero

    def test_bad_terms(self):
        with pytest.raises(IndexError):
            Multivector(R3, {(4,): 1.0})
        with pytest.raises(ValueError):
            Multivector(R3, {(2, 1): 1.0})

    def test_immutable(self):
        x = e(R3, 1)
        with pytest.raises(AttributeError):
            x.sig = Signature(2)
        with pytest.raises(ValueError):
            x.coeffs[0] = 3.0

    def test_signature_mismatch(self):
        with pytest.raises(SignatureMismatch):
            e(R3, 1) * e(Signature(2, 1), 1)

    def test_tolerance_config(self):
        with pytest.raises(ValueError):
            ToleranceConfig(rel_eps=0)
        t = ToleranceConfig()
        assert t.threshold(1.0) == 1e-10 and t.threshold(0.0) == 1e-14


@pytest.mark.parametrize("sig", PROPERTY_SIGS, ids=str)
def test_products_match_term_oracle(sig, rng):
    sq = sig.squares
    for _ in range(10):
        a = random_multivector(sig, rng, 0.5)
        b = random_multivector(sig, rng, 0.5)
        for op, keep in (
            (geometric_product, lambda ga, gb, g: True),
            (outer_product, lambda ga, gb, g: g == ga + gb),
            (left_contraction, lambda ga, gb, g: g == gb - ga),
        ):
            want = Multivector(sig, product_terms(sq, a.terms, b.terms, keep))
            assert_mv_close(op(a, b), want, rel=1e-13)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(PROPERTY_SIGS))
def test_associativity(seed, sig):
    rng = np.random.default_rng(seed)
    x, y, z = (random_multivector(sig, rng) for _ in range(3))
    assert_mv_close((x * y) * z, x * (y * z), rel=1e-10)
    assert_mv_close((x ^ y) ^ z, x ^ (y ^ z), rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(PROPERTY_SIGS))
def test_vector_product_splits(seed, sig):
    rng = np.random.default_rng(seed)
    a = Multivector.vector(sig, rng.uniform(-1, 1, sig.n))
    x = random_multivector(sig, rng)
    assert_mv_close(a * x, (a | x) + (a ^ x), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(PROPERTY_SIGS))
def test_contraction_of_wedge(seed, sig):
    rng = np.random.default_rng(seed)
    ks = rng.integers(0, sig.n + 1, 3)
    a, b, c = (random_blade(sig, int(k), rng, special=0.3) for k in ks)
    assert_mv_close((a ^ b) | c, a | (b | c), rel=1e-10, abs_=1e-13)


@pytest.mark.parametrize("sig", PROPERTY_SIGS, ids=str)
def test_contraction_matches_alternating_expansion(sig, rng):
    for _ in range(20):
        k = int(rng.integers(1, sig.n + 1))
        cs = random_vectors(sig, k, rng, special=0.3)
        a = rng.standard_normal(sig.n)
        blade = Multivector.scalar(sig, 1.0)
        for c in cs:
            blade = blade ^ Multivector.vector(sig, c)
        got = Multivector.vector(sig, a) | blade
        assert_mv_close(got, contraction_expansion(sig, a, cs), rel=1e-10, abs_=1e-13)


@pytest.mark.parametrize("sig", PROPERTY_SIGS, ids=str)
def test_grade_parts_reconstruct(sig, rng):
    x = random_multivector(sig, rng)
    total = Multivector.zero(sig)
    for k in range(sig.n + 1):
        total = total + grade_part(x, k)
    assert total == x


@pytest.mark.parametrize("sig", PROPERTY_SIGS, ids=str)
def test_blade_square_is_scalar(sig, rng):
    for _ in range(20):
        a = random_blade(sig, int(rng.integers(1, sig.n + 1)), rng, special=0.3)
        sq = a * a
        rest = sq - sq.scalar_part()
        assert rest.max_abs() <= 1e-10 * a.norm() ** 2


def test_reverse_matches_reordering(rng):
    sig = Signature(2, 1, 1)
    for k in range(sig.n + 1):
        idx = tuple(range(1, k + 1))
        backwards = Multivector.basis(sig, *reversed(idx))
        assert reverse(Multivector.basis(sig, *idx)) == backwards


def test_inverse_times_blade_is_one(rng):
    for sig in (Signature(4), Signature(2, 2)):
        for _ in range(20):
            a = random_blade(sig, int(rng.integers(1, sig.n + 1)), rng)
            assert_mv_close(blade_inverse(a) * a, Multivector.scalar(sig, 1.0), rel=1e-9)


def test_formatting_round_trip_coefficients():
    x = Multivector(R3, {(): -2.5, (1, 3): 1.0})
    assert str(x) == "-2.5 + e1^e3"
    assert str(Multivector.zero(R3)) == "0"
    assert str(e(R3, 1, 2)) == "e1^e2"
    assert str(Multivector(R3, {(2,): 0.1, (1, 2): -3.0})) == "0.1*e2 - 3*e1^e2"
