"""Unit tests for dense polynomial arithmetic and root extraction."""

import math
from fractions import Fraction

import numpy as np
import pytest

from qespectra import polynomials as P
from qespectra.errors import (
    ComplexRootDetected,
    EigensolveFailure,
    NonPositiveLambda,
    SigmaZero,
    SimplicityWarning,
)


# ---------------------------------------------------------------------------
# coefficient arithmetic
# ---------------------------------------------------------------------------

def test_trim_and_degree():
    assert P.trim([1, 2, 0, 0]) == [1, 2]
    assert P.trim([0, 0]) == []
    assert P.degree([]) == -1
    assert P.degree([5]) == 0
    assert P.degree([0, 0, 3, 0]) == 2


def test_add_scale_mul_roundtrip():
    p = [1, -3, 2]          # 1 - 3x + 2x^2
    q = [0, 4]              # 4x
    assert P.poly_add(p, q) == [1, 1, 2]
    assert P.poly_scale(p, -2) == [-2, 6, -4]
    assert P.poly_mul(p, q) == [0, 4, -12, 8]
    assert P.poly_mul_linear(p, 0, 4) == P.poly_mul(p, q)
    assert P.poly_mul(p, []) == []


def test_mul_linear_matches_general_product_on_fractions():
    p = [Fraction(1, 3), Fraction(-2), Fraction(5, 7)]
    a0, a1 = Fraction(2, 5), Fraction(-3)
    assert P.poly_mul_linear(p, a0, a1) == P.poly_mul(p, [a0, a1])


def test_deriv_and_eval():
    p = [5, 0, -1, 2]       # 5 - x^2 + 2x^3
    assert P.poly_deriv(p) == [0, -2, 6]
    assert P.poly_eval(p, 2) == 5 - 4 + 16
    assert P.poly_eval([], 3.0) == 0


def test_eval_mag_bounds_value():
    p = [1.0, -7.5, 0.25, 3.0]
    for x in (-2.0, -0.3, 0.0, 1.7):
        v, mag = P.poly_eval_mag(p, x)
        assert mag >= abs(v)
        assert v == pytest.approx(P.poly_eval(p, x))
    # at an exact root of an all-zero-term product both value and mag vanish
    v, mag = P.poly_eval_mag([0.0, 1.0], 0.0)
    assert v == 0.0 and mag == 0.0


# ---------------------------------------------------------------------------
# exact rational GCD
# ---------------------------------------------------------------------------

def test_exact_gcd_shared_linear_factor():
    # (x - 2) and (x - 2)(x - 1) share exactly (x - 2)
    g = P.exact_gcd([-2, 1], [2, -3, 1])
    assert g == [Fraction(-2), Fraction(1)]


def test_exact_gcd_coprime_is_constant_one():
    assert P.exact_gcd([1, 1], [2, 1]) == [Fraction(1)]


def test_exact_gcd_zero_cases():
    assert P.exact_gcd([], []) == []
    # gcd(p, 0) is monic p
    assert P.exact_gcd([2, 4], []) == [Fraction(1, 2), Fraction(1)]


def test_exact_gcd_divides_both_inputs():
    m = [Fraction(1), Fraction(-1, 3), Fraction(1)]   # common factor
    p = P.poly_mul(m, [2, 1])
    q = P.poly_mul(m, [Fraction(-5, 7), 0, 1])
    g = P.exact_gcd(p, q)
    assert P.degree(g) == P.degree(m)
    # monic rescale of m
    lead = m[-1]
    assert g == [c / lead for c in m]


# ---------------------------------------------------------------------------
# canonical chain and root extraction
# ---------------------------------------------------------------------------

class _FakeMult:
    """Hand-built multiplicator table: F1(k) = n - k, F0 = x, Fm1(k) = k."""

    def __init__(self, n):
        self.n = n
        self.sigma0 = 1.0

    def f1(self, k):
        return float(self.n - k)

    def f0_const(self, k):
        return 0.0

    def f0(self, k, x):
        return x

    def fm1(self, k):
        return float(k)


class _FakeSystem:
    def __init__(self, n):
        self.n = n
        self.mult = _FakeMult(n)


def test_canonical_ttrr_hermite_like_chain():
    # d_k = 0, lam_k = Fm1(n+2-k) F1(n+1-k): the chain of the fake table is
    # (a rescaled) Hermite chain whose roots are symmetric about 0.
    sys3 = _FakeSystem(3)
    ttrr = P.to_canonical_ttrr(sys3)
    assert ttrr.variant == "plus"
    assert ttrr.size == 4
    assert ttrr.lam[0] == 1.0
    assert all(l > 0 for l in ttrr.lam[1:])
    assert ttrr.scale == 1.0 and ttrr.shift == 0.0
    roots = P.real_roots(ttrr).roots
    # terminal member by hand: m4 = y^4 - 10 y^2 + 9 = (y^2 - 1)(y^2 - 9)
    np.testing.assert_allclose(roots, [-3.0, -1.0, 1.0, 3.0], atol=1e-10)


def test_sigma_zero_raises():
    sys0 = _FakeSystem(2)
    sys0.mult.sigma0 = 0.0
    with pytest.raises(SigmaZero):
        P.to_canonical_ttrr(sys0)


def test_mixed_sign_products_raise():
    sys0 = _FakeSystem(3)
    # flip one trailing multiplicator so products change sign mid-chain
    orig = sys0.mult.fm1
    sys0.mult.fm1 = lambda k: -orig(k) if k == 2 else orig(k)
    with pytest.raises(NonPositiveLambda):
        P.to_canonical_ttrr(sys0)


def test_ttrr_terminal_magnitude_bounds_value():
    ttrr = P.to_canonical_ttrr(_FakeSystem(4))
    for y in (-3.0, -0.5, 0.0, 1.0, 2.5):
        v, dv, mag = P.ttrr_terminal(ttrr, y)
        assert mag >= abs(v)
    # derivative consistent with a central difference
    h = 1e-6
    vp = P.ttrr_terminal(ttrr, 1.0 + h)[0]
    vm = P.ttrr_terminal(ttrr, 1.0 - h)[0]
    assert P.ttrr_terminal(ttrr, 1.0)[1] == pytest.approx((vp - vm) / (2 * h), rel=1e-6)


def test_minus_variant_all_negative_products_uses_comrade_route():
    sys0 = _FakeSystem(3)
    orig = sys0.mult.fm1
    sys0.mult.fm1 = lambda k: -orig(k)
    ttrr = P.to_canonical_ttrr(sys0)
    assert ttrr.variant == "minus"
    assert all(l > 0 for l in ttrr.lam[1:])   # stored as absolute values
    # the flipped-sign chain here has complex roots, which must be flagged,
    # not silently truncated to their real parts
    with pytest.raises(EigensolveFailure):
        P.real_roots(ttrr)


def test_real_roots_companion_cross_check_quadratic():
    # x^2 - 3x + 2
    rs = P.real_roots_companion([2, -3, 1])
    np.testing.assert_allclose(rs.roots, [1.0, 2.0], atol=1e-12)
    assert rs.min_gap == pytest.approx(1.0)


def test_real_roots_companion_rejects_complex():
    with pytest.raises(ComplexRootDetected):
        P.real_roots_companion([1, 0, 1])     # x^2 + 1


def test_near_degenerate_pair_warns_not_merges():
    # x (x - 1) (x - 1e12): the 0..1 gap is far below 1e-10 of the span,
    # yet each root is perfectly well conditioned
    coeffs = P.poly_mul(P.poly_mul([0.0, 1.0], [-1.0, 1.0]), [-1e12, 1.0])
    with pytest.warns(SimplicityWarning):
        rs = P.real_roots_companion(coeffs)
    assert len(rs.roots) == 3
    assert rs.min_gap == pytest.approx(1.0, rel=1e-6)


def test_rootset_is_ascending_with_residuals():
    rs = P.real_roots_companion([6.0, -11.0, 6.0, -1.0])  # roots 1, 2, 3
    assert list(rs.roots) == sorted(rs.roots)
    np.testing.assert_allclose(rs.roots, [1.0, 2.0, 3.0], atol=1e-10)
    assert all(r >= 0.0 for r in rs.residuals)
    assert rs.min_gap == pytest.approx(1.0, abs=1e-9)
