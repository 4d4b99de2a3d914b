from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeboundary.partitions import (HL_P, HL_Q, QW_P, QW_Q, as_partition,
                                     b_norm, conjugate, gaussian_binomial,
                                     h_weight, h_weight_conjugate,
                                     is_horizontal_strip, partitions_upto,
                                     rogers_szego, shifted_h_conjugate,
                                     size, skew_multi, skew_one_var,
                                     strips_between, supersets_within)
from freeboundary.process import build_ring, ring_params
from freeboundary.series import (TruncationPolicy, invert_series, substitute)

from oracles import gram_schmidt_pq

partition_lists = st.lists(st.integers(1, 6), max_size=5).map(
    lambda xs: tuple(sorted(xs, reverse=True)))


def ring(qt=4, x=4, params=4, n_vars=2):
    return build_ring(TruncationPolicy(qt=qt, x=x, params=params), n_vars)


@settings(max_examples=100, deadline=None)
@given(partition_lists)
def test_conjugate_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert size(conjugate(lam)) == size(lam)


def test_as_partition_validates():
    assert as_partition((3, 1, 1, 0)) == (3, 1, 1)
    with pytest.raises(ValueError):
        as_partition((1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 7), st.integers(-1, 8))
def test_gaussian_binomial_symmetry(m, k):
    R = ring()
    f = gaussian_binomial(R, m, k)
    g = gaussian_binomial(R, m, m - k)
    assert f == g
    assert all(c > 0 and c.denominator == 1 for c in f.coeffs.values())


def test_gaussian_binomial_values():
    R = ring(qt=5)
    q = R.base("q")
    assert gaussian_binomial(R, 2, 1) == R.one() + q
    expect = R.one() + q + 2 * q ** 2 + q ** 3 + q ** 4
    assert gaussian_binomial(R, 4, 2) == expect
    assert gaussian_binomial(R, 5, 0) == R.one()
    assert gaussian_binomial(R, 3, 9).is_zero()


def test_rogers_szego_examples():
    R = ring()
    a, b = R.var("a"), R.var("b")
    q = R.base("q")
    assert rogers_szego(R, 0, a) == R.one()
    assert rogers_szego(R, 2, a) == R.one() + (R.one() + q) * a + a * a
    assert rogers_szego(R, 1, a * b) == R.one() + a * b
    assert rogers_szego(R, -1, a).is_zero()


def test_h_weight_examples():
    R = ring()
    a, b = R.var("a"), R.var("b")
    one = R.one()
    assert h_weight(R, (), a, b) == one
    assert h_weight(R, (1,), a, b) == a + b
    assert h_weight(R, (2,), a, b) == one + a * b
    assert h_weight_conjugate(R, (1,), a, b) == a + b
    # at vanishing letters only fully even gaps survive
    zero = R.scalar(0)
    assert h_weight_conjugate(R, (2, 2), zero, zero) == one
    assert h_weight_conjugate(R, (2, 1), zero, zero).is_zero()


def test_shifted_weight_compensation():
    R = ring()
    c, d = R.var("c"), R.var("d")
    t = R.base("t")
    assert shifted_h_conjugate(R, (1,), c, d, "t") == c + d
    assert shifted_h_conjugate(R, (1, 1), c, d, "t") == t + c * d
    # size identity: every monomial satisfies |mu| = 2*(t-deg) + (c,d)-deg
    for mu in partitions_upto(4):
        f = shifted_h_conjugate(R, mu, c, d, "t")
        ti = R._idx["t"]
        ci, di = R._idx["c"], R._idx["d"]
        for e in f.coeffs:
            assert e[ti] + e[ci] + e[di] == size(mu)


def test_skew_one_var_families():
    R = ring()
    x = R.var("x1")
    one, q, t = R.one(), R.base("q"), R.base("t")
    assert skew_one_var(R, (1,), (), x, QW_P) == x
    assert skew_one_var(R, (2,), (1,), x, QW_P) == (one + q) * x
    assert skew_one_var(R, (1, 1), (1, 1), x, HL_P, "t") == one
    assert skew_one_var(R, (2, 1), (), x, QW_P).is_zero()  # not a strip
    assert skew_one_var(R, (1,), (), x, HL_Q, "t") == (one - t) * x
    # dual one-letter family has series coefficients
    f = skew_one_var(R, (1,), (), x, QW_Q)
    assert f == x * invert_series(one - q)


def test_skew_multi_against_gram_schmidt():
    R = ring()
    x1, x2 = R.var("x1"), R.var("x2")
    # evaluate the series at rational parameter points and compare with the
    # independently orthogonalized polynomials
    for lam, family, base, point in [
        ((2,), QW_P, "q", (F(1, 3), F(0))),
        ((1, 1), QW_P, "q", (F(1, 3), F(0))),
        ((2,), HL_P, "t", (F(0), F(1, 5))),
        ((1, 1), HL_P, "t", (F(0), F(1, 5))),
    ]:
        f = skew_multi(R, lam, (), [x1, x2], family, base)
        qv, tv = point
        oracle = gram_schmidt_pq(2, 2, qv, tv)[lam]
        val = base_value = qv if base == "q" else tv
        got = {}
        qi = R._idx[base]
        x1i, x2i = R._idx["x1"], R._idx["x2"]
        for e, c in f.coeffs.items():
            key = (e[x1i], e[x2i])
            got[key] = got.get(key, F(0)) + c * base_value ** (e[qi] // 2)
        got = {k: v for k, v in got.items() if v}
        assert got == oracle, (lam, family)


def test_branching_split_consistency():
    R = ring()
    x1, x2 = R.var("x1"), R.var("x2")
    for lam in partitions_upto(4):
        for mu in partitions_upto(2):
            joint = skew_multi(R, lam, mu, [x1, x2], QW_P)
            split = R.zero()
            for nu in strips_between(mu, lam):
                split = split + (skew_multi(R, lam, nu, [x2], QW_P)
                                 * skew_multi(R, nu, mu, [x1], QW_P))
            assert joint == split, (lam, mu)


def test_dual_ratio_matches_normalization():
    R = ring()
    x1, x2 = R.var("x1"), R.var("x2")
    for lam in partitions_upto(4):
        for mu in partitions_upto(3):
            p = skew_multi(R, lam, mu, [x1, x2], QW_P)
            qq = skew_multi(R, lam, mu, [x1, x2], QW_Q)
            lhs = qq * b_norm(R, mu, QW_Q)
            rhs = p * b_norm(R, lam, QW_Q)
            assert lhs == rhs, (lam, mu)


def test_two_letter_column_even_expansion():
    # boundary weight of the conjugate shape as a column-even skew sum
    R = ring()
    a, b = R.var("a"), R.var("b")
    for lam in partitions_upto(6):
        lhs = h_weight_conjugate(R, lam, a, b)
        rhs = R.zero()
        for mu in partitions_upto(size(lam)):
            if not all(x % 2 == 0 for x in conjugate(mu)):
                continue
            rhs = rhs + skew_multi(R, lam, mu, [a, b], QW_P)
        assert lhs == rhs, lam


def test_supersets_and_strips():
    sup = supersets_within((2, 1), 2, 3)
    assert (2, 1) in sup and (3, 2) in sup and (2, 1, 1, 1) in sup
    assert all(size(s) <= 5 for s in sup)
    assert list(strips_between((1,), (2, 1))) == [(1,), (1, 1), (2,), (2, 1)]
    assert is_horizontal_strip((2, 1), (1,))
    assert not is_horizontal_strip((2, 2), (0,))
