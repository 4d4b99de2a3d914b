from fractions import Fraction as F

import pytest

from freeboundary.partitions import partitions_upto, rogers_szego
from freeboundary.process import (CONVENTION_AB_BOTTOM, ProcessSpec,
                                  ab_equiv_residual, build_ring, chi_pgf_forms,
                                  enumerate_chains, fb_weight, fbhl_marginal,
                                  fbhl_masses, inv_sym_residual,
                                  koornwinder_constant,
                                  koornwinder_constant_sum, koornwinder_rhs,
                                  partition_function_sides, qw_shift_cdf,
                                  ring_letters, ring_params,
                                  stabilization_bound, symmetry_residual,
                                  z_infinity, z_n)
from freeboundary.series import (TruncationPolicy, assert_even_powers,
                                 invert_series, poch_inf, substitute)


def test_closed_form_low_degree():
    caps = TruncationPolicy(qt=3, x=3, params=4)
    R = build_ring(caps, 1)
    a, b, c, d = ring_params(R)
    q, t, x1 = R.base("q"), R.base("t"), R.var("x1")
    one = R.one()
    num = (one + a * b + a * c + a * d + b * c + b * d + c * d + a * b * c * d
           + (a + b + c + d + a * b * c + a * b * d + a * c * d + b * c * d) * x1)
    expect = num * invert_series((one - q) * (one - t))
    assert z_n(R, 1, [x1]) == expect
    assert z_n(R, 0, [x1]) == one


def test_symmetries_small():
    caps = TruncationPolicy(qt=3, x=3, params=3)
    R = build_ring(caps, 1)
    assert symmetry_residual(R, 1, 1, "swap-qt").is_zero()
    assert symmetry_residual(R, 2, 1, "swap-qt").is_zero()
    for perm in (("b", "a", "c", "d"), ("a", "c", "b", "d"), ("a", "b", "d", "c")):
        assert symmetry_residual(R, 1, 1, ("permute-abcd", perm)).is_zero()
    assert symmetry_residual(R, 1, 1, "absorb-params").is_zero()
    R2 = build_ring(caps, 2)
    assert symmetry_residual(R2, 1, 2, "invert-pair").is_zero()


def test_two_letter_bounded_sums():
    caps = TruncationPolicy(qt=3, x=3, params=3)
    R = build_ring(caps, 1)
    for mu, n in [((), 1), ((1,), 0), ((2, 1), 2), ((1, 1), 3)]:
        assert ab_equiv_residual(R, mu, n).is_zero(), (mu, n)
    R2 = build_ring(caps, 2)
    for mu, n in [((), 0), ((), 1), ((1, 1), 2), ((2,), 2)]:
        assert inv_sym_residual(R2, mu, n).is_zero(), (mu, n)


def test_partition_function_small():
    caps = TruncationPolicy(qt=3, x=2, params=2)
    for n_vars in (0, 1):
        R = build_ring(caps, n_vars)
        lhs, rhs = partition_function_sides(R, n_vars)
        assert (lhs - rhs).is_zero(), n_vars


def test_stable_limit():
    caps = TruncationPolicy(qt=2, x=2, params=2)
    R = build_ring(caps, 1)
    n0 = stabilization_bound(R)
    zi = z_infinity(R, 1)
    zn = z_n(R, n0, ring_letters(R, 1))
    assert (zn - zi).is_zero()
    assert (zn - z_n(R, n0 + 1, ring_letters(R, 1))).is_zero()
    swapped = substitute(zi, {"q": R.var("t"), "t": R.var("q")})
    assert (zi - swapped).is_zero()


def test_shift_distribution_function():
    caps = TruncationPolicy(qt=4, x=0, params=4)
    R = build_ring(caps, 0)
    q = R.base("q")
    cdf0 = qw_shift_cdf(R, 0)
    at_zero = substitute(cdf0, {"a": R.scalar(0), "b": R.scalar(0)})
    assert at_zero == poch_inf(q, q)
    assert qw_shift_cdf(R, 30) == R.one()
    # point masses telescope to one
    total = R.zero()
    prev = R.zero()
    for n in range(31):
        cur = qw_shift_cdf(R, n)
        total = total + (cur - prev)
        prev = cur
    assert total == R.one()


def test_chain_weight_examples():
    caps = TruncationPolicy(qt=3, x=3, params=3)
    R = build_ring(caps, 1)
    a, b, c, d = ring_params(R)
    one, x1, t = R.one(), R.var("x1"), R.base("t")
    assert fb_weight(R, [(), (1,)]) == (a + b) * x1
    assert fb_weight(R, [(), ()]) == one
    w = fb_weight(R, [(1,), (1,)])
    assert w == (a + b) * (c + d) * invert_series(one - t)
    with pytest.raises(ValueError):
        fb_weight(R, [(2,), (1,)])
    # alternate tag stays in the ring via the documented rescale
    alt = fb_weight(R, [(), (1,)], ProcessSpec(convention=CONVENTION_AB_BOTTOM))
    assert alt == (c + d) * x1


def test_marginal_normalization():
    caps = TruncationPolicy(qt=2, x=2, params=2)
    R = build_ring(caps, 1)
    masses, total = fbhl_masses(R, 1, 6, None)
    s = R.zero()
    for v in masses.values():
        s = s + v
    # within caps the listed outcomes exhaust the mass
    assert (s - total).is_zero()
    m = fbhl_marginal(R, 1, 0, (0,))
    assert m.constant() == 1
    # the compensated boundary letters leave only integer modulation powers
    assert_even_powers(total, "q")


def test_shift_forms_cross_check():
    caps = TruncationPolicy(qt=3, x=0, params=3, z=3)
    coeffs, psum, derived, printed = chi_pgf_forms(caps, 3)
    assert (psum - derived).is_zero()
    assert not (psum - printed).is_zero()  # printed variant provably differs
    z1 = substitute(coeffs[1], {"a": 0, "b": 0, "c": 0, "d": 0})
    R = coeffs[1].ring
    q, t = R.base("q"), R.base("t")
    one = R.one()
    expect = (q + q * t * invert_series(one - t)) * invert_series(one - q)
    assert z1 == expect


def test_rectangular_constant():
    caps = TruncationPolicy(qt=3, x=0, params=3)
    R = build_ring(caps, 0)
    for n in (1, 2):
        assert (koornwinder_constant_sum(R, n) - koornwinder_constant(R, n)).is_zero()
    assert koornwinder_constant_sum(R, 0) == R.one()
    assert koornwinder_constant(R, 0) == R.one()
    c1 = substitute(koornwinder_constant(R, 1), {"a": 0, "b": 0, "c": 0, "d": 0})
    assert c1 == invert_series(poch_inf(R.base("q"), R.base("t")))


def test_rectangular_bc_invariance():
    # inversion maps letter degree d to 2n - d, so the cap must reach 2nN
    caps = TruncationPolicy(qt=2, x=4, params=2)
    R = build_ring(caps, 2)
    n = 1
    plain = koornwinder_rhs(R, n, 2)
    swap = substitute(plain, {"x1": R.var("x2"), "x2": R.var("x1")})
    assert (plain - swap).is_zero()

    def inverted(name):
        def power(d):
            return R.var(name, 2 * n - d)
        return power

    both = koornwinder_rhs(R, n, 2, letters=[inverted("x1"), inverted("x2")])
    assert (plain - both).is_zero()


def test_nonnegative_at_vanishing_letters():
    # with boundary letters off, the bounded sum is a sum of products of
    # nonnegative coefficient polynomials
    caps = TruncationPolicy(qt=3, x=3, params=0)
    R = build_ring(caps, 1)
    zero = R.scalar(0)
    for n in (1, 2):
        f = z_n(R, n, ring_letters(R, 1), a=zero, b=zero, c=zero, d=zero)
        assert all(c > 0 for c in f.coeffs.values()), n


def test_increments_telescope_to_stable_limit():
    caps = TruncationPolicy(qt=2, x=2, params=2)
    R = build_ring(caps, 1)
    n0 = stabilization_bound(R)
    total = z_n(R, 0, ring_letters(R, 1))
    for n in range(1, n0 + 1):
        total = total + (z_n(R, n, ring_letters(R, 1))
                         - z_n(R, n - 1, ring_letters(R, 1)))
    assert (total - z_infinity(R, 1)).is_zero()


def test_marginal_masses_exhaust_within_caps():
    caps = TruncationPolicy(qt=2, x=2, params=2)
    R = build_ring(caps, 2)
    masses, total = fbhl_masses(R, 2, 8, None)
    s = R.zero()
    for v in masses.values():
        s = s + v
    assert (s - total).is_zero()
    norm = invert_series(total)
    acc = R.zero()
    for v in masses.values():
        acc = acc + v * norm
    assert acc == R.one()


def test_empty_alphabet_two_step_closed_form():
    # frozen by hand: only paired-column shapes survive at vanishing letters,
    # and the two geometric families assemble to (1+qt) over the products
    caps = TruncationPolicy(qt=4, x=0, params=0)
    R = build_ring(caps, 0)
    q, t, one = R.base("q"), R.base("t"), R.one()
    zero = R.scalar(0)
    f = z_n(R, 2, [], a=zero, b=zero, c=zero, d=zero)
    den = (one - q) * (one - q * q) * (one - t) * (one - t * t)
    assert f == (one + q * t) * invert_series(den)
