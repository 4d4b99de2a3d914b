"""Free-boundary process layer: bounded sums over partition pairs, their
symmetries, partition functions, boundary-process weights, shift
distributions, and the rectangular bounded sum with its constant.

Everything here is a finite exact computation: the enumeration bounds come
from the monomial bookkeeping |mu| = 2*(grading degree) + (boundary degree),
which holds term by term for the shifted boundary weights, so a truncated
sum over the listed shapes equals the full sum within the caps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F
from typing import Sequence

from .series import (SeriesRing, TruncatedSeries, TruncationPolicy,
                     VariableTable, assert_even_powers, invert_series,
                     poch_inf, poch2_inf, prod, substitute)
from .partitions import (HL_P, QW_P, QW_Q, Partition, as_partition,
                         conjugate, gap, h_weight, h_weight_conjugate,
                         is_horizontal_strip, length, multiplicity, part,
                         partitions_upto, rogers_szego, shifted_h_conjugate,
                         shifted_h_multiplicative, size, skew_multi,
                         skew_one_var, strips_between, supersets_within)

PARAM_NAMES = ("a", "b", "c", "d")

CONVENTION_AB_TOP = "ab-top"        # (a,b) weighting the last shape
CONVENTION_AB_BOTTOM = "ab-bottom"  # (a,b) weighting the first shape


@dataclass
class ProcessSpec:
    """Parameter pack for the process-side computations.

    ``params`` maps a,b,c,d to exact rationals, or None for a formal symbol.
    The convention tag picks which end of the chain carries (a,b) in the
    boundary-process weight; the matching check is the arbiter of the
    default.
    """
    n_vars: int = 1
    params: dict = field(default_factory=dict)
    convention: str = CONVENTION_AB_TOP


def build_ring(caps: TruncationPolicy, n_vars: int, zname: str | None = None) -> SeriesRing:
    names = tuple("x%d" % i for i in range(1, n_vars + 1))
    extra = (zname,) if zname else ()
    table = VariableTable.build(roots=("q", "t"), params=PARAM_NAMES,
                                alphabet=names, extra=extra)
    return SeriesRing(table, caps)


def ring_params(ring: SeriesRing, spec: ProcessSpec | None = None):
    vals = []
    for name in PARAM_NAMES:
        v = None if spec is None else spec.params.get(name)
        vals.append(ring.var(name) if v is None else ring.scalar(v))
    return tuple(vals)


def ring_letters(ring: SeriesRing, n_vars: int):
    return [ring.var("x%d" % i) for i in range(1, n_vars + 1)]


def _letters_budget(ring: SeriesRing, letters) -> int:
    groups = set()
    for let in letters:
        if callable(let):
            groups.add("x")
            continue
        if let.is_zero():
            continue
        if len(let.coeffs) == 1 and let.ring._zero_exp in let.coeffs:
            raise ValueError("formal alphabet required; nonzero scalar letters "
                             "do not truncate")
        for e in let.coeffs:
            for i, k in enumerate(e):
                if k:
                    groups.add(ring.table.variables[i].group)
    budget = 0
    if "x" in groups:
        budget += ring.policy.x
    if "params" in groups:
        budget += ring.policy.params
    return budget


def mu_size_bound(ring: SeriesRing) -> int:
    return 2 * ring.policy.qt + ring.policy.params


# -- the bounded double sum ------------------------------------------------------


def z_n(ring: SeriesRing, n: int, letters, a=None, b=None, c=None, d=None,
        alphabet_budget: int | None = None) -> TruncatedSeries:
    """Bounded sum over pairs mu <= lam with lam_1 <= n.

    Weight: h_{n-lam_1}(ab) h_{lam'}(a,b) / ((q;q)_{n-lam_1} prod (q;q)_{gaps})
    times the skew polynomial on the alphabet and the shifted (c,d) factor on
    mu.  The result passes the root-parity assertion for sqrt(t).
    """
    av, bv, cv, dv = ring_params(ring)
    a = av if a is None else a
    b = bv if b is None else b
    c = cv if c is None else c
    d = dv if d is None else d
    budget = _letters_budget(ring, letters) if alphabet_budget is None else alphabet_budget
    lam_cache: dict[tuple, TruncatedSeries] = {}

    def lam_weight(lam: Partition) -> TruncatedSeries:
        got = lam_cache.get(lam)
        if got is None:
            m = n - part(lam, 1)
            got = rogers_szego(ring, m, a * b) * ring.inv_poch(m)
            got = got * h_weight_conjugate(ring, lam, a, b)
            for i in range(1, len(lam) + 1):
                got = got * ring.inv_poch(gap(lam, i))
            lam_cache[lam] = got
        return got

    total = ring.zero()
    for mu in partitions_upto(mu_size_bound(ring), n):
        wmu = shifted_h_conjugate(ring, mu, c, d, "t")
        if wmu.is_zero():
            continue
        for lam in supersets_within(mu, budget, n):
            wlam = lam_weight(lam)
            if wlam.is_zero():
                continue
            skew = skew_multi(ring, lam, mu, letters, QW_P)
            if skew.is_zero():
                continue
            total = total + wlam * wmu * skew
    return assert_even_powers(total, "t")


def _abcd_swap_map(ring: SeriesRing, perm: Sequence[str]) -> dict:
    return {src: ring.var(dst) for src, dst in zip(PARAM_NAMES, perm)}


def symmetry_residual(ring: SeriesRing, n: int, n_vars: int, transform,
                      spec: ProcessSpec | None = None) -> TruncatedSeries:
    """Difference series for one of the symmetry statements; identically
    zero within caps iff the symmetry holds.

    transform: "swap-qt", ("permute-abcd", perm), "absorb-params", or
    "invert-pair".
    """
    letters = ring_letters(ring, n_vars)
    if transform == "swap-qt":
        z = z_n(ring, n, letters)
        return z - substitute(z, {"q": ring.var("t"), "t": ring.var("q")})
    if isinstance(transform, tuple) and transform[0] == "permute-abcd":
        z = z_n(ring, n, letters)
        return z - substitute(z, _abcd_swap_map(ring, transform[1]))
    if transform == "absorb-params":
        z = z_n(ring, n, letters)
        zero = ring.scalar(0)
        absorbed = z_n(ring, n, letters + [ring.var(p) for p in PARAM_NAMES],
                       a=zero, b=zero, c=zero, d=zero)
        return z - absorbed
    if transform == "invert-pair":
        if n_vars < 2:
            raise ValueError("pair inversion needs at least two letters")
        z = z_n(ring, n, letters)

        def inverted(name):
            def power(dd: int) -> TruncatedSeries:
                return ring.var(name, n - dd)
            return power

        inv_letters = [inverted("x1"), inverted("x2")] + letters[2:]
        z_inv = z_n(ring, n, inv_letters,
                    alphabet_budget=ring.policy.x + 2 * n)
        return z - z_inv
    raise ValueError("unknown transform %r" % (transform,))


# -- supporting exchange identities ------------------------------------------------


def _even_columns(lam: Partition) -> bool:
    return all(gap(lam, i) == 0 for i in range(1, len(lam) + 1, 2))


def ab_equiv_residual(ring: SeriesRing, mu: Partition, n: int) -> TruncatedSeries:
    """Bounded column-even sum of dual skew polynomials at letters (a,b)
    against its closed form; both sides vanish when mu_1 > n."""
    a, b = ring.var("a"), ring.var("b")
    lhs = ring.zero()
    for lam in supersets_within(mu, ring.policy.params, n):
        if not _even_columns(lam):
            continue
        skew = skew_multi(ring, lam, mu, [a, b], QW_Q)
        if skew.is_zero():
            continue
        lhs = lhs + ring.inv_poch(n - part(lam, 1)) * skew
    if part(mu, 1) > n:
        return lhs
    rhs = (rogers_szego(ring, n - part(mu, 1), a * b)
           * h_weight_conjugate(ring, mu, a, b)
           * ring.inv_poch(n - part(mu, 1)))
    return lhs - rhs


def inv_sym_residual(ring: SeriesRing, mu: Partition, n: int) -> TruncatedSeries:
    """Row-even bounded sum: (xy)^n at inverted letters against plain
    letters, the inversion compensated inside each chain factor."""
    x1, x2 = ring.var("x1"), ring.var("x2")

    def inverted(name):
        def power(dd: int) -> TruncatedSeries:
            return ring.var(name, n - dd)
        return power

    plain = ring.zero()
    flipped = ring.zero()
    for lam in supersets_within(mu, ring.policy.x + 2 * n, n):
        # even columns, like the two-letter exchange lemma; the row-even
        # reading fails already at the empty shape with one box of room
        if not _even_columns(lam):
            continue
        w = ring.inv_poch(n - part(lam, 1))
        s_plain = skew_multi(ring, lam, mu, [x1, x2], QW_Q)
        if not s_plain.is_zero():
            plain = plain + w * s_plain
        s_flip = skew_multi(ring, lam, mu, [inverted("x1"), inverted("x2")], QW_Q)
        if not s_flip.is_zero():
            flipped = flipped + w * s_flip
    return plain - flipped


# -- partition function and stable limit -----------------------------------------


def partition_function_sides(ring: SeriesRing, n_vars: int):
    """Unrestricted bounded double sum and the closed product, as a pair."""
    a, b, c, d = ring_params(ring)
    letters = ring_letters(ring, n_vars)
    lhs = ring.zero()
    for mu in partitions_upto(mu_size_bound(ring)):
        wmu = shifted_h_conjugate(ring, mu, c, d, "t")
        if wmu.is_zero():
            continue
        for lam in supersets_within(mu, ring.policy.x if letters else 0):
            wlam = h_weight_conjugate(ring, lam, a, b)
            for i in range(1, len(lam) + 1):
                wlam = wlam * ring.inv_poch(gap(lam, i))
            if wlam.is_zero():
                continue
            skew = skew_multi(ring, lam, mu, letters, QW_P)
            if skew.is_zero():
                continue
            lhs = lhs + wlam * wmu * skew

    q, t = ring.base("q"), ring.base("t")
    rhs = poch_inf(a * b, q)
    denom = [poch_inf(t, t), poch2_inf(q * t, q, t)]
    for u, v in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d)):
        denom.append(poch2_inf(u * v, q, t))
    for x in letters:
        for p in (a, b, c, d):
            denom.append(poch2_inf(p * x, q, t))
    for i in range(len(letters)):
        for j in range(i + 1, len(letters)):
            denom.append(poch2_inf(letters[i] * letters[j], q, t))
    rhs = rhs * invert_series(prod(ring, denom))
    return lhs, rhs


def z_infinity(ring: SeriesRing, n_vars: int) -> TruncatedSeries:
    """Stable large-n value of the bounded sum, as the closed product."""
    a, b, c, d = ring_params(ring)
    letters = ring_letters(ring, n_vars)
    q, t = ring.base("q"), ring.base("t")
    denom = [poch_inf(q, q), poch_inf(t, t), poch2_inf(q * t, q, t)]
    for u, v in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d)):
        denom.append(poch2_inf(u * v, q, t))
    for x in letters:
        for p in (a, b, c, d):
            denom.append(poch2_inf(p * x, q, t))
    for i in range(len(letters)):
        for j in range(i + 1, len(letters)):
            denom.append(poch2_inf(letters[i] * letters[j], q, t))
    return invert_series(prod(ring, denom))


def stabilization_bound(ring: SeriesRing) -> int:
    """Smallest n at which the bounded sum provably equals its limit within
    caps: largest reachable first part plus the tail the extra weight needs."""
    reach = mu_size_bound(ring) + ring.policy.x
    return reach + ring.policy.qt + ring.policy.params + 1


def qw_shift_cdf(ring: SeriesRing, n: int) -> TruncatedSeries:
    """Distribution function of the two-parameter geometric shift."""
    q = ring.base("q")
    ab = ring.var("a") * ring.var("b")
    return (poch_inf(q, q) * poch_inf(ab, q)
            * rogers_szego(ring, n, ab) * ring.inv_poch(n))


# -- boundary-process weights (second-kind side) -----------------------------------


def fb_weight(ring: SeriesRing, chain: Sequence[Partition],
              spec: ProcessSpec | None = None) -> TruncatedSeries:
    """Weight of one chain of shapes under the boundary process.

    Canonical convention ("ab-top"): the shifted (c,d) factor and the
    finite-product denominators sit on the first shape, the (a,b) factor on
    the last.  The alternate tag ("ab-bottom") puts (a,b) on the first shape
    and (c,d) on the last; its raw weight carries the root to a negative
    power, so what is returned is the weight rescaled by root^(|last|-|first|)
    to stay polynomial in the root, documented here rather than hidden.
    """
    chain = [as_partition(x) for x in chain]
    for lo, hi in zip(chain, chain[1:]):
        if not is_horizontal_strip(hi, lo):
            raise ValueError("chain step %r -> %r is not a horizontal strip" % (lo, hi))
    a, b, c, d = ring_params(ring, spec)
    convention = spec.convention if spec else CONVENTION_AB_TOP
    first, last = chain[0], chain[-1]
    if convention == CONVENTION_AB_TOP:
        w = shifted_h_multiplicative(ring, first, c, d, "q", "t")
        w = w * h_weight(ring, last, a, b, "t")
    elif convention == CONVENTION_AB_BOTTOM:
        # rescaled weight: root^|last| absorbs the (c,d)/root letters on the
        # last shape, h(a,b) rides on the first
        w = h_weight(ring, first, a, b, "t")
        w = w * shifted_h_multiplicative(ring, last, c, d, "q", "t")
    else:
        raise ValueError("unknown convention %r" % (convention,))
    if first:
        for i in range(1, first[0] + 1):
            w = w * ring.inv_poch(multiplicity(first, i), "t")
    for i, (lo, hi) in enumerate(zip(chain, chain[1:]), start=1):
        w = w * skew_one_var(ring, hi, lo, ring.var("x%d" % i), HL_P, "t")
        if w.is_zero():
            break
    return w


def chain_support(chain: Sequence[Partition]) -> tuple[int, ...]:
    return tuple(1 if length(hi) == length(lo) + 1 else 0
                 for lo, hi in zip(chain, chain[1:]))


def enumerate_chains(ring: SeriesRing, n_vars: int, first_len: int | None = None):
    """Chains of shapes, the first bounded by the monomial bookkeeping and
    the following steps by the alphabet budget."""
    budget = ring.policy.x
    for first in partitions_upto(mu_size_bound(ring)):
        if first_len is not None and length(first) != first_len:
            continue
        stack = [(first,)]
        while stack:
            chain = stack.pop()
            if len(chain) == n_vars + 1:
                yield chain
                continue
            used = size(chain[-1]) - size(chain[0])
            for nxt in _strips_budget(chain[-1], budget - used):
                stack.append(chain + (nxt,))


def _strips_budget(nu: Partition, budget: int):
    for lam in supersets_within(nu, budget):
        if is_horizontal_strip(lam, nu):
            yield lam


def fbhl_masses(ring: SeriesRing, n_vars: int, n_max: int,
                spec: ProcessSpec | None = None):
    """Unnormalized masses keyed by (first-shape length, support), plus the
    total over every chain within caps."""
    masses: dict[tuple[int, tuple[int, ...]], TruncatedSeries] = {}
    total = ring.zero()
    for chain in enumerate_chains(ring, n_vars):
        w = fb_weight(ring, chain, spec)
        if w.is_zero():
            continue
        total = total + w
        n = length(chain[0])
        if n <= n_max:
            key = (n, chain_support(chain))
            got = masses.get(key)
            masses[key] = w if got is None else got + w
    return masses, total


def fbhl_marginal(ring: SeriesRing, n_vars: int, n: int, s: Sequence[int],
                  spec: ProcessSpec | None = None) -> TruncatedSeries:
    masses, total = fbhl_masses(ring, n_vars, n, spec)
    w = masses.get((n, tuple(s)), ring.zero())
    return w * invert_series(total)


# -- shift distribution for the matching -------------------------------------------


def shift_weights(ring: SeriesRing, k_max: int, spec: ProcessSpec | None = None):
    """Unnormalized shift masses by shape length, and their overall total."""
    a, b, c, d = ring_params(ring, spec)
    out = {k: ring.zero() for k in range(k_max + 1)}
    total = ring.zero()
    for lam in partitions_upto(mu_size_bound(ring)):
        w = h_weight(ring, lam, a, b, "t")
        if w.is_zero():
            continue
        w = w * shifted_h_multiplicative(ring, lam, c, d, "q", "t")
        if w.is_zero():
            continue
        if lam:
            for i in range(1, lam[0] + 1):
                w = w * ring.inv_poch(multiplicity(lam, i), "t")
        total = total + w
        if length(lam) <= k_max:
            out[length(lam)] = out[length(lam)] + w
    return out, total


def chi_pgf_forms(caps: TruncationPolicy, z_order: int,
                  spec: ProcessSpec | None = None):
    """Generating function of the shift, three ways: the partition sum, the
    product form it telescopes to, and the printed product variant.  Returns
    (coefficients, partition_sum, derived_product, printed_product)."""
    import dataclasses
    caps = dataclasses.replace(caps, z=max(caps.z, z_order))
    ring = build_ring(caps, 0, zname="zz")
    a, b, c, d = ring_params(ring, spec)
    q, t, zz = ring.base("q"), ring.base("t"), ring.var("zz")

    psum = ring.zero()
    for lam in partitions_upto(mu_size_bound(ring)):
        if length(lam) > caps.z:
            continue
        w = h_weight(ring, lam, a, b, "t")
        if w.is_zero():
            continue
        w = w * shifted_h_multiplicative(ring, lam, c, d, "q", "t")
        if lam:
            for i in range(1, lam[0] + 1):
                w = w * ring.inv_poch(multiplicity(lam, i), "t")
        psum = psum + w * zz ** length(lam)

    abcd = a * b * c * d
    num = poch2_inf(abcd * zz * zz, q, t)
    derived_denom = [poch_inf(q * zz, q), poch2_inf(q * t * zz, q, t),
                     poch2_inf(a * b * q * zz, q, t), poch2_inf(abcd * zz, q, t)]
    for u, v in ((a, c), (a, d), (b, c), (b, d), (c, d)):
        derived_denom.append(poch2_inf(u * v * zz, q, t))
    derived = num * invert_series(prod(ring, derived_denom))

    printed_denom = [poch_inf(q * zz, q), poch_inf(t * zz, t),
                     poch2_inf(q * t * zz, q, t), poch2_inf(abcd * zz, q, t)]
    for u, v in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d)):
        printed_denom.append(poch2_inf(u * v * zz, q, t))
    printed = num * invert_series(prod(ring, printed_denom))

    zi = ring._idx["zz"]
    coeffs = []
    for k in range(z_order + 1):
        ck = TruncatedSeries(ring, {e[:zi] + (0,) + e[zi + 1:]: c0
                                    for e, c0 in psum.coeffs.items() if e[zi] == k})
        coeffs.append(ck)
    return coeffs, psum, derived, printed


# -- rectangular bounded sum ---------------------------------------------------------


def koornwinder_rhs(ring: SeriesRing, n: int, n_vars: int,
                    letters=None) -> TruncatedSeries:
    """Bounded sum over mu <= lam with lam_1 <= 2n whose value is the
    rectangular polynomial times its constant and the monomial prefactor."""
    a, b, c, d = ring_params(ring)
    letters = ring_letters(ring, n_vars) if letters is None else letters
    budget = _letters_budget(ring, letters) if letters else 0
    total = ring.zero()
    for mu in partitions_upto(mu_size_bound(ring), 2 * n):
        wmu = shifted_h_multiplicative(ring, mu, c, d, "q", "t")
        if wmu.is_zero():
            continue
        if mu:
            for i in range(1, mu[0] + 1):
                wmu = wmu * ring.inv_poch(multiplicity(mu, i), "t")
        for lam in supersets_within(mu, budget, 2 * n):
            wlam = h_weight(ring, lam, a, b, "t")
            if wlam.is_zero():
                continue
            m2n = multiplicity(lam, 2 * n)
            if m2n:
                wlam = wlam * invert_series(rogers_szego(ring, m2n, a * b, "t"))
            skew = skew_multi(ring, lam, mu, letters, HL_P, "t")
            if skew.is_zero():
                continue
            total = total + wlam * wmu * skew
    return total


def koornwinder_constant_sum(ring: SeriesRing, n: int) -> TruncatedSeries:
    """The bounded sum at vanishing alphabet."""
    a, b, c, d = ring_params(ring)
    total = ring.zero()
    for lam in partitions_upto(mu_size_bound(ring), 2 * n):
        w = h_weight(ring, lam, a, b, "t")
        if w.is_zero():
            continue
        w = w * shifted_h_multiplicative(ring, lam, c, d, "q", "t")
        if w.is_zero():
            continue
        m2n = multiplicity(lam, 2 * n)
        if m2n:
            w = w * invert_series(rogers_szego(ring, m2n, a * b, "t"))
        if lam:
            for i in range(1, lam[0] + 1):
                w = w * ring.inv_poch(multiplicity(lam, i), "t")
        total = total + w
    return total


def koornwinder_constant(ring: SeriesRing, n: int) -> TruncatedSeries:
    """Closed form of the constant term of the rectangular identity."""
    a, b, c, d = ring_params(ring)
    q, t = ring.base("q"), ring.base("t")
    abcd = a * b * c * d
    num = ring.one()
    for i in range(n - 1, 2 * n - 1):
        num = num * poch_inf(abcd * q ** i, t)
    denom = []
    for i in range(1, n + 1):
        denom.append(poch_inf(q ** i, t))
    for i in range(1, n):
        denom.append(poch_inf(a * b * q ** i, t))
    for i in range(n):
        for u, v in ((a, c), (a, d), (b, c), (b, d), (c, d)):
            denom.append(poch_inf(u * v * q ** i, t))
    return num * invert_series(prod(ring, denom))
