"""Partitions, q-series primitives, and skew symmetric-function evaluation.

Partitions are plain tuples of weakly decreasing positive integers; all the
structure (conjugates, multiplicities, strips, chains) lives in functions.
The symmetric-function layer evaluates skew one-row polynomials on explicit
letters, so an "alphabet" is just a list of series values (variables, scalar
zeros, boundary parameters) or callables giving the letter raised to a power.
"""

from __future__ import annotations

from fractions import Fraction as F
from typing import Callable, Iterable, Sequence

from .series import SeriesRing, TruncatedSeries, poch_finite, poch_inf

Partition = tuple[int, ...]

QW_P = "qW-P"
QW_Q = "qW-Q"
HL_P = "HL-P"
HL_Q = "HL-Q"


# -- partition basics ---------------------------------------------------------


def as_partition(parts: Iterable[int]) -> Partition:
    p = tuple(int(x) for x in parts if int(x) != 0)
    if any(x < 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError("not weakly decreasing positive parts: %r" % (p,))
    return p


def size(lam: Partition) -> int:
    return sum(lam)


def length(lam: Partition) -> int:
    return len(lam)


def part(lam: Partition, i: int) -> int:
    """1-indexed part, zero beyond the length."""
    return lam[i - 1] if 1 <= i <= len(lam) else 0


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x >= j) for j in range(1, lam[0] + 1))


def multiplicity(lam: Partition, i: int) -> int:
    return sum(1 for x in lam if x == i)


def gap(lam: Partition, i: int) -> int:
    return part(lam, i) - part(lam, i + 1)


def contains(lam: Partition, mu: Partition) -> bool:
    return all(part(lam, i + 1) >= m for i, m in enumerate(mu))


def is_horizontal_strip(lam: Partition, mu: Partition) -> bool:
    """lam/mu has at most one box per column: lam_1 >= mu_1 >= lam_2 >= ..."""
    if not contains(lam, mu):
        return False
    for i in range(1, len(lam) + 1):
        if part(mu, i) < part(lam, i + 1):
            return False
    return True


def partitions_upto(max_size: int, max_part: int | None = None):
    """All partitions of size <= max_size with parts <= max_part."""
    def gen(remaining, cap):
        yield ()
        for first in range(min(remaining, cap), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest
    cap = max_size if max_part is None else min(max_part, max_size)
    seen = set()
    for lam in gen(max_size, cap) if max_size >= 0 else ():
        if lam not in seen:
            seen.add(lam)
            yield lam


def supersets_within(mu: Partition, budget: int, part_cap: int | None = None):
    """All lam containing mu with |lam/mu| <= budget and lam_1 <= part_cap."""
    top = (mu[0] if mu else 0) + budget if part_cap is None else part_cap
    maxlen = len(mu) + budget
    out = []

    def rec(i, prev, left, acc):
        lo = part(mu, i)
        if lo == 0:
            out.append(tuple(acc))  # close the shape here
        if i > maxlen:
            return
        for v in range(max(lo, 1), min(prev, lo + left) + 1):
            acc.append(v)
            rec(i + 1, v, left - (v - lo), acc)
            acc.pop()

    rec(1, top, budget, [])
    return sorted(set(out), key=lambda l: (size(l), l))


def strips_between(nu: Partition, lam: Partition):
    """All rho with nu <= rho <= lam and rho/nu a horizontal strip."""
    n = max(len(lam), len(nu))

    def rows(i, upper):
        if i > n:
            yield ()
            return
        lo = part(nu, i)
        hi = min(part(lam, i), upper)
        for v in range(lo, hi + 1):
            for rest in rows(i + 1, part(nu, i)):
                yield (v,) + rest
    for rho in rows(1, part(lam, 1)):
        yield tuple(x for x in rho if x > 0)


# -- q-series primitives ---------------------------------------------------------


def gaussian_binomial(ring: SeriesRing, m: int, k: int, base: str = "q") -> TruncatedSeries:
    """Gaussian binomial coefficient; zero when k is out of range."""
    return ring.gauss(m, k, base)


def q_pochhammer(z: TruncatedSeries, base: TruncatedSeries, order) -> TruncatedSeries:
    """(z; base)_order for finite order or order="inf"."""
    if order == "inf":
        return poch_inf(z, base)
    return poch_finite(z, base, int(order))


def rogers_szego(ring: SeriesRing, m: int, z: TruncatedSeries, base: str = "q") -> TruncatedSeries:
    """h_m(z) = sum_k C(m,k) z^k; zero for negative m so that vanishing
    boundary cases collapse on their own."""
    if m < 0:
        return ring.zero()
    out = ring.zero()
    zk = ring.one()
    for k in range(m + 1):
        out = out + ring.gauss(m, k, base) * zk
        if k < m:
            zk = zk * z
    return out


def _two_letter_block(ring: SeriesRing, idx: int, m: int, a: TruncatedSeries,
                      b: TruncatedSeries, base: str) -> TruncatedSeries:
    """One factor of the boundary weight: index parity decides whether the
    block is sum_k C(m,k) a^(m-k) b^k (odd) or sum_k C(m,k) (ab)^k (even)."""
    if m == 0:
        return ring.one()
    out = ring.zero()
    if idx % 2:
        for k in range(m + 1):
            out = out + ring.gauss(m, k, base) * a ** (m - k) * b ** k
    else:
        ab = a * b
        abk = ring.one()
        for k in range(m + 1):
            out = out + ring.gauss(m, k, base) * abk
            if k < m:
                abk = abk * ab
    return out


def h_weight(ring: SeriesRing, lam: Partition, a, b, base: str = "q") -> TruncatedSeries:
    """Boundary weight in multiplicative form: parts of odd size contribute
    a^m h_m(b/a), parts of even size h_m(ab), everything pre-expanded so no
    negative powers of a appear."""
    a = a if isinstance(a, TruncatedSeries) else ring.scalar(a)
    b = b if isinstance(b, TruncatedSeries) else ring.scalar(b)
    if not lam:
        return ring.one()
    out = ring.one()
    for j in range(1, lam[0] + 1):
        m = multiplicity(lam, j)
        if m:
            out = out * _two_letter_block(ring, j, m, a, b, base)
    return out


def h_weight_conjugate(ring: SeriesRing, lam: Partition, a, b, base: str = "q") -> TruncatedSeries:
    """Same weight for the conjugate shape, written with the gaps of lam."""
    a = a if isinstance(a, TruncatedSeries) else ring.scalar(a)
    b = b if isinstance(b, TruncatedSeries) else ring.scalar(b)
    out = ring.one()
    for j in range(1, len(lam) + 1):
        g = gap(lam, j)
        if g:
            out = out * _two_letter_block(ring, j, g, a, b, base)
    return out


def _shifted_block(ring: SeriesRing, idx: int, m: int, c: TruncatedSeries,
                   d: TruncatedSeries, root: str, base: str) -> TruncatedSeries:
    """Block of root^(idx*m) * h-block(c/root, d/root): the compensating
    power is distributed so every exponent stays nonnegative."""
    if m == 0:
        return ring.one()
    out = ring.zero()
    if idx % 2:
        s = ring.var(root, (idx - 1) * m)
        for k in range(m + 1):
            out = out + ring.gauss(m, k, base) * c ** (m - k) * d ** k
        out = out * s
    else:
        cd = c * d
        for k in range(m + 1):
            term = ring.gauss(m, k, base) * cd ** k * ring.var(root, idx * m - 2 * k)
            out = out + term
    return out


def shifted_h_conjugate(ring: SeriesRing, mu: Partition, c, d, root: str,
                        base: str = "q") -> TruncatedSeries:
    """root^|mu| * h-weight of the conjugate of mu at letters (c/root, d/root).

    With root = sqrt(t) this is the boundary factor t^(|mu|/2) h(c/sqrt t,
    d/sqrt t); the identity |mu| = 2*(t-degree) + (c,d)-degree holds monomial
    by monomial, which is what makes the enumeration bound on |mu| exact.
    """
    c = c if isinstance(c, TruncatedSeries) else ring.scalar(c)
    d = d if isinstance(d, TruncatedSeries) else ring.scalar(d)
    out = ring.one()
    for j in range(1, len(mu) + 1):
        g = gap(mu, j)
        if g:
            out = out * _shifted_block(ring, j, g, c, d, root, base)
            if out.is_zero():
                break
    return out


def shifted_h_multiplicative(ring: SeriesRing, mu: Partition, c, d, root: str,
                             base: str = "q") -> TruncatedSeries:
    """root^|mu| * h-weight of mu itself at (c/root, d/root), via part
    multiplicities instead of gaps."""
    c = c if isinstance(c, TruncatedSeries) else ring.scalar(c)
    d = d if isinstance(d, TruncatedSeries) else ring.scalar(d)
    if not mu:
        return ring.one()
    out = ring.one()
    for j in range(1, mu[0] + 1):
        m = multiplicity(mu, j)
        if m:
            out = out * _shifted_block(ring, j, m, c, d, root, base)
            if out.is_zero():
                break
    return out


# -- skew polynomials ----------------------------------------------------------


def _qw_p_coeff(ring: SeriesRing, lam: Partition, mu: Partition, base: str) -> TruncatedSeries:
    out = ring.one()
    for i in range(1, len(lam) + 1):
        out = out * ring.gauss(gap(lam, i), part(lam, i) - part(mu, i), base)
        if out.is_zero():
            break
    return out


def _qw_q_coeff(ring: SeriesRing, lam: Partition, mu: Partition, base: str) -> TruncatedSeries:
    out = ring.one()
    for i in range(1, len(lam) + 1):
        g = part(mu, i) - part(mu, i + 1)
        out = out * poch_finite(ring.base(base), ring.base(base), g)
        out = out * ring.inv_poch(part(lam, i) - part(mu, i), base)
        out = out * ring.inv_poch(part(mu, i) - part(lam, i + 1), base)
    return out


def _hl_psi(ring: SeriesRing, lam: Partition, mu: Partition, base: str) -> TruncatedSeries:
    out = ring.one()
    top = lam[0] if lam else 0
    t = ring.base(base)
    for i in range(1, top + 1):
        if multiplicity(mu, i) == multiplicity(lam, i) + 1:
            out = out * (ring.one() - t ** multiplicity(mu, i))
    return out


def _hl_phi(ring: SeriesRing, lam: Partition, mu: Partition, base: str) -> TruncatedSeries:
    out = ring.one()
    top = lam[0] if lam else 0
    t = ring.base(base)
    for i in range(1, top + 1):
        if multiplicity(lam, i) == multiplicity(mu, i) + 1:
            out = out * (ring.one() - t ** multiplicity(lam, i))
    return out


_COEFFS = {QW_P: _qw_p_coeff, QW_Q: _qw_q_coeff, HL_P: _hl_psi, HL_Q: _hl_phi}

Letter = TruncatedSeries | Callable[[int], TruncatedSeries]


def _letter_power(ring: SeriesRing, letter: Letter, d: int) -> TruncatedSeries:
    if callable(letter):
        return letter(d)
    if d == 0:
        return ring.one()
    return letter ** d


def skew_one_var(ring: SeriesRing, lam: Partition, mu: Partition, letter: Letter,
                 family: str, base: str = "q") -> TruncatedSeries:
    """One-letter skew polynomial; zero unless lam/mu is a horizontal strip."""
    if not is_horizontal_strip(lam, mu):
        return ring.zero()
    coeff = _COEFFS[family](ring, lam, mu, base)
    if coeff.is_zero():
        return ring.zero()
    return coeff * _letter_power(ring, letter, size(lam) - size(mu))


def skew_multi(ring: SeriesRing, lam: Partition, mu: Partition, letters: Sequence[Letter],
               family: str, base: str = "q") -> TruncatedSeries:
    """Skew polynomial on a finite alphabet via the interlacing chain sum."""
    if not contains(lam, mu):
        return ring.zero()
    frontier: dict[Partition, TruncatedSeries] = {mu: ring.one()}
    for pos, letter in enumerate(letters):
        last = pos == len(letters) - 1
        new: dict[Partition, TruncatedSeries] = {}
        for nu, w in frontier.items():
            targets = (lam,) if last else strips_between(nu, lam)
            for rho in targets:
                f = skew_one_var(ring, rho, nu, letter, family, base)
                if f.is_zero():
                    continue
                t = w * f
                if t.is_zero():
                    continue
                got = new.get(rho)
                new[rho] = t if got is None else got + t
        frontier = new
        if not frontier:
            return ring.zero()
    return frontier.get(lam, ring.zero())


def b_norm(ring: SeriesRing, lam: Partition, family: str, base: str = "q") -> TruncatedSeries:
    """Normalization factor linking the two dual skew families."""
    if family in (HL_P, HL_Q):
        out = ring.one()
        if lam:
            for i in range(1, lam[0] + 1):
                out = out * poch_finite(ring.base(base), ring.base(base), multiplicity(lam, i))
        return out
    out = ring.one()
    for i in range(1, len(lam) + 1):
        out = out * ring.inv_poch(gap(lam, i), base)
    return out
