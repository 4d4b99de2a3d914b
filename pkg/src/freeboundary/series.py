"""Exact truncated multivariate Laurent/power series over the rationals.

Coefficients are `fractions.Fraction`; a monomial is a tuple of integer
exponents aligned with a fixed variable table.  Grading parameters that may
occur with half-integer powers (q, t, u) are stored in half-units: exponent 2
of the variable ``q`` means q itself, exponent 1 means the square root.  This
keeps alternating sums of half-integer weights exact, and lets a parity check
certify that the roots cancel wherever they must.

Truncation is by per-group degree caps.  Designated integration variables may
carry negative exponents, bounded by an explicit per-variable budget that the
caller derives from the factors in play; nothing here ever guesses a depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

F = Fraction

GROUP_QT = "qt"
GROUP_X = "x"
GROUP_PARAMS = "params"
GROUP_Z = "z"


class PolicyMismatch(ValueError):
    """Two series built over different tables or caps were combined."""


class NonExpandableFactor(ValueError):
    """A reciprocal factor admits no truncation-safe geometric expansion."""


class OddRootPower(ValueError):
    """A root symbol survived with an odd exponent where it must cancel."""


@dataclass(frozen=True)
class Variable:
    name: str
    group: str
    root: bool = False      # exponents are half-units of the qt grading
    laurent: bool = False   # negative exponents allowed, within budget


@dataclass(frozen=True)
class VariableTable:
    variables: tuple[Variable, ...]

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names: %r" % (names,))

    def index(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise KeyError(name)

    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @staticmethod
    def build(roots=(), params=(), alphabet=(), laurent=(), extra=()) -> "VariableTable":
        """Assemble a table: grading roots, boundary parameters, alphabet
        variables, Laurent (integration) variables, then any extra z-group
        symbols such as a generating-function marker."""
        vs = []
        for n in roots:
            vs.append(Variable(n, GROUP_QT, root=True))
        for n in params:
            vs.append(Variable(n, GROUP_PARAMS))
        for n in alphabet:
            vs.append(Variable(n, GROUP_X))
        for n in laurent:
            vs.append(Variable(n, GROUP_X, laurent=True))
        for n in extra:
            vs.append(Variable(n, GROUP_Z))
        return VariableTable(tuple(vs))


@dataclass(frozen=True)
class TruncationPolicy:
    """Degree caps per group.  ``qt`` is in whole units; root symbols count
    one half each.  ``laurent`` maps an integration variable to the largest
    absolute exponent it may carry (derived by the caller, never guessed)."""

    qt: int
    x: int
    params: int
    z: int = 0
    laurent: tuple[tuple[str, int], ...] = ()

    def laurent_budget(self, name: str) -> int:
        for n, b in self.laurent:
            if n == name:
                return b
        return 0

    def with_laurent(self, budgets: Mapping[str, int]) -> "TruncationPolicy":
        return TruncationPolicy(self.qt, self.x, self.params, self.z,
                                tuple(sorted(budgets.items())))


class SeriesRing:
    """A variable table plus a truncation policy, with cached primitives."""

    def __init__(self, table: VariableTable, policy: TruncationPolicy):
        self.table = table
        self.policy = policy
        self.nvars = len(table.variables)
        self._idx = {v.name: i for i, v in enumerate(table.variables)}
        self._qt_idx = tuple(i for i, v in enumerate(table.variables) if v.group == GROUP_QT)
        self._x_idx = tuple(i for i, v in enumerate(table.variables)
                            if v.group == GROUP_X and not v.laurent)
        self._params_idx = tuple(i for i, v in enumerate(table.variables) if v.group == GROUP_PARAMS)
        self._z_idx = tuple(i for i, v in enumerate(table.variables) if v.group == GROUP_Z)
        self._laurent = tuple((i, policy.laurent_budget(v.name))
                              for i, v in enumerate(table.variables) if v.laurent)
        self._qt_cap2 = 2 * policy.qt
        self._zero_exp = (0,) * self.nvars
        self._gauss_cache: dict[tuple[int, int], dict[int, int]] = {}
        self._inv_poch_cache: dict[tuple[str, int], "TruncatedSeries"] = {}

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, SeriesRing)
                and self.table == other.table and self.policy == other.policy)

    def __hash__(self):
        return hash((self.table, self.policy))

    def compatible(self, other: "SeriesRing") -> bool:
        return self is other or self == other

    # -- monomial admission -------------------------------------------------

    def admit(self, exps: tuple[int, ...]) -> bool:
        s = 0
        for i in self._qt_idx:
            s += exps[i]
        if s > self._qt_cap2:
            return False
        s = 0
        for i in self._x_idx:
            s += exps[i]
        if s > self.policy.x:
            return False
        s = 0
        for i in self._params_idx:
            s += exps[i]
        if s > self.policy.params:
            return False
        s = 0
        for i in self._z_idx:
            s += exps[i]
        if s > self.policy.z:
            return False
        for i, budget in self._laurent:
            if abs(exps[i]) > budget:
                return False
        return True

    def capped_degree(self, exps: tuple[int, ...]) -> int:
        """Total degree in capped groups, qt counted in half-units."""
        d = 0
        for i in self._qt_idx:
            d += exps[i]
        for i in self._x_idx:
            d += 2 * exps[i]
        for i in self._params_idx:
            d += 2 * exps[i]
        for i in self._z_idx:
            d += 2 * exps[i]
        return d

    def laurent_total(self, exps: tuple[int, ...]) -> int:
        return sum(exps[i] for i, _ in self._laurent)

    # -- constructors -------------------------------------------------------

    def series(self, coeffs: Mapping[tuple[int, ...], Fraction]) -> "TruncatedSeries":
        kept = {}
        for e, c in coeffs.items():
            if c and self.admit(e):
                kept[e] = F(c)
        return TruncatedSeries(self, kept)

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, {})

    def one(self) -> "TruncatedSeries":
        return self.scalar(1)

    def scalar(self, c) -> "TruncatedSeries":
        c = F(c)
        if not c:
            return self.zero()
        return TruncatedSeries(self, {self._zero_exp: c})

    def monomial(self, exps: tuple[int, ...], coeff=1) -> "TruncatedSeries":
        return self.series({tuple(exps): F(coeff)})

    def var(self, name: str, power: int = 1) -> "TruncatedSeries":
        i = self._idx[name]
        v = self.table.variables[i]
        if power < 0 and not v.laurent:
            raise ValueError("negative power of non-Laurent variable %s" % name)
        e = [0] * self.nvars
        e[i] = power
        return self.monomial(tuple(e))

    def root(self, name: str) -> "TruncatedSeries":
        """The square-root symbol itself (exponent one half-unit)."""
        return self.var(name, 1)

    def base(self, name: str) -> "TruncatedSeries":
        """The whole grading parameter, i.e. the root squared."""
        return self.var(name, 2)

    # -- cached q-combinatorics --------------------------------------------

    def gauss_poly(self, m: int, k: int) -> dict[int, int]:
        """Gaussian binomial as {degree: integer coefficient} in the base."""
        if k < 0 or k > m:
            return {}
        if k == 0 or k == m:
            return {0: 1}
        key = (m, k)
        got = self._gauss_cache.get(key)
        if got is None:
            # C(m,k) = C(m-1,k-1) + base^k * C(m-1,k)
            a = self.gauss_poly(m - 1, k - 1)
            b = self.gauss_poly(m - 1, k)
            got = dict(a)
            for d, c in b.items():
                got[d + k] = got.get(d + k, 0) + c
            self._gauss_cache[key] = got
        return got

    def gauss(self, m: int, k: int, base_name: str = "q") -> "TruncatedSeries":
        i = self._idx[base_name]
        out = {}
        for d, c in self.gauss_poly(m, k).items():
            e = [0] * self.nvars
            e[i] = 2 * d
            e = tuple(e)
            if self.admit(e):
                out[e] = F(c)
        return TruncatedSeries(self, out)

    def inv_poch(self, m: int, base_name: str = "q") -> "TruncatedSeries":
        """1 / (base; base)_m, exact within caps, cached."""
        key = (base_name, m)
        got = self._inv_poch_cache.get(key)
        if got is None:
            got = invert_series(poch_finite(self.base(base_name), self.base(base_name), m))
            self._inv_poch_cache[key] = got
        return got


class TruncatedSeries:
    """Immutable-by-convention sparse series over a SeriesRing."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: SeriesRing, coeffs: dict):
        self.ring = ring
        self.coeffs = coeffs

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant(self) -> Fraction:
        return self.coeffs.get(self.ring._zero_exp, F(0))

    def coefficient(self, exps: tuple[int, ...]) -> Fraction:
        return self.coeffs.get(tuple(exps), F(0))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return self.coeffs == other.coeffs

    def _check(self, other: "TruncatedSeries"):
        if not self.ring.compatible(other.ring):
            raise PolicyMismatch("series built over incompatible rings/caps")

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return TruncatedSeries(self.ring, out)

    def __neg__(self):
        return TruncatedSeries(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        ring = self.ring
        admit = ring.admit
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if not admit(e):
                    continue
                c = c1 * c2
                s = out.get(e)
                if s is None:
                    out[e] = c
                else:
                    s = s + c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return TruncatedSeries(self.ring, out)

    __rmul__ = __mul__

    def __radd__(self, other):
        return self.__add__(other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def scale(self, c) -> "TruncatedSeries":
        c = F(c)
        if not c:
            return self.ring.zero()
        return TruncatedSeries(self.ring, {e: v * c for e, v in self.coeffs.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative series power; use invert_series")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
            if out.is_zero():
                break
        return out

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return other

    # -- display ---------------------------------------------------------------

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        names = self.ring.table.names()
        roots = [v.root for v in self.ring.table.variables]
        terms = []
        for e, c in self.sorted_items()[:30]:
            parts = []
            for i, k in enumerate(e):
                if not k:
                    continue
                if roots[i]:
                    parts.append("%s^%s" % (names[i], F(k, 2)) if k != 2 else names[i])
                else:
                    parts.append("%s^%d" % (names[i], k) if k != 1 else names[i])
            mono = "*".join(parts) if parts else "1"
            terms.append("%s*%s" % (c, mono))
        tail = " + ..." if len(self.coeffs) > 30 else ""
        return " + ".join(terms) + tail


def series_records(f: TruncatedSeries) -> list:
    """Dump format: one record [exponents..., numerator, denominator] per
    monomial, graded-lexicographic over the table order."""
    out = []
    for e, c in sorted(f.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        out.append(list(e) + [c.numerator, c.denominator])
    return out


def prod(ring: SeriesRing, factors: Iterable[TruncatedSeries]) -> TruncatedSeries:
    out = ring.one()
    for f in factors:
        out = out * f
        if out.is_zero():
            break
    return out


# -- division ------------------------------------------------------------------


def _progress_ok(ring: SeriesRing, exps: tuple[int, ...]) -> bool:
    """A geometric ratio monomial makes progress if it gains capped degree,
    or strictly descends in the Laurent variables while gaining none."""
    d = ring.capped_degree(exps)
    if d > 0:
        return True
    return d == 0 and ring.laurent_total(exps) < 0


def expand_reciprocal(dominant: TruncatedSeries, subdominant: TruncatedSeries,
                      max_terms: int = 10000) -> TruncatedSeries:
    """1 / (dominant - subdominant) where dominant is +-1 times an invertible
    monomial and every monomial of subdominant/dominant strictly loses weight
    under the grading (or descends within the Laurent budget)."""
    ring = dominant.ring
    if len(dominant.coeffs) != 1:
        raise NonExpandableFactor("dominant part must be a single monomial")
    ((dexp, dcoef),) = dominant.coeffs.items()
    if dcoef not in (F(1), F(-1)):
        raise NonExpandableFactor("dominant coefficient must be +-1")
    inv_exp = tuple(-k for k in dexp)
    for i, k in enumerate(inv_exp):
        if k < 0 and not ring.table.variables[i].laurent:
            raise NonExpandableFactor(
                "dominant monomial not invertible in %s" % ring.table.variables[i].name)
    inv_dom = ring.monomial(inv_exp, dcoef)  # sign^-1 == sign for +-1
    ratio = subdominant * inv_dom
    for e in ratio.coeffs:
        if not _progress_ok(ring, e):
            raise NonExpandableFactor(
                "factor has non-contracting ratio monomial %r" % (e,))
    out = ring.one()
    term = ring.one()
    for _ in range(max_terms):
        term = term * ratio
        if term.is_zero():
            return inv_dom * out
        out = out + term
    raise NonExpandableFactor("geometric expansion did not terminate")


def invert_series(f: TruncatedSeries, max_terms: int = 10000) -> TruncatedSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    ring = f.ring
    c0 = f.constant()
    if not c0:
        raise ZeroDivisionError("series has zero constant term")
    g = ring.one() - f.scale(F(1) / c0)
    for e in g.coeffs:
        if not _progress_ok(ring, e):
            raise NonExpandableFactor("tail monomial %r does not contract" % (e,))
    out = ring.one()
    term = ring.one()
    for _ in range(max_terms):
        term = term * g
        if term.is_zero():
            return out.scale(F(1) / c0)
        out = out + term
    raise NonExpandableFactor("series inversion did not terminate")


# -- structural operations -------------------------------------------------------


def constant_term(f: TruncatedSeries, var_names: Iterable[str]) -> TruncatedSeries:
    """Sub-series with exponent zero on each listed variable."""
    idxs = [f.ring._idx[n] for n in var_names]
    out = {e: c for e, c in f.coeffs.items() if all(e[i] == 0 for i in idxs)}
    return TruncatedSeries(f.ring, out)


def substitute(f: TruncatedSeries, assignment: Mapping[str, TruncatedSeries]) -> TruncatedSeries:
    """Substitute single-monomial series (or zero) for variables.

    A negative original exponent requires the target to be invertible; a
    target introducing negative exponents on non-Laurent variables is
    rejected unless the caller compensated beforehand (the admit check
    rejects the offending monomial outright).
    """
    ring = f.ring
    targets: dict[int, tuple[tuple[int, ...], Fraction] | None] = {}
    for name, t in assignment.items():
        i = ring._idx[name]
        if isinstance(t, (int, Fraction)):
            t = ring.scalar(t)
        if t.is_zero():
            targets[i] = None
            continue
        if len(t.coeffs) != 1:
            raise ValueError("substitution target for %s must be a monomial or zero" % name)
        ((exp, coef),) = t.coeffs.items()
        targets[i] = (exp, coef)
    out = ring.zero()
    for e, c in f.coeffs.items():
        new = [0] * ring.nvars
        coef = c
        dead = False
        for i, k in enumerate(e):
            if not k:
                continue
            if i in targets:
                t = targets[i]
                if t is None:
                    dead = True
                    break
                texp, tcoef = t
                if k < 0:
                    for j, kk in enumerate(texp):
                        if kk != 0 and not ring.table.variables[j].laurent:
                            raise ValueError(
                                "inverse substitution into non-Laurent variable %s"
                                % ring.table.variables[j].name)
                for j, kk in enumerate(texp):
                    new[j] += k * kk
                coef = coef * tcoef ** k
            else:
                new[i] += k
        if dead:
            continue
        newt = tuple(new)
        for j, kk in enumerate(newt):
            if kk < 0 and not ring.table.variables[j].laurent:
                raise ValueError("substitution created negative power of %s"
                                 % ring.table.variables[j].name)
        if ring.admit(newt):
            out = out + ring.monomial(newt, coef)
    return out


def assert_even_powers(f: TruncatedSeries, root_name: str) -> TruncatedSeries:
    """Verify every monomial carries an even half-unit exponent of the root
    symbol (i.e. an integer power of the base parameter)."""
    i = f.ring._idx[root_name]
    for e in f.coeffs:
        if e[i] % 2:
            raise OddRootPower("monomial %r has odd power of %s" % (e, root_name))
    return f


# -- Pochhammer products -----------------------------------------------------------


def poch_finite(z: TruncatedSeries, base: TruncatedSeries, m: int) -> TruncatedSeries:
    """(z; base)_m = prod_{i<m} (1 - z base^i), exact then truncated."""
    ring = z.ring
    out = ring.one()
    zb = z
    for _ in range(m):
        out = out * (ring.one() - zb)
        zb = zb * base
        if zb.is_zero():
            break  # remaining factors are 1 within caps
    return out


def poch_inf(z: TruncatedSeries, base: TruncatedSeries) -> TruncatedSeries:
    """(z; base)_infinity within caps; z must have zero constant term."""
    if z.constant():
        raise ValueError("infinite Pochhammer needs vanishing constant term")
    ring = z.ring
    out = ring.one()
    zb = z
    while not zb.is_zero():
        out = out * (ring.one() - zb)
        zb = zb * base
    return out


def poch2_inf(z: TruncatedSeries, b1: TruncatedSeries, b2: TruncatedSeries) -> TruncatedSeries:
    """(z; b1, b2)_infinity = prod_{i,j>=0} (1 - z b1^i b2^j) within caps."""
    if z.constant():
        raise ValueError("infinite Pochhammer needs vanishing constant term")
    ring = z.ring
    out = ring.one()
    zi = z
    while not zi.is_zero():
        zj = zi
        while not zj.is_zero():
            out = out * (ring.one() - zj)
            zj = zj * b2
        zi = zi * b1
    return out
