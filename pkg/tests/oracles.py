"""Independent cross-checks used by the tests: a Gram-Schmidt construction
of the two-parameter symmetric polynomials on small degrees, evaluated at
exact rational parameter points."""

from fractions import Fraction as F
from itertools import permutations


def monomial_orbit(lam, n_vars):
    pads = tuple(lam) + (0,) * (n_vars - len(lam))
    return set(permutations(pads))


def poly_mul(f, g):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, F(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


def power_sum(k, n_vars):
    out = {}
    for j in range(n_vars):
        e = tuple(k if i == j else 0 for i in range(n_vars))
        out[e] = out.get(e, F(0)) + 1
    return out


def power_prod(lam, n_vars):
    out = {(0,) * n_vars: F(1)}
    for part in lam:
        out = poly_mul(out, power_sum(part, n_vars))
    return out


def partitions_exact(n):
    def gen(rem, cap):
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, cap), 0, -1):
            for rest in gen(rem - first, first):
                yield (first,) + rest
    return list(gen(n, n))


def _zee(lam):
    out = F(1)
    for i in set(lam):
        m = lam.count(i)
        fact = 1
        for k in range(2, m + 1):
            fact *= k
        out *= fact * i ** m
    return out


def _shape_of(exps):
    return tuple(sorted((e for e in exps if e), reverse=True))


def _dominates(lam, mu):
    s1 = s2 = 0
    for i in range(max(len(lam), len(mu))):
        s1 += lam[i] if i < len(lam) else 0
        s2 += mu[i] if i < len(mu) else 0
        if s1 < s2:
            return False
    return True


def gram_schmidt_pq(degree, n_vars, q, t):
    """Degree-homogeneous P-polynomials at exact rational (q, t), keyed by
    shape, each as {exponents: coefficient}: the monomial basis made
    dominance-triangular and orthogonal under the deformed power-sum
    pairing."""
    if n_vars < degree:
        raise ValueError("need at least as many letters as the degree")
    shapes = partitions_exact(degree)

    # coordinates of p_lam in the monomial basis (orbit coefficients)
    coords = {}
    for lam in shapes:
        poly = power_prod(lam, n_vars)
        coords[lam] = {}
        for e, c in poly.items():
            coords[lam][_shape_of(e)] = c  # symmetric: orbit-constant

    # m_mu in the power-sum basis: dense exact solve of coords * x = e_mu
    nsh = len(shapes)
    m_in_p = {}
    for mu in shapes:
        A = [[coords[lam].get(row, F(0)) for lam in shapes] for row in shapes]
        b = [F(1) if row == mu else F(0) for row in shapes]
        for col in range(nsh):
            piv = next(r for r in range(col, nsh) if A[r][col] != 0)
            A[col], A[piv] = A[piv], A[col]
            b[col], b[piv] = b[piv], b[col]
            inv = 1 / A[col][col]
            A[col] = [v * inv for v in A[col]]
            b[col] *= inv
            for r in range(nsh):
                if r != col and A[r][col]:
                    f = A[r][col]
                    A[r] = [v - f * w for v, w in zip(A[r], A[col])]
                    b[r] -= f * b[col]
        m_in_p[mu] = {shapes[i]: b[i] for i in range(nsh) if b[i]}

    def to_p(comb):
        out = {}
        for mu, c in comb.items():
            for lam, v in m_in_p[mu].items():
                out[lam] = out.get(lam, F(0)) + c * v
        return out

    def pair(c1, c2):
        out = F(0)
        for lam in shapes:
            w = _zee(lam)
            for part in lam:
                w *= F(1 - q ** part) / F(1 - t ** part)
            out += c1.get(lam, F(0)) * c2.get(lam, F(0)) * w
        return out

    built = {}
    for lam in sorted(shapes, key=lambda s: (-len(s), s)):
        coeffs = {lam: F(1)}
        for mu in built:
            if mu == lam or not _dominates(lam, mu):
                continue
            num = pair(to_p(coeffs), to_p(built[mu]))
            if num:
                den = pair(to_p(built[mu]), to_p(built[mu]))
                f = num / den
                for k, v in built[mu].items():
                    coeffs[k] = coeffs.get(k, F(0)) - f * v
        built[lam] = {k: v for k, v in coeffs.items() if v}

    result = {}
    for lam, comb in built.items():
        poly = {}
        for mu, c in comb.items():
            for e in monomial_orbit(mu, n_vars):
                poly[e] = poly.get(e, F(0)) + c
        result[lam] = {e: c for e, c in poly.items() if c}
    return result
