"""Independent reference implementations used to validate the package.

Everything here is deliberately naive: tableau enumeration for Schur
polynomials, the Frobenius coefficient-extraction formula for symmetric
group characters, and literal point counting in small extension fields.
None of it shares code with the package under test.
"""

from fractions import Fraction
from itertools import permutations, product


# ---------------------------------------------------------------------------
# Schur polynomials via semistandard Young tableaux.


def ssyt_rows(lam, nvars, prev=None, row=0):
    """Yields SSYT of shape lam with entries in 1..nvars as row tuples."""
    if row == len(lam):
        yield ()
        return
    width = lam[row]
    # Entries increase weakly along rows, strictly down columns.
    def fill(i, lo):
        if i == width:
            yield ()
            return
        floor = lo
        if prev is not None and i < len(prev):
            floor = max(floor, prev[i] + 1)
        for v in range(floor, nvars + 1):
            for rest in fill(i + 1, v):
                yield (v,) + rest
    for this_row in fill(0, 1):
        for below in ssyt_rows(lam, nvars, this_row, row + 1):
            yield (this_row,) + below


def ssyt_schur_poly(lam, nvars):
    """Returns s_lam(x_1..x_nvars) as a dict exponent tuple -> integer."""
    poly = {}
    if not lam:
        return {(0,) * nvars: 1}
    if len(lam) > nvars:
        return {}
    for tab in ssyt_rows(tuple(lam), nvars):
        exp = [0] * nvars
        for r in tab:
            for v in r:
                exp[v - 1] += 1
        key = tuple(exp)
        poly[key] = poly.get(key, 0) + 1
    return poly


def eval_poly(poly, xs):
    """Evaluates a monomial dict at the alphabet xs."""
    total = Fraction(0)
    for exp, c in poly.items():
        term = Fraction(c)
        for x, e in zip(xs, exp):
            term *= Fraction(x) ** e
        total += term
    return total


def ssyt_schur(lam, xs):
    """Returns s_lam evaluated at the explicit alphabet xs."""
    return eval_poly(ssyt_schur_poly(lam, len(xs)), xs)


def poly_mul(a, b):
    """Multiplies two monomial dicts over the same variable count."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(key, 0) + ca * cb
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return out


def schur_decompose(poly, nvars):
    """Writes a symmetric monomial dict as {partition: coefficient}."""
    work = dict(poly)
    out = {}
    while work:
        exp = max(work)
        c = work[exp]
        # Symmetry forces the lex-largest exponent to be weakly decreasing.
        assert list(exp) == sorted(exp, reverse=True)
        lam = tuple(e for e in exp if e)
        out[lam] = c
        base = ssyt_schur_poly(lam, nvars)
        for e2, c2 in base.items():
            nc = work.get(e2, 0) - c * c2
            if nc:
                work[e2] = nc
            else:
                work.pop(e2, None)
    return out


# ---------------------------------------------------------------------------
# Symmetric group characters via the Frobenius formula.


def _vandermonde(n):
    # a_delta = sum over permutations of sgn * x^{sigma(delta)}.
    delta = tuple(range(n - 1, -1, -1))
    poly = {}
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        # Count inversions for the permutation sign.
        inv = sum(
            1
            for i in range(n)
            for j in range(i + 1, n)
            if seen[i] > seen[j]
        )
        sign = -1 if inv % 2 else 1
        exp = tuple(delta[p] for p in perm)
        poly[exp] = poly.get(exp, 0) + sign
    return poly


def _power_sum(k, n):
    poly = {}
    for i in range(n):
        exp = [0] * n
        exp[i] = k
        poly[tuple(exp)] = 1
    return poly


def frobenius_character(lam, rho):
    """Returns chi^lam(rho): coefficient of x^(lam+delta) in a_delta * p_rho."""
    n = sum(lam)
    assert sum(rho) == n
    poly = _vandermonde(n)
    for k in rho:
        poly = poly_mul(poly, _power_sum(k, n))
    target = tuple(
        (lam[i] if i < len(lam) else 0) + (n - 1 - i) for i in range(n)
    )
    return poly.get(target, 0)


# ---------------------------------------------------------------------------
# Literal point counting over small prime-power fields.


def legendre(a, p):
    """Quadratic character of F_p at a, as -1, 0, or 1."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def _find_irreducible(p, k):
    # Lexicographically first monic irreducible of degree k <= 3 over F_p:
    # for these degrees irreducibility is exactly having no roots (k > 1).
    if k == 1:
        return (0, 1)
    for tail in product(range(p), repeat=k):
        coeffs = tail + (1,)
        if all(_eval_mod(coeffs, x, p) % p for x in range(p)):
            if k == 2 or k == 3:
                return coeffs
    raise AssertionError("no irreducible found")


def _eval_mod(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


class SmallField:
    """F_{p^k} for tiny p, k: elements are coefficient tuples mod p."""

    def __init__(self, p, k):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = _find_irreducible(p, k)

    def elements(self):
        return (tuple(t) for t in product(range(self.p), repeat=self.k))

    def scalar(self, c):
        return (c % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        p, k = self.p, self.k
        raw = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    raw[i + j] = (raw[i + j] + x * y) % p
        # Reduce by the monic modulus.
        for i in range(2 * k - 2, k - 1, -1):
            c = raw[i]
            if c:
                raw[i] = 0
                for j in range(k):
                    raw[i - k + j] = (raw[i - k + j] - c * self.modulus[j]) % p
        return tuple(raw[:k])

    def pow(self, a, e):
        out = self.scalar(1)
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def chi(self, a):
        """Quadratic character, -1/0/1."""
        if a == self.scalar(0):
            return 0
        r = self.pow(a, (self.q - 1) // 2)
        return 1 if r == self.scalar(1) else -1

    def eval_poly(self, coeffs, x):
        """Evaluates a polynomial with F_p coefficients at x in this field."""
        acc = self.scalar(0)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.scalar(c))
        return acc


def count_points_naive(p, dcoeffs, k=1):
    """Counts points of y^2 = d(x) over F_{p^k}, smooth model of monic d."""
    field = SmallField(p, k)
    deg = len(dcoeffs) - 1
    affine = sum(1 + field.chi(field.eval_poly(dcoeffs, x)) for x in field.elements())
    return affine + (1 if deg % 2 else 2)


def naive_jacobi_linear(dcoeffs, a, p):
    """(d / (x - a)) over F_p via the defining residue evaluation."""
    return legendre(_eval_mod(dcoeffs, a % p, p), p)


def naive_jacobi_irreducible(dcoeffs, mcoeffs, p):
    """(d / m) for irreducible m: chi of d at a root of m in F_{p^deg m}."""
    k = len(mcoeffs) - 1
    field = SmallField(p, k)
    for x in field.elements():
        if field.eval_poly(mcoeffs, x) == field.scalar(0):
            return field.chi(field.eval_poly(dcoeffs, x))
    raise AssertionError("modulus has no root in its splitting degree")
