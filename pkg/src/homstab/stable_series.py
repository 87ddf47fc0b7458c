"""Stable twisted homology generating series and their reports.

Five families of graded symmetric-function series, all values in a
truncated Lambda((z)) window:

  BraidSchur            Exp(z^-1 Log(z + sum_{j>=0} h_{2j} z^j) - 1)
  BraidSymplectic       same, with an extra -h_2 inside Exp
  HyperellipticClosed   (z + sum_{j>=0} h_{2j} z^j)/(1-z^2) times BraidSymplectic
  MCGOpen               Exp(-e_2 + z^-2(Exp(z^2 - z h_1) - 1 - z^2 + z h_1))
  MCGClosed             same, with an extra z h_1 inside the outer Exp

The coefficient of z^k s_mu is (-1)^k times a stable Betti number.  For
the braid and closed hyperelliptic families the homology coefficient
partition is the conjugate mu'; for the mapping class group families it
is mu itself.  betti_table resolves both conventions and the sign; raw
series always store the slots of the defining formulas above.

The z^-1 and z^-2 multiplications act on series all of whose terms
provably clear the shift; a term that would land below the window floor
raises AssertionError, marking an implementation bug, not a data error.
"""

from fractions import Fraction
from functools import cache
from typing import NamedTuple

from . import symfunc
from .partitions import as_partition, conjugate, divisors, mobius, partitions, zee
from .symfunc import Window

BRAID_SCHUR = "BraidSchur"
BRAID_SYMPLECTIC = "BraidSymplectic"
HYPERELLIPTIC_CLOSED = "HyperellipticClosed"
MCG_OPEN = "MCGOpen"
MCG_CLOSED = "MCGClosed"
FAMILIES = (BRAID_SCHUR, BRAID_SYMPLECTIC, HYPERELLIPTIC_CLOSED,
            MCG_OPEN, MCG_CLOSED)

SCHUR = "schur"
SYMPLECTIC = "symplectic"

OPEN = "open"
CLOSED = "closed"


class WindowTooSmall(ValueError):
    """Window cannot hold the smallest nontrivial coefficient system."""


class NegativeCoefficient(ValueError):
    """A sign-resolved Betti entry came out negative (implementation bug)."""


class InsufficientData(ValueError):
    """Too few series coefficients for the requested fit certification."""


class _InconclusiveType:
    """Sentinel: no rational function matched within the available data."""

    __slots__ = ()

    def __repr__(self):
        return "Inconclusive"

    def __bool__(self):
        return False


Inconclusive = _InconclusiveType()


class SeriesRequest(NamedTuple):
    """A family tag with its truncation parameters."""

    family: str
    max_arity: int
    z_max: int


class BettiTable(NamedTuple):
    """Sign-resolved stable Betti numbers: (partition, degree) -> dim."""

    entries: dict
    family: str
    window: Window


class Violation(NamedTuple):
    """A series monomial z^k s_mu breaking vanishing constraints."""

    z_exp: int
    partition: tuple
    rules: tuple


class RationalFit(NamedTuple):
    """P(z)/Q(z) with Q a product of cyclotomic factors, Q(0) = 1.

    num and den are ascending coefficient tuples; factors lists the
    cyclotomic indices of Q with multiplicity, where index 1 denotes the
    normalized factor 1 - z.
    """

    num: tuple
    den: tuple
    factors: tuple

    def __str__(self):
        num = _poly_str(self.num)
        if self.den == (1,):
            return num
        return "(%s)/(%s)" % (num, _poly_str(self.den))


def _poly_str(coeffs):
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mag = abs(Fraction(c))
        if k == 0:
            body = str(mag)
        else:
            zpow = "z" if k == 1 else "z^%d" % k
            body = zpow if mag == 1 else "%s*%s" % (mag, zpow)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def _out_window(window):
    window = symfunc.Window(*window)
    if window.max_arity < 2:
        raise WindowTooSmall("max_arity %d < 2" % window.max_arity)
    return Window(max(window.z_min, 0), window.z_max, window.max_arity)


def _geom(step, sign, window):
    """Returns 1/(1 - sign*z^step) = sum_m sign^m z^(m*step), truncated."""
    terms = {}
    m = 0
    while m * step <= window.z_max:
        terms[(m * step, ())] = Fraction(sign ** m)
        m += 1
    return symfunc.graded(symfunc.POWER, terms, window)


def _inner_sum(window):
    """Returns z + sum_{j>=0} z^j h_{2j} on the window."""
    acc = symfunc.z_pow(1, window) + symfunc.graded_const(1, window)
    j = 1
    while 2 * j <= window.max_arity and j <= window.z_max:
        acc = acc + symfunc.embed(symfunc.h(2 * j), window, z_exp=j)
        j += 1
    return acc


def _z_shift(g, delta, window):
    """Returns g * z^delta re-windowed; every term must clear the floor."""
    out = {}
    for (k, mu), c in g.terms.items():
        k2 = k + delta
        if k2 < window.z_min:
            raise AssertionError(
                "z^%d term does not clear a shift by %d" % (k, delta))
        if k2 <= window.z_max and sum(mu) <= window.max_arity:
            out[(k2, mu)] = c
    return symfunc.graded(g.basis, out, window)


def braid_series(basis, window):
    """Returns the one-boundary stable series in the requested basis.

    Schur basis: coefficients pair with Schur-functor twists; the
    symplectic variant inserts -h_2 inside Exp so coefficients pair with
    irreducible symplectic twists instead.
    """
    if basis not in (SCHUR, SYMPLECTIC):
        raise ValueError("basis must be %r or %r" % (SCHUR, SYMPLECTIC))
    out_w = _out_window(window)
    work = Window(0, out_w.z_max + 1, out_w.max_arity)
    lg = symfunc.pleth_log(_inner_sum(work))
    arg = _z_shift(lg, -1, out_w) - 1
    if basis == SYMPLECTIC:
        arg = arg - symfunc.h(2)
    return symfunc.pleth_exp(arg)


def closed_series(window):
    """Returns the closed hyperelliptic stable series."""
    out_w = _out_window(window)
    sympl = braid_series(SYMPLECTIC, out_w)
    prefactor = _inner_sum(out_w) * _geom(2, 1, out_w)
    return prefactor * sympl


def mcg_series(variant, window):
    """Returns the stable mapping class group series, open or closed."""
    if variant not in (OPEN, CLOSED):
        raise ValueError("variant must be %r or %r" % (OPEN, CLOSED))
    out_w = _out_window(window)
    work = Window(0, out_w.z_max + 2, out_w.max_arity)
    zh1 = symfunc.embed(symfunc.h(1), work, z_exp=1)
    inner = symfunc.pleth_exp(symfunc.z_pow(2, work) - zh1)
    core = inner - 1 - symfunc.z_pow(2, work) + zh1
    arg = _z_shift(core, -2, out_w) - symfunc.e(2)
    if variant == CLOSED:
        arg = arg + symfunc.embed(symfunc.h(1), out_w, z_exp=1)
    return symfunc.pleth_exp(arg)


def _adams_h(n, weight, window, z_exp):
    """Returns z^z_exp psi_n(h_weight) directly in the power-sum basis."""
    terms = {}
    for rho in partitions(weight):
        terms[(z_exp, tuple(n * q for q in rho))] = Fraction(1, zee(rho))
    return symfunc.graded(symfunc.POWER, terms, window)


def _laurent_mul(a, b):
    out = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = da + db
            v = out.get(d, 0) + ca * cb
            if v:
                out[d] = v
            else:
                out.pop(d, None)
    return out


def _laurent_times_graded(laur, g, window):
    """Multiplies a pure-z Laurent polynomial into a graded element."""
    out = {}
    for d, cd in laur.items():
        for (k, mu), c in g.terms.items():
            k2 = k + d
            if k2 < window.z_min:
                raise AssertionError(
                    "z^%d term does not clear a shift by %d" % (k, d))
            if k2 > window.z_max or sum(mu) > window.max_arity:
                continue
            key = (k2, mu)
            v = out.get(key, 0) + cd * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return symfunc.graded(g.basis, out, window)


def product_form_series(window):
    """Returns the braid series as the necklace-exponent Euler product.

    (1-z) prod_{n>=1} (1 + (1+z^n)^-1 sum_{k>0} z^{nk} psi_n(h_{2k}))
    raised to i_n(z^-1), the necklace polynomial at z^-1.  Each factor
    is expanded by the binomial series with the Laurent-polynomial
    exponent; only n <= max_arity/2 contributes.
    """
    out_w = _out_window(window)
    arity = out_w.max_arity
    result = symfunc.graded_const(1, out_w) - symfunc.z_pow(1, out_w)
    for n in range(1, arity // 2 + 1):
        m_max = arity // (2 * n)
        work = Window(0, out_w.z_max + n * m_max, arity)
        usum = symfunc.graded_zero(work)
        for k in range(1, arity // (2 * n) + 1):
            usum = usum + _adams_h(n, 2 * k, work, n * k)
        u = usum * _geom(n, -1, work)
        exponent = {-d: Fraction(mobius(n // d), n)
                    for d in divisors(n) if mobius(n // d)}
        factor = symfunc.graded_const(1, out_w)
        upow = symfunc.graded_const(1, work)
        binom = {0: Fraction(1)}
        for m in range(1, m_max + 1):
            upow = upow * u
            shifted = dict(exponent)
            shifted[0] = shifted.get(0, Fraction(0)) - (m - 1)
            binom = _laurent_mul(binom, shifted)
            binom = {d: c / m for d, c in binom.items()}
            factor = factor + _laurent_times_graded(binom, upow, out_w)
        result = result * factor
    return result


def family_series(family, window):
    """Returns the generating series of the named family."""
    if family == BRAID_SCHUR:
        return braid_series(SCHUR, window)
    if family == BRAID_SYMPLECTIC:
        return braid_series(SYMPLECTIC, window)
    if family == HYPERELLIPTIC_CLOSED:
        return closed_series(window)
    if family == MCG_OPEN:
        return mcg_series(OPEN, window)
    if family == MCG_CLOSED:
        return mcg_series(CLOSED, window)
    raise ValueError("unknown family %r" % (family,))


def betti_table(family, lams, k_max, max_arity=None):
    """Returns sign-resolved stable Betti numbers for the given twists.

    Looks up the z^k slot of s_{lam'} (braid and closed hyperelliptic
    families) or s_lam (mapping class group families) and multiplies by
    (-1)^k; entries must come out as nonnegative integers.  max_arity
    widens the computation window beyond the default max(|lam|, 2).
    """
    lams = [as_partition(lam) for lam in lams]
    transpose = family in (BRAID_SCHUR, BRAID_SYMPLECTIC, HYPERELLIPTIC_CLOSED)
    arity = max([sum(lam) for lam in lams] + [2])
    if max_arity is not None:
        arity = max(arity, int(max_arity))
    w = Window(0, int(k_max), arity)
    series = family_series(family, w).in_basis(symfunc.SCHUR)
    entries = {}
    for lam in lams:
        slot = conjugate(lam) if transpose else lam
        for k in range(k_max + 1):
            c = series.coefficient(k, slot)
            val = c if k % 2 == 0 else -c
            if val < 0:
                raise NegativeCoefficient(
                    "dim H_%d at %r resolves to %s" % (k, lam, val))
            if val.denominator != 1:
                raise NegativeCoefficient(
                    "dim H_%d at %r is not an integer: %s" % (k, lam, val))
            entries[(lam, k)] = int(val)
    return BettiTable(entries, family, w)


_RULES = ("4k >= |mu|", "2k >= mu_1", "2*len(mu) <= |mu|", "|mu| even")


def vanishing_report(series):
    """Returns the monomials of the series that break vanishing bounds.

    Every nonzero z^k s_mu must satisfy 4k >= |mu|, 2k >= mu_1,
    2*len(mu) <= |mu|, and |mu| even; the returned list of violations
    is empty exactly when the series passes.
    """
    schur = series.in_basis(symfunc.SCHUR)
    out = []
    for (k, mu) in sorted(schur.terms, key=lambda t: (t[0], sum(t[1]), t[1])):
        weight = sum(mu)
        rules = []
        if 4 * k < weight:
            rules.append(_RULES[0])
        if mu and 2 * k < mu[0]:
            rules.append(_RULES[1])
        if 2 * len(mu) > weight:
            rules.append(_RULES[2])
        if weight % 2:
            rules.append(_RULES[3])
        if rules:
            out.append(Violation(k, mu, tuple(rules)))
    return out


@cache
def _phi(d):
    return sum(mobius(d // e) * e for e in divisors(d))


def _polydiv_exact(num, den):
    # ascending integer coefficients, den monic at its top degree
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd]
        out[i] = c
        if c:
            for j, b in enumerate(den):
                num[i + j] -= c * b
    if any(num[:dd]):
        raise AssertionError("inexact cyclotomic division")
    return tuple(out)


@cache
def _cyclotomic(d):
    num = tuple([-1] + [0] * (d - 1) + [1])
    for e in divisors(d):
        if e < d:
            num = _polydiv_exact(num, _cyclotomic(e))
    return num


def _factor_poly(d):
    # normalized so the constant coefficient is 1
    return (1, -1) if d == 1 else _cyclotomic(d)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


@cache
def _cyclo_multisets(qdeg):
    """Returns all multisets of cyclotomic indices of total degree qdeg."""
    allowed = [d for d in range(1, 2 * qdeg * qdeg + 2) if _phi(d) <= qdeg]

    def build(remaining, start):
        if remaining == 0:
            yield ()
            return
        for d in allowed:
            if d < start or _phi(d) > remaining:
                continue
            for rest in build(remaining - _phi(d), d):
                yield (d,) + rest

    return tuple(sorted(build(qdeg, 1)))


def fit_rational(coefficients, guard):
    """Fits the z-series to a minimal P/Q with cyclotomic denominator.

    Searches candidates by increasing max(deg P, deg Q), ties broken by
    smaller deg Q; a candidate of size s must reproduce every supplied
    coefficient and is certified only when 2s + guard coefficients are
    available.  Returns a RationalFit, or Inconclusive when nothing
    certifiable matches.
    """
    coeffs = [Fraction(c) for c in coefficients]
    guard = int(guard)
    if guard < 0:
        raise ValueError("guard must be >= 0")
    n = len(coeffs)
    if n < guard + 2:
        raise InsufficientData(
            "need at least %d coefficients, got %d" % (guard + 2, n))
    for size in range((n - guard) // 2 + 1):
        for qdeg in range(size + 1):
            for factors in _cyclo_multisets(qdeg):
                den = (1,)
                for d in factors:
                    den = _poly_mul(den, _factor_poly(d))
                prod = [sum(den[j] * coeffs[i - j]
                            for j in range(min(i, qdeg) + 1))
                        for i in range(n)]
                if any(prod[size + 1:]):
                    continue
                num = prod[:size + 1]
                while num and not num[-1]:
                    num.pop()
                return RationalFit(tuple(num), den, factors)
    return Inconclusive
