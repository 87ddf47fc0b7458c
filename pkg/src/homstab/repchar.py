"""Symmetric group characters and symplectic Schur polynomials.

Symplectic Schur polynomials s_<lam> are the unique family in Lambda with
Exp(e_2(y)) sum_lam s_<lam>(x) s_lam(y) = sum_lam s_lam(x) s_lam(y); they
restrict to the irreducible characters of Sp(2g) on alphabets of the form
{x_1, 1/x_1, ..., x_g, 1/x_g}.  This module expands them in the Schur
basis by inverting that triangular system, evaluates them exactly in any
commutative ring through power sums, and normalizes Sp(2r) weights into
the dominant chamber (the dagger correspondence).

Evaluation is basis-driven (character expansion), never the bialternant
ratio, so values stay exact in rings without division; the bialternant
is kept only as a floating-point cross-check.  All caches are
append-only and safe for concurrent readers; everything else is pure.
"""

from fractions import Fraction
from functools import cache
from typing import NamedTuple, Optional

import numpy

from . import symfunc
from .partitions import (
    as_partition,
    box_partitions,
    character,
    conjugate,
    even_columns,
    partitions,
    zee,
)


class SizeMismatch(ValueError):
    """Character arguments index different symmetric groups."""


class MissingPowerSum(KeyError):
    """Evaluation needs a power sum the caller did not supply."""


class ShapeTooWide(ValueError):
    """First part of the partition exceeds the rank bound."""


class ShapeTooLong(ValueError):
    """Length of the partition exceeds the rank bound."""


class CharValue(NamedTuple):
    """One irreducible character value chi^lam(rho), |lam| = |rho|."""

    lam: tuple
    rho: tuple
    value: int


class SignedWeight(NamedTuple):
    """An Sp(2r) weight with its Weyl normalization.

    sign is 0 exactly when the rho-shifted weight has a zero or repeated
    entry (a chamber wall); dominant is defined only when sign is not 0.
    """

    weight: tuple
    sign: int
    dominant: Optional[tuple]


def sn_character(lam, rho):
    """Returns the symmetric group character chi^lam at cycle type rho."""
    lam = as_partition(lam)
    rho = as_partition(rho)
    if sum(lam) != sum(rho):
        raise SizeMismatch("|lambda| = %d but |rho| = %d" % (sum(lam), sum(rho)))
    return character(lam, rho)


def schur_eval(lam, powersums):
    """Returns s_lam at the alphabet whose power sums are given.

    powersums maps k -> p_k for 1 <= k <= |lam|; values may live in any
    commutative ring containing the rationals' action (integers,
    fractions, quadratic integers, Laurent polynomials).  The result is
    sum_rho chi^lam(rho) p_rho / z_rho.
    """
    lam = as_partition(lam)
    n = sum(lam)
    for k in range(1, n + 1):
        if k not in powersums:
            raise MissingPowerSum("p_%d is required to evaluate at weight %d" % (k, n))
    total = Fraction(0)
    for rho in partitions(n):
        term = Fraction(character(lam, rho), zee(rho))
        for part in rho:
            term = term * powersums[part]
        total = total + term
    return total


@cache
def _schur_product(mu, beta):
    """Returns s_mu * s_beta as a dict lam -> integer coefficient."""
    n = sum(mu) + sum(beta)
    prod = symfunc.s(mu, n) * symfunc.s(beta, n)
    return {lam: int(c) for lam, c in prod.in_basis(symfunc.SCHUR).terms.items()}


@cache
def _sympl_in_schur(lam):
    """Returns s_<lam> in the Schur basis as a dict nu -> integer coefficient.

    Inverts s_lam = sum_{mu, beta' even} c^lam_{mu beta} s_<mu> downward
    in weight; the correction at weight m only involves beta of weight
    |lam| - m, so the recursion terminates.
    """
    n = sum(lam)
    out = {lam: 1}
    for m in range(n - 2, -1, -2):
        for mu in partitions(m):
            c = 0
            for beta in partitions(n - m):
                if even_columns(beta):
                    c += _schur_product(mu, beta).get(lam, 0)
            if c:
                for nu, a in _sympl_in_schur(mu).items():
                    v = out.get(nu, 0) - c * a
                    if v:
                        out[nu] = v
                    else:
                        out.pop(nu, None)
    return out


def symplectic_to_schur(lam, max_weight):
    """Returns s_<lam> as a SymFunc in the Schur basis."""
    lam = as_partition(lam)
    if sum(lam) > max_weight:
        raise ValueError("max_weight %d is below |lambda| = %d" % (max_weight, sum(lam)))
    return symfunc.sym(symfunc.SCHUR, _sympl_in_schur(lam), max_weight)


def symplectic_eval(lam, powersums):
    """Returns the symplectic character value s_<lam>(x_1^+-, ..., x_g^+-).

    powersums maps k -> p_k of the 2g-letter alphabet {x_i, 1/x_i}; the
    evaluation goes through the Schur expansion so it is total and exact
    even when l(lam) > g (where the value is no longer a character).
    """
    lam = as_partition(lam)
    n = sum(lam)
    for k in range(1, n + 1):
        if k not in powersums:
            raise MissingPowerSum("p_%d is required to evaluate at weight %d" % (k, n))
    total = Fraction(0)
    for nu, b in _sympl_in_schur(lam).items():
        total = total + b * schur_eval(nu, powersums)
    return total


def lambda_dagger(lam, g, r):
    """Returns the dagger weight (g - lam'_r, ..., g - lam'_1), normalized.

    Requires lam_1 <= r.  When l(lam) <= g the weight is already a
    dominant Sp(2r) weight and the sign is +1.  Otherwise the weight is
    reflected into the dominant chamber through the rho-shift: sort the
    absolute values of weight + (r, ..., 1), with sign the product of
    the flips and the sorting permutation's sign, or 0 on a wall.
    """
    lam = as_partition(lam)
    g = int(g)
    r = int(r)
    if lam and lam[0] > r:
        raise ShapeTooWide("lambda_1 = %d exceeds r = %d" % (lam[0], r))
    conj = conjugate(lam)
    cpad = tuple(conj[i] if i < len(conj) else 0 for i in range(r))
    weight = tuple(g - cpad[r - 1 - i] for i in range(r))
    shifted = [weight[i] + r - i for i in range(r)]
    if any(v == 0 for v in shifted) or len({abs(v) for v in shifted}) < r:
        return SignedWeight(weight, 0, None)
    sign = 1
    for v in shifted:
        if v < 0:
            sign = -sign
    mag = [abs(v) for v in shifted]
    for i in range(r):
        for j in range(i + 1, r):
            if mag[i] < mag[j]:
                sign = -sign
    mag.sort(reverse=True)
    dominant = as_partition(mag[i] - (r - i) for i in range(r))
    return SignedWeight(weight, sign, dominant)


def weyl_dim_sp(lam, r):
    """Returns the dimension of the Sp(2r) irreducible with highest weight lam.

    Weyl dimension formula in numerator/denominator form, with
    l_i = lam_i + r - i + 1: the product of l_i and of l_i^2 - l_j^2
    over i < j, divided by the same product at lam = 0.
    """
    lam = as_partition(lam)
    if len(lam) > r:
        raise ShapeTooLong("l(lambda) = %d exceeds r = %d" % (len(lam), r))
    pad = tuple(lam[i] if i < len(lam) else 0 for i in range(r))
    ell = [pad[i] + r - i for i in range(r)]
    ell0 = [r - i for i in range(r)]
    num = 1
    den = 1
    for i in range(r):
        num *= ell[i]
        den *= ell0[i]
        for j in range(i + 1, r):
            num *= ell[i] ** 2 - ell[j] ** 2
            den *= ell0[i] ** 2 - ell0[j] ** 2
    dim, rem = divmod(num, den)
    if rem:
        raise AssertionError("Weyl dimension is not integral at %r" % (lam,))
    return dim


def bialternant(lam, xs):
    """Returns the Weyl character formula ratio at numeric points xs.

    Floating-point cross-check of symplectic_eval: the ratio of
    det(x_i^{e_j} - x_i^{-e_j}) with e_j = lam_j + g - j + 1 over the
    same determinant at lam = 0.  xs must keep the denominator away
    from zero (distinct moduli, none equal to +-1).
    """
    lam = as_partition(lam)
    g = len(xs)
    if len(lam) > g:
        raise ShapeTooLong("l(lambda) = %d exceeds g = %d" % (len(lam), g))
    pad = tuple(lam[j] if j < len(lam) else 0 for j in range(g))
    num = numpy.array(
        [[x ** (pad[j] + g - j) - x ** -(pad[j] + g - j) for j in range(g)] for x in xs]
    )
    den = numpy.array([[x ** (g - j) - x ** -(g - j) for j in range(g)] for x in xs])
    return numpy.linalg.det(num) / numpy.linalg.det(den)


class _Laurent:
    """Multivariate Laurent polynomial with Fraction coefficients.

    terms maps exponent tuples of length nvars to nonzero coefficients.
    Only the exact arithmetic the dual-pair checks need lives here.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms):
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars, index, power):
        exp = [0] * nvars
        exp[index] = power
        return cls(nvars, {tuple(exp): Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _Laurent.constant(self.nvars, other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return _Laurent(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return _Laurent(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, _Laurent) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return _Laurent(self.nvars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(exp, 0) + c1 * c2
                if v:
                    out[exp] = v
                else:
                    out.pop(exp, None)
        return _Laurent(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _Laurent.constant(self.nvars, other)
        return (
            isinstance(other, _Laurent)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __repr__(self):
        return "_Laurent(%d, %d terms)" % (self.nvars, len(self.terms))


def _plus_minus_powersums(nvars, indices, max_k):
    """Returns k -> p_k of the alphabet {v_i, 1/v_i} as _Laurent values."""
    out = {}
    for k in range(1, max_k + 1):
        acc = _Laurent(nvars, {})
        for i in indices:
            acc = acc + _Laurent.variable(nvars, i, k) + _Laurent.variable(nvars, i, -k)
        out[k] = acc
    return out


def jimbo_miwa_check(g, r):
    """Checks the symplectic dual-pair character identity for (g, r).

    Returns True iff prod_{i,j} (x_i + 1/x_i + t_j + 1/t_j) equals
    sum over lam inside the g x r box of s_<lam>(x^+-) s_<lam†>(t^+-)
    as an exact Laurent polynomial in x_1..x_g, t_1..t_r.
    """
    g = int(g)
    r = int(r)
    nvars = g + r
    lhs = _Laurent.constant(nvars, 1)
    for i in range(g):
        for j in range(r):
            factor = (
                _Laurent.variable(nvars, i, 1)
                + _Laurent.variable(nvars, i, -1)
                + _Laurent.variable(nvars, g + j, 1)
                + _Laurent.variable(nvars, g + j, -1)
            )
            lhs = lhs * factor
    px = _plus_minus_powersums(nvars, range(g), g * r)
    pt = _plus_minus_powersums(nvars, range(g, g + r), g * r)
    rhs = _Laurent.constant(nvars, 0)
    for lam in box_partitions(g, r):
        dag = lambda_dagger(lam, g, r)
        rhs = rhs + symplectic_eval(lam, px) * symplectic_eval(dag.dominant, pt)
    return lhs == rhs
