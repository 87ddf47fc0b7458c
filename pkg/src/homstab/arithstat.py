"""Trace statistics of quadratic character families over F_q[x].

Brute-force trace generating functions for hyperelliptic families,
their stable limits in the symmetric function ring, moments of central
L-values against symplectic characters, and the explicit error bounds
tying brute force to the limits.  Everything is exact; floats never
enter a computation here.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import os

from .ffcurves import (FqContext, _factor_tables, _monic_polys,
                       batch_charsums, batch_curve_data, read_cache, write_cache)
from .partitions import as_partition, box_partitions, conjugate, necklace, partitions
from .qadjsqrt import QAdjSqrt
from .repchar import lambda_dagger, symplectic_eval, weyl_dim_sp
from .symfunc import POWER, SCHUR, adams, h, multiply, pleth_exp, s, sym, sym_const

__all__ = [
    "MomentReport",
    "Q1Prediction",
    "TraceReport",
    "error_bounds",
    "mainterm_oracle",
    "moment_sum",
    "q1_prediction",
    "stable_trace_T",
    "stable_trace_genfunc",
    "stable_trace_symplectic",
    "tr_lambda_g",
    "trace_report",
    "zn_coefficients",
]


# ---------------------------------------------------------------------------
# Shared helpers.


def _odd_prime_power(q):
    # Returns (p, e) with q = p^e, p an odd prime.
    if not isinstance(q, int) or q < 3 or q % 2 == 0:
        raise ValueError("q must be an odd prime power >= 3")
    p = 3
    while q % p:
        p += 2
        if p * p > q:
            p = q
    e = 0
    rest = q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError("q must be an odd prime power >= 3")
    return p, e


def _genus(n):
    # Genus of y^2 = d(x) with d squarefree of degree n.
    return (n - 1) // 2 if n % 2 else (n - 2) // 2


def _chunk_spans(count, workers):
    if workers < 1:
        raise ValueError("workers must be >= 1")
    edges = [count * i // workers for i in range(workers + 1)]
    return [(lo, hi) for lo, hi in zip(edges, edges[1:]) if lo < hi]


def _chunk_results(count, chunk_fn, workers):
    """Evaluate chunk_fn(lo, hi) over contiguous spans of range(count).

    The spans depend only on (count, workers) and the results come back
    in span order, so any merge by the caller is deterministic no
    matter how the pool schedules the work.
    """
    spans = _chunk_spans(count, workers)
    if len(spans) <= 1:
        return [chunk_fn(lo, hi) for lo, hi in spans]
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        return list(pool.map(lambda span: chunk_fn(*span), spans))


def _decimal_upper(base, num, den, digits=9):
    """Smallest 10^-digits grid rational beta >= base**(num/den).

    den > 0; num may be negative.  The certificate
    beta**den >= base**num is checked exactly.
    """
    scale = 10 ** digits
    beta = Fraction(int(float(base) ** (num / den) * scale), scale)
    step = Fraction(1, scale)
    target = Fraction(base) ** num
    while beta ** den < target:
        beta += step
    return beta


# ---------------------------------------------------------------------------
# Stable trace generating function and its coefficients.


@lru_cache(maxsize=None)
def _genfunc_schur(q, max_arity):
    _odd_prime_power(q)
    if max_arity < 0:
        raise ValueError("max_arity must be >= 0")
    out = sym_const(Fraction(q - 1, q), max_arity)
    for n in range(1, max_arity // 2 + 1):
        inner = None
        for k in range(1, max_arity // (2 * n) + 1):
            term = adams(n, h(2 * k, max_arity=max_arity))
            inner = term if inner is None else inner + term
        factor = sym_const(Fraction(1), max_arity) + inner * Fraction(q ** n, q ** n + 1)
        # factor^{i_n} by binary powering; the exponent is the necklace
        # count, a positive integer, so the power is a finite product.
        power = sym_const(Fraction(1), max_arity)
        acc, exponent = factor, necklace(n, q)
        while exponent:
            if exponent & 1:
                power = multiply(power, acc)
            exponent >>= 1
            if exponent:
                acc = multiply(acc, acc)
        out = multiply(out, power)
    return out.in_basis(SCHUR)


def stable_trace_genfunc(q, max_arity):
    """Limit trace generating function as an exact symmetric function.

    Computed as (1 - 1/q) prod_{n >= 1} (1 + (1 + q^-n)^-1 sum_{k > 0}
    psi_n(h_{2k}))^{i_n(q)} truncated to max_arity, where i_n(q) is the
    degree-n necklace count.  Only n <= max_arity/2 contribute.  The
    arity-0 part is 1 - 1/q.
    """
    return _genfunc_schur(q, max_arity)


@lru_cache(maxsize=None)
def _symplectic_schur(q, max_arity):
    # Unitarize (power-basis slot mu scaled by q^{-|mu|/2}; all weights
    # are even) and multiply by Exp(-h_2), turning Schur slots into
    # symplectic-character slots.
    base = _genfunc_schur(q, max_arity).in_basis(POWER)
    terms = {}
    for mu, c in base.terms.items():
        weight = sum(mu)
        if weight % 2:
            raise ArithmeticError("odd-weight slot in the trace generating function")
        terms[mu] = c / Fraction(q) ** (weight // 2)
    unitarized = sym(POWER, terms, base.max_arity)
    corrected = multiply(unitarized, pleth_exp(-h(2, max_arity=max_arity)))
    return corrected.in_basis(SCHUR)


def stable_trace_T(lam, q, max_arity=None):
    """Unitarized stable trace: q^{-|lam|/2} times the s_{lam'} slot
    of stable_trace_genfunc.  Zero for odd weight."""
    lam = as_partition(lam)
    weight = sum(lam)
    if weight % 2:
        return Fraction(0)
    arity = weight if max_arity is None else max_arity
    if arity < weight:
        raise ValueError("max_arity must reach |lam|")
    table = _genfunc_schur(q, arity)
    return table.coefficient(conjugate(lam)) / Fraction(q) ** (weight // 2)


def stable_trace_symplectic(lam, q, max_arity=None):
    """Stable limit of tr_lambda_g: the s_{lam'} slot of the unitarized
    generating function times Exp(-h_2).  Zero for odd weight."""
    lam = as_partition(lam)
    weight = sum(lam)
    if weight % 2:
        return Fraction(0)
    arity = weight if max_arity is None else max_arity
    if arity < weight:
        raise ValueError("max_arity must reach |lam|")
    return _symplectic_schur(q, arity).coefficient(conjugate(lam))


# ---------------------------------------------------------------------------
# Brute-force trace coefficients.


def _power_expansions(lams):
    # lam -> {mu: coefficient} with s_lam = sum_mu coeff * p_mu.
    out = {}
    for lam in lams:
        if not lam:
            out[lam] = {(): Fraction(1)}
        else:
            out[lam] = dict(s(lam, max_arity=sum(lam)).in_basis(POWER).terms)
    return out


def _family_curves(ctx, n, k_max, cache_path):
    # Curve data for the whole degree-n family, optionally through the
    # binary cache: read when the file exists, write after computing.
    if cache_path is None:
        return batch_curve_data(ctx, n, k_max=k_max)
    if os.path.exists(cache_path):
        curves = read_cache(cache_path, ctx, k_max=k_max)
        if curves and curves[0].d.degree != n:
            raise ValueError("cache holds degree %d, expected %d"
                             % (curves[0].d.degree, n))
        return curves
    curves = batch_curve_data(ctx, n, k_max=k_max)
    write_cache(cache_path, ctx, n, curves)
    return curves


def zn_coefficients(ctx, n, max_weight, workers=1, cache_path=None):
    """Brute-force trace coefficients of the degree-n family.

    Returns {lam: q^-n sum_d schur_eval(lam, theta_powersums(d))} over
    all partitions lam of weight <= max_weight, d running through the
    monic squarefree polynomials of degree n.  The lam slot is the
    coefficient of s_{lam'} in the family's trace generating function.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    if max_weight > 2 * _genus(n):
        raise ValueError("max_weight cannot exceed twice the genus")
    lams = [lam for w in range(max_weight + 1) for lam in partitions(w)]
    expansions = _power_expansions(lams)
    mus = sorted({mu for exp in expansions.values() for mu in exp})
    curves = _family_curves(ctx, n, max(max_weight, 1), cache_path)

    def accumulate(lo, hi):
        sums = dict.fromkeys(mus, 0)
        for data in curves[lo:hi]:
            theta = data.theta_powersums
            for mu in mus:
                prod = 1
                for part in mu:
                    prod *= theta[part]
                sums[mu] += prod
        return sums

    totals = dict.fromkeys(mus, 0)
    for sums in _chunk_results(len(curves), accumulate, workers):
        for mu in mus:
            totals[mu] += sums[mu]
    scale = Fraction(1, ctx.q ** n)
    return {
        lam: scale * sum(c * totals[mu] for mu, c in expansions[lam].items())
        for lam in lams
    }


def _zn_bound(q, n, weight):
    # 5^weight * q^(weight - n/2), exact in Q(sqrt q).
    scaled = Fraction(5 ** weight * q ** weight)
    if n % 2 == 0:
        return QAdjSqrt(scaled / q ** (n // 2))
    return QAdjSqrt(0, scaled / q ** ((n + 1) // 2), q)


# ---------------------------------------------------------------------------
# Reports.


def _rational_str(value):
    if isinstance(value, QAdjSqrt):
        return str(value)
    return str(Fraction(value))


def _sorted_keys(mapping):
    return sorted(mapping, key=lambda lam: (sum(lam), lam))


@dataclass(frozen=True)
class TraceReport:
    """Brute-force versus stable trace coefficients for one (q, n).

    pass(lam) iff |brute - stable| <= slack * 5^|lam| * q^(|lam| - n/2);
    the comparison is exact in Q(sqrt q).
    """

    q: int
    n: int
    brute: dict
    stable: dict
    bound: dict
    passed: dict
    slack: int = 2

    def __post_init__(self):
        for lam in self.brute:
            gap = abs(QAdjSqrt(self.brute[lam] - self.stable[lam]))
            if self.passed[lam] != (gap <= self.slack * self.bound[lam]):
                raise ValueError("pass flag disagrees with the bound")

    def rows(self):
        """Rows as plain dicts, sorted by (weight, lam)."""
        out = []
        for lam in _sorted_keys(self.brute):
            out.append({
                "lambda": list(lam),
                "brute": _rational_str(self.brute[lam]),
                "stable": _rational_str(self.stable[lam]),
                "bound": _rational_str(self.bound[lam]),
                "pass": self.passed[lam],
            })
        return out

    def to_json(self, indent=None):
        return json.dumps({"q": self.q, "n": self.n, "rows": self.rows()}, indent=indent)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda", "brute", "stable", "bound", "pass"])
        for row in self.rows():
            writer.writerow([
                ",".join(str(part) for part in row["lambda"]),
                row["brute"], row["stable"], row["bound"],
                "true" if row["pass"] else "false",
            ])
        return buf.getvalue()

    def all_passed(self):
        return all(self.passed.values())


def trace_report(ctx, n, max_weight, slack=2, workers=1, cache_path=None):
    """Builds the TraceReport comparing zn_coefficients against the
    stable generating function for every weight <= max_weight."""
    brute = zn_coefficients(ctx, n, max_weight, workers=workers,
                            cache_path=cache_path)
    table = _genfunc_schur(ctx.q, max_weight)
    stable = {lam: table.coefficient(conjugate(lam)) for lam in brute}
    bound = {lam: _zn_bound(ctx.q, n, sum(lam)) for lam in brute}
    passed = {
        lam: abs(QAdjSqrt(brute[lam] - stable[lam])) <= slack * bound[lam]
        for lam in brute
    }
    return TraceReport(ctx.q, n, brute, stable, bound, passed, slack)


@dataclass(frozen=True)
class MomentReport:
    """Average r-th power of central values against the character sum
    it must equal: moment = sum over box partitions of tr_lambda_g times
    the symplectic dimension of the complementary weight.  Exact."""

    q: int
    g: int
    r: int
    moment: QAdjSqrt
    identity_rhs: QAdjSqrt
    prediction: Fraction
    thmc_bound: Fraction

    def __post_init__(self):
        if self.moment != self.identity_rhs:
            raise ValueError("moment does not match the character identity")
        if self.moment.sqrt_part:
            raise ValueError("moment must be rational")

    def rows(self):
        return [{
            "moment": _rational_str(self.moment),
            "identity_rhs": _rational_str(self.identity_rhs),
            "prediction": _rational_str(self.prediction),
            "thmc_bound": _rational_str(self.thmc_bound),
        }]

    def to_json(self, indent=None):
        payload = {"q": self.q, "g": self.g, "r": self.r, "rows": self.rows()}
        return json.dumps(payload, indent=indent)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["moment", "identity_rhs", "prediction", "thmc_bound"])
        for row in self.rows():
            writer.writerow([row["moment"], row["identity_rhs"],
                             row["prediction"], row["thmc_bound"]])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# Symplectic averages and moments.


def _unit_powersums(q, theta, upto):
    # q^{-k/2} p_k as exact Q(sqrt q) numbers.
    out = {}
    for k in range(1, upto + 1):
        pk = theta[k]
        if k % 2 == 0:
            out[k] = QAdjSqrt(Fraction(pk, q ** (k // 2)))
        else:
            out[k] = QAdjSqrt(0, Fraction(pk, q ** ((k + 1) // 2)), q)
    return out


def _symplectic_average(q, curves, lam, workers):
    weight = sum(lam)

    def chunk(lo, hi):
        total = QAdjSqrt(0)
        for data in curves[lo:hi]:
            ups = _unit_powersums(q, data.theta_powersums, weight)
            total = total + symplectic_eval(lam, ups)
        return total

    total = QAdjSqrt(0)
    for part in _chunk_results(len(curves), chunk, workers):
        total = total + part
    return total * Fraction(1, q ** curves[0].d.degree)


def tr_lambda_g(ctx, lam, g, workers=1):
    """Average symplectic character of the unitarized Frobenius over the
    degree 2g+1 family, exact in Q(sqrt q).  Rational for even |lam|."""
    lam = as_partition(lam)
    if g < 1:
        raise ValueError("genus must be >= 1")
    weight = sum(lam)
    curves = batch_curve_data(ctx, 2 * g + 1, k_max=max(weight, g, 1))
    value = _symplectic_average(ctx.q, curves, lam, workers)
    if weight % 2 == 0 and value.sqrt_part:
        raise ArithmeticError("even-weight trace average must be rational")
    return value


def _central_from_row(q, row, r):
    # L(q^{-1/2})^r from the coefficient row of the L-function.
    a = Fraction(0)
    b = Fraction(0)
    for i, c in enumerate(row):
        if i % 2 == 0:
            a += Fraction(c, q ** (i // 2))
        else:
            b += Fraction(c, q ** ((i + 1) // 2))
    return QAdjSqrt(a, b, q) ** r


def moment_sum(ctx, g, r, workers=1):
    """Average r-th power of the central L-value over squarefree monic
    d of degree 2g+1, with the exact symplectic-character identity, the
    stable prediction, and the moment error bound 4^{g(r+1)} *
    q^(-theta(2g+1)/2), theta(n) = (n+11)/12, reported as a verified
    rational upper approximation."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if not isinstance(r, int) or r < 0:
        raise ValueError("r must be a nonnegative integer")
    q = ctx.q
    n = 2 * g + 1
    rows = batch_charsums(ctx, n)

    def chunk(lo, hi):
        total = QAdjSqrt(0)
        for row in rows[lo:hi]:
            total = total + _central_from_row(q, row, r)
        return total

    moment = QAdjSqrt(0)
    for part in _chunk_results(len(rows), chunk, workers):
        moment = moment + part
    moment = moment * Fraction(1, q ** n)

    curves = batch_curve_data(ctx, n, k_max=max(g * r, g, 1))
    identity_rhs = QAdjSqrt(0)
    for lam in box_partitions(g, r):
        signed = lambda_dagger(lam, g, r)
        if signed.sign == 0:
            continue
        tr = _symplectic_average(q, curves, lam, workers)
        identity_rhs = identity_rhs + tr * (signed.sign * weyl_dim_sp(signed.dominant, r))
    prediction = q1_prediction(q, g, r).value
    return MomentReport(q, g, r, moment, identity_rhs, prediction,
                        error_bounds("ThmCBound", q=q, g=g, r=r))


# ---------------------------------------------------------------------------
# Stable moment prediction with a reported tail.


@dataclass(frozen=True)
class Q1Prediction:
    """Stable moment prediction: the finite sum over lam_1 <= r of
    weight <= weight_cutoff, plus a reported geometric tail bound for
    the discarded weights.  The tail uses the measured decay constant
    |T_lam| <= decay_constant * decay_base^|lam| on the computed range;
    it is reported, not assumed."""

    value: Fraction
    tail_bound: Fraction
    decay_constant: Fraction
    decay_base: Fraction
    weight_cutoff: int


def _weyl_denominator(r):
    rho = list(range(r, 0, -1))
    out = 1
    for i in range(r):
        out *= rho[i]
        for j in range(i + 1, r):
            out *= rho[i] ** 2 - rho[j] ** 2
    return out


def q1_prediction(q, g, r, weight_cutoff=8):
    """Stable prediction for the r-th moment at genus g.

    Sums stable_trace_symplectic(lam) * sign * dim over lam with
    lam_1 <= r and |lam| <= weight_cutoff, straightening each lam into
    the dominant cone; sign-0 weights contribute nothing.  The reported
    tail bounds the discarded weights using the measured decay of the
    computed traces at rate q^(-1/5) and an exact upper bound
    (g + r + w)^(r^2) / weyl denominator on any straightened dimension
    of weight w."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if not isinstance(r, int) or r < 0:
        raise ValueError("r must be a nonnegative integer")
    if weight_cutoff < 0:
        raise ValueError("weight_cutoff must be >= 0")
    # base >= q^(-1/5): exponent -1/4 + epsilon at epsilon = 1/20.
    base = _decimal_upper(q, -1, 5)
    if r == 0:
        return Q1Prediction(Fraction(q - 1, q), Fraction(0), Fraction(0),
                            base, weight_cutoff)
    table = _symplectic_schur(q, weight_cutoff)
    value = Fraction(0)
    constant = Fraction(0)
    for weight in range(0, weight_cutoff + 1, 2):
        for lam in partitions(weight):
            if lam and lam[0] > r:
                continue
            coeff = table.coefficient(conjugate(lam))
            constant = max(constant, abs(coeff) / base ** weight)
            if coeff == 0:
                continue
            signed = lambda_dagger(lam, g, r)
            if signed.sign == 0:
                continue
            value += coeff * signed.sign * weyl_dim_sp(signed.dominant, r)
    denom = _weyl_denominator(r)

    def term_bound(w):
        # count of partitions with parts <= r, times the dimension bound.
        return (constant * base ** w * Fraction((w + 1) ** (r - 1))
                * Fraction((g + r + w) ** (r * r), denom))

    def step_ratio(w):
        return (base * Fraction(w + 2, w + 1) ** (r - 1)
                * Fraction(g + r + w + 1, g + r + w) ** (r * r))

    tail = Fraction(0)
    w = weight_cutoff + 1
    while step_ratio(w) >= Fraction(99, 100):
        tail += term_bound(w)
        w += 1
    tail += term_bound(w) / (1 - step_ratio(w))
    return Q1Prediction(value, tail, constant, base, weight_cutoff)


# ---------------------------------------------------------------------------
# Main-term oracle and literal bounds.


def mainterm_oracle(q, composition):
    """Limit monomial coefficient by direct enumeration.

    (1 - 1/q) times the sum over monic tuples (m_1, ..., m_r) with
    deg m_i = composition_i and product a perfect square v^2, of
    prod_{p | v} (1 + |p|^-1)^-1.  Odd total degree gives 0."""
    composition = tuple(composition)
    if any(not isinstance(c, int) or c < 0 for c in composition):
        raise ValueError("composition entries must be nonnegative integers")
    p, e = _odd_prime_power(q)
    total = sum(composition)
    if total % 2:
        return Fraction(0)
    constant = Fraction(q - 1, q)
    if not composition or not total:
        return constant
    ctx = FqContext(p, e)
    _, factors = _factor_tables(ctx, total)
    monics = {0: [{}]}
    for degree in set(composition) - {0}:
        monics[degree] = [dict(factors[m.coefficients]) for m in _monic_polys(ctx, degree)]

    def walk(index, merged):
        if index == len(composition):
            if any(mult % 2 for mult in merged.values()):
                return Fraction(0)
            out = Fraction(1)
            for pc, mult in merged.items():
                if mult:
                    size = q ** (len(pc) - 1)
                    out *= Fraction(size, size + 1)
            return out
        acc = Fraction(0)
        for fac in monics[composition[index]]:
            child = dict(merged)
            for pc, mult in fac.items():
                child[pc] = child.get(pc, 0) + mult
            acc += walk(index + 1, child)
        return acc

    return constant * walk(0, {})


def error_bounds(kind, *, q=None, n=None, weight=None, g=None, r=None, k=None, dim=None):
    """Literal error bound values.

    ZnBound(q, n, weight): 5^weight * q^(weight - n/2), exact in
    Q(sqrt q); rational whenever n is even.
    ThmCBound(q, g, r): 4^(g(r+1)) * q^(-theta(2g+1)/2) with
    theta(m) = (m+11)/12, as a verified rational upper approximation.
    FuksBound(n, k, dim): binom(n-1, k) * dim.
    """
    if kind == "ZnBound":
        if q is None or n is None or weight is None:
            raise ValueError("ZnBound needs q, n, weight")
        return _zn_bound(q, n, weight)
    if kind == "ThmCBound":
        if q is None or g is None or r is None:
            raise ValueError("ThmCBound needs q, g, r")
        # theta(2g+1)/2 = (g+6)/12.
        return Fraction(4) ** (g * (r + 1)) * _decimal_upper(q, -(g + 6), 12)
    if kind == "FuksBound":
        if n is None or k is None or dim is None:
            raise ValueError("FuksBound needs n, k, dim")
        return comb(n - 1, k) * dim
    raise ValueError("unknown bound kind: %r" % (kind,))
