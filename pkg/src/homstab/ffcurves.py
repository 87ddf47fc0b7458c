"""Finite fields, quadratic residue symbols, and hyperelliptic counts.

Models F_q = F_p[x]/(modulus) for odd primes p with elements encoded as
integers (base-p digits, ascending), polynomials over F_q, the quadratic
residue symbol (d/m) with its reciprocity law, enumeration of monic
squarefree polynomials, and point counting of the hyperelliptic curves
y^2 = d(x) over extension fields.  From the counts it assembles the
Frobenius characteristic polynomial (Newton's identities plus the
functional equation), the eigenvalue multiset Theta_d (which adjoins the
eigenvalue 1 when deg d is even), and the quadratic L-function two ways:
once as a character sum over monic polynomials, once as the zeta
numerator.  Central values L(1/2, chi_d)^r are exact in Q(sqrt(q)).

Batch variants vectorize the per-curve work with numpy over the whole
family of squarefree polynomials of one degree; they are bit-identical
to the literal routines and exist only for throughput.  All reductions
are exact integer sums, so results never depend on evaluation order.
"""

import struct
from fractions import Fraction
from functools import cache
from itertools import product
from typing import NamedTuple

import numpy as np

from .qadjsqrt import QAdjSqrt

__all__ = [
    "ConstantModulus",
    "NotSquarefree",
    "FqContext",
    "FqPoly",
    "CurveData",
    "jacobi_symbol",
    "is_squarefree",
    "enumerate_squarefree",
    "curve_point_counts",
    "frobenius_data",
    "lfunction_charsum",
    "lfunction_from_frobenius",
    "central_value",
    "batch_curve_data",
    "batch_charsums",
    "rh_defect",
    "functional_equation_holds",
    "write_cache",
    "read_cache",
]

MAX_PRIME = 97
# Quadratic-character lookup tables are built only for fields up to this
# size; larger fields fall back to exponentiation per element.
CHI_TABLE_LIMIT = 1 << 16

CACHE_MAGIC = b"HWCACHE1"


class ConstantModulus(ValueError):
    """The modulus of a residue symbol must be nonconstant."""


class NotSquarefree(ValueError):
    """The defining polynomial must be squarefree."""


def _odd_primes(limit):
    out = []
    for n in range(3, limit + 1, 2):
        if all(n % f for f in range(3, int(n ** 0.5) + 1, 2)):
            out.append(n)
    return tuple(out)


_ODD_PRIMES = _odd_primes(MAX_PRIME)


def _prime_divisors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomials over the prime field F_p, as coefficient tuples (ascending).
# Used only to pick and validate field moduli.


def _fp_trim(cs):
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def _fp_mulmod(a, b, mod, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    for i in range(len(out)):
        out[i] %= p
    # Reduce by the monic modulus.
    m = len(mod) - 1
    for i in range(len(out) - 1, m - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(m):
                out[i - m + j] = (out[i - m + j] - c * mod[j]) % p
    return _fp_trim(out)


def _fp_powmod_x(exp, mod, p):
    # x^exp mod the monic modulus.
    result, base = (1,), (0, 1)
    while exp:
        if exp & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        exp >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        # a mod b with b made monic on the fly.
        inv_lead = pow(b[-1], p - 2, p)
        bm = tuple(c * inv_lead % p for c in b)
        r = list(a)
        for i in range(len(r) - 1, len(bm) - 2, -1):
            c = r[i]
            if c:
                r[i] = 0
                for j in range(len(bm) - 1):
                    r[i - len(bm) + 1 + j] = (
                        r[i - len(bm) + 1 + j] - c * bm[j]) % p
        a, b = bm, _fp_trim(r)
    return a


def _fp_minus_x(poly, p):
    # poly - x, trimmed.
    diff = list(poly) + [0] * max(0, 2 - len(poly))
    diff[1] = (diff[1] - 1) % p
    return _fp_trim(diff)


def _fp_is_irreducible(poly, p):
    # Rabin's test: x^(p^n) = x mod poly, and x^(p^(n/r)) - x is coprime
    # to poly for every prime r dividing n.
    n = len(poly) - 1
    if n == 1:
        return True
    if _fp_minus_x(_fp_powmod_x(p ** n, poly, p), p):
        return False
    for r in _prime_divisors(n):
        xr = _fp_powmod_x(p ** (n // r), poly, p)
        g = _fp_gcd(_fp_minus_x(xr, p), poly, p)
        if len(g) - 1 != 0:
            return False
    return True


@cache
def _smallest_irreducible(p, n):
    """Returns the lexicographically smallest monic irreducible of degree n.

    Coefficient tuples (c_0, ..., c_{n-1}) are compared ascending-degree
    first, so the scan fixes the constant coefficient before higher ones.
    """
    for low in product(range(p), repeat=n):
        if n > 1 and low[0] == 0:
            continue  # divisible by x
        poly = low + (1,)
        if _fp_is_irreducible(poly, p):
            return poly
    raise AssertionError("unreachable: irreducibles exist in every degree")


def _reduction_rows(modulus, p):
    # Digits of alpha^(e+j) for j = 0..e-2, where alpha^e folds through
    # the monic modulus.
    e = len(modulus) - 1
    rows = []
    row = [(-modulus[i]) % p for i in range(e)]
    rows.append(tuple(row))
    for _ in range(e - 2):
        lead = row[e - 1]
        row = [0] + row[:e - 1]
        if lead:
            for i in range(e):
                row[i] = (row[i] + lead * rows[0][i]) % p
        rows.append(tuple(row))
    return tuple(rows)


def _vec_chi_table(p, modulus):
    """Quadratic-character table for F_p[x]/(modulus), indexed by code.

    Entry 0 is 0; squares of nonzero elements get +1, the rest -1.
    """
    m = len(modulus) - 1
    size = p ** m
    codes = np.arange(size, dtype=np.int64)
    digits = np.empty((size, m), dtype=np.int64)
    t = codes.copy()
    for i in range(m):
        digits[:, i] = t % p
        t //= p
    conv = np.zeros((size, 2 * m - 1), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            conv[:, a + b] += digits[:, a] * digits[:, b]
    conv %= p
    out = conv[:, :m].copy()
    if m > 1:
        rows = _reduction_rows(modulus, p)
        for j in range(m - 1):
            col = conv[:, m + j]
            row = rows[j]
            for i in range(m):
                if row[i]:
                    out[:, i] += col * row[i]
        out %= p
    ppow = p ** np.arange(m, dtype=np.int64)
    square_codes = out @ ppow
    table = np.full(size, -1, dtype=np.int8)
    table[0] = 0
    table[square_codes[1:]] = 1
    return table


# ---------------------------------------------------------------------------
# Field contexts.


class FqContext:
    """The finite field F_q, q = p^e, with integer-encoded elements.

    The element sum_i c_i alpha^i (alpha the class of x modulo the
    modulus) is encoded as the integer sum_i c_i p^i; in particular the
    prime subfield occupies codes 0..p-1 in every extension.
    """

    __slots__ = ("p", "e", "q", "modulus", "_red", "_ppow",
                 "_chi_table", "_exts", "_embeds")

    def __init__(self, p, e=1, modulus=None):
        p, e = int(p), int(e)
        if p not in _ODD_PRIMES:
            raise ValueError("p must be an odd prime <= %d" % MAX_PRIME)
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = _smallest_irreducible(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree e")
            if not _fp_is_irreducible(modulus, p):
                raise ValueError("modulus is reducible")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus
        self._red = _reduction_rows(modulus, p) if e > 1 else ()
        self._ppow = tuple(p ** i for i in range(e))
        self._chi_table = None
        self._exts = {}
        self._embeds = {}

    def __repr__(self):
        return "FqContext(p=%d, e=%d, q=%d)" % (self.p, self.e, self.q)

    def __eq__(self, other):
        if not isinstance(other, FqContext):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (
            other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    # -- element codecs ----------------------------------------------------

    def decode(self, a):
        """Returns the base-p digit tuple of the code a."""
        digits = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            digits.append(r)
        return tuple(digits)

    def encode(self, digits):
        return sum(d * w for d, w in zip(digits, self._ppow))

    def element(self, n):
        """Returns the code of the integer n viewed in the prime subfield."""
        return int(n) % self.p

    def elements(self):
        return range(self.q)

    # -- arithmetic on codes -----------------------------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        da, db = self.decode(a), self.decode(b)
        return self.encode(tuple((x + y) % self.p for x, y in zip(da, db)))

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return self.encode(tuple((-x) % self.p for x in self.decode(a)))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p = self.p
        if self.e == 1:
            return (a * b) % p
        da, db = self.decode(a), self.decode(b)
        e = self.e
        conv = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] += x * y
        out = [c % p for c in conv[:e]]
        for j in range(e - 1):
            c = conv[e + j] % p
            if c:
                row = self._red[j]
                for i in range(e):
                    out[i] = (out[i] + c * row[i]) % p
        return self.encode(out)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    # -- quadratic character -------------------------------------------------

    def chi_table(self):
        """Returns the int8 character table, or None above the size limit."""
        if self.q > CHI_TABLE_LIMIT:
            return None
        if self._chi_table is None:
            if self.e == 1:
                table = np.full(self.p, -1, dtype=np.int8)
                table[0] = 0
                squares = (np.arange(1, self.p, dtype=np.int64) ** 2) % self.p
                table[squares] = 1
                self._chi_table = table
            else:
                self._chi_table = _vec_chi_table(self.p, self.modulus)
        return self._chi_table

    def chi(self, a):
        """Returns the quadratic character of the code a: 0 or +-1."""
        table = self.chi_table()
        if table is not None:
            return int(table[a])
        if a == 0:
            return 0
        v = self.pow(a, (self.q - 1) // 2)
        return 1 if v == 1 else -1

    # -- extensions and the tower map ----------------------------------------

    def extension(self, k):
        """Returns F_{q^k} as a context of degree e*k over the same prime."""
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if k == 1:
            return self
        ext = self._exts.get(k)
        if ext is None:
            ext = FqContext(self.p, self.e * k)
            self._exts[k] = ext
        return ext

    def embed_table(self, base):
        """Returns the code table of the canonical embedding base -> self.

        The base generator maps to the smallest-coded root of the base
        modulus in this field; prime-subfield codes are preserved.
        """
        if base.p != self.p or self.e % base.e:
            raise ValueError("no embedding between these fields")
        key = (base.e, base.modulus)
        table = self._embeds.get(key)
        if table is not None:
            return table
        if base.e == 1:
            table = tuple(range(self.p))
        elif (base.e, base.modulus) == (self.e, self.modulus):
            table = tuple(range(self.q))
        else:
            root = self._min_root_of(base.modulus)
            table = []
            for a in range(base.q):
                acc = 0
                for d in reversed(base.decode(a)):
                    acc = self.add(self.mul(acc, root), d)
                table.append(acc)
            table = tuple(table)
        self._embeds[key] = table
        return table

    def _min_root_of(self, poly):
        # poly: monic over F_p, splits into distinct linear factors here.
        f = tuple(c % self.p for c in poly)
        while len(f) - 1 > 1:
            for c in range(self.q):
                h = _fqp_powmod(self, (c, 1), (self.q - 1) // 2, f)
                h = _fqp_sub(self, h, (self.element(1),))
                g = _fqp_gcd(self, h, f)
                if 0 < len(g) - 1 < len(f) - 1:
                    f = g
                    break
            else:
                raise AssertionError(
                    "unreachable: a separating shift always exists")
        root = self.neg(f[0])
        # All conjugates are Frobenius powers of any one root; the
        # canonical image is the smallest code among them.
        best, r = root, root
        b = 1
        while True:
            r = self.pow(r, self.p)
            if r == root:
                break
            best = min(best, r)
            b += 1
            if b > self.e:
                raise AssertionError("unreachable: conjugacy orbit overflow")
        return best


# ---------------------------------------------------------------------------
# Polynomial arithmetic over a context, on raw coefficient tuples.


def _fqp_trim(cs):
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def _fqp_add(ctx, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ctx.add(out[i], c)
    return _fqp_trim(out)


def _fqp_neg(ctx, a):
    return tuple(ctx.neg(c) for c in a)


def _fqp_sub(ctx, a, b):
    return _fqp_add(ctx, a, _fqp_neg(ctx, b))


def _fqp_mul(ctx, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return _fqp_trim(out)


def _fqp_scale(ctx, a, c):
    return _fqp_trim(tuple(ctx.mul(x, c) for x in a))


def _fqp_divmod(ctx, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = ctx.inv(b[-1])
    r = list(a)
    db = len(b) - 1
    quot = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = ctx.mul(r[i], inv_lead)
        if c:
            quot[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = ctx.sub(r[i - db + j], ctx.mul(c, b[j]))
    return _fqp_trim(quot), _fqp_trim(r)


def _fqp_gcd(ctx, a, b):
    a, b = _fqp_trim(a), _fqp_trim(b)
    while b:
        a, b = b, _fqp_divmod(ctx, a, b)[1]
    if a:
        a = _fqp_scale(ctx, a, ctx.inv(a[-1]))
    return a


def _fqp_powmod(ctx, base, n, mod):
    result = (ctx.element(1),)
    base = _fqp_divmod(ctx, base, mod)[1]
    while n:
        if n & 1:
            result = _fqp_divmod(ctx, _fqp_mul(ctx, result, base), mod)[1]
        base = _fqp_divmod(ctx, _fqp_mul(ctx, base, base), mod)[1]
        n >>= 1
    return result


def _fqp_derivative(ctx, a):
    out = []
    for i in range(1, len(a)):
        out.append(ctx.mul(a[i], ctx.element(i)))
    return _fqp_trim(out)


def _fqp_eval(ctx, a, x):
    acc = 0
    for c in reversed(a):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


class FqPoly:
    """A polynomial over F_q: context plus ascending coefficient codes.

    Treat instances as immutable.  The zero polynomial has degree -1.
    Integer coefficients outside 0..q-1 are reduced into the prime
    subfield (so -1 always means the field's minus one); values already
    in 0..q-1 are taken verbatim as element codes.
    """

    __slots__ = ("ctx", "coefficients")

    def __init__(self, ctx, coefficients):
        cs = []
        for c in coefficients:
            c = int(c)
            if not 0 <= c < ctx.q:
                c = c % ctx.p
            cs.append(c)
        self.ctx = ctx
        self.coefficients = _fqp_trim(cs)

    @classmethod
    def _raw(cls, ctx, coeffs):
        out = object.__new__(cls)
        out.ctx = ctx
        out.coefficients = _fqp_trim(coeffs)
        return out

    @classmethod
    def zero(cls, ctx):
        return cls._raw(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls._raw(ctx, (1,))

    @classmethod
    def x(cls, ctx):
        return cls._raw(ctx, (0, 1))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def monic(self):
        return bool(self.coefficients) and self.coefficients[-1] == 1

    def _check(self, other):
        if not isinstance(other, FqPoly):
            raise TypeError("expected an FqPoly")
        if other.ctx != self.ctx:
            raise ValueError("mixed field contexts")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FqPoly._raw(self.ctx,
                           _fqp_add(self.ctx, self.coefficients,
                                    other.coefficients))

    def __sub__(self, other):
        other = self._check(other)
        return FqPoly._raw(self.ctx,
                           _fqp_sub(self.ctx, self.coefficients,
                                    other.coefficients))

    def __neg__(self):
        return FqPoly._raw(self.ctx, _fqp_neg(self.ctx, self.coefficients))

    def __mul__(self, other):
        other = self._check(other)
        return FqPoly._raw(self.ctx,
                           _fqp_mul(self.ctx, self.coefficients,
                                    other.coefficients))

    def scale(self, c):
        """Returns the product with the field element of code c."""
        return FqPoly._raw(self.ctx,
                           _fqp_scale(self.ctx, self.coefficients, c))

    def __divmod__(self, other):
        other = self._check(other)
        q, r = _fqp_divmod(self.ctx, self.coefficients, other.coefficients)
        return FqPoly._raw(self.ctx, q), FqPoly._raw(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other):
        """Returns the monic gcd; gcd(0, 0) = 0."""
        other = self._check(other)
        return FqPoly._raw(self.ctx,
                           _fqp_gcd(self.ctx, self.coefficients,
                                    other.coefficients))

    def derivative(self):
        return FqPoly._raw(self.ctx,
                           _fqp_derivative(self.ctx, self.coefficients))

    def __call__(self, x):
        """Evaluates at the element code x, in this polynomial's field."""
        return _fqp_eval(self.ctx, self.coefficients, x)

    def embed_to(self, ext):
        """Returns this polynomial with coefficients mapped into ext."""
        table = ext.embed_table(self.ctx)
        return FqPoly._raw(ext, tuple(table[c] for c in self.coefficients))

    def encode(self):
        """Returns the integer code sum_i c_i q^i."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * self.ctx.q + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, FqPoly):
            return NotImplemented
        return (self.ctx == other.ctx
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.ctx, self.coefficients))

    def __bool__(self):
        return bool(self.coefficients)

    def __repr__(self):
        return "FqPoly(q=%d, %s)" % (self.ctx.q, list(self.coefficients))

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                xpow = "x" if i == 1 else "x^%d" % i
                parts.append(xpow if c == 1 else "%d*%s" % (c, xpow))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Residue symbol, squarefreeness, enumeration.


def jacobi_symbol(d, m):
    """Returns the quadratic residue symbol (d/m) in {-1, 0, +1}.

    m must be nonconstant.  Computed by Euclidean reduction: leading
    coefficients are stripped with the constant rule
    (c/m) = chi(c)^(deg m), and monic arguments are swapped with the
    reciprocity sign (-1)^(((q-1)/2) deg d deg m).
    """
    if not isinstance(d, FqPoly) or not isinstance(m, FqPoly):
        raise TypeError("expected FqPoly arguments")
    if d.ctx != m.ctx:
        raise ValueError("mixed field contexts")
    ctx = d.ctx
    if m.degree < 1:
        raise ConstantModulus("residue symbol needs a nonconstant modulus")
    recip_odd = ((ctx.q - 1) // 2) % 2 == 1
    sign = 1
    dcs, mcs = d.coefficients, m.coefficients
    while True:
        # The symbol only sees m up to a unit factor.
        if mcs[-1] != 1:
            mcs = _fqp_scale(ctx, mcs, ctx.inv(mcs[-1]))
        dcs = _fqp_divmod(ctx, dcs, mcs)[1]
        if not dcs:
            return 0
        lead = dcs[-1]
        if lead != 1:
            dcs = _fqp_scale(ctx, dcs, ctx.inv(lead))
            if ctx.chi(lead) == -1 and (len(mcs) - 1) % 2 == 1:
                sign = -sign
        if len(dcs) == 1:
            return sign
        if recip_odd and (len(dcs) - 1) % 2 == 1 and (len(mcs) - 1) % 2 == 1:
            sign = -sign
        dcs, mcs = mcs, dcs


def is_squarefree(d):
    """Returns True iff gcd(d, d') is constant; the zero polynomial is not."""
    if not d:
        return False
    g = _fqp_gcd(d.ctx, d.coefficients,
                 _fqp_derivative(d.ctx, d.coefficients))
    return len(g) - 1 == 0


def enumerate_squarefree(ctx, n):
    """Yields the monic squarefree polynomials of degree n, each once.

    Deterministic lexicographic order: ascending integer code, i.e.
    coefficient tuples compared from degree n-1 down to the constant.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    q = ctx.q
    for code in range(q ** n):
        cs, c = [], code
        for _ in range(n):
            c, r = divmod(c, q)
            cs.append(r)
        cs.append(1)
        d = FqPoly._raw(ctx, cs)
        if is_squarefree(d):
            yield d


# ---------------------------------------------------------------------------
# Point counting and Frobenius data.


class CurveData(NamedTuple):
    """Frobenius data of the hyperelliptic curve y^2 = d(x).

    charpoly holds the coefficients of P(t) = prod (1 - omega t),
    ascending, length 2g+1.  theta_powersums maps k to the exact integer
    p_k of the multiset Theta_d, which adjoins the eigenvalue 1 when
    deg d is even.
    """

    d: FqPoly
    genus: int
    counts: tuple
    charpoly: tuple
    theta_powersums: dict


def _require_curve_input(d):
    if not isinstance(d, FqPoly):
        raise TypeError("expected an FqPoly")
    if d.degree < 1:
        raise ValueError("curve polynomial must be nonconstant")
    if not d.monic:
        raise ValueError("curve polynomial must be monic")
    if not is_squarefree(d):
        raise NotSquarefree("curve polynomial must be squarefree")


def _char_sums(ctx, d, k_max):
    # sum_x chi(d(x)) over F_{q^k} for k = 1..k_max.
    out = []
    for k in range(1, k_max + 1):
        ext = ctx.extension(k)
        dk = d.embed_to(ext) if ext is not ctx else d
        table = ext.chi_table()
        total = 0
        if table is not None:
            for x in ext.elements():
                total += int(table[_fqp_eval(ext, dk.coefficients, x)])
        else:
            for x in ext.elements():
                total += ext.chi(_fqp_eval(ext, dk.coefficients, x))
        out.append(total)
    return out


def curve_point_counts(ctx, d, k_max):
    """Returns [N_1, ..., N_{k_max}] for the smooth model of y^2 = d(x).

    N_k = sum_x (1 + chi_k(d(x))) plus one point at infinity for odd
    degree, two for even (d is monic, so both infinite points of the
    even-degree model are rational).
    """
    _require_curve_input(d)
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    infinity = 1 if d.degree % 2 == 1 else 2
    sums = _char_sums(ctx, d, k_max)
    return [ctx.q ** k + s + infinity for k, s in enumerate(sums, start=1)]


def _newton_elementary(psums, g):
    # First g elementary symmetric functions from power sums p_1..p_g.
    es = [1]
    for k in range(1, g + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * es[k - i] * psums[i - 1]
        if acc % k:
            raise AssertionError("Newton inversion left a remainder")
        es.append(acc // k)
    return es


def _powersums_from_elementary(es, k_max):
    # Power sums p_1..p_{k_max} from e_1..e_n (zero beyond n).
    ps = []
    n = len(es) - 1
    for k in range(1, k_max + 1):
        acc = 0
        if k <= n:
            acc += (-1) ** (k - 1) * k * es[k]
        for i in range(1, min(k, n + 1)):
            acc += (-1) ** (i - 1) * es[i] * ps[k - i - 1]
        ps.append(acc)
    return ps


def _curve_from_counts(ctx, d, counts, k_max):
    n = d.degree
    g = (n - 1) // 2
    q = ctx.q
    asums = [q ** k + 1 - counts[k - 1] for k in range(1, g + 1)]
    es = _newton_elementary(asums, g)
    cp = [0] * (2 * g + 1)
    cp[0] = 1
    for i in range(1, g + 1):
        cp[i] = (-1) ** i * es[i]
    for i in range(g):
        cp[2 * g - i] = q ** (g - i) * cp[i]
    if k_max is None:
        k_max = max(n - 1, 0)
    full_es = [(-1) ** i * cp[i] for i in range(2 * g + 1)]
    psums = _powersums_from_elementary(full_es, max(k_max, g))
    # Round trip: the reconstructed power sums must reproduce a_k.
    assert psums[:g] == asums, "charpoly disagrees with the point counts"
    adjoined = 1 if n % 2 == 0 else 0
    theta = {k: psums[k - 1] + adjoined for k in range(1, k_max + 1)}
    return CurveData(d, g, tuple(counts), tuple(cp), theta)


def frobenius_data(ctx, d, k_max=None):
    """Returns CurveData for y^2 = d(x): counts, charpoly, Theta power sums.

    Counts are taken for k <= genus; Newton's identities give the first
    g coefficients of P(t) and the functional equation
    c_{2g-i} = q^{g-i} c_i supplies the rest.  theta_powersums covers
    k <= k_max (default deg d - 1).
    """
    _require_curve_input(d)
    g = (d.degree - 1) // 2
    counts = curve_point_counts(ctx, d, g)
    return _curve_from_counts(ctx, d, counts, k_max)


def _frac_poly_divmod(a, b):
    r = list(a)
    db = len(b) - 1
    quot = [Fraction(0)] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i] / b[-1]
        if c:
            quot[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    while r and not r[-1]:
        r.pop()
    return quot, r


def _squarefree_part(cp):
    # Exact reduction over Q; repeated inverse roots would otherwise
    # wreck the accuracy of the numeric eigenvalue solve.
    a = [Fraction(c) for c in cp]
    b = [Fraction(i * c) for i, c in enumerate(cp)][1:]
    while b:
        a, b = b, _frac_poly_divmod(a, b)[1]
    if len(a) == 1:
        return cp
    quot, rem = _frac_poly_divmod([Fraction(c) for c in cp], a)
    assert not rem, "gcd with the derivative must divide"
    return [float(c) for c in quot]


def rh_defect(data):
    """Returns max | |omega|/sqrt(q) - 1 | over the inverse roots of P.

    Repeated factors are stripped exactly before the numeric solve,
    since they do not change the set of root magnitudes but do degrade
    eigenvalue accuracy.
    """
    cp = data.charpoly
    if len(cp) == 1:
        return 0.0
    q = data.d.ctx.q
    # Inverse roots of P(t) are the roots of t^{2g} P(1/t).
    roots = np.roots(cp)
    defect = float(np.max(np.abs(np.abs(roots) / q ** 0.5 - 1.0)))
    if defect <= 1e-10:
        return defect
    roots = np.roots(_squarefree_part(cp))
    return float(np.max(np.abs(np.abs(roots) / q ** 0.5 - 1.0)))


def functional_equation_holds(data):
    """Checks c_{2g-i} = q^{g-i} c_i exactly."""
    cp = data.charpoly
    g = data.genus
    q = data.d.ctx.q
    return all(cp[2 * g - i] == q ** (g - i) * cp[i] for i in range(g + 1))


# ---------------------------------------------------------------------------
# Quadratic L-functions.


def _monic_polys(ctx, degree):
    q = ctx.q
    for code in range(q ** degree):
        cs, c = [], code
        for _ in range(degree):
            c, r = divmod(c, q)
            cs.append(r)
        cs.append(1)
        yield FqPoly._raw(ctx, cs)


def lfunction_charsum(ctx, d):
    """Returns the coefficients of L(t, chi_d) as a character sum.

    Coefficient i is the sum of chi_d(m) = (d/m) over the monic m of
    degree i; the result has length deg d (degree deg d - 1).
    """
    _require_curve_input(d)
    out = [1]
    for i in range(1, d.degree):
        total = 0
        for m in _monic_polys(ctx, i):
            total += jacobi_symbol(d, m)
        out.append(total)
    return out


def lfunction_from_frobenius(data):
    """Returns L(t, chi_d) rebuilt from the zeta numerator.

    L = (1 - t)^delta P(t) with delta = 1 for even degree, 0 for odd;
    equivalently the product of (1 - omega t) over Theta_d.
    """
    cp = data.charpoly
    if data.d.degree % 2 == 1:
        return list(cp)
    out = [0] * (len(cp) + 1)
    for i, c in enumerate(cp):
        out[i] += c
        out[i + 1] -= c
    return out


def central_value(ctx, d, r):
    """Returns L(1/2, chi_d)^r = L(t = q^(-1/2))^r, exact in Q(sqrt(q))."""
    if not isinstance(r, int) or r < 0:
        raise ValueError("r must be a nonnegative integer")
    coeffs = lfunction_charsum(ctx, d)
    q = ctx.q
    a = Fraction(0)
    b = Fraction(0)
    for i, c in enumerate(coeffs):
        if i % 2 == 0:
            a += Fraction(c, q ** (i // 2))
        else:
            # t^i = q^(-(i+1)/2) sqrt(q)
            b += Fraction(c, q ** ((i + 1) // 2))
    return QAdjSqrt(a, b, q) ** r


# ---------------------------------------------------------------------------
# Batch engines.  Bit-identical to the literal routines; prime base
# fields are vectorized with numpy, everything else falls back.


def _coeff_matrix(curves):
    return np.array([c.coefficients for c in curves], dtype=np.int64)


def _element_digits(ext):
    size, m, p = ext.q, ext.e, ext.p
    digits = np.empty((size, m), dtype=np.int64)
    t = np.arange(size, dtype=np.int64)
    for i in range(m):
        digits[:, i] = t % p
        t //= p
    return digits


def _vec_field_mul(ext, adig, bdig):
    # Componentwise field product of two (size, m) digit arrays.
    p, m = ext.p, ext.e
    conv = np.zeros((adig.shape[0], 2 * m - 1), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            conv[:, i + j] += adig[:, i] * bdig[:, j]
    conv %= p
    out = conv[:, :m].copy()
    if m > 1:
        for j in range(m - 1):
            col = conv[:, m + j]
            row = ext._red[j]
            for i in range(m):
                if row[i]:
                    out[:, i] += col * row[i]
        out %= p
    return out


def batch_curve_data(ctx, n, k_max=None):
    """Returns [frobenius_data(ctx, d, k_max) for d in P_n], vectorized.

    The order matches enumerate_squarefree.  Prime base fields with all
    counting fields under the character-table limit take the numpy
    path; anything else runs the literal routine per curve.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    curves = list(enumerate_squarefree(ctx, n))
    g = (n - 1) // 2
    vectorizable = (
        ctx.e == 1 and g >= 1
        and all(ctx.q ** k <= CHI_TABLE_LIMIT for k in range(1, g + 1)))
    if not vectorizable:
        return [frobenius_data(ctx, d, k_max) for d in curves]
    coeffs = _coeff_matrix(curves)
    p = ctx.p
    charsums = {}
    for k in range(1, g + 1):
        ext = ctx.extension(k)
        m = ext.e
        digits = _element_digits(ext)
        # Digit arrays of x^i for every x at once; coefficients of d live
        # in the prime field, so d(x) is a mod-p linear combination.
        powers = np.zeros((n + 1, ext.q, m), dtype=np.int64)
        powers[0, :, 0] = 1
        cur = powers[0]
        for i in range(1, n + 1):
            cur = _vec_field_mul(ext, cur, digits)
            powers[i] = cur
        values = np.tensordot(coeffs, powers, axes=([1], [0])) % p
        codes = values @ (p ** np.arange(m, dtype=np.int64))
        charsums[k] = ext.chi_table()[codes].sum(axis=1, dtype=np.int64)
    infinity = 1 if n % 2 == 1 else 2
    out = []
    for idx, d in enumerate(curves):
        counts = [ctx.q ** k + int(charsums[k][idx]) + infinity
                  for k in range(1, g + 1)]
        out.append(_curve_from_counts(ctx, d, counts, k_max))
    return out


@cache
def _factor_tables(ctx, max_degree):
    """Monic factorization tables up to max_degree.

    Returns (irreducibles, factors): the monic irreducibles in
    (degree, code) order, and for every monic polynomial of degree
    1..max_degree its factorization as a tuple of (irreducible
    coefficient tuple, multiplicity).
    """
    irreducibles = []
    factors = {}
    for deg in range(1, max_degree + 1):
        for f in _monic_polys(ctx, deg):
            fc = f.coefficients
            hit = None
            for pc in irreducibles:
                if len(pc) - 1 > deg // 2:
                    break
                rest, rem = _fqp_divmod(ctx, fc, pc)
                if not rem:
                    hit = (pc, rest)
                    break
            if hit is None:
                irreducibles.append(fc)
                factors[fc] = ((fc, 1),)
                continue
            pc, rest = hit
            merged = {pc: 1}
            if len(rest) > 1:
                for base, mult in factors[rest]:
                    merged[base] = merged.get(base, 0) + mult
            factors[fc] = tuple(sorted(merged.items()))
    return tuple(irreducibles), factors


def batch_charsums(ctx, n):
    """Returns [lfunction_charsum(ctx, d) for d in P_n], vectorized.

    The order matches enumerate_squarefree.  For a prime base field the
    residue symbols (d/pi) are read off quadratic-character tables of
    the residue fields F_q[x]/(pi), with d reduced mod pi by one matrix
    product across the whole family.
    """
    if n < 1:
        raise ValueError("degree must be >= 0")
    curves = list(enumerate_squarefree(ctx, n))
    if ctx.e != 1 or n == 1:
        return [lfunction_charsum(ctx, d) for d in curves]
    p = ctx.p
    coeffs = _coeff_matrix(curves)
    irreducibles, factors = _factor_tables(ctx, n - 1)
    symbol = {}
    for pc in irreducibles:
        j = len(pc) - 1
        # x^i mod pi, stacked as a reduction matrix.
        rows = []
        xi = (1,)
        for _ in range(n + 1):
            rows.append(list(xi) + [0] * (j - len(xi)))
            xi = _fqp_divmod(ctx, tuple([0] + list(xi)), pc)[1]
        reducer = np.array(rows, dtype=np.int64)
        residues = (coeffs @ reducer) % p
        codes = residues @ (p ** np.arange(j, dtype=np.int64))
        table = _vec_chi_table(p, pc)
        symbol[pc] = table[codes]
    out = np.zeros((len(curves), n), dtype=np.int64)
    out[:, 0] = 1
    for deg in range(1, n):
        col = out[:, deg]
        for m in _monic_polys(ctx, deg):
            value = None
            for pc, mult in factors[m.coefficients]:
                term = symbol[pc].astype(np.int64)
                if mult > 1:
                    term = term ** mult
                value = term if value is None else value * term
            col += value
    return [row.tolist() for row in out]


# ---------------------------------------------------------------------------
# Binary cache of CurveData per (q, n).


def write_cache(path, ctx, n, curves):
    """Writes CurveData records for degree n as HWCACHE1 binary."""
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<III", ctx.q, n, len(curves)))
        for data in curves:
            if data.d.degree != n:
                raise ValueError("cache records must share one degree")
            fh.write(struct.pack("<I", n))
            fh.write(struct.pack("<%dI" % (n + 1), *data.d.coefficients))
            body = data.charpoly[1:]
            fh.write(struct.pack("<%dq" % len(body), *body))


def read_cache(path, ctx, k_max=None):
    """Reads an HWCACHE1 file back into CurveData records.

    Counts and Theta power sums are rebuilt from the stored charpoly,
    so the round trip is bit-exact.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:8] != CACHE_MAGIC:
        raise ValueError("not an HWCACHE1 file")
    q, n, count = struct.unpack_from("<III", blob, 8)
    if ctx.q != q:
        raise ValueError("cache was written for q=%d" % q)
    offset = 20
    g = (n - 1) // 2
    out = []
    bound = max(n - 1, 0) if k_max is None else k_max
    for _ in range(count):
        (deg,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        if deg != n:
            raise ValueError("corrupt cache record")
        cs = struct.unpack_from("<%dI" % (n + 1), blob, offset)
        offset += 4 * (n + 1)
        body = struct.unpack_from("<%dq" % (2 * g), blob, offset)
        offset += 8 * 2 * g
        d = FqPoly._raw(ctx, cs)
        cp = (1,) + tuple(body)
        full_es = [(-1) ** i * cp[i] for i in range(2 * g + 1)]
        psums = _powersums_from_elementary(full_es, max(bound, g))
        counts = tuple(q ** k + 1 - psums[k - 1] for k in range(1, g + 1))
        adjoined = 1 if n % 2 == 0 else 0
        theta = {k: psums[k - 1] + adjoined for k in range(1, bound + 1)}
        out.append(CurveData(d, g, counts, cp, theta))
    return out
