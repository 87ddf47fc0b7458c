"""Exact symmetric functions and the graded ring Lambda((z)).

Elements are finite rational linear combinations of basis elements
indexed by partitions, either plain (SymFunc, with a hard arity cutoff)
or z-graded (GradedElement, with a declared (z_min, z_max, max_arity)
window).  All computation happens in the power-sum basis, where the
product is concatenation of indexing partitions and plethysm is the
substitution p_m -> p_{nm}, z -> z^n.  Other bases exist only at the
boundary, through convert_basis.

Truncation contract: windows are declared up front; arithmetic on two
graded elements uses the intersection window and never widens a
declared window.  Plethystic operations rely on the weight bound
w(z^k p_mu) = k + |mu| >= 1 per monomial of the inner argument, which
makes truncation lossless; inner arguments violating it are rejected.

Coefficients are fractions.Fraction throughout; no floating point.
"""

from collections import namedtuple
from fractions import Fraction
from functools import cache

from .partitions import (
    as_partition,
    character,
    conjugate,
    kostka,
    mobius,
    partitions,
    zee,
)

POWER = "power"
SCHUR = "schur"
COMPLETE = "complete"
ELEMENTARY = "elementary"
MONOMIAL = "monomial"
BASES = (POWER, SCHUR, COMPLETE, ELEMENTARY, MONOMIAL)

Window = namedtuple("Window", "z_min z_max max_arity")


class PlethysmDomain(ValueError):
    """Inner argument of a plethystic operation has a forbidden monomial."""


def intersect(w1, w2):
    """Returns the intersection of two windows."""
    return Window(max(w1.z_min, w2.z_min), min(w1.z_max, w2.z_max),
                  min(w1.max_arity, w2.max_arity))


def _check_window(w):
    if w.z_min > w.z_max or w.max_arity < 0:
        raise ValueError("empty window %r" % (w,))
    return w


# ---------------------------------------------------------------------------
# basis change tables, all per-partition and cached

@cache
def _schur_to_power(lam):
    n = sum(lam)
    out = {}
    for rho in partitions(n):
        c = character(lam, rho)
        if c:
            out[rho] = Fraction(c, zee(rho))
    return out


@cache
def _power_to_schur(rho):
    n = sum(rho)
    return {lam: character(lam, rho) for lam in partitions(n)
            if character(lam, rho)}


def _mul_plain(a, b):
    # product of two z-free power-basis dicts, no truncation
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mu = tuple(sorted(m1 + m2, reverse=True))
            v = out.get(mu, 0) + c1 * c2
            if v:
                out[mu] = v
            else:
                out.pop(mu, None)
    return out


@cache
def _hom_to_power(n, sign):
    # h_n (sign=1) or e_n (sign=-1) in the power basis
    out = {}
    for rho in partitions(n):
        eps = 1 if sign == 1 else (-1) ** (n - len(rho))
        out[rho] = Fraction(eps, zee(rho))
    return out


@cache
def _prod_to_power(basis, mu):
    # h_mu or e_mu in the power basis
    sign = 1 if basis == COMPLETE else -1
    acc = {(): Fraction(1)}
    for part in mu:
        acc = _mul_plain(acc, _hom_to_power(part, sign))
    return acc


@cache
def _power_to_prod(n, basis):
    # per-weight inverse: p_rho as a combination of h_mu resp. e_mu
    parts = partitions(n)
    idx = {mu: i for i, mu in enumerate(parts)}
    k = len(parts)
    # rows: h_mu in power coordinates; augment with identity and eliminate
    a = [[Fraction(0)] * k for _ in range(k)]
    for i, mu in enumerate(parts):
        for rho, c in _prod_to_power(basis, mu).items():
            a[i][idx[rho]] = c
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(k)]
           for i in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for r in range(k):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    # inv maps power coordinates to prod-basis coordinates: column rho of
    # the h->p matrix inverse gives p_rho in h_mu's
    out = {}
    for j, rho in enumerate(parts):
        out[rho] = {parts[i]: inv[j][i] for i in range(k) if inv[j][i]}
    # out[rho][mu] solves sum_mu out[rho][mu] * h_mu = p_rho; verify shape
    return out


@cache
def _kostka_row(lam):
    n = sum(lam)
    return {mu: kostka(lam, mu) for mu in partitions(n) if kostka(lam, mu)}


@cache
def _inverse_kostka(n):
    # m_mu in the Schur basis, per weight.  From s_mu = m_mu +
    # sum_{nu below mu} K_{mu nu} m_nu, so m_mu = s_mu - sum K_{mu nu} m_nu
    # where nu runs over partitions strictly dominated by mu; dominance is
    # refined by the reverse-lex order of partitions(), so a single sweep
    # from the lex-smallest partition upward resolves every dependency.
    parts = partitions(n)
    out = {}
    for i in range(len(parts) - 1, -1, -1):
        mu = parts[i]
        row = {mu: Fraction(1)}
        for nu in parts[i + 1:]:
            c = kostka(mu, nu)
            if not c:
                continue
            for sig, d in out[nu].items():
                v = row.get(sig, 0) - c * d
                if v:
                    row[sig] = v
                else:
                    row.pop(sig, None)
        out[mu] = row
    return out


@cache
def _monomial_to_power(mu):
    out = {}
    for lam, c in _inverse_kostka(sum(mu))[mu].items():
        for rho, d in _schur_to_power(lam).items():
            v = out.get(rho, 0) + c * d
            if v:
                out[rho] = v
            else:
                out.pop(rho, None)
    return out


@cache
def _power_to_monomial(rho):
    out = {}
    for lam, c in _power_to_schur(rho).items():
        for mu, k in _kostka_row(lam).items():
            v = out.get(mu, 0) + c * k
            if v:
                out[mu] = v
            else:
                out.pop(mu, None)
    return out


@cache
def _to_power(basis, lam):
    """Returns the single basis element as a power-basis dict."""
    if basis == POWER:
        return {lam: Fraction(1)}
    if basis == SCHUR:
        return _schur_to_power(lam)
    if basis in (COMPLETE, ELEMENTARY):
        return _prod_to_power(basis, lam)
    if basis == MONOMIAL:
        return _monomial_to_power(lam)
    raise ValueError("unknown basis %r" % (basis,))


@cache
def _from_power(basis, rho):
    """Returns the single p_rho expanded in the target basis."""
    if basis == POWER:
        return {rho: Fraction(1)}
    if basis == SCHUR:
        return {lam: Fraction(c) for lam, c in _power_to_schur(rho).items()}
    if basis in (COMPLETE, ELEMENTARY):
        return _power_to_prod(sum(rho), basis)[rho]
    if basis == MONOMIAL:
        return {mu: Fraction(c) for mu, c in _power_to_monomial(rho).items()}
    raise ValueError("unknown basis %r" % (basis,))


def _change(terms, src, dst, graded):
    if src == dst:
        return dict(terms)
    out = {}
    for key, c in terms.items():
        lam = key[1] if graded else key
        mid = _to_power(src, lam) if src != POWER else {lam: Fraction(1)}
        for rho, d in mid.items():
            if dst == POWER:
                sub = {rho: Fraction(1)}
            else:
                sub = _from_power(dst, rho)
            for nu, f in sub.items():
                k2 = (key[0], nu) if graded else nu
                v = out.get(k2, 0) + c * d * f
                if v:
                    out[k2] = v
                else:
                    out.pop(k2, None)
    return out


# ---------------------------------------------------------------------------
# the two element types

class SymFunc:
    """A symmetric function: basis tag, partition -> Fraction, arity cutoff.

    Treat instances as immutable.
    """

    __slots__ = ("basis", "terms", "max_arity")

    def __init__(self, basis, terms, max_arity):
        if basis not in BASES:
            raise ValueError("unknown basis %r" % (basis,))
        if max_arity < 0:
            raise ValueError("max_arity must be >= 0")
        self.basis = basis
        self.max_arity = int(max_arity)
        norm = {}
        for lam, c in terms.items():
            lam = as_partition(lam)
            if sum(lam) > max_arity:
                continue
            c = Fraction(c)
            if c:
                v = norm.get(lam, 0) + c
                if v:
                    norm[lam] = v
                else:
                    norm.pop(lam, None)
        self.terms = norm

    def coefficient(self, lam):
        """Returns the coefficient of the basis element indexed by lam."""
        return self.terms.get(as_partition(lam), Fraction(0))

    def in_basis(self, target):
        return convert_basis(self, target)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = sym_const(other, self.max_arity)
        if not isinstance(other, SymFunc):
            return NotImplemented
        if self.max_arity != other.max_arity:
            return False
        return (_change(self.terms, self.basis, POWER, False)
                == _change(other.terms, other.basis, POWER, False))

    def __hash__(self):
        raise TypeError("SymFunc is not hashable")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = sym_const(other, self.max_arity)
        if not isinstance(other, SymFunc):
            return NotImplemented
        o = convert_basis(other, self.basis)
        out = dict(self.terms)
        for lam, c in o.terms.items():
            v = out.get(lam, 0) + c
            if v:
                out[lam] = v
            else:
                out.pop(lam, None)
        return SymFunc(self.basis, out, min(self.max_arity, o.max_arity))

    __radd__ = __add__

    def __neg__(self):
        return SymFunc(self.basis, {k: -c for k, c in self.terms.items()},
                       self.max_arity)

    def __sub__(self, other):
        return self + (-other if isinstance(other, SymFunc) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + Fraction(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymFunc(self.basis,
                           {k: c * other for k, c in self.terms.items()},
                           self.max_arity)
        if not isinstance(other, SymFunc):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        if not self.terms:
            return "<SymFunc 0 (%s, arity<=%d)>" % (self.basis, self.max_arity)
        bits = []
        for lam in sorted(self.terms, key=lambda t: (sum(t), t)):
            bits.append("%s*%s%s" % (self.terms[lam], self.basis[0], list(lam)))
        return "<SymFunc " + " + ".join(bits) + ">"

    def to_json(self):
        """Returns the stable JSON shape for this element."""
        rows = []
        for lam in sorted(self.terms, key=lambda t: (sum(t), t)):
            c = self.terms[lam]
            rows.append({"z": 0, "partition": list(lam),
                         "num": str(c.numerator), "den": str(c.denominator)})
        return {"basis": self.basis, "max_arity": self.max_arity, "terms": rows}

    @classmethod
    def from_json(cls, data):
        terms = {}
        for row in data["terms"]:
            if row.get("z", 0) != 0:
                raise ValueError("SymFunc terms must have z = 0")
            lam = as_partition(row["partition"])
            terms[lam] = terms.get(lam, 0) + Fraction(int(row["num"]),
                                                      int(row["den"]))
        return cls(data["basis"], terms, data["max_arity"])


class GradedElement:
    """An element of truncated Lambda((z)): (z_exp, partition) -> Fraction.

    The window (z_min, z_max, max_arity) is declared at construction and
    all arithmetic trims to it; combining two elements intersects their
    windows.  Treat instances as immutable.
    """

    __slots__ = ("basis", "terms", "window")

    def __init__(self, basis, terms, window):
        if basis not in BASES:
            raise ValueError("unknown basis %r" % (basis,))
        self.basis = basis
        self.window = _check_window(Window(*window))
        norm = {}
        for (k, lam), c in terms.items():
            lam = as_partition(lam)
            if not (self.window.z_min <= k <= self.window.z_max):
                continue
            if sum(lam) > self.window.max_arity:
                continue
            c = Fraction(c)
            if c:
                key = (int(k), lam)
                v = norm.get(key, 0) + c
                if v:
                    norm[key] = v
                else:
                    norm.pop(key, None)
        self.terms = norm

    def coefficient(self, z_exp, lam):
        """Returns the coefficient of z^z_exp times the basis element lam."""
        return self.terms.get((z_exp, as_partition(lam)), Fraction(0))

    def z_series(self, lam):
        """Returns the z-coefficient list of the lam slot, z_min..z_max."""
        lam = as_partition(lam)
        return [self.terms.get((k, lam), Fraction(0))
                for k in range(self.window.z_min, self.window.z_max + 1)]

    def in_basis(self, target):
        return convert_basis(self, target)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        if self.window != other.window:
            return False
        return (_change(self.terms, self.basis, POWER, True)
                == _change(other.terms, other.basis, POWER, True))

    def __hash__(self):
        raise TypeError("GradedElement is not hashable")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = graded_const(other, self.window)
        if isinstance(other, SymFunc):
            other = embed(other, self.window)
        if not isinstance(other, GradedElement):
            return NotImplemented
        o = convert_basis(other, self.basis)
        w = _check_window(intersect(self.window, o.window))
        out = dict(self.terms)
        for key, c in o.terms.items():
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return GradedElement(self.basis, out, w)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.basis,
                             {k: -c for k, c in self.terms.items()},
                             self.window)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GradedElement(self.basis,
                                 {k: c * other for k, c in self.terms.items()},
                                 self.window)
        if isinstance(other, SymFunc):
            other = embed(other, self.window)
        if not isinstance(other, GradedElement):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        n = len(self.terms)
        return "<GradedElement %d terms (%s, window %r)>" % (
            n, self.basis, tuple(self.window))

    def to_json(self):
        """Returns the stable JSON shape for this element."""
        rows = []
        for k, lam in sorted(self.terms, key=lambda t: (t[0], sum(t[1]), t[1])):
            c = self.terms[(k, lam)]
            rows.append({"z": k, "partition": list(lam),
                         "num": str(c.numerator), "den": str(c.denominator)})
        return {"basis": self.basis, "window": list(self.window), "terms": rows}

    @classmethod
    def from_json(cls, data):
        terms = {}
        for row in data["terms"]:
            key = (int(row["z"]), as_partition(row["partition"]))
            terms[key] = terms.get(key, 0) + Fraction(int(row["num"]),
                                                      int(row["den"]))
        return cls(data["basis"], terms, Window(*data["window"]))


# ---------------------------------------------------------------------------
# constructors

def sym(basis, terms, max_arity):
    return SymFunc(basis, terms, max_arity)


def sym_const(c, max_arity=0):
    return SymFunc(POWER, {(): Fraction(c)}, max_arity)


def one(max_arity=0):
    return sym_const(1, max_arity)


def p(n, max_arity=None):
    """Returns the power sum p_n."""
    return SymFunc(POWER, {(n,): Fraction(1)},
                   n if max_arity is None else max_arity)


def h(n, max_arity=None):
    """Returns the complete homogeneous h_n."""
    return SymFunc(COMPLETE, {((n,) if n else ()): Fraction(1)},
                   n if max_arity is None else max_arity)


def e(n, max_arity=None):
    """Returns the elementary e_n."""
    return SymFunc(ELEMENTARY, {((n,) if n else ()): Fraction(1)},
                   n if max_arity is None else max_arity)


def s(lam, max_arity=None):
    """Returns the Schur function s_lam."""
    lam = as_partition(lam)
    return SymFunc(SCHUR, {lam: Fraction(1)},
                   sum(lam) if max_arity is None else max_arity)


def m(lam, max_arity=None):
    """Returns the monomial symmetric function m_lam."""
    lam = as_partition(lam)
    return SymFunc(MONOMIAL, {lam: Fraction(1)},
                   sum(lam) if max_arity is None else max_arity)


def graded(basis, terms, window):
    return GradedElement(basis, terms, window)


def graded_const(c, window):
    return GradedElement(POWER, {(0, ()): Fraction(c)}, window)


def graded_zero(window):
    return GradedElement(POWER, {}, window)


def z_pow(k, window):
    """Returns the graded element z^k."""
    return GradedElement(POWER, {(k, ()): Fraction(1)}, window)


def embed(f, window, z_exp=0):
    """Returns f placed in the z^z_exp slot of a graded element."""
    return GradedElement(f.basis,
                         {(z_exp, lam): c for lam, c in f.terms.items()},
                         window)


# ---------------------------------------------------------------------------
# ring operations

def convert_basis(f, target):
    """Returns the same element expressed in the target basis."""
    if target not in BASES:
        raise ValueError("unknown basis %r" % (target,))
    if isinstance(f, SymFunc):
        return SymFunc(target, _change(f.terms, f.basis, target, False),
                       f.max_arity)
    return GradedElement(target, _change(f.terms, f.basis, target, True),
                         f.window)


@cache
def _merge(m1, m2):
    return tuple(sorted(m1 + m2, reverse=True))


def _mul_graded(a, b, z_max, max_arity, z_floor=None):
    # power-basis graded dicts; trims z above z_max and arity above
    # max_arity; z below z_floor is kept unless a floor is given
    if len(a) > len(b):
        a, b = b, a
    bitems = [(k, mu, sum(mu), c) for (k, mu), c in b.items()]
    out = {}
    for (k1, m1), c1 in a.items():
        w1 = sum(m1)
        for k2, m2, w2, c2 in bitems:
            k = k1 + k2
            if k > z_max or w1 + w2 > max_arity:
                continue
            if z_floor is not None and k < z_floor:
                continue
            key = (k, _merge(m1, m2))
            v = out.get(key, 0) + c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def multiply(f, g):
    """Returns the product, computed in the power-sum basis."""
    if isinstance(f, SymFunc) and isinstance(g, SymFunc):
        arity = min(f.max_arity, g.max_arity)
        a = _change(f.terms, f.basis, POWER, False)
        b = _change(g.terms, g.basis, POWER, False)
        ga = {(0, mu): c for mu, c in a.items()}
        gb = {(0, mu): c for mu, c in b.items()}
        prod = _mul_graded(ga, gb, 0, arity)
        out = {mu: c for (_, mu), c in prod.items()}
        return convert_basis(SymFunc(POWER, out, arity), f.basis)
    if isinstance(f, SymFunc):
        f = embed(f, g.window)
    if isinstance(g, SymFunc):
        g = embed(g, f.window)
    w = _check_window(intersect(f.window, g.window))
    a = _change(f.terms, f.basis, POWER, True)
    b = _change(g.terms, g.basis, POWER, True)
    prod = _mul_graded(a, b, w.z_max, w.max_arity, z_floor=w.z_min)
    return convert_basis(GradedElement(POWER, prod, w), f.basis)


def omega(f):
    """Returns the image under the involution sending e_n to h_n."""
    graded_el = isinstance(f, GradedElement)
    terms = _change(f.terms, f.basis, POWER, graded_el)
    out = {}
    for key, c in terms.items():
        mu = key[1] if graded_el else key
        out[key] = c * (-1) ** (sum(mu) - len(mu))
    if graded_el:
        return convert_basis(GradedElement(POWER, out, f.window), f.basis)
    return convert_basis(SymFunc(POWER, out, f.max_arity), f.basis)


def inner_product(f, g):
    """Returns the Hall inner product; Schur basis is orthonormal."""
    a = _change(f.terms, f.basis, POWER, False)
    b = _change(g.terms, g.basis, POWER, False)
    acc = Fraction(0)
    for rho, c in a.items():
        d = b.get(rho)
        if d:
            acc += c * d * zee(rho)
    return acc


def _p_perp(n, terms):
    # adjoint of multiplication by p_n: n * d/dp_n
    out = {}
    for mu, c in terms.items():
        cnt = mu.count(n)
        if not cnt:
            continue
        i = mu.index(n)
        nu = mu[:i] + mu[i + 1:]
        v = out.get(nu, 0) + c * n * cnt
        if v:
            out[nu] = v
        else:
            out.pop(nu, None)
    return out


def skew(f, by):
    """Returns s_by-perp applied to f (adjoint of multiplication by s_by)."""
    by = as_partition(by)
    terms = _change(f.terms, f.basis, POWER, False)
    out = {}
    for rho, c in _schur_to_power(by).items():
        cur = terms
        for part in rho:
            cur = _p_perp(part, cur)
            if not cur:
                break
        for mu, d in cur.items():
            v = out.get(mu, 0) + c * d
            if v:
                out[mu] = v
            else:
                out.pop(mu, None)
    return convert_basis(SymFunc(POWER, out, f.max_arity), f.basis)


# ---------------------------------------------------------------------------
# plethysm and the plethystic exponential / logarithm

def _as_graded_power(g):
    if isinstance(g, SymFunc):
        gt = _change(g.terms, g.basis, POWER, False)
        return ({(0, mu): c for mu, c in gt.items()},
                Window(0, 0, g.max_arity), True)
    return (_change(g.terms, g.basis, POWER, True), g.window, False)


def _domain_check(terms):
    for (k, mu) in terms:
        if k < 1 and not mu:
            raise PlethysmDomain("constant term z^%d is not allowed" % k)
        if k + sum(mu) < 1:
            raise PlethysmDomain(
                "monomial with z-exponent %d and arity %d has weight < 1;"
                " truncation would be lossy" % (k, sum(mu)))


def _adams_terms(n, terms, z_max, max_arity):
    out = {}
    for (k, mu), c in terms.items():
        k2 = n * k
        if k2 > z_max:
            continue
        if n * sum(mu) > max_arity:
            continue
        out[(k2, tuple(q * n for q in mu))] = c
    return out


def _neg_depth(terms):
    lo = min((k for (k, mu) in terms), default=0)
    return max(0, -lo)


def _adams_cutoff(terms, z_hi, max_arity):
    best = 0
    for (k, mu) in terms:
        w = sum(mu)
        if w:
            n = max_arity // w
            if k > 0:
                n = max(n, 0)
        else:
            n = z_hi // k if k > 0 else 0
        best = max(best, n)
    return best


def adams(n, g):
    """Returns the Adams operation psi_n(g) = p_n o g."""
    if n < 1:
        raise ValueError("adams index must be >= 1")
    if isinstance(g, SymFunc):
        gt = _change(g.terms, g.basis, POWER, False)
        out = {tuple(q * n for q in mu): c for mu, c in gt.items()
               if n * sum(mu) <= g.max_arity}
        return convert_basis(SymFunc(POWER, out, g.max_arity), g.basis)
    gt = _change(g.terms, g.basis, POWER, True)
    out = {}
    for (k, mu), c in gt.items():
        key = (n * k, tuple(q * n for q in mu))
        if g.window.z_min <= key[0] <= g.window.z_max and \
                sum(key[1]) <= g.window.max_arity:
            out[key] = c
    return convert_basis(GradedElement(POWER, out, g.window), g.basis)


def plethysm(f, g):
    """Returns f o g; f is plain, g may be plain or graded."""
    gt, w, plain = _as_graded_power(g)
    _domain_check(gt)
    neg = _neg_depth(gt)
    z_hi = w.z_max + neg * w.max_arity
    ft = _change(f.terms, f.basis, POWER, False)
    psi = {}

    def psi_n(n):
        if n not in psi:
            psi[n] = _adams_terms(n, gt, z_hi, w.max_arity)
        return psi[n]

    out = {}
    for rho, c in ft.items():
        cur = {(0, ()): Fraction(1)}
        for part in rho:
            cur = _mul_graded(cur, psi_n(part), z_hi, w.max_arity)
            if not cur:
                break
        for key, d in cur.items():
            v = out.get(key, 0) + c * d
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    if plain:
        flat = {mu: c for (k, mu), c in out.items() if k == 0}
        return convert_basis(SymFunc(POWER, flat, w.max_arity), f.basis)
    return convert_basis(GradedElement(POWER, out, w),
                         g.basis if isinstance(g, GradedElement) else f.basis)


def pleth_exp(x):
    """Returns Exp(x) = (sum_r h_r) o x for x with no constant term.

    Computed as the ordinary exponential of u = sum_k psi_k(x)/k, which
    agrees with the plethystic definition and needs only one exp series.
    """
    xt, w, plain = _as_graded_power(x)
    _domain_check(xt)
    neg = _neg_depth(xt)
    z_hi = w.z_max + neg * w.max_arity
    cutoff = _adams_cutoff(xt, z_hi, w.max_arity)
    u = {}
    for n in range(1, cutoff + 1):
        for key, c in _adams_terms(n, xt, z_hi, w.max_arity).items():
            v = u.get(key, 0) + c / n
            if v:
                u[key] = v
            else:
                u.pop(key, None)
    out = {(0, ()): Fraction(1)}
    term = {(0, ()): Fraction(1)}
    mfac = 0
    while term:
        mfac += 1
        term = _mul_graded(term, u, z_hi, w.max_arity)
        term = {k: c / mfac for k, c in term.items()}
        for key, c in term.items():
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    if plain:
        flat = {mu: c for (k, mu), c in out.items() if k == 0}
        return convert_basis(SymFunc(POWER, flat, w.max_arity), x.basis)
    return convert_basis(GradedElement(POWER, out, w), x.basis)


def pleth_log(y):
    """Returns Log(y) for y = 1 + x with x as in pleth_exp; inverse of Exp.

    Computed as sum_k mu(k)/k * log(1 + psi_k(x)) with ordinary log series.
    """
    yt, w, plain = _as_graded_power(y)
    c0 = yt.pop((0, ()), Fraction(0))
    if c0 != 1:
        raise PlethysmDomain("constant term must be 1, found %s" % c0)
    _domain_check(yt)
    neg = _neg_depth(yt)
    z_hi = w.z_max + neg * w.max_arity
    cutoff = max(1, _adams_cutoff(yt, z_hi, w.max_arity))
    out = {}
    for k in range(1, cutoff + 1):
        mk = mobius(k)
        if not mk:
            continue
        v = _adams_terms(k, yt, z_hi, w.max_arity)
        if not v:
            continue
        term = dict(v)
        msign = 1
        mdeg = 1
        while term:
            c = Fraction(mk * msign, k * mdeg)
            for key, d in term.items():
                val = out.get(key, 0) + c * d
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
            term = _mul_graded(term, v, z_hi, w.max_arity)
            msign = -msign
            mdeg += 1
    if plain:
        flat = {mu: c for (k, mu), c in out.items() if k == 0}
        return convert_basis(SymFunc(POWER, flat, w.max_arity), y.basis)
    return convert_basis(GradedElement(POWER, out, w), y.basis)
