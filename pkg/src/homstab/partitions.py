"""Integer partitions and the combinatorics built on them.

A partition is a tuple of weakly decreasing positive integers; () is the
empty partition.  Everything here treats partitions as immutable values,
so all functions are safe to cache and to share across workers.
"""

from functools import cache
from math import factorial


def as_partition(parts):
    """Returns parts as a validated partition tuple."""
    lam = tuple(int(p) for p in parts if p != 0)
    if any(p < 0 for p in lam):
        raise ValueError("partition parts must be positive: %r" % (parts,))
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError("partition parts must be weakly decreasing: %r" % (parts,))
    return lam


@cache
def partitions(n, max_part=None):
    """Returns all partitions of n with parts <= max_part, in reverse lex order."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    if max_part is None or max_part > n:
        max_part = n
    out = []
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def box_partitions(max_length, max_part):
    """Returns all partitions fitting in a max_length x max_part box."""
    out = []
    for n in range(max_length * max_part + 1):
        for lam in partitions(n, max_part):
            if len(lam) <= max_length:
                out.append(lam)
    return tuple(out)


def conjugate(lam):
    """Returns the conjugate (transposed) partition."""
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def zee(rho):
    """Returns the centralizer order z_rho = prod i^{m_i} m_i!."""
    z = 1
    i = 0
    while i < len(rho):
        j = i
        while j < len(rho) and rho[j] == rho[i]:
            j += 1
        z *= rho[i] ** (j - i) * factorial(j - i)
        i = j
    return z


@cache
def character(lam, rho):
    """Returns the symmetric group character chi^lam at cycle type rho.

    Murnaghan-Nakayama recursion on the first-column hook lengths (beta
    numbers): removing a border strip of length r is removing r from one
    beta number, with sign (-1)^{number of beta numbers jumped over}.
    """
    if not rho:
        return 1 if not lam else 0
    r = rho[0]
    rest = rho[1:]
    n = len(lam)
    betas = tuple(lam[i] + (n - 1 - i) for i in range(n))
    present = set(betas)
    total = 0
    for b in betas:
        c = b - r
        if c < 0 or c in present:
            continue
        crossed = sum(1 for x in betas if c < x < b)
        news = sorted((x for x in betas if x != b), reverse=True)
        news.append(c)
        news.sort(reverse=True)
        m = len(news)
        mu = tuple(p for p in (news[i] - (m - 1 - i) for i in range(m)) if p)
        total += (-1) ** crossed * character(mu, rest)
    return total


def _strips_below(lam, size):
    # all nu with lam/nu a horizontal strip of the given size
    rows = len(lam)
    out = []

    def rec(i, left, acc):
        if left < 0:
            return
        if i == rows:
            if left == 0:
                out.append(tuple(p for p in acc if p))
            return
        lo = lam[i + 1] if i + 1 < rows else 0
        for v in range(lam[i], lo - 1, -1):
            rec(i + 1, left - (lam[i] - v), acc + (v,))

    rec(0, size, ())
    return out


@cache
def kostka(lam, mu):
    """Returns the Kostka number: semistandard tableaux of shape lam, content mu."""
    if sum(lam) != sum(mu):
        return 0
    if not mu:
        return 1
    total = 0
    for nu in _strips_below(lam, mu[-1]):
        total += kostka(nu, mu[:-1])
    return total


def even_rows(lam):
    """Returns True iff every part of lam is even."""
    return all(p % 2 == 0 for p in lam)


def even_columns(lam):
    """Returns True iff every column length of lam is even."""
    return even_rows(conjugate(lam))


@cache
def mobius(n):
    """Returns the Moebius function of n >= 1."""
    if n == 1:
        return 1
    m, res = n, 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def divisors(n):
    """Returns the positive divisors of n, ascending."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def necklace(n, q):
    """Returns the necklace number i_n(q) = (1/n) sum_{d|n} mu(n/d) q^d.

    Counts monic irreducible polynomials of degree n over a q-element
    field; q may be any exact scalar (int, Fraction), in which case the
    result is the necklace polynomial evaluated at q.
    """
    acc = 0
    for d in divisors(n):
        acc += mobius(n // d) * q ** d
    if isinstance(acc, int):
        assert acc % n == 0
        return acc // n
    return acc / n
