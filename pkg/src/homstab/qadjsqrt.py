"""Exact arithmetic in the quadratic field Q(sqrt(q)).

Values of quadratic L-functions at the central point, and unitarized
Frobenius traces, live in Q(sqrt(q)): every number is a + b*sqrt(q) with
rational a, b.  This module models that ring exactly.  When q is a
perfect square the sqrt collapses and the value is stored as a plain
rational (b = 0), so equality never depends on a choice of presentation.

Instances mix freely with int and Fraction on either side of an
operator.  Mixing two different non-square radicands is an error.
"""

from fractions import Fraction

__all__ = ["QAdjSqrt", "sqrt_q"]


def _extract_square(q):
    """Returns (s, q0) with q = s^2 * q0 and q0 squarefree."""
    s, f = 1, 2
    while f * f <= q:
        while q % (f * f) == 0:
            q //= f * f
            s *= f
        f += 1
    return s, q


class QAdjSqrt:
    """An exact number a + b*sqrt(q) with rational a, b and integer q >= 0.

    Treat instances as immutable.
    """

    __slots__ = ("a", "b", "q")

    def __init__(self, a, b=0, q=0):
        a = Fraction(a)
        b = Fraction(b)
        q = int(q)
        if q < 0:
            raise ValueError("radicand must be nonnegative")
        if q == 0:
            b = Fraction(0)
        else:
            # Normalize to a squarefree radicand so equal values have
            # equal presentations; a perfect square folds away entirely.
            s, q = _extract_square(q)
            b = b * s
            if q == 1:
                a, b = a + b, Fraction(0)
        if not b:
            q = 0
        self.a = a
        self.b = b
        self.q = q

    @property
    def rational_part(self):
        return self.a

    @property
    def sqrt_part(self):
        return self.b

    def is_rational(self):
        return not self.b

    def _coerce(self, other):
        if isinstance(other, QAdjSqrt):
            return other
        if isinstance(other, (int, Fraction)):
            return QAdjSqrt(other)
        return None

    def _join(self, other):
        # Radicands must agree unless one side is rational.
        if not self.q or not other.q or self.q == other.q:
            return max(self.q, other.q)
        raise ValueError(
            "cannot mix sqrt(%d) with sqrt(%d)" % (self.q, other.q))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        q = self._join(other)
        return QAdjSqrt(self.a + other.a, self.b + other.b, q)

    __radd__ = __add__

    def __neg__(self):
        return QAdjSqrt(-self.a, -self.b, self.q)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        q = self._join(other)
        a = self.a * other.a + self.b * other.b * q
        b = self.a * other.b + self.b * other.a
        return QAdjSqrt(a, b, q)

    __rmul__ = __mul__

    def inverse(self):
        """Returns 1/self; raises ZeroDivisionError at zero."""
        n = self.a * self.a - self.b * self.b * self.q
        if not n:
            if not self.a:
                raise ZeroDivisionError("division by zero in Q(sqrt(q))")
            # a^2 = b^2 q with a != 0 forces q a perfect square,
            # already folded away at construction.
            raise AssertionError("unreachable: nonzero with zero norm")
        return QAdjSqrt(self.a / n, -self.b / n, self.q)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = QAdjSqrt(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self.a, self.b) == (other.a, other.b) and (
            not self.b or self.q == other.q)

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.q))

    def __bool__(self):
        return bool(self.a or self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * self.q ** 0.5

    def __abs__(self):
        # Exact absolute value: the sign of a + b*sqrt(q) is decidable
        # by comparing a^2 with b^2 q.
        if self >= 0:
            return self
        return -self

    def _compare(self, other):
        # Sign of (self - other): -1, 0, +1.
        diff = self - other
        a, b, q = diff.a, diff.b, diff.q
        if not b:
            return (a > 0) - (a < 0)
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # Opposite signs: compare a^2 against b^2 q; sign follows the
        # dominant term.
        lhs, rhs = a * a, b * b * q
        if lhs == rhs:
            return 0
        big_is_a = lhs > rhs
        return 1 if (big_is_a == (a > 0)) else -1

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._compare(other) < 0

    def __le__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._compare(other) <= 0

    def __gt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._compare(other) > 0

    def __ge__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._compare(other) >= 0

    def __repr__(self):
        if not self.b:
            return "QAdjSqrt(%s)" % (self.a,)
        return "QAdjSqrt(%s, %s, q=%d)" % (self.a, self.b, self.q)

    def __str__(self):
        if not self.b:
            return str(self.a)
        mag = abs(self.b)
        root = "sqrt(%d)" % self.q
        term = root if mag == 1 else "(%s)*%s" % (mag, root)
        if not self.a:
            return term if self.b > 0 else "-" + term
        sign = "+" if self.b > 0 else "-"
        return "%s %s %s" % (self.a, sign, term)


def sqrt_q(q):
    """Returns sqrt(q) as an exact QAdjSqrt."""
    return QAdjSqrt(0, 1, q)
