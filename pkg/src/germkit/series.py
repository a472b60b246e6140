"""Truncated formal power series under composition.

A series a1*z + a2*z**2 + ... + aN*z**N with zero constant term is the basic
object: composition makes these a semigroup, the ones with a1 != 0 form a
group, and the tangent-to-identity ones (a1 = 1) a subgroup. Everything is
truncated to a fixed order N; coefficient j of a composition only depends on
coefficients 1..j of the operands, so truncation is consistent.

Coefficients live in exactly one of two carriers per series:

* exact mode: Gaussian rationals (``QQi``, pairs of rationals in lowest
  terms), equality decidable, arithmetic exact;
* approximate mode: complex binary64.

Modes never mix inside one series or one operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

from .errors import (
    ModeMismatchError,
    NotInvertibleError,
    OrderMismatchError,
    ZeroSeriesError,
)

Rational = Union[int, str, mpq]


def _q(x) -> mpq:
    """Coerce ints, 'p/q' strings, Fractions and mpq to a canonical mpq."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, str):
        return mpq(x)
    if isinstance(x, int):
        return mpq(x)
    num = getattr(x, "numerator", None)
    if num is not None:
        return mpq(num, x.denominator)
    raise TypeError(f"not a rational value: {x!r}")


class QQi:
    """Gaussian rational a + b*i with exact rational parts.

    Wraps a pair of gmpy2 rationals; supports field arithmetic, integer
    powers, conjugation and exact equality. Instances are immutable and
    hashable so coefficient tuples can key hash buckets.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    def __setattr__(self, name, value):
        raise AttributeError("QQi is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def parse(cls, re: Rational, im: Rational = 0) -> "QQi":
        return cls(re, im)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QQi):
            return other
        if isinstance(other, (int, mpq)):
            return QQi(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ar, ai, br, bi = self.re, self.im, o.re, o.im
        return QQi(ar * br - ai * bi, ar * bi + ai * br)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n2 = o.re * o.re + o.im * o.im
        if n2 == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        ar, ai, br, bi = self.re, self.im, o.re, -o.im
        return QQi((ar * br - ai * bi) / n2, (ar * bi + ai * br) / n2)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (QQi(1) / self) ** (-n)
        result = QQi(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def norm2(self) -> mpq:
        """Squared modulus |a+bi|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    # -- predicates --------------------------------------------------------

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return self.im == 0

    # -- conversions -------------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"QQi({str(self.re)!r})"
        return f"QQi({str(self.re)!r}, {str(self.im)!r})"

    def json_pair(self) -> list:
        """["p/q", "r/s"] with lowest terms and explicit denominators."""
        return [_frac_str(self.re), _frac_str(self.im)]


def _frac_str(q: mpq) -> str:
    return f"{q.numerator}/{q.denominator}"


QQI_ZERO = QQi(0)
QQI_ONE = QQi(1)
QQI_I = QQi(0, 1)


def _as_coeff(value, exact: bool):
    """Coerce one user-supplied coefficient into the series carrier."""
    if exact:
        if isinstance(value, QQi):
            return value
        if isinstance(value, (int, str, mpq)):
            return QQi(value)
        num = getattr(value, "numerator", None)
        if num is not None:
            return QQi(value)
        if isinstance(value, tuple) and len(value) == 2:
            return QQi(value[0], value[1])
        raise ModeMismatchError(f"not an exact coefficient: {value!r}")
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, QQi):
        return complex(value)
    raise ModeMismatchError(f"not an approximate coefficient: {value!r}")


def _infer_exact(values: Sequence) -> bool:
    for v in values:
        if isinstance(v, (complex, float)):
            return False
        if isinstance(v, (QQi, mpq, str)):
            return True
    return True


@dataclass(frozen=True)
class TruncatedSeries:
    """Immutable truncated series; ``coeffs[j-1]`` is the coefficient of z**j."""

    coeffs: tuple
    exact: bool

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coefficients(
        cls, values: Iterable, order: int | None = None, exact: bool | None = None
    ) -> "TruncatedSeries":
        vals = list(values)
        if exact is None:
            exact = _infer_exact(vals)
        if order is None:
            order = len(vals)
        if order < 1:
            raise OrderMismatchError("truncation order must be >= 1")
        if len(vals) > order:
            raise OrderMismatchError(f"{len(vals)} coefficients exceed order {order}")
        zero = QQI_ZERO if exact else 0j
        coeffs = [_as_coeff(v, exact) for v in vals]
        coeffs.extend([zero] * (order - len(coeffs)))
        return cls(tuple(coeffs), exact)

    @classmethod
    def identity(cls, order: int, exact: bool = True) -> "TruncatedSeries":
        return cls.from_coefficients([1], order, exact)

    @classmethod
    def zero(cls, order: int, exact: bool = True) -> "TruncatedSeries":
        return cls.from_coefficients([], order, exact)

    @classmethod
    def monomial(cls, coeff, degree: int, order: int, exact: bool | None = None) -> "TruncatedSeries":
        if not 1 <= degree <= order:
            raise OrderMismatchError(f"degree {degree} outside 1..{order}")
        if exact is None:
            exact = _infer_exact([coeff])
        zero = QQI_ZERO if exact else 0j
        vals = [zero] * degree
        vals[degree - 1] = _as_coeff(coeff, exact)
        return cls.from_coefficients(vals, order, exact)

    # -- basic views -------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "approx"

    def coefficient(self, j: int):
        """Coefficient of z**j, 1-based."""
        if not 1 <= j <= self.order:
            raise OrderMismatchError(f"degree {j} outside 1..{self.order}")
        return self.coeffs[j - 1]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_identity(self) -> bool:
        return bool(self.coeffs[0] == self._one()) and not any(self.coeffs[1:])

    def _zero(self):
        return QQI_ZERO if self.exact else 0j

    def _one(self):
        return QQI_ONE if self.exact else 1 + 0j

    def valuation(self) -> int:
        """Index of the first nonzero coefficient; errors on the zero series."""
        for j, c in enumerate(self.coeffs, start=1):
            if c:
                return j
        raise ZeroSeriesError("valuation of the zero series is undefined")

    # -- order / mode plumbing ----------------------------------------------

    def pad_to(self, order: int) -> "TruncatedSeries":
        if order < self.order:
            raise OrderMismatchError(f"pad_to({order}) below current order {self.order}")
        return TruncatedSeries(self.coeffs + (self._zero(),) * (order - self.order), self.exact)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order < 1:
            raise OrderMismatchError("truncation order must be >= 1")
        if order >= self.order:
            return self.pad_to(order)
        return TruncatedSeries(self.coeffs[:order], self.exact)

    def to_approx(self) -> "TruncatedSeries":
        if not self.exact:
            return self
        return TruncatedSeries(tuple(complex(c) for c in self.coeffs), False)

    def _check_compatible(self, other: "TruncatedSeries"):
        if self.order != other.order:
            raise OrderMismatchError(
                f"orders differ ({self.order} vs {other.order}); pad or truncate first"
            )
        if self.exact != other.exact:
            raise ModeMismatchError("cannot mix exact and approximate series")

    # -- linear structure (ambient algebra, used by normal forms) -----------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.exact
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.exact
        )

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self.coeffs), self.exact)

    def scale(self, factor) -> "TruncatedSeries":
        f = _as_coeff(factor, self.exact)
        return TruncatedSeries(tuple(f * a for a in self.coeffs), self.exact)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Truncated product in the ambient algebra (both factors have no constant term)."""
        self._check_compatible(other)
        return TruncatedSeries(
            tuple(_mul_trunc(self.coeffs, other.coeffs, self.order, self._zero())),
            self.exact,
        )

    # -- evaluation ---------------------------------------------------------

    def eval(self, z: complex) -> complex:
        """Numeric Horner evaluation (approximate, for diagnostics only)."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = (acc + complex(c)) * z
        return acc

    def __repr__(self):
        shown = ", ".join(repr(c) for c in self.coeffs[:4])
        tail = ", ..." if self.order > 4 else ""
        return f"TruncatedSeries([{shown}{tail}], order={self.order}, mode={self.mode})"


def _mul_trunc(a: Sequence, b: Sequence, order: int, zero) -> list:
    """Coefficients of (a*b) truncated to ``order``; skips zero terms."""
    out = [zero] * order
    for i, ai in enumerate(a, start=1):
        if not ai:
            continue
        if i + 1 > order:
            break
        for j, bj in enumerate(b, start=1):
            k = i + j
            if k > order:
                break
            if not bj:
                continue
            out[k - 1] = out[k - 1] + ai * bj
    return out


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Substitution f(g(z)) truncated to the common order.

    Triangular: coefficient j of the result depends only on coefficients 1..j
    of f and g, because g has no constant term and g**i has valuation >= i.
    """
    f._check_compatible(g)
    if f.is_zero() or g.is_zero():
        raise ZeroSeriesError("composition with the zero series is undefined")
    order = f.order
    zero = f._zero()
    top = 0
    for i, c in enumerate(f.coeffs, start=1):
        if c:
            top = i
    acc = [zero] * order
    power = list(g.coeffs)
    for i in range(1, top + 1):
        ai = f.coeffs[i - 1]
        if ai:
            for j, pj in enumerate(power):
                if pj:
                    acc[j] = acc[j] + ai * pj
        if i < top:
            power = _mul_trunc(power, g.coeffs, order, zero)
    return TruncatedSeries(tuple(acc), f.exact)


def invert(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse by triangular coefficient recursion.

    Coefficient j of g solves the order-j equation of compose(f, g) = z;
    powers of g are maintained incrementally so the whole run is O(N^3).
    """
    a = f.coeffs
    order = f.order
    if not a[0]:
        raise NotInvertibleError("linear coefficient is zero; no compositional inverse")
    zero, one = f._zero(), f._one()
    a1 = a[0]
    g = [zero] * order
    g[0] = one / a1
    # pw[i][n] holds [g^i]_n (1-based degrees); column n is filled once g_n is known.
    pw = [None] + [[zero] * (order + 1) for _ in range(order)]
    pw[1][1] = g[0]
    for j in range(2, order + 1):
        col = [zero] * (j + 1)
        for i in range(2, j + 1):
            s = zero
            prev = pw[i - 1]
            for t in range(1, j - i + 2):
                gt = g[t - 1]
                if gt and prev[j - t]:
                    s = s + gt * prev[j - t]
            col[i] = s
        s = zero
        for i in range(2, j + 1):
            ai = a[i - 1]
            if ai and col[i]:
                s = s + ai * col[i]
        g[j - 1] = -s / a1
        pw[1][j] = g[j - 1]
        for i in range(2, j + 1):
            pw[i][j] = col[i]
    return TruncatedSeries(tuple(g), f.exact)


def iterate(f: TruncatedSeries, n: int) -> TruncatedSeries:
    """n-fold self-composition via binary powering; n = 0 gives the identity.

    Truncation commutes with composition on constant-free series, so the
    binary scheme agrees with left-to-right iteration coefficientwise.
    """
    if n < 0:
        raise OrderMismatchError("iterate exponent must be >= 0")
    if f.is_zero():
        raise ZeroSeriesError("iteration of the zero series is undefined")
    result = TruncatedSeries.identity(f.order, f.exact)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def valuation(f: TruncatedSeries) -> int:
    return f.valuation()
