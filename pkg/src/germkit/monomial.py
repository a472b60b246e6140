"""Exact algebra of monomials u * z**d with a unit coefficient.

The coefficient is a power of one declared generator: either a primitive
q-th root of unity (finite base) or a fixed unit of infinite multiplicative
order. All arithmetic is on integer exponents, so word comparisons are
genuine map equalities, not order-N coincidences.

classify_pair walks the two-generator words in shortlex order and
post-classifies the first value collision: a Levin-shaped collision with a
verified companion identity, a commutation collision resolved through the
shared-iteration search, or a plain exact relation. No collision up to the
bound yields a freeness certificate for that length.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product

from sympy import factorint, n_order, perfect_power

from .errors import BaseMismatchError, InfiniteOrderError, PreconditionError
from .series import QQI_I, QQI_ONE, TruncatedSeries

# unit angle used to embed infinite-order scales numerically
_GENERIC_ANGLE = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class UnitScale:
    """omega**exponent for a declared generator omega.

    ``base_order`` is the multiplicative order of omega (exponents live mod
    base_order) or None for a unit of infinite order (exponents live in Z).
    """

    exponent: int
    base_order: int | None = None

    def __post_init__(self):
        if self.base_order is not None:
            if self.base_order < 1:
                raise PreconditionError(f"base order must be >= 1, got {self.base_order}")
            object.__setattr__(self, "exponent", self.exponent % self.base_order)

    def _check_base(self, other: "UnitScale"):
        if self.base_order != other.base_order:
            raise BaseMismatchError(
                f"cannot combine scales over bases {self.base_order} and {other.base_order}"
            )

    def __mul__(self, other: "UnitScale") -> "UnitScale":
        self._check_base(other)
        return UnitScale(self.exponent + other.exponent, self.base_order)

    def __pow__(self, n: int) -> "UnitScale":
        if self.base_order is None and n < 0:
            raise InfiniteOrderError("negative powers need a finite base order")
        return UnitScale(self.exponent * n, self.base_order)

    def is_one(self) -> bool:
        return self.exponent == 0

    def value(self) -> complex:
        """Numeric value; infinite-order scales use a fixed generic angle."""
        if self.base_order is None:
            return cmath.exp(2j * cmath.pi * _GENERIC_ANGLE * self.exponent)
        return cmath.exp(2j * cmath.pi * self.exponent / self.base_order)

    def exact_value(self):
        """Value as a Gaussian rational, or None when the base is not in {1,2,4}."""
        if self.base_order in (1, 2, 4):
            return QQI_I ** (self.exponent * (4 // self.base_order))
        return None


@dataclass(frozen=True)
class Monomial:
    """u * z**degree with u a UnitScale; composition is substitution."""

    scale: UnitScale
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise PreconditionError(f"monomial degree must be >= 1, got {self.degree}")

    def __mul__(self, other: "Monomial") -> "Monomial":
        """self o other: scales multiply as u1 * u2**d1, degrees multiply."""
        return Monomial(self.scale * other.scale**self.degree, self.degree * other.degree)

    def __pow__(self, n: int) -> "Monomial":
        if n < 0:
            raise PreconditionError("monomials iterate forward only")
        if n == 0:
            return Monomial(UnitScale(0, self.scale.base_order), 1)
        # exponent of the n-th iterate is e * (1 + d + ... + d**(n-1))
        d = self.degree
        geo = n if d == 1 else (d**n - 1) // (d - 1)
        return Monomial(UnitScale(self.scale.exponent * geo, self.scale.base_order), d**n)

    def key(self) -> tuple:
        return (self.scale.exponent, self.degree)

    def to_series(self, order: int, exact: bool | None = None) -> TruncatedSeries:
        """Embed as a truncated series; exact only for bases 1, 2, 4."""
        ev = self.scale.exact_value()
        if exact is None:
            exact = ev is not None
        if exact:
            if ev is None:
                raise InfiniteOrderError(
                    f"base order {self.scale.base_order} has no exact Gaussian-rational value"
                )
            return TruncatedSeries.monomial(ev, self.degree, order, True)
        return TruncatedSeries.monomial(self.scale.value(), self.degree, order, False)


def mono_compose(p: Monomial, q: Monomial) -> Monomial:
    """p o q, exactly."""
    return p * q


# ---------------------------------------------------------------------------
# Deck x Aut splitting


@dataclass(frozen=True)
class DeckAutSplit:
    """Factorization of the scale group against the degree m.

    q_d collects the prime powers of q whose primes divide m (killed by a
    large enough iterate: q_d | m**r); q_a is the coprime rest, on which m
    acts invertibly with multiplicative order s. alpha = r*s and beta = s
    make z**m satisfy: (f**alpha o g) commutes with f**beta for every
    monomial g over the same base.
    """

    q: int
    m: int
    q_d: int
    q_a: int
    r: int
    s: int
    alpha: int
    beta: int


def deck_aut_split(q: int, m: int) -> DeckAutSplit:
    if q is None:
        raise InfiniteOrderError("splitting needs a finite base order")
    if q < 1 or m < 2:
        raise PreconditionError(f"need q >= 1 and m >= 2, got q={q}, m={m}")
    q_d = 1
    r = 0
    for p, k in factorint(q).items():
        if m % p == 0:
            q_d *= p**k
            # minimal r with p**k | m**r, per prime
            r = max(r, -(-k // factorint(m)[p]))
    q_a = q // q_d
    s = 1 if q_a == 1 else int(n_order(m, q_a))
    alpha, beta = r * s, s
    # subgroup orders and the commutation congruence, per construction
    assert q_d * q_a == q and math.gcd(q_d, q_a) == 1
    assert math.gcd(q, m**r) == q_d
    assert math.gcd(q, m**s - 1) == q_a
    assert (m**alpha * (m**beta - 1)) % q == 0
    return DeckAutSplit(q, m, q_d, q_a, r, s, alpha, beta)


# ---------------------------------------------------------------------------
# pair classification


@dataclass(frozen=True)
class LevinPair:
    """f**k o g**l = f**(2k) and g**l o f**k = g**(2l), both exact."""

    k: int
    l: int
    f_side: Monomial
    g_side: Monomial


@dataclass(frozen=True)
class ExactRelation:
    """Two distinct words with the same exact monomial value."""

    w1: str
    w2: str
    value: Monomial


@dataclass(frozen=True)
class FreeAbelianWitness:
    """f and g commute but share no iteration within the bound."""

    search_bound: int
    product: Monomial


@dataclass(frozen=True)
class FreeUpTo:
    """All distinct words to this length take distinct values."""

    max_len: int


PairClass = LevinPair | ExactRelation | FreeAbelianWitness | FreeUpTo


def evaluate_mono_word(word: str, f: Monomial, g: Monomial) -> Monomial:
    """Compose letters left to right; the leftmost letter is outermost."""
    value = None
    for ch in word:
        nxt = f if ch == "F" else g
        value = nxt if value is None else value * nxt
    if value is None:
        raise PreconditionError("empty word")
    return value


def levin_check(f: Monomial, g: Monomial, k: int, l: int) -> bool:
    """Exact verification of f**k o g**l = f**(2k) and g**l o f**k = g**(2l)."""
    f.scale._check_base(g.scale)
    if f.degree < 2 or g.degree < 2:
        raise PreconditionError("Levin identities need degrees >= 2")
    if k < 1 or l < 1:
        raise PreconditionError("Levin exponents must be >= 1")
    fk, gl = f**k, g**l
    return fk * gl == f ** (2 * k) and gl * fk == g ** (2 * l)


def _levin_exponents(wa: str, wb: str) -> tuple[int, int] | None:
    """Match {wa, wb} against {F^k G^l, F^2k} or {G^l F^k, G^2l}."""
    for mixed, power, a, b in ((wa, wb, "F", "G"), (wb, wa, "F", "G"),
                               (wa, wb, "G", "F"), (wb, wa, "G", "F")):
        if not mixed or not power or set(power) != {a}:
            continue
        k = len(mixed) - len(mixed.lstrip(a))
        l = len(mixed) - k
        if k >= 1 and l >= 1 and mixed == a * k + b * l and len(power) == 2 * k:
            return (k, l) if a == "F" else (l, k)
    return None


def _common_base(m: int, k: int) -> tuple[int, int, int] | None:
    """(d, i, j) with m = d**i, k = d**j, d not a perfect power; None if none."""

    def root(n: int) -> tuple[int, int]:
        pp = perfect_power(n)
        return (int(pp[0]), int(pp[1])) if pp else (n, 1)

    bm, im = root(m)
    bk, jk = root(k)
    if bm != bk:
        return None
    return bm, im, jk


def shared_mono_iteration(f: Monomial, g: Monomial, bound: int) -> tuple[int, int] | None:
    """Least (a, b) with f**a = g**b, a <= bound, or None.

    Degrees force a common base d with deg f = d**i, deg g = d**j, so only
    multiples of (j, i)/gcd are candidates; each is checked exactly.
    """
    f.scale._check_base(g.scale)
    cb = _common_base(f.degree, g.degree)
    if cb is None:
        return None
    _, i, j = cb
    d = math.gcd(i, j)
    a0, b0 = j // d, i // d
    for t in range(1, min(bound // a0, bound // b0) + 1):
        a, b = a0 * t, b0 * t
        if f**a == g**b:
            return a, b
    return None


def classify_pair(f: Monomial, g: Monomial, search_bound: int = 10) -> PairClass:
    """Shortlex-first collision, post-classified.

    Precedence is discovery order: the first pair of distinct words with
    equal values decides the verdict. A Levin-shaped pair with a verified
    companion identity reports LevinPair; the commutation pair (GF, FG)
    triggers the shared-iteration search (exact relation if found, free
    abelian witness otherwise); anything else is an exact relation as found.
    """
    f.scale._check_base(g.scale)
    if f.degree < 2 or g.degree < 2:
        raise PreconditionError("classification needs degrees >= 2")
    if search_bound < 1:
        raise PreconditionError("search bound must be >= 1")

    seen: dict[tuple, str] = {}
    for length in range(1, search_bound + 1):
        for letters in product("FG", repeat=length):
            word = "".join(letters)
            value = evaluate_mono_word(word, f, g)
            other = seen.setdefault(value.key(), word)
            if other == word:
                continue
            ex = _levin_exponents(word, other)
            if ex is not None and levin_check(f, g, *ex):
                k, l = ex
                return LevinPair(k, l, f**k * g**l, g**l * f**k)
            if {word, other} == {"FG", "GF"}:
                hit = shared_mono_iteration(f, g, search_bound)
                if hit is not None:
                    a, b = hit
                    return ExactRelation("F" * a, "G" * b, f**a)
                return FreeAbelianWitness(search_bound, value)
            return ExactRelation(word, other, value)
    return FreeUpTo(search_bound)
