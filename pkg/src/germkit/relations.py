"""Relation and freeness certificates for two-generator semigroups of
truncated series.

Words are strings over {F, G} with the leftmost letter outermost, so
evaluate_word("FG", f, g) is f o g. Enumeration works on exact series only:
coefficient vectors are hashable there, and a missing collision up to the
bound rules out exact relations of that length conclusively, while a found
collision is an order-N statement, never upgraded to exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ModeMismatchError, PreconditionError, ZeroSeriesError
from .series import TruncatedSeries, compose, iterate


def _require_word(word: str):
    if not word or set(word) - {"F", "G"}:
        raise PreconditionError(f"words are nonempty strings over F/G, got {word!r}")


def evaluate_word(word: str, f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Compose the letters, leftmost outermost."""
    _require_word(word)
    value = None
    for ch in word:
        nxt = f if ch == "F" else g
        value = nxt if value is None else compose(value, nxt)
    return value


@dataclass(frozen=True)
class FreeUpTo:
    """No two distinct words of length <= max_len agree even to order N.

    Conclusive: an exact relation of that length would agree at every order.
    """

    max_len: int
    order: int


@dataclass(frozen=True)
class OrderNRelation:
    """Two words whose values agree to order N (and possibly no further)."""

    w1: str
    w2: str
    order: int
    lhs: TruncatedSeries
    rhs: TruncatedSeries


@dataclass(frozen=True)
class SharedIteration:
    """f**m = g**n to order N."""

    m: int
    n: int
    order: int
    lhs: TruncatedSeries
    rhs: TruncatedSeries


@dataclass(frozen=True)
class Levin:
    """Both identities f^k o g^l = f^2k and g^l o f^k = g^2l, to order N."""

    k: int
    l: int
    order: int
    f_lhs: TruncatedSeries
    f_rhs: TruncatedSeries
    g_lhs: TruncatedSeries
    g_rhs: TruncatedSeries


@dataclass(frozen=True)
class Commute:
    """f o g = g o f to order N."""

    order: int
    lhs: TruncatedSeries
    rhs: TruncatedSeries


RelationCertificate = FreeUpTo | OrderNRelation | SharedIteration | Levin | Commute


def _require_exact(*series: TruncatedSeries):
    for s in series:
        if not s.exact:
            raise ModeMismatchError("relation search needs exact coefficients")
        if s.is_zero():
            raise ZeroSeriesError()


def _window(value: TruncatedSeries, letter: TruncatedSeries) -> TruncatedSeries:
    """Compose inside the truncation window.

    A value whose valuation has escaped past N is the zero truncation; it
    stays zero under further composition instead of tripping the zero guard.
    """
    if value.is_zero():
        return value
    return compose(value, letter)


def _iterate_window(f: TruncatedSeries, n: int) -> TruncatedSeries:
    acc = f
    for _ in range(n - 1):
        acc = _window(acc, f)
    return acc


def find_relations(
    f: TruncatedSeries, g: TruncatedSeries, max_len: int = 8
) -> RelationCertificate:
    """First value collision among all words of length <= max_len.

    Words are visited in shortlex order and values bucketed; the first word
    whose value was already seen is reported against the earlier word. No
    collision yields FreeUpTo. Words whose value vanishes at order N carry
    no order-N information (their whole coefficient window overflowed) and
    are excluded from bucketing; the freeness verdict covers the rest.
    """
    _require_exact(f, g)
    if max_len < 1:
        raise PreconditionError("max_len must be >= 1")
    order = f.order
    values: dict[str, TruncatedSeries] = {"": None}
    seen: dict[TruncatedSeries, str] = {}
    for length in range(1, max_len + 1):
        for letters in product("FG", repeat=length):
            word = "".join(letters)
            prefix = values[word[:-1]]
            letter = f if word[-1] == "F" else g
            value = letter if prefix is None else _window(prefix, letter)
            values[word] = value
            if value.is_zero():
                continue
            other = seen.setdefault(value, word)
            if other != word:
                return OrderNRelation(word, other, order, value, values[other])
    return FreeUpTo(max_len, order)


def shared_iteration(
    f: TruncatedSeries, g: TruncatedSeries, max_m: int = 6, max_n: int = 6
) -> SharedIteration | None:
    """Least (a, b) in lexicographic order with f**a = g**b to order N."""
    _require_exact(f, g)
    if max_m < 1 or max_n < 1:
        raise PreconditionError("iteration bounds must be >= 1")
    g_powers = []
    acc = g
    for _ in range(max_n):
        if acc.is_zero():
            break
        g_powers.append(acc)
        acc = _window(acc, g)
    fa = f
    for a in range(1, max_m + 1):
        if fa.is_zero():
            break
        for b, gb in enumerate(g_powers, start=1):
            if fa == gb:
                return SharedIteration(a, b, f.order, fa, gb)
        if a < max_m:
            fa = _window(fa, f)
    return None


def _equal(f: TruncatedSeries, g: TruncatedSeries, tol: float = 1e-9) -> bool:
    if f.exact != g.exact:
        raise ModeMismatchError("cannot compare exact with approximate series")
    if f.exact:
        return f == g
    scale = 1.0 + max(max(abs(c) for c in f.coeffs), max(abs(c) for c in g.coeffs))
    return all(abs(x - y) <= tol * scale for x, y in zip(f.coeffs, g.coeffs))


def commute_check(f: TruncatedSeries, g: TruncatedSeries) -> bool:
    """f o g = g o f to order N."""
    return _equal(compose(f, g), compose(g, f))


def commute_certificate(f: TruncatedSeries, g: TruncatedSeries) -> Commute | None:
    fg, gf = compose(f, g), compose(g, f)
    return Commute(f.order, fg, gf) if _equal(fg, gf) else None


def _compose_window(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    # valuations multiply, so a zero window on either side stays zero
    if outer.is_zero() or inner.is_zero():
        return TruncatedSeries.zero(outer.order, outer.exact)
    return compose(outer, inner)


def _levin_sides(f: TruncatedSeries, g: TruncatedSeries, k: int, l: int):
    if k < 1 or l < 1:
        raise PreconditionError("Levin exponents must be >= 1")
    f._check_compatible(g)
    fk, gl = _iterate_window(f, k), _iterate_window(g, l)
    return (
        _compose_window(fk, gl),
        _iterate_window(f, 2 * k),
        _compose_window(gl, fk),
        _iterate_window(g, 2 * l),
    )


def levin_verify(f: TruncatedSeries, g: TruncatedSeries, k: int, l: int) -> bool:
    """Check f^k o g^l = f^2k and g^l o f^k = g^2l to order N.

    Truncation-level semantics: each identity is compared coefficientwise
    at order N, including windows that have overflowed to zero.
    """
    f_lhs, f_rhs, g_lhs, g_rhs = _levin_sides(f, g, k, l)
    return _equal(f_lhs, f_rhs) and _equal(g_lhs, g_rhs)


def levin_certificate(
    f: TruncatedSeries, g: TruncatedSeries, k: int, l: int
) -> Levin | None:
    f_lhs, f_rhs, g_lhs, g_rhs = _levin_sides(f, g, k, l)
    if _equal(f_lhs, f_rhs) and _equal(g_lhs, g_rhs):
        return Levin(k, l, f.order, f_lhs, f_rhs, g_lhs, g_rhs)
    return None
