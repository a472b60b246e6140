"""Conjugation normal forms for invertible truncated series.

Three mutually exclusive shapes, dispatched on the linear coefficient a1:

* multiplier not a root of unity: linearize to a1*z (Koenig coordinate);
* valuation m >= 2 (a1 = 0 but the series is nonzero): conjugate to z**m
  (Boettcher coordinate), leading coefficient fixed by the principal root
  tie-break;
* a1 a primitive k-th root of unity: parabolic normal form
  a1*z + b1*z**n + c1*z**(2n-1), where n = valuation(g^k - z), b1 is forced
  by g^k having unit coefficient at z**n, and c1 carries the formal
  invariant c of g^k.

Every result ships its conjugator and is re-verified by direct conjugation
before it is returned.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import iroot, mpq

from .errors import (
    FiniteOrderError,
    NoExactRootError,
    NotRootOfUnityError,
    NotSuperattractingError,
    OrderTooSmallError,
    ResonanceError,
    ZeroMultiplierError,
    ZeroSeriesError,
)
from .series import (
    QQi,
    QQI_I,
    QQI_ONE,
    TruncatedSeries,
    _mul_trunc,
    compose,
    invert,
    iterate,
)

FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class NormalFormResult:
    """Normal form plus the conjugator that realizes it.

    ``conjugate(conjugator, g)`` agrees with ``normal_form`` coefficientwise
    up to ``verified_order`` (exactly in exact mode, to FLOAT_TOL otherwise).
    ``parameters`` holds the kind-specific scalars (multiplier, degree and
    leading coefficient, or k/n/c/b1/c1).
    """

    kind: str
    conjugator: TruncatedSeries
    normal_form: TruncatedSeries
    verified_order: int
    parameters: dict


def conjugate(gamma: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """gamma o g o gamma^{-1}; gamma must be invertible."""
    return compose(compose(gamma, g), invert(gamma))


# ---------------------------------------------------------------------------
# root-of-unity bookkeeping


def unit_order(a1, exact: bool, hint: int | None = None, scan_to: int = 24) -> int | None:
    """Order of the multiplier as a root of unity, or None.

    Exact mode decides membership in {1, -1, i, -i} only; other exact
    unit-circle Gaussian rationals (like 3/5 + 4/5 i) have infinite
    multiplicative order. Approximate mode trusts an explicit hint after
    verifying it, otherwise scans small orders.
    """
    if exact:
        if a1 == QQI_ONE:
            return 1
        if a1 == -QQI_ONE:
            return 2
        if a1 == QQI_I or a1 == -QQI_I:
            return 4
        return None
    a = complex(a1)
    if abs(abs(a) - 1.0) > FLOAT_TOL:
        return None
    if hint is not None:
        if hint < 1:
            raise NotRootOfUnityError(f"root order hint must be >= 1, got {hint}")
        if abs(a**hint - 1.0) > FLOAT_TOL:
            raise NotRootOfUnityError(f"multiplier is not a {hint}-th root of unity")
        for j in range(1, hint):
            if abs(a**j - 1.0) <= FLOAT_TOL:
                raise NotRootOfUnityError(f"multiplier has order {j}, not {hint}")
        return hint
    p = a
    for k in range(1, scan_to + 1):
        if abs(p - 1.0) <= 1e-12:
            return k
        p *= a
    return None


def _principal_float_root(w: complex, e: int) -> complex:
    """The e-th root of w with argument in [0, 2*pi/e)."""
    if e == 1:
        return w
    theta = cmath.phase(w)
    if theta < 0:
        theta += 2 * cmath.pi
    return abs(w) ** (1.0 / e) * cmath.exp(1j * theta / e)


def _rational_root(q: mpq, e: int) -> mpq | None:
    """Exact e-th root of a positive rational, or None."""
    if q <= 0:
        return None
    rn, okn = iroot(q.numerator, e)
    rd, okd = iroot(q.denominator, e)
    if okn and okd:
        return mpq(rn, rd)
    return None


def exact_nth_root(w: QQi, e: int, principal_only: bool = False) -> QQi | None:
    """An e-th root of w inside the Gaussian rationals, or None.

    Candidates come from unit-rotated rational roots and from rational
    reconstruction of the float roots (denominators up to 1e6); every
    candidate is re-verified exactly, so a wrong guess can only produce
    None, never a wrong root. With ``principal_only`` just the branch with
    argument in [0, 2*pi/e) is tried.
    """
    if e == 1:
        return w
    if not w:
        return QQi(0)
    branches = [0] if principal_only else list(range(e))
    wc = complex(w)
    mag = abs(wc) ** (1.0 / e)
    theta = cmath.phase(wc)
    if theta < 0:
        theta += 2 * cmath.pi
    for t in branches:
        cand = mag * cmath.exp(1j * (theta + 2 * cmath.pi * t) / e)
        # fast path: candidate is a unit rotation of a positive rational root
        for u in range(4):
            unit = QQI_I**u
            v = w / unit**e
            if v.is_real():
                r = _rational_root(v.re, e)
                if r is not None:
                    s = unit * QQi(r)
                    if s**e == w and abs(complex(s) - cand) < 1e-6 * (1 + mag):
                        return s
        for bound in (1, 16, 1024, 10**6):
            fr = Fraction(cand.real).limit_denominator(bound)
            fi = Fraction(cand.imag).limit_denominator(bound)
            s = QQi(mpq(fr.numerator, fr.denominator), mpq(fi.numerator, fi.denominator))
            if s**e == w:
                return s
    return None


# ---------------------------------------------------------------------------
# Koenig linearization


def koenig_linearize(g: TruncatedSeries) -> NormalFormResult:
    """Tangent-to-identity conjugator taking g to a1*z.

    Requires a1 != 0 and no resonance a1^j = a1 for 2 <= j <= N. Coefficient
    j of the conjugator solves the order-j coefficient equation of
    gamma o g = (a1*z) o gamma, dividing by (a1 - a1^j).
    """
    if g.is_zero():
        raise ZeroSeriesError()
    order = g.order
    a1 = g.coeffs[0]
    if not a1:
        raise ZeroMultiplierError()
    exact = g.exact
    zero, one = g._zero(), g._one()

    powers_a1 = [one, a1]
    for _ in range(order - 1):
        powers_a1.append(powers_a1[-1] * a1)
    for j in range(2, order + 1):
        d = a1 - powers_a1[j]
        if (exact and not d) or (not exact and abs(d) <= 1e-12 * max(1.0, abs(a1)) ** j):
            raise ResonanceError(j)

    # pw[i] = coefficients of g^i (power in the ambient algebra)
    pw = [None, list(g.coeffs)]
    for _ in range(order - 1):
        pw.append(_mul_trunc(pw[-1], g.coeffs, order, zero))

    gamma = [zero] * order
    gamma[0] = one
    for j in range(2, order + 1):
        s = zero
        for i in range(1, j):
            gi = gamma[i - 1]
            if gi and pw[i][j - 1]:
                s = s + gi * pw[i][j - 1]
        gamma[j - 1] = s / (a1 - powers_a1[j])

    conj = TruncatedSeries(tuple(gamma), exact)
    nf = TruncatedSeries.monomial(a1, 1, order, exact)
    _verify(conj, g, nf, order)
    return NormalFormResult("linear", conj, nf, order, {"multiplier": a1})


# ---------------------------------------------------------------------------
# Boettcher coordinate


def boettcher_coordinate(g: TruncatedSeries) -> NormalFormResult:
    """Conjugator taking a series of valuation m >= 2 to z**m.

    The leading coefficient of the conjugator is the principal (m-1)-th root
    of the leading coefficient of g; the remaining coefficients solve the
    triangular equations of gamma o g = gamma**m, each an exact division by
    m * a_m.
    """
    if g.is_zero():
        raise ZeroSeriesError()
    m = g.valuation()
    if m < 2:
        raise NotSuperattractingError(f"valuation is {m}, need >= 2")
    order = g.order
    exact = g.exact
    a_m = g.coeffs[m - 1]

    if exact:
        c1 = exact_nth_root(a_m, m - 1, principal_only=True)
        if c1 is None:
            raise NoExactRootError(
                f"principal {m - 1}-th root of the leading coefficient is not a "
                "Gaussian rational; rerun in approximate mode"
            )
    else:
        c1 = _principal_float_root(complex(a_m), m - 1)

    gamma = TruncatedSeries.monomial(c1, 1, order, exact)
    denom = a_m * m
    t_max = order - m + 1
    for t in range(2, t_max + 1):
        n = m + t - 1
        lhs = compose(gamma, g).coeffs[n - 1]
        rhs = _series_power(gamma, m).coeffs[n - 1]
        c_t = (lhs - rhs) / denom
        if c_t:
            coeffs = list(gamma.coeffs)
            coeffs[t - 1] = c_t
            gamma = TruncatedSeries(tuple(coeffs), exact)

    nf = TruncatedSeries.monomial(g._one(), m, order, exact)
    _verify(gamma, g, nf, order)
    return NormalFormResult("power", gamma, nf, order, {"degree": m, "leading": c1})


def _series_power(f: TruncatedSeries, m: int) -> TruncatedSeries:
    out = f
    for _ in range(m - 1):
        out = out * f
    return out


# ---------------------------------------------------------------------------
# parabolic normal form


def parabolic_normal_form(g: TruncatedSeries, root_order: int | None = None) -> NormalFormResult:
    """Normal form a1*z + b1*z**n + c1*z**(2n-1) for a unit-root multiplier.

    Pipeline: k = order of a1; h = g^k; n = valuation(h - z); clean h below
    degree 2n-1 by tangent-to-identity moves to read off the invariant
    c = h_{2n-1} / h_n^2; independently clean g itself (killing non-resonant
    degrees directly and resonant ones through the pivot) and rescale so the
    z**n coefficient becomes b1. Both routes must produce the same c1, and
    the conjugator is re-verified by direct conjugation to order 2n-1.
    """
    if g.is_zero():
        raise ZeroSeriesError()
    order = g.order
    exact = g.exact
    a1 = g.coeffs[0]
    if not a1:
        raise ZeroMultiplierError()
    k = unit_order(a1, exact, hint=root_order)
    if k is None:
        raise NotRootOfUnityError(
            "multiplier is not a detectable root of unity; use linearization "
            "or pass an explicit order"
        )

    ident = TruncatedSeries.identity(order, exact)
    h = iterate(g, k)
    if (h == ident) if exact else _close(h, ident):
        lin = TruncatedSeries.monomial(a1, 1, order, exact)
        if (g == lin) if exact else _close(g, lin):
            return NormalFormResult("linear", ident, lin, order, {"multiplier": a1})
        raise FiniteOrderError(f"g^{k} is the identity to order {order}")

    diff = h - ident
    if exact:
        n = diff.valuation()
    else:
        # float composition noise must not masquerade as a low pivot
        n = next(
            (j for j in range(1, order + 1) if abs(diff.coeffs[j - 1]) > FLOAT_TOL), order
        )
    if 2 * n - 1 > order:
        raise OrderTooSmallError(f"need order >= {2 * n - 1} to expose the invariant, have {order}")
    if (n - 1) % k != 0:
        raise FiniteOrderError(f"valuation {n} of g^{k} - z is not 1 mod {k}")

    # invariant from the k-th iterate (tangent to identity, so every degree
    # is resonant for it and the pivot mechanism applies throughout)
    h_clean, _ = _reduce(h, 1, n)
    a = h_clean.coeffs[n - 1]
    b = h_clean.coeffs[2 * n - 2]
    c = b / (a * a)

    # direct cleanup of g itself
    work, gamma = _reduce(g, k, n)
    big_b = work.coeffs[n - 1]
    big_c = work.coeffs[2 * n - 2]

    # c1 is forced by the b1 convention: for a1 of order dividing 4 it reads
    # c*a1/k - n(k-1)/(2k^2 a1^3), and a1**(k-3) extends that to every order
    if exact:
        b1 = QQi(1) / (QQi(k) * a1)
        c1 = c * (a1 ** (k - 3)) / QQi(k) - QQi(mpq(n * (k - 1), 2 * k * k)) / (a1 ** 3)
    else:
        b1 = 1.0 / (k * complex(a1))
        a1f = complex(a1)
        c1 = c * a1f ** (k - 3) / k - (n * (k - 1)) / (2.0 * k * k * a1f ** 3)

    # scaling s with s^(n-1) = B / b1 sends the pivot coefficient to b1
    target = big_b / b1
    if exact:
        s = exact_nth_root(target, n - 1)
        if s is None:
            raise NoExactRootError(
                f"scaling root ({n - 1}-th root of {target!r}) is not a Gaussian "
                "rational; rerun in approximate mode"
            )
    else:
        s = _principal_float_root(complex(target), n - 1)
    sigma = TruncatedSeries.monomial(s, 1, order, exact)
    gamma = compose(sigma, gamma)

    # cross-check: the two routes must give the same invariant position
    c1_direct = big_c * b1 * b1 / (big_b * big_b)
    if exact:
        assert c1_direct == c1, "parabolic invariant routes disagree"
    else:
        assert abs(c1_direct - c1) <= 1e-6 * (1 + abs(c1)), "parabolic invariant routes disagree"

    zero = g._zero()
    nf_coeffs = [zero] * order
    nf_coeffs[0] = a1 if exact else complex(a1)
    nf_coeffs[n - 1] = b1
    nf_coeffs[2 * n - 2] = c1
    nf = TruncatedSeries(tuple(nf_coeffs), exact)

    _verify(gamma, g, nf, 2 * n - 1)
    return NormalFormResult(
        "parabolic",
        gamma,
        nf,
        2 * n - 1,
        {"k": k, "n": n, "c": c, "b1": b1, "c1": c1},
    )


def _reduce(g: TruncatedSeries, k: int, pivot: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Kill every degree 2..2*pivot-2 except the pivot by conjugation.

    Non-resonant degrees d (d != 1 mod k) die by z + beta*z**d directly;
    resonant ones above the pivot die by z + beta*z**(d-pivot+1) through the
    pivot term. Each move is an exact affine solve and leaves lower degrees
    untouched, so one ascending pass suffices. Returns (reduced, conjugator).
    """
    order = g.order
    exact = g.exact
    a1 = g.coeffs[0]
    zero = g._zero()
    work = g
    gamma = TruncatedSeries.identity(order, exact)
    powers_a1 = [g._one()]
    for _ in range(order):
        powers_a1.append(powers_a1[-1] * a1)

    for d in range(2, 2 * pivot - 1):
        if d == pivot:
            continue
        c_d = work.coeffs[d - 1]
        if not c_d or (not exact and abs(c_d) <= 1e-12):
            continue
        resonant = (d - 1) % k == 0
        if not resonant:
            beta = -c_d / (powers_a1[d] - a1)
            j = d
        else:
            if d < pivot:
                raise FiniteOrderError(
                    f"unexpected resonant term below the pivot at degree {d}"
                )
            j = d - pivot + 1
            p = work.coeffs[pivot - 1]
            beta = -c_d / (p * (j - pivot))
        if j > order:
            continue
        phi = TruncatedSeries.monomial(g._one(), 1, order, exact)
        coeffs = list(phi.coeffs)
        coeffs[j - 1] = beta
        phi = TruncatedSeries(tuple(coeffs), exact)
        work = conjugate(phi, work)
        gamma = compose(phi, gamma)
        killed = work.coeffs[d - 1]
        if exact:
            assert not killed, f"cleanup failed to kill degree {d}"
        else:
            assert abs(killed) <= 1e-9 * (1 + abs(c_d)), f"cleanup failed to kill degree {d}"
            if killed:
                coeffs = list(work.coeffs)
                coeffs[d - 1] = zero
                work = TruncatedSeries(tuple(coeffs), exact)
    return work, gamma


# ---------------------------------------------------------------------------
# dispatch and verification


def normal_form(g: TruncatedSeries, root_order: int | None = None) -> NormalFormResult:
    """Dispatch on the multiplier: power, linear, or parabolic shape."""
    if g.is_zero():
        raise ZeroSeriesError()
    if not g.coeffs[0]:
        return boettcher_coordinate(g)
    k = unit_order(g.coeffs[0], g.exact, hint=root_order)
    if k is None:
        return koenig_linearize(g)
    return parabolic_normal_form(g, root_order=k)


def _close(f: TruncatedSeries, g: TruncatedSeries, tol: float = FLOAT_TOL) -> bool:
    return all(abs(complex(x) - complex(y)) <= tol for x, y in zip(f.coeffs, g.coeffs))


def _verify(gamma: TruncatedSeries, g: TruncatedSeries, nf: TruncatedSeries, upto: int):
    got = conjugate(gamma, g)
    if g.exact:
        ok = all(got.coeffs[j] == nf.coeffs[j] for j in range(upto))
    else:
        scale = 1.0 + max(abs(c) for c in nf.coeffs)
        ok = all(abs(got.coeffs[j] - nf.coeffs[j]) <= FLOAT_TOL * scale for j in range(upto))
    assert ok, "conjugation does not reproduce the normal form"
