"""Pointwise iteration of polynomial maps of one complex variable.

Escape is certified by the standard coefficient bound: once an orbit leaves
max(2, (2 + sum |c_i|, i < d) / |c_d|) it grows monotonically for degree at
least two. Cycle detection is Brent's algorithm with a distance tolerance
instead of exact equality, so answers on the unit circle are only as good
as double precision lets them be.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LevinFailsError, PreconditionError

# Beyond this magnitude an orbit is treated as numerically gone, whatever
# the escape radius said; keeps 1e308 overflow out of the arithmetic.
OVERFLOW_CAP = 1e150
CYCLE_TOL = 1e-9
_MAX_ITERATE_DEGREE = 4096


@dataclass(frozen=True)
class PolynomialMap:
    """Polynomial in one complex variable, coefficients lowest degree first."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(complex(x) for x in self.coeffs)
        if len(c) < 2:
            raise PreconditionError("polynomial map needs degree at least 1")
        if c[-1] == 0:
            raise PreconditionError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = np.zeros_like(z) if isinstance(z, np.ndarray) else 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self):
        c = tuple(k * ck for k, ck in enumerate(self.coeffs))[1:]
        if len(c) == 1:
            return _ConstantMap(c[0])
        return PolynomialMap(c)

    def compose(self, other: "PolynomialMap") -> "PolynomialMap":
        p = np.polynomial.Polynomial(np.asarray(self.coeffs))
        q = np.polynomial.Polynomial(np.asarray(other.coeffs))
        return PolynomialMap(tuple(p(q).coef))

    def iterate(self, n: int) -> "PolynomialMap":
        """Coefficient-level n-fold self-composition."""
        if n < 1:
            raise PreconditionError("iterate needs n >= 1")
        if self.degree**n > _MAX_ITERATE_DEGREE:
            raise PreconditionError(f"iterate degree {self.degree}**{n} exceeds {_MAX_ITERATE_DEGREE}")
        out = self
        for _ in range(n - 1):
            out = out.compose(self)
        return out

    def escape_radius(self) -> float:
        if self.degree == 1:
            return float("inf")
        tail = sum(abs(c) for c in self.coeffs[:-1])
        return max(2.0, (2.0 + tail) / abs(self.coeffs[-1]))


class _ConstantMap:
    """Callable constant, the derivative of a degree-1 map."""

    def __init__(self, value: complex):
        self.value = complex(value)

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return np.full_like(z, self.value)
        return self.value


@dataclass(frozen=True)
class OrbitResult:
    points: tuple
    escaped: bool
    escape_index: int | None


def orbit(f, z0: complex, n: int, escape_radius: float | None = None) -> OrbitResult:
    """z0, f(z0), ..., f^n(z0), flagging the first point past the escape radius.

    f may be a PolynomialMap or any complex-to-complex callable; callables
    must bring their own escape_radius (default: only the overflow cap).
    """
    if n < 0:
        raise PreconditionError("orbit length must be nonnegative")
    if escape_radius is None:
        escape_radius = f.escape_radius() if isinstance(f, PolynomialMap) else float("inf")
    points = [complex(z0)]
    escaped = abs(points[0]) > escape_radius
    escape_index = 0 if escaped else None
    for _ in range(n):
        z = points[-1]
        if abs(z) > OVERFLOW_CAP:
            break
        z = complex(f(z))
        points.append(z)
        if escape_index is None and abs(z) > escape_radius:
            escaped = True
            escape_index = len(points) - 1
    return OrbitResult(tuple(points), escaped, escape_index)


def orbit_intersection(f, g, z0: complex, n: int, tol: float = 1e-9) -> tuple:
    """Points where the f-orbit and g-orbit of z0 meet within tol.

    Every pair (f^i(z0), g^j(z0)) with i, j <= n is compared; matches are
    reported once each, deduplicated by the same tolerance.
    """
    fo = orbit(f, z0, n).points
    go = orbit(g, z0, n).points
    matches: list = []
    for a in fo:
        for b in go:
            if abs(a - b) < tol:
                if all(abs(a - m) >= tol for m in matches):
                    matches.append(a)
                break
    return tuple(matches)


@dataclass(frozen=True)
class Preperiodic:
    tail: int
    period: int


@dataclass(frozen=True)
class Escapes:
    index: int


@dataclass(frozen=True)
class Undecided:
    iterations: int


def preperiodic_test(f, z: complex, max_iter: int = 256, tol: float = CYCLE_TOL):
    """Brent cycle detection with tolerance tol.

    Returns Preperiodic(tail, period), Escapes(index), or Undecided(max_iter)
    when no cycle closes within the iteration budget.
    """
    radius = f.escape_radius() if isinstance(f, PolynomialMap) else float("inf")
    cap = min(radius, OVERFLOW_CAP)

    z = complex(z)
    if abs(z) > cap:
        return Escapes(0)
    power = lam = 1
    tortoise = z
    hare = complex(f(z))
    steps = 1
    if abs(hare) > cap:
        return Escapes(1)
    while abs(tortoise - hare) > tol:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = complex(f(hare))
        steps += 1
        lam += 1
        if abs(hare) > cap:
            return Escapes(steps)
        if steps > max_iter:
            return Undecided(steps - 1)

    # shrink the window to the minimal period
    period = lam
    for d in range(1, lam):
        if lam % d == 0:
            w = hare
            for _ in range(d):
                w = complex(f(w))
            if abs(w - hare) <= tol:
                period = d
                break

    # standard tail search: run two pointers period steps apart
    tortoise = z
    hare = z
    for _ in range(period):
        hare = complex(f(hare))
    tail = 0
    while abs(tortoise - hare) > tol:
        tortoise = complex(f(tortoise))
        hare = complex(f(hare))
        tail += 1
        if tail > max_iter:
            return Undecided(max_iter)
    return Preperiodic(tail, period)


@dataclass(frozen=True)
class TransportReport:
    identity_residual: float
    checked: int
    transported: int
    skipped: int
    counterexamples: tuple = field(default_factory=tuple)


def semiconjugacy_transport_check(
    f: PolynomialMap,
    g: PolynomialMap,
    n: int,
    k: int,
    samples,
    max_iter: int = 256,
    tol: float = CYCLE_TOL,
) -> TransportReport:
    """Verify f^n g^k = f^(2n), g^k f^n = g^(2k) on coefficients, then check
    that f^n carries preperiodic points of g to preperiodic points of f.

    Samples that are not confirmed preperiodic for g are skipped. A sample
    counts as a counterexample when its transport is not confirmed
    preperiodic for f. Raises LevinFailsError when the coefficient
    identities miss by more than 1e-9.
    """
    if n < 1 or k < 1:
        raise PreconditionError("need n >= 1 and k >= 1")
    fn = f.iterate(n)
    gk = g.iterate(k)
    residual = max(
        _coeff_distance(fn.compose(gk), f.iterate(2 * n)),
        _coeff_distance(gk.compose(fn), g.iterate(2 * k)),
    )
    if residual > 1e-9:
        raise LevinFailsError(f"composition identities fail, coefficient residual {residual:.3e}")

    checked = transported = skipped = 0
    counterexamples = []
    for z in samples:
        if not isinstance(preperiodic_test(g, z, max_iter, tol), Preperiodic):
            skipped += 1
            continue
        checked += 1
        w = complex(fn(complex(z)))
        if isinstance(preperiodic_test(f, w, max_iter, tol), Preperiodic):
            transported += 1
        else:
            counterexamples.append(complex(z))
    return TransportReport(residual, checked, transported, skipped, tuple(counterexamples))


def _coeff_distance(p: PolynomialMap, q: PolynomialMap) -> float:
    a = list(p.coeffs)
    b = list(q.coeffs)
    size = max(len(a), len(b))
    a += [0j] * (size - len(a))
    b += [0j] * (size - len(b))
    return max(abs(x - y) for x, y in zip(a, b))
