"""Weight-two transfer operator, Beltrami pullback, and their duality.

The pushforward of a field phi under a polynomial map f is
sum over preimages y of x of phi(y) / f'(y)^2, evaluated at cell centers;
the Beltrami pullback of mu is mu(f(z)) conj(f'(z)) / f'(z). Both skip
points with |f'| below the critical exclusion radius and count them. The
pairing <mu, phi> = sum(mu * phi) * cellArea is bilinear (no conjugation),
which is exactly what makes the two operators adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import PolynomialMap
from .errors import PreconditionError, RootFindingError
from .grid import GridField

CRITICAL_RADIUS = 1e-6
_ROOT_RESIDUAL = 1e-10


def _preimages(f: PolynomialMap, x: np.ndarray) -> np.ndarray:
    """All solutions y of f(y) = x, stacked along axis 0 (degree copies)."""
    c = f.coeffs
    d = f.degree
    if d == 1:
        return ((x - c[0]) / c[1])[None, ...]
    if d == 2:
        # stable quadratic: q = -(b + s)/2 with s the root of the
        # discriminant aligned against b, then y1 = q/a, y2 = c/q
        a, b = c[2], c[1]
        c0 = c[0] - x
        disc = b * b - 4 * a * c0
        s = np.sqrt(disc.astype(np.complex128))
        s = np.where((np.conj(b) * s).real < 0, -s, s)
        q = -(b + s) / 2
        tiny = np.abs(q) < 1e-300
        y1 = np.where(tiny, 0.0, q / a)
        y2 = np.where(tiny, 0.0, c0 / np.where(tiny, 1.0, q))
        roots = np.stack([y1, y2])
    else:
        flat = np.asarray(x, dtype=np.complex128).ravel()
        roots = np.empty((d, flat.size), dtype=np.complex128)
        high_first = np.asarray(c[::-1], dtype=np.complex128)
        for idx, target in enumerate(flat):
            shifted = high_first.copy()
            shifted[-1] -= target
            roots[:, idx] = np.sort_complex(np.roots(shifted))
        roots = roots.reshape((d,) + np.shape(x))
        fp = f.derivative()
        for _ in range(2):
            dfy = fp(roots)
            safe = np.abs(dfy) > CRITICAL_RADIUS
            roots = np.where(safe, roots - (f(roots) - x) / np.where(safe, dfy, 1.0), roots)
    residual = np.max(np.abs(f(roots) - x))
    if residual > _ROOT_RESIDUAL:
        raise RootFindingError(f"preimage residual {residual:.3e} exceeds {_ROOT_RESIDUAL:.0e}")
    return roots


@dataclass(frozen=True)
class PushResult:
    field: GridField
    critical_excluded: int


def ruelle_pushforward(f: PolynomialMap, phi: GridField) -> PushResult:
    """sum over f(y) = x of phi(y) / f'(y)^2 at the cell centers of phi.

    phi is read by bilinear interpolation with zero extension; preimages
    with |f'| < CRITICAL_RADIUS are skipped and counted.
    """
    x = phi.centers()
    roots = _preimages(f, x)
    dfy = f.derivative()(roots)
    keep = np.abs(dfy) >= CRITICAL_RADIUS
    terms = np.where(keep, phi.sample(roots) / np.where(keep, dfy, 1.0) ** 2, 0.0)
    return PushResult(phi.with_values(terms.sum(axis=0)), int((~keep).sum()))


@dataclass(frozen=True)
class PullResult:
    field: GridField
    critical_zeroed: int


def beltrami_pullback(f: PolynomialMap, mu: GridField, sampler=None) -> PullResult:
    """mu(f(z)) conj(f'(z)) / f'(z) at cell centers.

    mu(f(z)) is bilinear interpolation by default; pass sampler (a callable
    on complex arrays) to evaluate the coefficient exactly off-grid. Cells
    with |f'| < CRITICAL_RADIUS are set to zero and counted.
    """
    z = mu.centers()
    w = f(z)
    vals = sampler(w) if sampler is not None else mu.sample(w)
    dfz = f.derivative()(z)
    keep = np.abs(dfz) >= CRITICAL_RADIUS
    ratio = np.where(keep, np.conj(dfz) / np.where(keep, dfz, 1.0), 0.0)
    return PullResult(mu.with_values(vals * ratio), int((~keep).sum()))


def duality_residual(f: PolynomialMap, mu: GridField, phi: GridField) -> float:
    """| <B_f mu, phi> - <mu, f_* phi> | under the bilinear cell pairing."""
    lhs = beltrami_pullback(f, mu).field.pair(phi)
    rhs = mu.pair(ruelle_pushforward(f, phi).field)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class CesaroResult:
    field: GridField
    increments: tuple
    critical_excluded: int


def cesaro_average(f: PolynomialMap, phi: GridField, n: int) -> CesaroResult:
    """(1/n) sum of (f_*)^i phi for i < n, with L1 Cauchy increments.

    increments[j-1] = ||C_(j+1) - C_j||_1 for the running averages C_j, a
    convergence diagnostic; n = 1 returns phi itself.
    """
    if n < 1:
        raise PreconditionError("cesaro average needs n >= 1")
    current = phi
    average = phi
    increments = []
    excluded = 0
    for j in range(1, n):
        push = ruelle_pushforward(f, current)
        current = push.field
        excluded += push.critical_excluded
        step = (current - average) * (1.0 / (j + 1))
        increments.append(step.l1_norm())
        average = average + step
    return CesaroResult(average, tuple(increments), excluded)


@dataclass(frozen=True)
class AlignmentReport:
    pre_residual: float
    support_cells: int
    sup_residual: float


def alignment_check(f: PolynomialMap, h: GridField, tol: float) -> AlignmentReport:
    """Phase of an (approximately) fixed density as an invariant coefficient.

    Requires ||f_* h - h||_1 < tol; forms nu = conj(h)/|h| on {|h| > tol}
    and reports the sup of |B_f nu - nu| over that support, skipping cells
    inside the critical exclusion radius.
    """
    pre_residual = (ruelle_pushforward(f, h).field - h).l1_norm()
    if pre_residual >= tol:
        raise PreconditionError(f"density is not fixed: ||f_*h - h||_1 = {pre_residual:.3e} >= {tol:.3e}")
    mag = np.abs(h.values)
    support = mag > tol
    if not support.any():
        raise PreconditionError("density has no support above tol")
    nu = h.with_values(np.where(support, np.conj(h.values) / np.where(support, mag, 1.0), 0.0))
    pulled = beltrami_pullback(f, nu).field
    dfz = f.derivative()(h.centers())
    usable = support & (np.abs(dfz) >= CRITICAL_RADIUS)
    if not usable.any():
        raise PreconditionError("support lies entirely inside the critical exclusion radius")
    sup_residual = float(np.max(np.abs(pulled.values - nu.values)[usable]))
    return AlignmentReport(pre_residual, int(support.sum()), sup_residual)
