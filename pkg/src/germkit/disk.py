"""Moebius automorphisms of the unit disk and ping-pong freeness certificates.

Maps are stored as z -> (a*z + b) / (conj(b)*z + conj(a)) with the
determinant |a|^2 - |b|^2 renormalized to 1 after every operation, so the
pair (a, b) is projective: any positive real multiple describes the same
map. Composition is matrix multiplication in this coordinate, inversion is
(conj(a), -b), and |2*Re(a)| is the absolute trace that separates elliptic,
parabolic, and hyperbolic elements.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product

from .errors import (
    AxesTooCloseError,
    NotADiskAutomorphismError,
    NotEllipticError,
    NotHyperbolicError,
    SameCenterError,
)

CLASSIFY_TOL = 1e-9


@dataclass(frozen=True)
class MobiusDisk:
    """Disk automorphism z -> (a*z + b) / (conj(b)*z + conj(a))."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if det <= 1e-12:
            # also hit when |a| exceeds ~1e8 and the unit determinant falls
            # below double-precision resolution of |a|^2 - |b|^2
            raise NotADiskAutomorphismError(
                f"|a|^2 - |b|^2 = {det:.3e} must be positive"
            )
        scale = math.sqrt(det)
        object.__setattr__(self, "a", a / scale)
        object.__setattr__(self, "b", b / scale)

    def __call__(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.b.conjugate() * z + self.a.conjugate())

    def __mul__(self, other: "MobiusDisk") -> "MobiusDisk":
        """self o other."""
        return MobiusDisk(
            self.a * other.a + self.b * other.b.conjugate(),
            self.a * other.b + self.b * other.a.conjugate(),
        )

    def __pow__(self, n: int) -> "MobiusDisk":
        if n < 0:
            return self.inverse() ** (-n)
        result = MobiusDisk(1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "MobiusDisk":
        return MobiusDisk(self.a.conjugate(), -self.b)

    def derivative(self, z: complex) -> complex:
        """(d/dz) of the map; equals 1/(conj(b) z + conj(a))^2 at det 1."""
        return 1.0 / (self.b.conjugate() * z + self.a.conjugate()) ** 2

    def trace_abs(self) -> float:
        return abs(2.0 * self.a.real)

    def is_identity(self, tol: float = CLASSIFY_TOL) -> bool:
        return abs(self.b) <= tol and min(abs(self.a - 1), abs(self.a + 1)) <= tol


@dataclass(frozen=True)
class Classification:
    kind: str  # "elliptic" | "parabolic" | "hyperbolic"
    trace_abs: float
    identity: bool


def classify(m: MobiusDisk, tol: float = CLASSIFY_TOL) -> Classification:
    """Elliptic, parabolic, or hyperbolic by the absolute trace |2 Re a|."""
    t = m.trace_abs()
    if t < 2.0 - tol:
        return Classification("elliptic", t, False)
    if t > 2.0 + tol:
        return Classification("hyperbolic", t, False)
    ident = m.is_identity(tol)
    return Classification("elliptic" if ident else "parabolic", t, ident)


def rotation_about(c: complex, theta: float) -> MobiusDisk:
    """Rotation by theta around the interior point c: T_c o R_theta o T_c^-1."""
    c = complex(c)
    if abs(c) >= 1.0:
        raise NotADiskAutomorphismError(f"rotation center must be inside the disk, |c| = {abs(c)}")
    s = 1.0 / math.sqrt(1.0 - abs(c) ** 2)
    t_c = MobiusDisk(s, c * s)
    r = MobiusDisk(cmath.exp(0.5j * theta), 0.0)
    return t_c * r * t_c.inverse()


def hyperbolic_distance(z: complex, w: complex) -> float:
    """Poincare distance between interior points."""
    rho = abs(z - w) / abs(1.0 - w.conjugate() * z)
    if rho >= 1.0:
        raise NotADiskAutomorphismError("points must lie inside the disk")
    return math.log((1.0 + rho) / (1.0 - rho))


def translation_length(m: MobiusDisk) -> float:
    """2*arccosh(t/2) for hyperbolic m."""
    t = m.trace_abs()
    if t <= 2.0 + CLASSIFY_TOL:
        raise NotHyperbolicError(f"absolute trace {t} is not > 2")
    return 2.0 * math.acosh(t / 2.0)


def fixed_points(m: MobiusDisk) -> tuple[complex, ...]:
    """Roots of conj(b) z^2 + (conj(a) - a) z - b = 0 in the closed disk
    and its exterior; degenerate rotations about 0 report (0,)."""
    qa = m.b.conjugate()
    qb = m.a.conjugate() - m.a
    qc = -m.b
    if abs(qa) <= 1e-300:
        if abs(qb) <= 1e-300:
            return (0.0,)  # identity: report the basepoint
        return (0.0,)  # rotation about the origin; other fixed point at infinity
    disc = cmath.sqrt(qb * qb - 4.0 * qa * qc)
    # pick the sign that avoids cancellation; q = 0 would force b = 0,
    # which the linear branch above already handled
    if (qb.conjugate() * disc).real < 0.0:
        disc = -disc
    q = -0.5 * (qb + disc)
    return (q / qa, qc / q)


def elliptic_center(m: MobiusDisk) -> complex:
    """The interior fixed point of an elliptic element."""
    cls = classify(m)
    if cls.kind != "elliptic":
        raise NotEllipticError(f"map is {cls.kind}")
    pts = fixed_points(m)
    best = min(pts, key=lambda z: abs(z))
    if abs(best) >= 1.0 - 1e-12:
        raise NotEllipticError("no interior fixed point found")
    return best


def hyperbolic_axis(m: MobiusDisk) -> tuple[complex, complex]:
    """(attracting, repelling) boundary fixed points of a hyperbolic element."""
    cls = classify(m)
    if cls.kind != "hyperbolic":
        raise NotHyperbolicError(f"map is {cls.kind}")
    pts = fixed_points(m)
    if len(pts) != 2:
        raise NotHyperbolicError("hyperbolic element must have two fixed points")
    p, q = pts
    return (p, q) if abs(m.derivative(p)) < 1.0 else (q, p)


# ---------------------------------------------------------------------------
# hyperbolic-word search


def find_hyperbolic_word(
    gamma: MobiusDisk, tau: MobiusDisk, max_len: int = 8
) -> tuple[str, MobiusDisk] | None:
    """First positive word in shortlex order whose value is hyperbolic.

    Both generators must be elliptic with distinct rotation centers; equal
    centers make the pair simultaneously conjugate to rotations about 0 and
    every product elliptic.
    """
    for m in (gamma, tau):
        cls = classify(m)
        if cls.kind != "elliptic":
            raise NotEllipticError(f"generator is {cls.kind}, need elliptic")
    if abs(elliptic_center(gamma) - elliptic_center(tau)) <= 1e-9:
        raise SameCenterError("rotation centers coincide; the pair generates rotations about one point")
    values: dict[str, MobiusDisk] = {"": None}
    for length in range(1, max_len + 1):
        for letters in product("FG", repeat=length):
            word = "".join(letters)
            prefix = values[word[:-1]]
            letter = gamma if word[-1] == "F" else tau
            value = letter if prefix is None else prefix * letter
            values[word] = value
            if classify(value).kind == "hyperbolic":
                return word, value
    return None


# ---------------------------------------------------------------------------
# ping-pong certificates


@dataclass(frozen=True)
class RoundDisk:
    center: complex
    radius: float

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return abs(z - self.center) <= self.radius - slack


@dataclass(frozen=True)
class PingPongCertificate:
    """Numeric Klein-combination witness: the positive semigroup <h, g> is free.

    The four disks sit at the generators' boundary fixed points, are
    pairwise disjoint, and every sampled boundary point of the truncated
    complement regions lands strictly inside the right target disk; margin
    is the smallest slack seen anywhere.
    """

    h: MobiusDisk
    g: MobiusDisk
    u_h_plus: RoundDisk
    u_h_minus: RoundDisk
    u_g_plus: RoundDisk
    u_g_minus: RoundDisk
    samples: int
    margin: float


@dataclass(frozen=True)
class PingPongFailure:
    """No certificate at any attempted radius; reason names the first obstruction
    seen at the largest radius tried."""

    reason: str
    samples: int


def _region_boundary(minus: RoundDisk, samples: int) -> list[complex]:
    """Boundary samples of (closed unit disk) minus (open minus-disk)."""
    pts = []
    for j in range(samples):
        z = cmath.exp(2j * cmath.pi * j / samples)
        if abs(z - minus.center) >= minus.radius:
            pts.append(z)
    for j in range(samples):
        z = minus.center + minus.radius * cmath.exp(2j * cmath.pi * j / samples)
        if abs(z) <= 1.0:
            pts.append(z)
    return pts


def ping_pong_certificate(
    h: MobiusDisk, g: MobiusDisk, samples: int = 256
) -> PingPongCertificate | PingPongFailure:
    """Grow equal radii around the four boundary fixed points until the
    Klein inclusions hold on sampled boundaries, or the disks would touch.

    Success certifies freeness of the positive semigroup generated by h and
    g: each generator maps the part of the closed disk outside its repelling
    disk strictly into its attracting disk.
    """
    for m in (h, g):
        cls = classify(m)
        if cls.kind != "hyperbolic":
            raise NotHyperbolicError(f"ping-pong needs hyperbolic generators, got {cls.kind}")
    h_plus, h_minus = hyperbolic_axis(h)
    g_plus, g_minus = hyperbolic_axis(g)
    centers = [h_plus, h_minus, g_plus, g_minus]
    min_gap = min(
        abs(centers[i] - centers[j]) for i in range(4) for j in range(i + 1, 4)
    )
    if min_gap <= 1e-6:
        raise AxesTooCloseError(f"fixed points are only {min_gap:.2e} apart")

    last_reason = "initial radius already exceeds the center gap"
    radius = 0.05
    while 2.0 * radius < min_gap:
        disks = {
            "U_h_plus": RoundDisk(h_plus, radius),
            "U_h_minus": RoundDisk(h_minus, radius),
            "U_g_plus": RoundDisk(g_plus, radius),
            "U_g_minus": RoundDisk(g_minus, radius),
        }
        margin = min_gap - 2.0 * radius
        reason = None
        for name, m, minus, plus in (
            ("h", h, disks["U_h_minus"], disks["U_h_plus"]),
            ("g", g, disks["U_g_minus"], disks["U_g_plus"]),
        ):
            for z in _region_boundary(minus, samples) + [0.0]:
                slack = plus.radius - abs(m(z) - plus.center)
                if slack <= 0.0:
                    reason = (
                        f"{name} maps boundary point {z:.6f} of the complement "
                        f"of {('U_h_minus' if name == 'h' else 'U_g_minus')} outside "
                        f"{('U_h_plus' if name == 'h' else 'U_g_plus')} at radius {radius:.6f}"
                    )
                    break
                margin = min(margin, slack)
            if reason:
                break
        if reason is None:
            return PingPongCertificate(
                h, g,
                disks["U_h_plus"], disks["U_h_minus"],
                disks["U_g_plus"], disks["U_g_minus"],
                samples, margin,
            )
        last_reason = reason
        radius *= 1.2
    return PingPongFailure(last_reason, samples)
