"""Exception hierarchy.

Every domain failure raised by the library derives from GermkitError and
carries a stable machine-readable ``code`` so the CLI and service layers can
map it to an error payload without string matching.
"""

from __future__ import annotations


class GermkitError(Exception):
    """Base class for all domain errors (CLI exit code 1)."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)

    @property
    def message(self) -> str:
        return str(self)


class ZeroSeriesError(GermkitError):
    """The zero series is not a semigroup element."""

    code = "zero_series"


class OrderMismatchError(GermkitError):
    """Operands must have equal truncation orders; pad or truncate first."""

    code = "order_mismatch"


class ModeMismatchError(GermkitError):
    """Operands must both be exact or both be approximate."""

    code = "mode_mismatch"


class NotInvertibleError(GermkitError):
    """Series with zero linear coefficient has no compositional inverse."""

    code = "not_invertible"


class ZeroMultiplierError(GermkitError):
    """Linearization requires a nonzero multiplier."""

    code = "zero_multiplier"


class ResonanceError(GermkitError):
    """Multiplier resonance a1^j = a1 obstructs linearization."""

    code = "resonance"

    def __init__(self, degree: int):
        self.degree = degree
        super().__init__(f"resonance a1^{degree} = a1 obstructs linearization")


class NotSuperattractingError(GermkitError):
    """Power normal form needs valuation >= 2."""

    code = "not_superattracting"


class NoExactRootError(GermkitError):
    """Required root does not exist over the Gaussian rationals; rerun in approximate mode."""

    code = "no_exact_root"


class NotRootOfUnityError(GermkitError):
    """Multiplier is not a detectable root of unity; supply an order hint or use linearization."""

    code = "not_root_of_unity"


class FiniteOrderError(GermkitError):
    """g^k is the identity to this order; no parabolic normal form exists."""

    code = "finite_order"


class OrderTooSmallError(GermkitError):
    """Truncation order too small to expose the invariant (need 2n-1 <= N)."""

    code = "order_too_small"


class BaseMismatchError(GermkitError):
    """Unit scales declared over different root-of-unity bases cannot be combined."""

    code = "base_mismatch"


class InfiniteOrderError(GermkitError):
    """The operation needs a finite-order unit scale."""

    code = "infinite_order"


class NotEllipticError(GermkitError):
    """Operation requires elliptic inputs."""

    code = "not_elliptic"


class NotHyperbolicError(GermkitError):
    """Operation requires hyperbolic inputs."""

    code = "not_hyperbolic"


class SameCenterError(GermkitError):
    """Rotation centers coincide; the pair generates no hyperbolic."""

    code = "same_center"


class AxesTooCloseError(GermkitError):
    """Fixed points too close to separate with round disks."""

    code = "axes_too_close"


class NotADiskAutomorphismError(GermkitError):
    """Coefficients do not satisfy |a|^2 - |b|^2 > 0."""

    code = "not_disk_automorphism"


class RootFindingError(GermkitError):
    """Polynomial preimage solve failed residual check."""

    code = "root_finding"


class LevinFailsError(GermkitError):
    """Claimed iterate identities do not hold on expanded coefficients."""

    code = "levin_fails"


class PreconditionError(GermkitError):
    """Operation precondition violated."""

    code = "precondition"


class GridFormatError(GermkitError):
    """Malformed grid file or incompatible grid geometry."""

    code = "grid_format"


class InputFormatError(GermkitError):
    """Malformed series JSON or parameter value (CLI exit code 2)."""

    code = "input_format"
