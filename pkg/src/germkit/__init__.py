"""Truncated power series under substitution, normal forms, monomial
semigroups, hyperbolic disk geometry, and numeric one-dimensional dynamics,
with a deterministic CLI and HTTP service on top."""

__version__ = "0.1.0"

from .disk import MobiusDisk, find_hyperbolic_word, ping_pong_certificate, rotation_about
from .dynamics import PolynomialMap, orbit, orbit_intersection, preperiodic_test
from .errors import GermkitError
from .grid import GridField
from .monomial import Monomial, UnitScale, classify_pair, deck_aut_split
from .normal_forms import NormalFormResult, normal_form
from .relations import commute_check, find_relations, levin_verify, shared_iteration
from .ruelle import beltrami_pullback, cesaro_average, duality_residual, ruelle_pushforward
from .series import QQi, TruncatedSeries, compose, invert, iterate, valuation

__all__ = [
    "GermkitError",
    "GridField",
    "MobiusDisk",
    "Monomial",
    "NormalFormResult",
    "PolynomialMap",
    "QQi",
    "TruncatedSeries",
    "UnitScale",
    "beltrami_pullback",
    "cesaro_average",
    "classify_pair",
    "commute_check",
    "compose",
    "deck_aut_split",
    "duality_residual",
    "find_hyperbolic_word",
    "find_relations",
    "invert",
    "iterate",
    "levin_verify",
    "normal_form",
    "orbit",
    "orbit_intersection",
    "ping_pong_certificate",
    "preperiodic_test",
    "rotation_about",
    "ruelle_pushforward",
    "shared_iteration",
    "valuation",
    "__version__",
]
