"""Spectral determinants of spheres glued from triangles by Belyi maps."""

from .basedet import (
    BaseSurface,
    CurvedBaseUnavailable,
    default_provider,
    load_base_table,
    make_external,
    make_flat3,
    make_spindle,
)
from .belyi import RamificationData, RationalMap, analyze, catalog, mobius_precompose, pullback_divisor
from .errors import DomainError, RouteDisagreement
from .flatdet import FlatConfiguration, LogDetResult, flat_log_det, metric_area, rescale_log_det
from .maindet import (
    GluedDeterminantReport,
    family_log_det,
    liouville_action,
    platonic_log_det,
    theorem_main,
)
from .specfun import Divisor, TriangleDivisor, bigC, calC, psi, zeta0, zetaR_prime_m1

__all__ = [
    "BaseSurface",
    "CurvedBaseUnavailable",
    "Divisor",
    "DomainError",
    "FlatConfiguration",
    "GluedDeterminantReport",
    "LogDetResult",
    "RamificationData",
    "RationalMap",
    "RouteDisagreement",
    "TriangleDivisor",
    "analyze",
    "bigC",
    "calC",
    "catalog",
    "default_provider",
    "family_log_det",
    "flat_log_det",
    "liouville_action",
    "load_base_table",
    "make_external",
    "make_flat3",
    "make_spindle",
    "metric_area",
    "mobius_precompose",
    "platonic_log_det",
    "psi",
    "pullback_divisor",
    "rescale_log_det",
    "theorem_main",
    "zeta0",
    "zetaR_prime_m1",
]

__version__ = "0.1.0"
