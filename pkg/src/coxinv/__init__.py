"""Exact invariants of Coxeter systems and regular right-angled buildings.

The public surface is intentionally small; the submodules hold the full
APIs (coxeter, growth, homology, davis, building, conformal, report).
"""

__version__ = "0.1.0"

from .building import ThicknessVector, critical_exponents, oracle_battery
from .conformal import confdim_bounds, moussong_hyperbolic
from .coxeter import CoxeterMatrix, classify_parabolic
from .davis import is_type_PM, vcd_real
from .growth import WeightVector, growth_rate, rational_growth_series
from .report import build_report

__all__ = [
    "CoxeterMatrix", "ThicknessVector", "WeightVector",
    "classify_parabolic", "growth_rate", "rational_growth_series",
    "vcd_real", "is_type_PM", "critical_exponents", "oracle_battery",
    "moussong_hyperbolic", "confdim_bounds", "build_report",
    "__version__",
]
