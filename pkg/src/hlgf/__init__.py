"""Lattice Green functions of anisotropic hypercubic lattices.

>>> from hlgf import lattice_green
>>> round(lattice_green((1, 0, 0), 0.0).real, 8)
0.33333333
"""
from .contour import (DEFAULT_PARAMS, GreenQuery, GreenValue, LatticeModel, Regime,
                      RegimeParams, SignConfig, classify, green, green_at_van_hove,
                      green_inband, green_outside_band, integrand_f1, integrand_f4,
                      lattice_green, sign_configs, van_hove_frequencies)
from .errors import (BudgetError, ConditioningError, ConvergenceError, DivergenceError,
                     HLGFError, IntegrandError, NotSupportedError, RangeError,
                     ScaledRetryError, SingularityError, UnsupportedOrderError,
                     WrongRegimeError)
from .quadrature import DEFAULT_CONFIG, QuadConfig, QuadResult, integrate_finite, integrate_ray
from .specfun import HankelKind

__version__ = "0.1.0"
