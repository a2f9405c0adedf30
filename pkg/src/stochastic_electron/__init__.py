"""Numerical workbench for a stochastic model of the nonrelativistic electron.

Submodules: ``units`` (atomic units), ``numerics`` (quadrature, erf,
minimizer, counter-based Gaussian streams, KS statistic), ``vacuum``
(zero-point-field kinetic energy), ``charge_cloud`` (Gaussian charge
cloud), ``kinematics`` (complex action, velocity fields, trajectory
ensembles), ``uncertainty`` (uncertainty-relation estimates) and ``cli``.
"""

from .units import UnitSystem, UnitSystemError, atomic_units

__version__ = "0.1.0"

__all__ = ["UnitSystem", "UnitSystemError", "atomic_units", "__version__"]
