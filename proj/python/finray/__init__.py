"""Surrogate-assisted multi-objective design optimization of Fin-Ray gripper fingers.

The heavy lifting lives in the compiled ``finray._core`` extension: design-grid
enumeration, the analytic pseudo-FEM oracle, the from-scratch MLP surrogate,
the NSGA-II engine, and the Pareto-front analysis helpers.
"""

from finray._core import *  # noqa: F401,F403
from finray._core import __doc__ as _core_doc

__version__ = "0.1.0"
__doc__ = _core_doc
