"""Time-varying quantum channels: capacities, planar-code Monte Carlo and T1 statistics."""

from ._tvqc import *  # noqa: F401,F403
from ._tvqc import __doc__  # noqa: F401

__version__ = "0.1.0"
