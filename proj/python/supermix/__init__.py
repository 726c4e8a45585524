"""Grid-less mixture deconvolution via BLASSO: measures, kernels, solvers,
dual certificates, and error metrics."""

from ._supermix import *  # noqa: F401,F403
from ._supermix import __doc__  # noqa: F401

__version__ = "0.1.0"
