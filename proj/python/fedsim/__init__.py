"""Federated-averaging simulator: synthetic problems, local-update runs,
heterogeneity metrics, and convergence-bound checks."""

from fedsim._core import *  # noqa: F401,F403
from fedsim._core import __doc__, __version__  # noqa: F401
