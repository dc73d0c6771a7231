"""Federated-learning poisoning testbed: python bindings over the C++ core."""

from flspectrum._core import *  # noqa: F401,F403
from flspectrum._core import __doc__  # noqa: F401
