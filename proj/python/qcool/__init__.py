"""Cooling limits for entanglement-preserving channels."""

from ._qcool import *  # noqa: F401,F403
from ._qcool import __doc__  # noqa: F401
