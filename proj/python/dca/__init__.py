"""Data collaboration analysis with generalized-eigenvalue collaborative maps."""

from ._core import *  # noqa: F401,F403
from ._core import DcaError, __doc__  # noqa: F401
