"""Online primal-dual optimization with non-additive long-term penalties.

Thin wrapper over the C++ core. Vectors and matrices are numpy arrays.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
