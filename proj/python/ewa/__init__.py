"""Exponentially weighted aggregation for multivariate regression.

Thin wrapper around the compiled extension; see the project README for the
C++ library and CLI.
"""

from ewa._ewa import *  # noqa: F401,F403
from ewa._ewa import __doc__ as _doc

__doc__ = _doc
