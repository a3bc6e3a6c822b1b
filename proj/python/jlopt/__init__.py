"""Python bindings for the jlopt library."""

from ._jlopt import *  # noqa: F401,F403
from ._jlopt import LinearMap, NumericalError, PointSet, PreconditionError

__all__ = [name for name in dir() if not name.startswith("_")]
