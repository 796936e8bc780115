"""Python bindings for the switched multi-path array simulator."""

from ._sths import *  # noqa: F401,F403
from ._sths import __doc__  # noqa: F401
