"""Chemotaxis front laboratory: python bindings for the C++ core.

The heavy lifting (IMEX stepping, front tracking, closed-form constants)
lives in the compiled ``_core`` module; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
