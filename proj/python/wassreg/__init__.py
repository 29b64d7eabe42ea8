"""Regression for distribution-valued data in quantile coordinates.

Thin re-export of the compiled core.  Works both as an installed package
(wassreg._wassreg) and against a plain CMake build tree where the module
sits on sys.path as a top-level _wassreg.
"""

try:
    from ._wassreg import *  # noqa: F401,F403
    from . import _wassreg as _impl
except ImportError:  # plain CMake build: module not inside the package
    from _wassreg import *  # noqa: F401,F403
    import _wassreg as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
