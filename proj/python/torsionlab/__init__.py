"""Torsion invariants of finite-dimensional metric cochain complexes.

Thin wrapper around the C++ core; see the project README for the data
model and the CLI surface.
"""

try:
    from ._torsionlab import *  # noqa: F401,F403
    from ._torsionlab import __doc__ as _core_doc  # noqa: F401
except ImportError:  # module built flat in the build tree
    from _torsionlab import *  # noqa: F401,F403

__version__ = "0.1.0"
