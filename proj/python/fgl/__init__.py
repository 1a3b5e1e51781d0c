"""3SUM-hardness reduction workbench: python bindings over the C++ core."""

try:
    from ._fgl import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:
    from _fgl import *  # noqa: F401,F403  (in-tree build on PYTHONPATH)

__version__ = "0.1.0"
