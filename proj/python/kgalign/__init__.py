"""Hybrid knowledge-graph entity alignment."""

try:
    from ._kgalign import *  # noqa: F401,F403
    from ._kgalign import __doc__  # noqa: F401
except ImportError:
    # Build-tree layout: the extension sits next to the package on sys.path.
    from _kgalign import *  # noqa: F401,F403
