"""Exact computations with finite F_q-shtukas and group schemes with F_q-action."""

try:
    from ._core import *  # noqa: F401,F403  (installed layout)
    from ._core import __doc__ as _core_doc
except ImportError:  # build-tree layout: _core.so next to the build dir on PYTHONPATH
    from _core import *  # noqa: F401,F403
    from _core import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
__version__ = "0.1.0"
