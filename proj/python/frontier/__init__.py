"""Python face of the frontier efficiency toolkit.

The heavy lifting lives in the compiled _frontier module; this package just
re-exports it so `import frontier` works both from an installed wheel and
from a plain CMake build directory placed on PYTHONPATH.
"""

try:
    from ._frontier import *  # noqa: F401,F403
    from ._frontier import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _frontier import *  # noqa: F401,F403
    from _frontier import __version__  # noqa: F401
