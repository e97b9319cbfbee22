"""Hybrid vector + SQL query engine, metrics and workload generator.

The heavy lifting lives in the compiled ``_vecsql`` extension; this package
just re-exports it. In a wheel the extension sits inside the package; in a
plain CMake build it is importable from the build directory.
"""

try:
    from ._vecsql import *  # noqa: F401,F403
    from ._vecsql import __version__  # noqa: F401
except ImportError:  # pragma: no cover - dev builds keep the module beside the build tree
    from _vecsql import *  # noqa: F401,F403
    from _vecsql import __version__  # noqa: F401
