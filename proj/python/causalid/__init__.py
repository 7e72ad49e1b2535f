"""Treatment-effect identifiability and censored-sample estimation on
finite discrete observational studies.

The heavy lifting lives in the compiled extension; this package re-exports
its surface. When running against an in-tree CMake build the extension is a
top-level module, so fall back to that import path.
"""

try:
    from ._causalid import *  # noqa: F401,F403
    from ._causalid import __doc__ as _ext_doc
except ImportError:  # in-tree build: extension sits on sys.path directly
    from _causalid import *  # noqa: F401,F403
    from _causalid import __doc__ as _ext_doc

__all__ = [name for name in dir() if not name.startswith("_")]
