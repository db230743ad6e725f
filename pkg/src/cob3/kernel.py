"""Kernel selection: compiled extension if built, pure Python otherwise.

Set COB3_PURE_KERNEL=1 to force the pure-Python implementation (used by the
benchmark and by tests that compare the two).
"""

import os

if os.environ.get("COB3_PURE_KERNEL") == "1":
    from cob3 import _kernel_py as _impl

    KERNEL = "python"
else:
    try:
        from cob3 import _kernel_cy as _impl  # type: ignore[attr-defined]

        KERNEL = "cython"
    except ImportError:
        from cob3 import _kernel_py as _impl

        KERNEL = "python"

nf = _impl.nf
find_matches = _impl.find_matches
apply_match = _impl.apply_match
find_insertions = _impl.find_insertions
apply_insertion = _impl.apply_insertion
instantiate = _impl.instantiate
side_hull = _impl.side_hull
successors = _impl.successors

__all__ = [
    "KERNEL",
    "nf",
    "find_matches",
    "apply_match",
    "find_insertions",
    "apply_insertion",
    "instantiate",
    "side_hull",
    "successors",
]
