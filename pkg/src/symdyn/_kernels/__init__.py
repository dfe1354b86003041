"""Hot inner loops, compiled when available.

The compiled extension is preferred; set ``SYMDYN_PURE_PYTHON=1`` to force
the pure-Python fallback. Both expose the same functions.
"""
import os

from . import _pykernels as python

compiled = None
if os.environ.get("SYMDYN_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else python
BACKEND = active.BACKEND

bd_window_ok = active.bd_window_ok
bd_suffix_ok = active.bd_suffix_ok
dfa_level_counts = active.dfa_level_counts
greedy_cover = active.greedy_cover
cover_uncovered = active.cover_uncovered
bd_level_counts = active.bd_level_counts

__all__ = [
    "BACKEND",
    "bd_window_ok",
    "bd_suffix_ok",
    "dfa_level_counts",
    "greedy_cover",
    "cover_uncovered",
    "bd_level_counts",
    "python",
    "compiled",
]
