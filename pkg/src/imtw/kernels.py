"""Kernel backend selection.

The compiled module is used when it was built and the instance fits in 64-bit
words; otherwise the pure-Python module runs. Setting ``IMTW_PURE=1`` in the
environment forces the pure-Python path (used by the benchmark and tests).
"""

import os

from . import _purekernels as pure

compiled = None
if os.environ.get("IMTW_PURE", "") in ("", "0"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

BACKEND = compiled.BACKEND if compiled is not None else pure.BACKEND
WORD = 64


def maximal_independent_sets(adj, vertices, cap):
    if compiled is not None and vertices.bit_length() <= WORD:
        return compiled.maximal_independent_sets(adj, vertices, cap)
    return pure.maximal_independent_sets(adj, vertices, cap)


def max_induced_subset(adj, edges):
    if compiled is not None and len(edges) <= WORD and len(adj) <= WORD:
        return compiled.max_induced_subset(adj, edges)
    return pure.max_induced_subset(adj, edges)


def elimination_dp(ladj, costs=None):
    if compiled is not None and len(ladj) <= 30:
        return compiled.elimination_dp(ladj, costs)
    return pure.elimination_dp(ladj, costs)
