"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
reference is used. Set ``CDEVAL_PURE_PYTHON=1`` to force the fallback.
"""

import logging
import os

from . import _pykernels

log = logging.getLogger(__name__)

if os.environ.get("CDEVAL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable; using pure-Python fallback")
        _impl = _pykernels

BACKEND = _impl.BACKEND
edge_betweenness = _impl.edge_betweenness
louvain_local_move = _impl.louvain_local_move
louvain_refine = _impl.louvain_refine
label_propagation_sweep = _impl.label_propagation_sweep
label_propagation_stable = _impl.label_propagation_stable

__all__ = [
    "BACKEND",
    "edge_betweenness",
    "louvain_local_move",
    "louvain_refine",
    "label_propagation_sweep",
    "label_propagation_stable",
]
