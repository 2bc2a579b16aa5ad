"""Backend selection for the homomorphism CSP kernel.

The compiled extension is used when it was built and the target graph fits
in a 64-bit domain mask.  Set ``HOMRECONF_PURE_PYTHON=1`` to force the
pure-Python kernel.
"""

from __future__ import annotations

import os
from typing import Sequence

from . import _pykernel

try:
    if os.environ.get("HOMRECONF_PURE_PYTHON"):
        raise ImportError("pure-Python kernel forced")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"


def make_csp(
    var_nbrs: Sequence[Sequence[int]],
    var_looped: Sequence[bool],
    h_nbr_masks: Sequence[int],
    h_loop_mask: int,
    backend: str | None = None,
):
    """Build a HomCSP with the requested (or best available) backend."""
    use_c = _ckernel is not None and len(h_nbr_masks) <= 64
    if backend == "python":
        use_c = False
    elif backend == "cython" and not use_c:
        raise RuntimeError("compiled kernel unavailable for this instance")
    module = _ckernel if use_c else _pykernel
    return module.HomCSP(var_nbrs, var_looped, h_nbr_masks, h_loop_mask)


__all__ = ["BACKEND", "make_csp"]
