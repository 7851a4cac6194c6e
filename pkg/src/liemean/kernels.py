"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``LIEMEAN_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("LIEMEAN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

concat_product = _impl.concat_product
bracket_product = _impl.bracket_product
linear_combination = _impl.linear_combination
det_mod_p = _impl.det_mod_p
rank_mod_p = _impl.rank_mod_p

__all__ = ["BACKEND", "concat_product", "bracket_product", "linear_combination", "det_mod_p", "rank_mod_p"]
