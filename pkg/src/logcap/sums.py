"""Backend selection for the bulk energy sums.

The compiled extension is preferred when it imported cleanly; the NumPy
fallback is always available.  Set ``LOGCAP_PURE_PYTHON=1`` to force the
fallback (used by the benchmark and the backend differential tests).
"""

from __future__ import annotations

import os

from . import _slowsums

if os.environ.get("LOGCAP_PURE_PYTHON") == "1":
    _impl = _slowsums
else:
    try:
        from . import _fastsums as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _slowsums

mutual_sum = _impl.mutual_sum
cross_pairs_sum = _impl.cross_pairs_sum
uniform_cross_fast = _impl.uniform_cross_fast


def backend_name() -> str:
    return _impl.BACKEND_NAME
