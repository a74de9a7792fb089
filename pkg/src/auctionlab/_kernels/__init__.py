"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementations
when the extension is missing or AUCTIONLAB_NO_EXT is set.  Both backends
expose the same functions with identical semantics.
"""

import os

if os.environ.get("AUCTIONLAB_NO_EXT"):
    from . import _fallback as _impl
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

BACKEND = _impl.BACKEND
topk_stats = _impl.topk_stats
geninv_pl = _impl.geninv_pl
pushforward_cdf = _impl.pushforward_cdf

__all__ = ["BACKEND", "topk_stats", "geninv_pl", "pushforward_cdf"]
