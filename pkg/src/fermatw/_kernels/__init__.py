"""Kernel backend selection.

The compiled extension (`fermatw._kernels._core`) is used when available;
otherwise the numpy reference backend. Set FERMATW_BACKEND=python or
FERMATW_BACKEND=ext to force a choice (the latter raises if the extension
was not built).
"""

import os

_choice = os.environ.get("FERMATW_BACKEND", "").strip().lower()

if _choice == "python":
    from . import pyref as impl
elif _choice == "ext":
    from . import _core as impl  # noqa: F401 -- ImportError is the answer
elif _choice:
    raise ValueError(f"FERMATW_BACKEND={_choice!r}: expected 'python' or 'ext'")
else:
    try:
        from . import _core as impl
    except ImportError:
        from . import pyref as impl

BACKEND = impl.BACKEND_NAME

eisenstein_sums = impl.eisenstein_sums
wp_direct = impl.wp_direct
wp_prime_direct = impl.wp_prime_direct
wp_both_direct = impl.wp_both_direct
wp_both_direct_batch = impl.wp_both_direct_batch
wp_fast_batch = impl.wp_fast_batch
