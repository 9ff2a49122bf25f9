"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; set
QDHO_BACKEND=pure or QDHO_BACKEND=compiled to force a choice.  With
`compiled` forced, a missing extension is an import error rather than a
silent downgrade.
"""

import os

_choice = os.environ.get("QDHO_BACKEND", "").strip().lower()
if _choice not in ("", "pure", "compiled"):
    raise ImportError(
        f"QDHO_BACKEND must be 'pure' or 'compiled', got {_choice!r}")

if _choice == "pure":
    from . import _pure as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _pure as _impl

BACKEND = _impl.NAME
expm = _impl.expm
hermitian_eig = _impl.hermitian_eig
