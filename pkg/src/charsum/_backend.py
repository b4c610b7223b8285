"""Kernel backend selection.

The compiled extension is preferred when present; the numpy fallback keeps the
package usable from a plain source checkout. CHARSUM_BACKEND=py or =c forces
one side, which the benchmark and the cross-backend tests rely on.
"""

import os

_FORCED = os.environ.get("CHARSUM_BACKEND", "").strip().lower()


def load_backend(name: str):
    """Return the kernel module for an explicit backend name."""
    if name in ("py", "python"):
        from . import _kernels_py
        return _kernels_py
    if name in ("c", "compiled"):
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}; expected 'py' or 'c'")


def available_backends() -> list[str]:
    names = ["python"]
    try:
        load_backend("c")
    except ImportError:
        pass
    else:
        names.insert(0, "compiled")
    return names


if _FORCED:
    kernels = load_backend(_FORCED)
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND_NAME: str = kernels.BACKEND
HAVE_COMPILED: bool = BACKEND_NAME == "compiled" or "compiled" in available_backends()
