"""Kernel backend selection.

Hot event-check kernels exist in two implementations: numba-jitted loops
with early exit (`_kernels_nb`) and vectorized pure numpy (`_kernels_np`).
The active backend is fixed at import time from the ``SEPKIT_NUMBA``
environment variable:

    SEPKIT_NUMBA=0   force the pure-numpy path
    SEPKIT_NUMBA=1   require numba (ImportError if unavailable)
    unset            use numba when importable, numpy otherwise

Both backends evaluate the same predicates; they may differ in the last
bits of intermediate floating-point sums (BLAS versus sequential loops),
which for continuous random inputs never flips an event comparison in
practice. Results are deterministic per backend.
"""

import os

ENV_VAR = "SEPKIT_NUMBA"

_FALSY = {"0", "false", "no", "off"}
_TRUTHY = {"1", "true", "yes", "on"}


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _resolve() -> bool:
    raw = os.environ.get(ENV_VAR, "").strip().lower()
    if raw in _FALSY:
        return False
    if raw in _TRUTHY:
        if not _numba_available():
            raise ImportError(
                f"{ENV_VAR}={raw!r} requires numba, which is not installed"
            )
        return True
    return _numba_available()


USE_NUMBA = _resolve()


def active() -> str:
    """Name of the kernel backend selected at import time."""
    return "numba" if USE_NUMBA else "numpy"
