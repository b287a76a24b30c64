"""Numeric backend selection.

Hot kernels (normal deviate generation and the replication sweep) exist in
two variants: numba-compiled scalar loops and vectorized pure numpy. The
``ADJUST3_BACKEND`` environment variable pins one explicitly ("numba" or
"numpy"); when unset, numba is used if importable, numpy otherwise.

Results are bit-reproducible within a backend. Across backends estimates
agree only to ~1e-12 relative (the two paths round the inverse-CDF tail
branch differently at the last ulp).
"""

from __future__ import annotations

import os

ENV_VAR = "ADJUST3_BACKEND"

NUMPY = "numpy"
NUMBA = "numba"

_numba_probe: bool | None = None


def numba_available() -> bool:
    """True when numba can be imported (probed once per process)."""
    global _numba_probe
    if _numba_probe is None:
        try:
            import numba  # noqa: F401
        except ImportError:
            _numba_probe = False
        else:
            _numba_probe = True
    return _numba_probe


def available_backends() -> tuple[str, ...]:
    if numba_available():
        return (NUMBA, NUMPY)
    return (NUMPY,)


def active_backend(override: str | None = None) -> str:
    """Resolve the backend to use, honoring `override`, then the env var."""
    choice = override if override is not None else os.environ.get(ENV_VAR, "").strip().lower()
    if choice in ("", "auto"):
        return NUMBA if numba_available() else NUMPY
    if choice == NUMPY:
        return NUMPY
    if choice == NUMBA:
        if not numba_available():
            raise RuntimeError(
                f"backend 'numba' requested via {ENV_VAR} but numba is not installed"
            )
        return NUMBA
    raise ValueError(f"unknown backend {choice!r}; expected 'numba', 'numpy', or 'auto'")
