"""Runtime switches read from the environment.

``SYMTEST_DISABLE_NUMBA=1`` forces the pure-numpy kernels even when numba is
importable. The flag is read once, at import of :mod:`symtest._kernels`.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def numba_disabled() -> bool:
    return os.environ.get("SYMTEST_DISABLE_NUMBA", "").strip().lower() not in _FALSY


def default_seed() -> int:
    """Master seed from ``SYMTEST_SEED`` (unsigned 64-bit decimal), else 0."""
    raw = os.environ.get("SYMTEST_SEED")
    if raw is None or raw.strip() == "":
        return 0
    try:
        value = int(raw.strip(), 10)
    except ValueError:
        value = -1
    if not 0 <= value < 2**64:
        raise ValueError(f"SYMTEST_SEED must be an unsigned 64-bit integer, got {raw!r}")
    return value
