"""Kernel backend selection.

Two interchangeable kernels implement the coefficient-level ring
operations: a compiled Cython extension (fast path) and a pure-Python
module (always available). The compiled kernel is chosen automatically
when it imported successfully and the modulus is NTT-friendly (odd
prime below 2^125 with 2N | q-1); anything else falls back per ring.

The environment variable HECACHE_BACKEND (``py``, ``cy``, or ``auto``)
pins the choice at import time; :func:`set_backend` overrides it at
runtime (used by the backend-comparison benchmark). Both kernels
produce bit-identical coefficients, so switching never changes results.
"""

import os

from . import pure, tables

try:
    from . import _core
except ImportError:
    _core = None

_VALID = ("auto", "py", "cy")
_env_choice = os.environ.get("HECACHE_BACKEND", "auto")
if _env_choice not in _VALID:
    raise RuntimeError(
        f"HECACHE_BACKEND must be one of {_VALID}, got {_env_choice!r}")
if _env_choice == "cy" and _core is None:
    raise RuntimeError("HECACHE_BACKEND=cy but the compiled kernel is not built")

_choice = _env_choice
_ctx_cache = {}


def available_backends():
    return ("python", "cython") if _core is not None else ("python",)


def active_backend():
    """Name of the kernel auto-selection currently prefers."""
    if _choice == "py" or _core is None:
        return "python"
    return "cython"


def set_backend(name):
    """Override backend selection at runtime ('auto', 'py', or 'cy').

    Returns the previous choice so callers can restore it. Polys built
    before a switch hold handles of the old kernel; create keys and
    ciphertexts after switching, never across it.
    """
    global _choice
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "cy" and _core is None:
        raise RuntimeError("compiled kernel is not built")
    previous = _choice
    _choice = name
    return previous


def _cython_supported(N, q):
    return (
        _core is not None
        and q % 2 == 1
        and q.bit_length() <= 125
        and N >= 4
        and N & (N - 1) == 0
        and (q - 1) % (2 * N) == 0
        and tables.is_probable_prime(q)
    )


def get_kernel(N, q):
    """Return (kernel module, context) for the ring Z_q[X]/(X^N+1)."""
    key = (_choice, N, q)
    hit = _ctx_cache.get(key)
    if hit is None:
        want_cy = _choice != "py" and _core is not None
        use_cy = want_cy and _cython_supported(N, q)
        if _choice == "cy" and not use_cy:
            raise RuntimeError(
                f"compiled kernel cannot handle N={N}, q={q} "
                "(needs an odd prime q < 2^125 with 2N | q-1)")
        if use_cy:
            hit = (_core, _core.make_ctx(N, q, tables.negacyclic_ntt_tables(N, q)))
        else:
            hit = (pure, pure.make_ctx(N, q))
        _ctx_cache[key] = hit
    return hit
