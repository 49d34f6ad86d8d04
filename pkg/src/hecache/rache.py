"""Radix-additive ciphertext caching (the linear-cost baseline).

Precomputes encryptions of radix powers r^0..r^(n-1) ("pivots"), then
assembles the ciphertext of a nonnegative integer m from its base-r
digits: sum of d_i (x) pivots[i]. Fresh randomness comes from masking
with boolean-selected encryptions of zero, pivots[i+1] - r (x) pivots[i].
Construction cost grows with the digit count and the randomization
walks the whole cache, which is exactly the scaling weakness the
scalar-multiplicative scheme (see :mod:`hecache.smuche`) removes.

Only nonnegative integers are supported; real-valued workloads are
scaled to integers by the benchmark layer first. The pivot cache is
immutable once built and rache_enc is pure given its RandomStream, so
concurrent encryption just needs one stream per caller.
"""

from dataclasses import dataclass

from .errors import ParameterError, RangeError
from .he import Ciphertext, Plaintext, PublicKey, ct_add, ct_scalar_mul, ct_sub, encrypt
from .ring import Params, RandomStream


@dataclass(frozen=True)
class RachePivotCache:
    """Ordered encryptions of r^i for i in [0, n_pivot)."""

    pivots: tuple
    radix: int
    params: Params

    @property
    def n_pivot(self) -> int:
        return len(self.pivots)


def rache_precompute(pk: PublicKey, params: Params, n_pivot: int,
                     rng: RandomStream) -> RachePivotCache:
    """Encrypt the pivot ladder r^0 .. r^(n_pivot-1).

    Rejects n_pivot < 2 (randomization needs a successor pivot) and
    ladders whose top rung would overflow the q/4 encoding headroom.
    """
    if n_pivot < 2:
        raise ParameterError(f"n_pivot must be >= 2, got {n_pivot}")
    r = params.radix
    if r ** (n_pivot - 1) * params.delta * 4 >= params.q:
        raise ParameterError(
            f"top pivot r^{n_pivot - 1} overflows q/4 at scale {params.delta}")
    pivots = tuple(
        encrypt(pk, Plaintext(r ** i, params.delta), rng) for i in range(n_pivot))
    return RachePivotCache(pivots=pivots, radix=r, params=params)


def digit_decompose(m: int, radix: int, n_pivot: int) -> list:
    """Base-r digits of m, least significant first; empty for m = 0."""
    if m < 0:
        raise RangeError(f"negative message {m} not representable")
    if m >= radix ** n_pivot:
        raise RangeError(
            f"{m} needs more than {n_pivot} base-{radix} digits")
    digits = []
    while m:
        m, d = divmod(m, radix)
        digits.append(d)
    return digits


def rache_construct(cache: RachePivotCache, digits) -> Ciphertext:
    """sum of digits[i] (x) pivots[i], skipping zero digits."""
    if len(digits) > cache.n_pivot:
        raise RangeError("more digits than cached pivots")
    if any(not 0 <= d < cache.radix for d in digits):
        raise RangeError(f"digits must lie in [0, {cache.radix})")
    acc = None
    for i, d in enumerate(digits):
        if d == 0:
            continue
        term = ct_scalar_mul(d, cache.pivots[i])
        acc = term if acc is None else ct_add(acc, term)
    if acc is None:
        return Ciphertext.zero(cache.params, cache.params.delta)
    return acc


def rache_randomize(cache: RachePivotCache, cprime: Ciphertext, top_idx: int,
                    rng: RandomStream) -> Ciphertext:
    """Add boolean-masked zero encryptions pivots[i+1] - r (x) pivots[i].

    Each mask term encrypts r^(i+1) - r*r^i = 0, so the decrypted value
    is untouched while the ciphertext bits change with the mask draw.
    Every term of the sum is evaluated, boolean included; randomization
    therefore costs a fixed number of ciphertext operations per pivot,
    which is the linear overhead this scheme is known for. top_idx may
    be at most n_pivot - 2 so pivots[top_idx] exists.
    """
    if top_idx < 0 or top_idx + 1 >= cache.n_pivot:
        raise RangeError(
            f"top_idx {top_idx} out of range for {cache.n_pivot} pivots")
    r = cache.radix
    out = cprime
    for i in range(top_idx):
        mask = ct_scalar_mul(
            rng.bit(),
            ct_sub(cache.pivots[i + 1], ct_scalar_mul(r, cache.pivots[i])))
        out = ct_add(out, mask)
    return out


def rache_enc(cache: RachePivotCache, m: int, rng: RandomStream) -> Ciphertext:
    """Cached encryption of a nonnegative integer m < r^(n_pivot-1).

    Randomization always spans the full cache (top_idx = n_pivot - 2):
    that is what makes the cost grow with the cache size, and it keeps
    small messages (including m = 0) as fresh-looking as large ones.
    With n_pivot = 2 there are no mask terms and the output is
    deterministic; use a larger cache when freshness matters.
    """
    r = cache.radix
    if not 0 <= m < r ** (cache.n_pivot - 1):
        raise RangeError(
            f"message {m} outside [0, {r}^{cache.n_pivot - 1})")
    cprime = rache_construct(cache, digit_decompose(m, r, cache.n_pivot))
    return rache_randomize(cache, cprime, cache.n_pivot - 2, rng)
