"""Scalar-multiplicative ciphertext caching (constant operation count).

Instead of a ladder of radix powers, the cache holds encryptions of
reciprocal radix powers r^0, r^-1, ..., down to the scheme precision.
Encrypting m takes one pivot lookup, one ciphertext-scalar multiply by
z = round(m * r^idx), and one kernel-level randomization: add
rnd = (pk1 * xi, pk2 * xi) for a fresh ternary xi. The rnd pair is an
encryption of zero whose mask cancels under decryption, so

    dec(z (x) c (+) rnd) = z * m

up to small noise, and the ring-operation count per message is a
constant (2 scalar multiplies, 2 multiplies, 2 additions) regardless
of the plaintext value or the cache size.

Plaintext precision must be a power of 1/r dividing the encoding
scale; that keeps every pivot plaintext delta/r^i an exact integer and
the decode identity exact. Scalar multiplication scales noise by |z|,
so the usable |z| is bounded by q/(4*delta*noise); out-of-budget
values raise RangeError rather than decrypt wrongly.

The cache and public key are immutable and smuche_enc is pure given
its RandomStream; concurrent encryption needs one stream per caller.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import ring
from .errors import ParameterError, RangeError
from .he import Ciphertext, Plaintext, PublicKey, ct_scalar_mul, encrypt
from .ring import Params, RandomStream


@dataclass(frozen=True)
class SmuchePivotCache:
    """Ordered encryptions of r^-i for i in [0, max_idx]."""

    pivots: tuple
    radix: int
    params: Params

    @property
    def max_idx(self) -> int:
        return len(self.pivots) - 1


def _power_of_inverse_radix(value, radix: int):
    """Return k >= 0 with value == r^-k, or None."""
    frac = Fraction(value)
    if frac == 1:
        return 0
    if frac.numerator != 1:
        return None
    k = 0
    denom = frac.denominator
    while denom % radix == 0:
        denom //= radix
        k += 1
    return k if denom == 1 else None


def smuche_precompute(pk: PublicKey, params: Params, delta_inv,
                      rng: RandomStream) -> SmuchePivotCache:
    """Cache enc(r^-i) from the multiplicative identity down to delta_inv.

    delta_inv is the finest plaintext precision, required to be an
    exact power of 1/r with r^k dividing the encoding scale, so every
    cached plaintext delta * r^-i is an integer.
    """
    r = params.radix
    k = _power_of_inverse_radix(delta_inv, r)
    if k is None:
        raise ParameterError(
            f"precision {delta_inv} is not a power of 1/{r}")
    if params.delta % r ** k != 0:
        raise ParameterError(
            f"precision 1/{r}^{k} is finer than scale {params.delta} supports")
    target = Fraction(delta_inv)
    pivots = []
    pivot = Fraction(1)
    while pivot >= target:
        pivots.append(encrypt(pk, Plaintext(pivot, params.delta), rng))
        pivot /= r
    return SmuchePivotCache(pivots=tuple(pivots), radix=r, params=params)


def select_pivot(precision_inv, radix: int, max_idx: int) -> int:
    """Smallest idx with r^-idx <= precision_inv (the largest usable pivot).

    Larger pivots mean smaller scalar coefficients and therefore less
    amplified noise; integer precision (1) selects pivot 0.
    """
    target = Fraction(precision_inv)
    if target <= 0:
        raise ParameterError("precision must be positive")
    idx = 0
    step = Fraction(1)
    while step > target:
        idx += 1
        if idx > max_idx:
            raise RangeError(
                f"precision {precision_inv} finer than the cache supports")
        step /= radix
    return idx


def smuche_construct(cache: SmuchePivotCache, m, precision_inv) -> Ciphertext:
    """z (x) pivots[idx] with z = round(m * r^idx); decrypts to the
    quantization of m at precision r^-idx."""
    idx = select_pivot(precision_inv, cache.radix, cache.max_idx)
    z = round(Fraction(m) * cache.radix ** idx)
    params = cache.params
    pivot_plain = params.delta // cache.radix ** idx
    if abs(z) * (pivot_plain + params.noise_bound) * 4 >= params.q:
        raise RangeError(
            f"scalar {z} exceeds the noise budget for q={params.q}")
    return ct_scalar_mul(z, cache.pivots[idx])


def smuche_randomize(pk: PublicKey, cprime: Ciphertext,
                     rng: RandomStream) -> Ciphertext:
    """Add the zero-mask pair (pk1*xi, pk2*xi) for fresh ternary xi.

    Exactly two ring multiplies and two additions; the mask cancels
    against the secret key during decryption, leaving the value fixed.
    """
    params = pk.params
    if not params.compatible(cprime.params):
        raise ParameterError("public key and ciphertext from different rings")
    xi = ring.sample_ternary(params, rng)
    return Ciphertext(
        c1=ring.poly_add(cprime.c1, ring.poly_mul(pk.pk1, xi)),
        c2=ring.poly_add(cprime.c2, ring.poly_mul(pk.pk2, xi)),
        scale=cprime.scale)


def smuche_enc(cache: SmuchePivotCache, pk: PublicKey, m, precision_inv,
               rng: RandomStream) -> Ciphertext:
    """Constant-cost cached encryption: construct then randomize."""
    return smuche_randomize(pk, smuche_construct(cache, m, precision_inv), rng)
