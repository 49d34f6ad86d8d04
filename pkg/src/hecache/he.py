"""Base RLWE scheme: keys, scalar encoding, encryption, ciphertext ops.

A ciphertext is a pair of ring elements (c1, c2). Keys follow the
usual construction: ternary secret s, public key (pk1, pk2) with
pk1 = -(a*s) + e for uniform a = pk2 and Gaussian e. Encryption masks
the encoded message with pk1*u + e1 while pk2*u + e2 carries the hint
that decryption (c1 + c2*s) uses to cancel the mask.

Plaintexts are scalars: a real value m is encoded as round(m * scale)
in the constant coefficient, zeros elsewhere. Residues above q/2 are
read as negatives (signed lift), which is what makes subtraction and
negative messages coherent. There is no ciphertext-ciphertext multiply
anywhere in this package, hence no moduli chain and no rescaling.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import ring
from .errors import EncodingOverflow, MismatchError
from .ring import Params, Poly, RandomStream, signed_lift


@dataclass(frozen=True)
class SecretKey:
    s: Poly


@dataclass(frozen=True)
class PublicKey:
    pk1: Poly
    pk2: Poly

    @property
    def params(self) -> Params:
        return self.pk1.params


@dataclass(frozen=True)
class Plaintext:
    """Scalar value paired with the integer scale it is encoded at."""

    value: float
    scale: int


@dataclass(frozen=True)
class Ciphertext:
    c1: Poly
    c2: Poly
    scale: int

    @property
    def params(self) -> Params:
        return self.c1.params

    @classmethod
    def zero(cls, params: Params, scale: int) -> "Ciphertext":
        """Deterministic encryption of 0 with zeroed randomness."""
        return cls(Poly.zero(params), Poly.zero(params), scale)

    def to_bytes(self) -> bytes:
        return self.c1.to_bytes() + self.c2.to_bytes()


def keygen(params: Params, rng: RandomStream) -> tuple[PublicKey, SecretKey]:
    """Sample a ternary secret and matching public key pair."""
    s = ring.sample_ternary(params, rng)
    a = ring.sample_uniform(params, rng)
    e = ring.sample_gaussian(params, rng)
    pk1 = ring.poly_sub(e, ring.poly_mul(a, s))
    return PublicKey(pk1=pk1, pk2=a), SecretKey(s=s)


def encode(m, scale: int, params: Params) -> Poly:
    """round(m * scale) into the constant coefficient.

    The multiply runs through Fraction so float inputs encode their
    exact binary value; float rounding artifacts never reach the ring.
    """
    z = round(Fraction(m) * scale)
    if abs(z) * 4 >= params.q:
        raise EncodingOverflow(
            f"|{m} * {scale}| exceeds q/4 (q={params.q})")
    return Poly.constant(params, z)


def decode(p: Poly, scale: int) -> float:
    """Signed lift of the constant coefficient, divided by the scale."""
    return signed_lift(p.coeff(0), p.params.q) / scale


def encrypt(pk: PublicKey, pt: Plaintext, rng: RandomStream) -> Ciphertext:
    """Randomized encryption; c1 = pk1*u + e1 + encode(pt), c2 = pk2*u + e2."""
    params = pk.params
    m_poly = encode(pt.value, pt.scale, params)
    u = ring.sample_ternary(params, rng)
    e1 = ring.sample_gaussian(params, rng)
    e2 = ring.sample_gaussian(params, rng)
    c1 = ring.poly_add(ring.poly_add(ring.poly_mul(pk.pk1, u), e1), m_poly)
    c2 = ring.poly_add(ring.poly_mul(pk.pk2, u), e2)
    return Ciphertext(c1=c1, c2=c2, scale=pt.scale)


def decrypt_poly(sk: SecretKey, ct: Ciphertext) -> Poly:
    """The raw ring element c1 + c2*s (message plus residual noise)."""
    return ring.poly_add(ct.c1, ring.poly_mul(ct.c2, sk.s))


def decrypt(sk: SecretKey, ct: Ciphertext) -> float:
    """Decode c1 + c2*s at the ciphertext's scale.

    Noise overflow is not detectable here; it simply produces a wrong
    value. The benchmark harness cross-checks every decryption against
    the known plaintext instead.
    """
    return decode(decrypt_poly(sk, ct), ct.scale)


def _check_compat(a: Ciphertext, b: Ciphertext):
    if not a.params.compatible(b.params):
        raise MismatchError("ciphertexts from different rings")
    if a.scale != b.scale:
        raise MismatchError(
            f"scale mismatch ({a.scale} vs {b.scale}); rescaling is not supported")


def ct_add(a: Ciphertext, b: Ciphertext) -> Ciphertext:
    _check_compat(a, b)
    return Ciphertext(ring.poly_add(a.c1, b.c1), ring.poly_add(a.c2, b.c2), a.scale)


def ct_sub(a: Ciphertext, b: Ciphertext) -> Ciphertext:
    _check_compat(a, b)
    return Ciphertext(ring.poly_sub(a.c1, b.c1), ring.poly_sub(a.c2, b.c2), a.scale)


def ct_scalar_mul(z: int, ct: Ciphertext) -> Ciphertext:
    """(z*c1, z*c2); caller must keep |z| * noise below q/4."""
    return Ciphertext(
        ring.poly_scalar_mul(z, ct.c1), ring.poly_scalar_mul(z, ct.c2), ct.scale)
