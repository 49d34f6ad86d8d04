"""Binary serialization of parameters, keys, and ciphertexts.

Every record starts with the magic ``SMC1``, a one-byte record type,
and an 8-byte little-endian body length. The body opens with N, q,
and delta as 16-byte little-endian integers, followed by type-specific
fields; coefficient arrays are length-prefixed (8-byte LE count) runs
of 16-byte little-endian coefficients. The layout is frozen by golden
tests, so changing it is a format break.

Record types:
    P  parameters   sigma (8-byte IEEE double LE), radix (16 LE), seed (8 LE)
    K  public key   coeff array pk1, coeff array pk2
    S  secret key   coeff array s
    C  ciphertext   scale (16 LE), coeff array c1, coeff array c2
"""

import struct

from .errors import FormatError
from .he import Ciphertext, PublicKey, SecretKey
from .ring import Params, Poly

MAGIC = b"SMC1"

_TYPE_PARAMS = b"P"
_TYPE_PUBLIC = b"K"
_TYPE_SECRET = b"S"
_TYPE_CIPHER = b"C"


def _u128(x: int) -> bytes:
    return x.to_bytes(16, "little")


def _header_body(params: Params) -> bytes:
    return _u128(params.N) + _u128(params.q) + _u128(params.delta)


def _poly_field(p: Poly) -> bytes:
    return struct.pack("<Q", p.params.N) + p.to_bytes()


def _frame(rtype: bytes, body: bytes) -> bytes:
    return MAGIC + rtype + struct.pack("<Q", len(body)) + body


class _Reader:
    def __init__(self, data: bytes, expect_type: bytes):
        if len(data) < 13 or data[:4] != MAGIC:
            raise FormatError("bad magic; not a hecache record")
        if data[4:5] != expect_type:
            raise FormatError(
                f"record type {data[4:5]!r}, expected {expect_type!r}")
        (length,) = struct.unpack("<Q", data[5:13])
        if len(data) != 13 + length:
            raise FormatError(
                f"body length {length} does not match record size {len(data)}")
        self.body = data[13:]
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.body):
            raise FormatError("truncated record")
        out = self.body[self.pos:self.pos + n]
        self.pos += n
        return out

    def u128(self) -> int:
        return int.from_bytes(self.take(16), "little")

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def poly(self, params: Params) -> Poly:
        count = self.u64()
        if count != params.N:
            raise FormatError(f"coefficient count {count} != N={params.N}")
        return Poly.from_bytes(params, self.take(16 * count))

    def done(self):
        if self.pos != len(self.body):
            raise FormatError("trailing bytes in record")


def dumps_params(params: Params) -> bytes:
    body = (_header_body(params)
            + struct.pack("<d", params.sigma)
            + _u128(params.radix)
            + struct.pack("<Q", params.seed))
    return _frame(_TYPE_PARAMS, body)


def loads_params(data: bytes) -> Params:
    r = _Reader(data, _TYPE_PARAMS)
    N, q, delta = r.u128(), r.u128(), r.u128()
    (sigma,) = struct.unpack("<d", r.take(8))
    radix = r.u128()
    seed = r.u64()
    r.done()
    return Params(N=N, q=q, delta=delta, sigma=sigma, radix=radix, seed=seed)


def _check_ring(r: _Reader, params: Params):
    N, q, delta = r.u128(), r.u128(), r.u128()
    if (N, q, delta) != (params.N, params.q, params.delta):
        raise FormatError("record was written under different parameters")


def dumps_public_key(pk: PublicKey, params: Params) -> bytes:
    body = _header_body(params) + _poly_field(pk.pk1) + _poly_field(pk.pk2)
    return _frame(_TYPE_PUBLIC, body)


def loads_public_key(data: bytes, params: Params) -> PublicKey:
    r = _Reader(data, _TYPE_PUBLIC)
    _check_ring(r, params)
    pk1 = r.poly(params)
    pk2 = r.poly(params)
    r.done()
    return PublicKey(pk1=pk1, pk2=pk2)


def dumps_secret_key(sk: SecretKey, params: Params) -> bytes:
    body = _header_body(params) + _poly_field(sk.s)
    return _frame(_TYPE_SECRET, body)


def loads_secret_key(data: bytes, params: Params) -> SecretKey:
    r = _Reader(data, _TYPE_SECRET)
    _check_ring(r, params)
    s = r.poly(params)
    r.done()
    return SecretKey(s=s)


def dumps_ciphertext(ct: Ciphertext, params: Params) -> bytes:
    body = (_header_body(params) + _u128(ct.scale)
            + _poly_field(ct.c1) + _poly_field(ct.c2))
    return _frame(_TYPE_CIPHER, body)


def loads_ciphertext(data: bytes, params: Params) -> Ciphertext:
    r = _Reader(data, _TYPE_CIPHER)
    _check_ring(r, params)
    scale = r.u128()
    c1 = r.poly(params)
    c2 = r.poly(params)
    r.done()
    return Ciphertext(c1=c1, c2=c2, scale=scale)
