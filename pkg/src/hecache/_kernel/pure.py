"""Pure-Python kernel: coefficient vectors as tuples of ints.

Negacyclic multiplication uses Kronecker substitution -- both operands
are packed into one large integer with disjoint fixed-width fields, so
the whole convolution is a single big-integer multiply (delegated to
gmpy2/GMP when importable). The result is exact, hence bit-identical
to the schoolbook reduction for every input.
"""

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # plain ints work, just slower on the big product
    _mpz = None

BACKEND = "python"


class PureContext:
    """Per-(N, q) constants for the packed-integer convolution."""

    __slots__ = ("N", "q", "field_bytes", "coeff_bytes", "zero_handle")

    def __init__(self, N, q):
        self.N = N
        self.q = q
        # one field must hold sum_{N} (q-1)^2 without carrying over
        self.field_bytes = (2 * q.bit_length() + N.bit_length() + 7) // 8 + 1
        self.coeff_bytes = (q.bit_length() + 7) // 8
        self.zero_handle = (0,) * N


def make_ctx(N, q):
    return PureContext(N, q)


def zero(ctx):
    return ctx.zero_handle


def constant(ctx, value):
    return (value,) + ctx.zero_handle[1:]


def from_ints(ctx, values):
    return tuple(values)


def to_ints(ctx, h):
    return h


def coeff(ctx, h, i):
    return h[i]


def equal(ctx, a, b):
    return a == b


def add(ctx, a, b):
    q = ctx.q
    return tuple(s if (s := x + y) < q else s - q for x, y in zip(a, b))


def sub(ctx, a, b):
    q = ctx.q
    return tuple(d if (d := x - y) >= 0 else d + q for x, y in zip(a, b))


def neg(ctx, a):
    q = ctx.q
    return tuple(q - x if x else 0 for x in a)


def scalar_mul(ctx, z, a):
    q = ctx.q
    return tuple(z * x % q for x in a)


def _pack(ctx, h):
    W = ctx.field_bytes
    cw = ctx.coeff_bytes
    buf = bytearray(W * ctx.N)
    for i, x in enumerate(h):
        pos = i * W
        buf[pos:pos + cw] = x.to_bytes(cw, "little")
    return int.from_bytes(bytes(buf), "little")

def mul(ctx, a, b):
    N, q, W = ctx.N, ctx.q, ctx.field_bytes
    pa, pb = _pack(ctx, a), _pack(ctx, b)
    if _mpz is not None:
        prod = int(_mpz(pa) * _mpz(pb))
    else:
        prod = pa * pb
    raw = prod.to_bytes(2 * N * W, "little")
    conv = [int.from_bytes(raw[k * W:(k + 1) * W], "little") for k in range(2 * N)]
    # fold the linear convolution back through X^N = -1
    return tuple((conv[i] - conv[i + N]) % q for i in range(N))


def to_bytes(ctx, h):
    return b"".join(x.to_bytes(16, "little") for x in h)


def from_bytes(ctx, data):
    N = ctx.N
    if len(data) != 16 * N:
        raise ValueError(f"expected {16 * N} bytes, got {len(data)}")
    out = tuple(int.from_bytes(data[i * 16:(i + 1) * 16], "little") for i in range(N))
    if any(x >= ctx.q for x in out):
        raise ValueError("coefficient out of range for modulus")
    return out
