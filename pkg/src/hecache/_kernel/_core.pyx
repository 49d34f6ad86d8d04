# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: coefficients as 128-bit limb pairs, negacyclic NTT.

Values live in [0, q) with q an odd prime below 2^125 satisfying
2N | q-1. Products of two such values need 256 bits, so multiplication
runs through a hand-rolled 4-limb Montgomery reduction (R = 2^128);
polynomial multiplication is an in-place iterative NTT with the
psi-power twiddles merged into the butterflies.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memcmp, memcpy

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64

BACKEND = "cython"

cdef u64 _MASK64 = 0xFFFFFFFFFFFFFFFF


cdef inline u128 _addmod(u128 a, u128 b, u128 q):
    cdef u128 s = a + b
    if s >= q:
        s -= q
    return s


cdef inline u128 _submod(u128 a, u128 b, u128 q):
    if a >= b:
        return a - b
    return a + q - b


cdef inline u128 _mont_mul(u128 a, u128 b, u128 q, u128 qinv):
    """REDC(a*b): returns a*b*2^-128 mod q for a, b < q."""
    cdef u64 a0 = <u64>a, a1 = <u64>(a >> 64)
    cdef u64 b0 = <u64>b, b1 = <u64>(b >> 64)
    cdef u128 t
    cdef u64 r0, r1, r2, r3, cA, cB

    # a*b as limbs r0..r3 (schoolbook 2x2; no partial sum overflows 128 bits)
    t = <u128>a0 * b0
    r0 = <u64>t; cA = <u64>(t >> 64)
    t = <u128>a1 * b0 + cA
    cA = <u64>t; cB = <u64>(t >> 64)
    t = <u128>a0 * b1 + cA
    r1 = <u64>t; cA = <u64>(t >> 64)
    t = <u128>a1 * b1 + cA + cB
    r2 = <u64>t; r3 = <u64>(t >> 64)

    # Montgomery factor m = (t mod 2^128) * qinv mod 2^128
    cdef u128 m = ((((<u128>r1) << 64) | r0) * qinv)
    cdef u64 m0 = <u64>m, m1 = <u64>(m >> 64)
    cdef u64 q0 = <u64>q, q1 = <u64>(q >> 64)
    cdef u64 s0, s1, s2, s3

    # m*q as limbs s0..s3
    t = <u128>m0 * q0
    s0 = <u64>t; cA = <u64>(t >> 64)
    t = <u128>m1 * q0 + cA
    cA = <u64>t; cB = <u64>(t >> 64)
    t = <u128>m0 * q1 + cA
    s1 = <u64>t; cA = <u64>(t >> 64)
    t = <u128>m1 * q1 + cA + cB
    s2 = <u64>t; s3 = <u64>(t >> 64)

    # (a*b + m*q) / 2^128; the low 128 bits cancel by construction
    cdef u64 carry, u0, u1
    t = <u128>r0 + s0
    carry = <u64>(t >> 64)
    t = <u128>r1 + s1 + carry
    carry = <u64>(t >> 64)
    t = <u128>r2 + s2 + carry
    u0 = <u64>t; carry = <u64>(t >> 64)
    t = <u128>r3 + s3 + carry
    u1 = <u64>t

    cdef u128 res = (((<u128>u1) << 64) | u0)
    if res >= q:
        res -= q
    return res


cdef u128 _u128_from_int(object x):
    # Python ints never auto-convert to __int128; split through 64-bit halves.
    cdef u64 lo = <u64>(x & 0xFFFFFFFFFFFFFFFF)
    cdef u64 hi = <u64>(x >> 64)
    return (((<u128>hi) << 64) | lo)


cdef object _int_from_u128(u128 x):
    cdef u64 lo = <u64>x
    cdef u64 hi = <u64>(x >> 64)
    if hi == 0:
        return <object>lo
    return ((<object>hi) << 64) | <object>lo


cdef class Context:
    """Montgomery constants and twiddle tables for one (N, q) ring."""

    cdef readonly Py_ssize_t N
    cdef u128 q, qinv, r2, ninv
    cdef u128* psi_rev
    cdef u128* ipsi_rev
    cdef readonly object py_q

    def __cinit__(self, Py_ssize_t N, object q, dict tables):
        self.N = N
        self.py_q = q
        self.q = _u128_from_int(q)
        self.qinv = _u128_from_int(tables["q_neg_inv"])
        self.r2 = _u128_from_int(tables["r2"])
        self.ninv = _u128_from_int(tables["n_inv"])
        self.psi_rev = <u128*>calloc(N, sizeof(u128))
        self.ipsi_rev = <u128*>calloc(N, sizeof(u128))
        if self.psi_rev == NULL or self.ipsi_rev == NULL:
            raise MemoryError()
        cdef Py_ssize_t i
        psi = tables["psi_rev_mont"]
        ipsi = tables["ipsi_rev_mont"]
        for i in range(N):
            self.psi_rev[i] = _u128_from_int(psi[i])
            self.ipsi_rev[i] = _u128_from_int(ipsi[i])

    def __dealloc__(self):
        if self.psi_rev != NULL:
            free(self.psi_rev)
        if self.ipsi_rev != NULL:
            free(self.ipsi_rev)


cdef class PolyData:
    """Owned coefficient buffer; opaque outside the kernel."""

    cdef u128* data
    cdef Py_ssize_t N

    def __cinit__(self, Py_ssize_t N):
        self.N = N
        self.data = <u128*>calloc(N, sizeof(u128))
        if self.data == NULL:
            raise MemoryError()

    def __dealloc__(self):
        if self.data != NULL:
            free(self.data)


def make_ctx(N, q, tables):
    return Context(N, q, tables)


def zero(Context ctx):
    return PolyData(ctx.N)


def constant(Context ctx, value):
    cdef PolyData out = PolyData(ctx.N)
    out.data[0] = _u128_from_int(value)
    return out


def from_ints(Context ctx, values):
    cdef PolyData out = PolyData(ctx.N)
    cdef Py_ssize_t i = 0
    for v in values:
        if i >= ctx.N:
            raise ValueError("too many coefficients")
        out.data[i] = _u128_from_int(v)
        i += 1
    if i != ctx.N:
        raise ValueError("too few coefficients")
    return out


def to_ints(Context ctx, PolyData h):
    cdef Py_ssize_t i
    return tuple(_int_from_u128(h.data[i]) for i in range(ctx.N))


def coeff(Context ctx, PolyData h, Py_ssize_t i):
    if i < 0 or i >= ctx.N:
        raise IndexError("coefficient index out of range")
    return _int_from_u128(h.data[i])


def equal(Context ctx, PolyData a, PolyData b):
    return memcmp(a.data, b.data, ctx.N * sizeof(u128)) == 0


def add(Context ctx, PolyData a, PolyData b):
    cdef PolyData out = PolyData(ctx.N)
    cdef u128 q = ctx.q
    cdef Py_ssize_t i
    for i in range(ctx.N):
        out.data[i] = _addmod(a.data[i], b.data[i], q)
    return out


def sub(Context ctx, PolyData a, PolyData b):
    cdef PolyData out = PolyData(ctx.N)
    cdef u128 q = ctx.q
    cdef Py_ssize_t i
    for i in range(ctx.N):
        out.data[i] = _submod(a.data[i], b.data[i], q)
    return out


def neg(Context ctx, PolyData a):
    cdef PolyData out = PolyData(ctx.N)
    cdef u128 q = ctx.q
    cdef Py_ssize_t i
    for i in range(ctx.N):
        out.data[i] = q - a.data[i] if a.data[i] != 0 else 0
    return out


def scalar_mul(Context ctx, z, PolyData a):
    """z*a with plain z in [0, q); one REDC per coefficient."""
    cdef PolyData out = PolyData(ctx.N)
    cdef u128 q = ctx.q, qinv = ctx.qinv
    # REDC(mont(z) * a_i) = z * a_i mod q
    cdef u128 zm = _mont_mul(_u128_from_int(z), ctx.r2, q, qinv)
    cdef Py_ssize_t i
    for i in range(ctx.N):
        out.data[i] = _mont_mul(zm, a.data[i], q, qinv)
    return out


cdef void _ntt_forward(Context ctx, u128* a):
    cdef Py_ssize_t t = ctx.N, m = 1, i, j, j1
    cdef u128 S, U, V, q = ctx.q, qinv = ctx.qinv
    while m < ctx.N:
        t >>= 1
        for i in range(m):
            j1 = 2 * i * t
            S = ctx.psi_rev[m + i]
            for j in range(j1, j1 + t):
                U = a[j]
                V = _mont_mul(a[j + t], S, q, qinv)
                a[j] = _addmod(U, V, q)
                a[j + t] = _submod(U, V, q)
        m <<= 1


cdef void _ntt_inverse(Context ctx, u128* a):
    cdef Py_ssize_t t = 1, m = ctx.N, h, i, j, j1
    cdef u128 S, U, V, q = ctx.q, qinv = ctx.qinv
    while m > 1:
        h = m >> 1
        j1 = 0
        for i in range(h):
            S = ctx.ipsi_rev[h + i]
            for j in range(j1, j1 + t):
                U = a[j]
                V = a[j + t]
                a[j] = _addmod(U, V, q)
                a[j + t] = _mont_mul(_submod(U, V, q), S, q, qinv)
            j1 += 2 * t
        t <<= 1
        m = h


def mul(Context ctx, PolyData a, PolyData b):
    """Negacyclic product via NTT; output in canonical plain form."""
    cdef Py_ssize_t N = ctx.N, i
    cdef u128 q = ctx.q, qinv = ctx.qinv, r2 = ctx.r2, ninv = ctx.ninv
    cdef PolyData ta = PolyData(N)
    cdef PolyData out = PolyData(N)
    cdef u128* tb = <u128*>calloc(N, sizeof(u128))
    if tb == NULL:
        raise MemoryError()
    try:
        for i in range(N):
            ta.data[i] = _mont_mul(a.data[i], r2, q, qinv)
            tb[i] = _mont_mul(b.data[i], r2, q, qinv)
        _ntt_forward(ctx, ta.data)
        _ntt_forward(ctx, tb)
        for i in range(N):
            ta.data[i] = _mont_mul(ta.data[i], tb[i], q, qinv)
        _ntt_inverse(ctx, ta.data)
        # final REDC by plain N^-1 undoes both the Montgomery form and
        # the missing 1/N factor of the inverse transform
        for i in range(N):
            out.data[i] = _mont_mul(ta.data[i], ninv, q, qinv)
    finally:
        free(tb)
    return out


def to_bytes(Context ctx, PolyData h):
    # x86-64/aarch64 store __int128 little-endian, matching the 16-byte
    # per-coefficient wire layout directly
    cdef bytes out = (<char*>h.data)[:ctx.N * sizeof(u128)]
    return out


def from_bytes(Context ctx, data):
    cdef bytes raw = bytes(data)
    if len(raw) != ctx.N * <Py_ssize_t>sizeof(u128):
        raise ValueError(f"expected {ctx.N * 16} bytes, got {len(raw)}")
    cdef PolyData out = PolyData(ctx.N)
    memcpy(out.data, <const char*>raw, ctx.N * sizeof(u128))
    cdef Py_ssize_t i
    for i in range(ctx.N):
        if out.data[i] >= ctx.q:
            raise ValueError("coefficient out of range for modulus")
    return out
