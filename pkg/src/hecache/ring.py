"""Arithmetic and randomness for the quotient ring Z_q[X]/(X^N+1).

Everything ciphertext-shaped in this package reduces to the handful of
operations defined here: coefficient-wise add/sub, scalar multiply,
and negacyclic polynomial multiply, all canonically reduced into
[0, q). The heavy lifting is delegated to a kernel backend (compiled
or pure Python, see :mod:`hecache._kernel`); this module owns the
types, the samplers, and the operation counter used by the benchmarks.

Params and Poly are immutable values and safe to share across threads.
RandomStream is single-owner: concurrent encryption needs one stream
per thread, obtained via :meth:`RandomStream.split`.
"""

import math
import random
from contextlib import contextmanager
from dataclasses import dataclass

from . import _kernel
from .errors import MismatchError, ParameterError


@dataclass(frozen=True)
class Params:
    """Ring and encoding parameters.

    N must be a power of two (>= 8); q needs headroom q > 2*delta^2 so
    one ciphertext-scalar product plus noise survives decryption. The
    tolerance formula is deliberately loose (safety factor 8): it is
    the bound acceptance tests rely on, not a tight noise estimate.
    """

    N: int
    q: int
    delta: int
    sigma: float = 3.2
    radix: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.N < 8 or self.N & (self.N - 1) != 0:
            raise ParameterError(f"N must be a power of two >= 8, got {self.N}")
        if self.q.bit_length() > 125:
            raise ParameterError("q above 2^125 is not supported")
        if self.q <= 2 * self.delta * self.delta:
            raise ParameterError(
                f"q must exceed 2*delta^2 (q={self.q}, delta={self.delta})")
        if self.delta < 1:
            raise ParameterError("delta must be a positive integer")
        if self.sigma <= 0:
            raise ParameterError("sigma must be positive")
        if self.radix < 2:
            raise ParameterError(f"radix must be >= 2, got {self.radix}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must fit in 64 bits")

    @property
    def noise_bound(self) -> int:
        """Conservative bound on fresh-encryption noise, in scaled units."""
        return math.ceil(self.N * (6 * self.sigma) ** 2 * 8)

    @property
    def tol(self) -> float:
        """Decryption tolerance in plaintext units: noise_bound / delta."""
        return self.noise_bound / self.delta

    def compatible(self, other: "Params") -> bool:
        return self.N == other.N and self.q == other.q


# Default targets ~12 integer / ~6 fractional decimal digits: delta=2^50
# keeps scalar-amplified pivot noise below 1e-3 for scalars up to ~2^30,
# and q/4 > 2^63 * delta leaves room for a 64-pivot radix-2 cache.
# q = 2^118 + 49153 is prime with 2N | q-1, so the compiled NTT applies.
DEFAULT_PARAMS = Params(N=4096, q=2 ** 118 + 49153, delta=2 ** 50)

# Desk-scale ring for oracle tests; far too noisy for real precision.
DESK_PARAMS = Params(N=8, q=12289, delta=2 ** 6)

PROFILES = {"default": DEFAULT_PARAMS, "desk": DESK_PARAMS}


class RandomStream:
    """Seeded pseudorandom stream; splittable for parallel callers.

    Every key-generation and encryption entry point takes an explicit
    stream so that runs are reproducible from a single root seed.
    """

    __slots__ = ("seed", "_rng")

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def randrange(self, start: int, stop: int | None = None) -> int:
        return self._rng.randrange(start, stop)

    def random(self) -> float:
        return self._rng.random()

    def gauss(self, sigma: float) -> float:
        return self._rng.gauss(0.0, sigma)

    def getrandbits(self, k: int) -> int:
        return self._rng.getrandbits(k)

    def bit(self) -> int:
        return self._rng.getrandbits(1)

    def split(self) -> "RandomStream":
        """Child stream deterministically derived from this one."""
        return RandomStream(self._rng.getrandbits(64))

    def __repr__(self):
        return f"RandomStream(seed={self.seed})"


class OpCounter:
    """Tallies ring operations while a count_ops() block is active."""

    __slots__ = ("active", "counts")

    def __init__(self):
        self.active = False
        self.counts = {"add": 0, "sub": 0, "mul": 0, "scalar_mul": 0}

    def reset(self):
        for k in self.counts:
            self.counts[k] = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def snapshot(self) -> dict:
        return dict(self.counts)


_tracker = OpCounter()


@contextmanager
def count_ops():
    """Count ring ops in a block: ``with count_ops() as ops: ...``.

    Counts are exact integers, independent of backend and machine.
    Not reentrant (single measurement loop by design).
    """
    if _tracker.active:
        raise RuntimeError("count_ops() blocks do not nest")
    _tracker.reset()
    _tracker.active = True
    try:
        yield _tracker
    finally:
        _tracker.active = False


def _context(params: Params):
    return _kernel.get_kernel(params.N, params.q)


class Poly:
    """Element of Z_q[X]/(X^N+1), coefficients canonically in [0, q).

    Wraps an opaque kernel handle; use :meth:`coeffs` to materialize
    the coefficient tuple. Instances are immutable.
    """

    __slots__ = ("params", "_h")

    def __init__(self, params: Params, handle):
        self.params = params
        self._h = handle

    @classmethod
    def from_coeffs(cls, params: Params, coeffs) -> "Poly":
        coeffs = [c % params.q for c in coeffs]
        if len(coeffs) != params.N:
            raise ParameterError(
                f"expected {params.N} coefficients, got {len(coeffs)}")
        kern, ctx = _context(params)
        return cls(params, kern.from_ints(ctx, coeffs))

    @classmethod
    def zero(cls, params: Params) -> "Poly":
        kern, ctx = _context(params)
        return cls(params, kern.zero(ctx))

    @classmethod
    def constant(cls, params: Params, value: int) -> "Poly":
        kern, ctx = _context(params)
        return cls(params, kern.constant(ctx, value % params.q))

    @property
    def coeffs(self) -> tuple:
        kern, ctx = _context(self.params)
        return tuple(kern.to_ints(ctx, self._h))

    def coeff(self, i: int) -> int:
        kern, ctx = _context(self.params)
        return kern.coeff(ctx, self._h, i)

    def to_bytes(self) -> bytes:
        """N coefficients as consecutive 16-byte little-endian values."""
        kern, ctx = _context(self.params)
        return kern.to_bytes(ctx, self._h)

    @classmethod
    def from_bytes(cls, params: Params, data: bytes) -> "Poly":
        kern, ctx = _context(params)
        return cls(params, kern.from_bytes(ctx, data))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.params.compatible(other.params):
            return False
        kern, ctx = _context(self.params)
        return kern.equal(ctx, self._h, other._h)

    __hash__ = None

    def __repr__(self):
        return f"Poly(N={self.params.N}, q_bits={self.params.q.bit_length()})"


def _check_pair(a: Poly, b: Poly):
    if not a.params.compatible(b.params):
        raise MismatchError(
            f"ring mismatch: N={a.params.N},q={a.params.q} vs "
            f"N={b.params.N},q={b.params.q}")


def poly_add(a: Poly, b: Poly) -> Poly:
    _check_pair(a, b)
    if _tracker.active:
        _tracker.counts["add"] += 1
    kern, ctx = _context(a.params)
    return Poly(a.params, kern.add(ctx, a._h, b._h))


def poly_sub(a: Poly, b: Poly) -> Poly:
    _check_pair(a, b)
    if _tracker.active:
        _tracker.counts["sub"] += 1
    kern, ctx = _context(a.params)
    return Poly(a.params, kern.sub(ctx, a._h, b._h))


def poly_neg(a: Poly) -> Poly:
    kern, ctx = _context(a.params)
    return Poly(a.params, kern.neg(ctx, a._h))


def poly_mul(a: Poly, b: Poly) -> Poly:
    """Negacyclic product: X^N wraps around with a sign flip."""
    _check_pair(a, b)
    if _tracker.active:
        _tracker.counts["mul"] += 1
    kern, ctx = _context(a.params)
    return Poly(a.params, kern.mul(ctx, a._h, b._h))


def poly_scalar_mul(z: int, a: Poly) -> Poly:
    """Coefficient-wise z*a; z may be any integer (reduced mod q first)."""
    if _tracker.active:
        _tracker.counts["scalar_mul"] += 1
    kern, ctx = _context(a.params)
    return Poly(a.params, kern.scalar_mul(ctx, z % a.params.q, a._h))


def sample_uniform(params: Params, rng: RandomStream) -> Poly:
    """Every coefficient independently uniform in [0, q)."""
    kern, ctx = _context(params)
    q = params.q
    return Poly(params, kern.from_ints(
        ctx, [rng.randrange(q) for _ in range(params.N)]))


def sample_ternary(params: Params, rng: RandomStream) -> Poly:
    """Coefficients uniform over {-1, 0, +1}, stored as {q-1, 0, 1}.

    Draw mapping 0 -> 0, 1 -> 1, 2 -> -1 (an all-zeros stream therefore
    yields the zero polynomial); two-bit draws of 3 are rejected.
    """
    kern, ctx = _context(params)
    values = (0, 1, params.q - 1)
    bits = rng.getrandbits
    out = []
    for _ in range(params.N):
        k = bits(2)
        while k == 3:
            k = bits(2)
        out.append(values[k])
    return Poly(params, kern.from_ints(ctx, out))


def sample_gaussian(params: Params, rng: RandomStream) -> Poly:
    """Rounded Gaussian draws with std dev sigma, tail cut at 6*sigma."""
    kern, ctx = _context(params)
    q = params.q
    cut = 6 * params.sigma
    out = []
    for _ in range(params.N):
        x = rng.gauss(params.sigma)
        while abs(x) > cut:
            x = rng.gauss(params.sigma)
        out.append(round(x) % q)
    return Poly(params, kern.from_ints(ctx, out))


def signed_lift(value: int, q: int) -> int:
    """Map a canonical residue to the signed range (-q/2, q/2]."""
    return value - q if value > q // 2 else value
