"""Ring arithmetic and sampler tests against independent oracles."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecache import ring
from hecache.errors import MismatchError, ParameterError
from hecache.ring import (
    Params,
    Poly,
    RandomStream,
    count_ops,
    poly_add,
    poly_mul,
    poly_scalar_mul,
    poly_sub,
    sample_gaussian,
    sample_ternary,
    sample_uniform,
    signed_lift,
)

from conftest import schoolbook_negacyclic


class TestParams:
    def test_profiles_valid(self, default, desk):
        assert default.N == 4096 and desk.N == 8

    @pytest.mark.parametrize("kwargs", [
        dict(N=12, q=12289, delta=2),          # not a power of two
        dict(N=4, q=12289, delta=2),           # too small
        dict(N=8, q=100, delta=8),             # q <= 2*delta^2
        dict(N=8, q=12289, delta=2, sigma=0),  # sigma must be positive
        dict(N=8, q=12289, delta=2, radix=1),
        dict(N=8, q=12289, delta=2, seed=-1),
        dict(N=8, q=2 ** 126 + 1, delta=2),    # beyond kernel width
    ])
    def test_invalid_params_rejected(self, kwargs):
        with pytest.raises(ParameterError):
            Params(**kwargs)

    def test_tolerance_formula(self, default):
        expected = default.N * (6 * default.sigma) ** 2 * 8 / default.delta
        assert default.tol == pytest.approx(expected, rel=1e-9)
        assert default.tol < 1e-3


class TestSamplers:
    def test_uniform_range(self, tiny):
        p = sample_uniform(tiny, RandomStream(1))
        assert all(0 <= c < tiny.q for c in p.coeffs)

    def test_uniform_deterministic(self, tiny):
        assert sample_uniform(tiny, RandomStream(5)) == sample_uniform(tiny, RandomStream(5))

    def test_uniform_frequencies(self, tiny):
        # 10,000 coefficient draws; each residue within 5 sigma of n/q
        rng = RandomStream(99)
        counts = [0] * tiny.q
        for _ in range(10_000 // tiny.N):
            for c in sample_uniform(tiny, rng).coeffs:
                counts[c] += 1
        n = sum(counts)
        mean = n / tiny.q
        sigma = math.sqrt(n * (1 / tiny.q) * (1 - 1 / tiny.q))
        for c in counts:
            assert abs(c - mean) <= 5 * sigma

    def test_ternary_support(self, desk):
        p = sample_ternary(desk, RandomStream(2))
        assert set(p.coeffs) <= {0, 1, desk.q - 1}

    def test_ternary_deterministic(self, desk):
        assert sample_ternary(desk, RandomStream(3)) == sample_ternary(desk, RandomStream(3))

    def test_ternary_balance(self, desk):
        # 30,000 draws; each value lands 10,000 +- 500 times
        rng = RandomStream(7)
        counts = {0: 0, 1: 0, desk.q - 1: 0}
        for _ in range(30_000 // desk.N):
            for c in sample_ternary(desk, rng).coeffs:
                counts[c] += 1
        for v, c in counts.items():
            assert abs(c - 10_000) <= 500, (v, c)

    def test_gaussian_tail_cut(self, desk):
        rng = RandomStream(11)
        bound = math.ceil(6 * desk.sigma)
        for _ in range(200):
            p = sample_gaussian(desk, rng)
            assert all(abs(signed_lift(c, desk.q)) <= bound for c in p.coeffs)

    def test_gaussian_std(self, desk):
        rng = RandomStream(13)
        draws = []
        for _ in range(100_000 // desk.N):
            draws.extend(signed_lift(c, desk.q) for c in sample_gaussian(desk, rng).coeffs)
        mean = sum(draws) / len(draws)
        std = math.sqrt(sum((d - mean) ** 2 for d in draws) / len(draws))
        assert 3.0 <= std <= 3.4

    def test_gaussian_deterministic(self, desk):
        assert sample_gaussian(desk, RandomStream(4)) == sample_gaussian(desk, RandomStream(4))

    def test_split_streams_differ(self):
        root = RandomStream(1)
        a, b = root.split(), root.split()
        assert a.randrange(10**9) != b.randrange(10**9)

    def test_zero_stub_gives_zero_polys(self, desk, zero_rng):
        assert sample_ternary(desk, zero_rng) == Poly.zero(desk)
        assert sample_gaussian(desk, zero_rng) == Poly.zero(desk)
        assert sample_uniform(desk, zero_rng) == Poly.zero(desk)


class TestPolyOps:
    def test_add_identity_and_inverse(self, tiny):
        a = sample_uniform(tiny, RandomStream(21))
        zero = Poly.zero(tiny)
        assert poly_add(a, zero) == a
        assert poly_sub(a, a) == zero

    def test_add_wraparound(self, tiny):
        # (16 + 5) mod 17 = 4
        a = Poly.from_coeffs(tiny, [16] * tiny.N)
        b = Poly.from_coeffs(tiny, [5] * tiny.N)
        assert poly_add(a, b).coeffs == (4,) * tiny.N

    def test_mul_identity(self, tiny):
        a = sample_uniform(tiny, RandomStream(22))
        one = Poly.constant(tiny, 1)
        assert poly_mul(a, one) == a

    def test_defining_relation(self, tiny):
        # X^(N-1) * X = X^N = -1
        xn1 = Poly.from_coeffs(tiny, [0] * (tiny.N - 1) + [1])
        x = Poly.from_coeffs(tiny, [0, 1] + [0] * (tiny.N - 2))
        prod = poly_mul(xn1, x)
        assert prod.coeffs == (tiny.q - 1,) + (0,) * (tiny.N - 1)

    @pytest.mark.parametrize("n", [8, 16, 32])
    def test_mul_matches_schoolbook(self, n):
        params = Params(N=n, q=12289, delta=2)
        rng = RandomStream(n)
        for _ in range(25):
            a = sample_uniform(params, rng)
            b = sample_uniform(params, rng)
            assert poly_mul(a, b).coeffs == schoolbook_negacyclic(a.coeffs, b.coeffs, params.q)

    def test_scalar_identity_annihilator(self, tiny):
        a = sample_uniform(tiny, RandomStream(23))
        assert poly_scalar_mul(1, a) == a
        assert poly_scalar_mul(0, a) == Poly.zero(tiny)

    def test_scalar_matches_repeated_add(self, tiny):
        a = sample_uniform(tiny, RandomStream(24))
        acc = Poly.zero(tiny)
        for z in range(17):
            assert poly_scalar_mul(z, a) == acc
            acc = poly_add(acc, a)

    def test_negative_scalar_reduced(self, tiny):
        a = sample_uniform(tiny, RandomStream(25))
        assert poly_scalar_mul(-1, a) == poly_scalar_mul(tiny.q - 1, a)

    def test_mismatched_params_rejected(self, tiny, desk):
        with pytest.raises(MismatchError):
            poly_add(Poly.zero(tiny), Poly.zero(desk))
        with pytest.raises(MismatchError):
            poly_mul(Poly.zero(tiny), Poly.zero(desk))

    def test_closure_default_profile(self, default):
        rng = RandomStream(31)
        a = sample_uniform(default, rng)
        b = sample_uniform(default, rng)
        for p in (poly_add(a, b), poly_sub(a, b), poly_mul(a, b), poly_scalar_mul(12345, a)):
            assert all(0 <= c < default.q for c in p.coeffs)


_LAW_PARAMS = Params(N=16, q=12289, delta=2)
_coeffs = st.lists(st.integers(min_value=0, max_value=_LAW_PARAMS.q - 1),
                   min_size=_LAW_PARAMS.N, max_size=_LAW_PARAMS.N)


class TestRingLaws:
    @given(_coeffs, _coeffs)
    @settings(max_examples=50, deadline=None)
    def test_add_commutes(self, ca, cb):
        a, b = Poly.from_coeffs(_LAW_PARAMS, ca), Poly.from_coeffs(_LAW_PARAMS, cb)
        assert poly_add(a, b) == poly_add(b, a)

    @given(_coeffs, _coeffs, _coeffs)
    @settings(max_examples=50, deadline=None)
    def test_add_associates(self, ca, cb, cc):
        a = Poly.from_coeffs(_LAW_PARAMS, ca)
        b = Poly.from_coeffs(_LAW_PARAMS, cb)
        c = Poly.from_coeffs(_LAW_PARAMS, cc)
        assert poly_add(poly_add(a, b), c) == poly_add(a, poly_add(b, c))

    @given(_coeffs, _coeffs, _coeffs)
    @settings(max_examples=30, deadline=None)
    def test_mul_distributes(self, ca, cb, cc):
        a = Poly.from_coeffs(_LAW_PARAMS, ca)
        b = Poly.from_coeffs(_LAW_PARAMS, cb)
        c = Poly.from_coeffs(_LAW_PARAMS, cc)
        assert poly_mul(a, poly_add(b, c)) == poly_add(poly_mul(a, b), poly_mul(a, c))


class TestOpCounter:
    def test_counts_each_kind(self, tiny):
        a = sample_uniform(tiny, RandomStream(41))
        with count_ops() as ops:
            poly_add(a, a)
            poly_sub(a, a)
            poly_mul(a, a)
            poly_scalar_mul(3, a)
            poly_scalar_mul(5, a)
        assert ops.snapshot() == {"add": 1, "sub": 1, "mul": 1, "scalar_mul": 2}
        assert ops.total == 5

    def test_inactive_outside_block(self, tiny):
        a = sample_uniform(tiny, RandomStream(42))
        with count_ops() as ops:
            poly_add(a, a)
        before = ops.total
        poly_add(a, a)
        assert ops.total == before

    def test_no_nesting(self):
        with count_ops():
            with pytest.raises(RuntimeError):
                with count_ops():
                    pass
