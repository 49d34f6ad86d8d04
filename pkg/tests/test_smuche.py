"""Scalar-multiplicative caching: pivots, construction, randomization."""

import math
from fractions import Fraction

import pytest

from hecache.errors import ParameterError, RangeError
from hecache.he import Plaintext, ct_scalar_mul, decrypt, encrypt
from hecache.rache import rache_enc, rache_precompute
from hecache.smuche import (
    select_pivot,
    smuche_construct,
    smuche_enc,
    smuche_precompute,
    smuche_randomize,
)
from hecache.ring import RandomStream, count_ops


@pytest.fixture(scope="module")
def cache128(default_keys, default):
    # covers precisions down to 1/128
    pk, _ = default_keys
    return smuche_precompute(pk, default, Fraction(1, 128), RandomStream(600))


class TestPrecompute:
    def test_three_pivots_for_quarter(self, default_keys, default):
        pk, sk = default_keys
        cache = smuche_precompute(pk, default, Fraction(1, 4), RandomStream(601))
        got = [decrypt(sk, c) for c in cache.pivots]
        assert got == pytest.approx([1, 0.5, 0.25], abs=default.tol)

    def test_identity_only(self, default_keys, default):
        pk, sk = default_keys
        cache = smuche_precompute(pk, default, 1, RandomStream(602))
        assert len(cache.pivots) == 1
        assert decrypt(sk, cache.pivots[0]) == pytest.approx(1, abs=default.tol)

    def test_size_depends_only_on_precision(self, default_keys, default):
        pk, _ = default_keys
        for k in (1, 3, 7):
            cache = smuche_precompute(pk, default, Fraction(1, 2 ** k),
                                      RandomStream(603))
            assert len(cache.pivots) == k + 1

    def test_full_scale_cache_size(self, default_keys, default):
        # ceil(log_r delta) + 1 pivots when caching down to 1/delta
        pk, _ = default_keys
        cache = smuche_precompute(pk, default, Fraction(1, default.delta),
                                  RandomStream(604))
        assert len(cache.pivots) == math.ceil(math.log(default.delta, default.radix)) + 1

    def test_non_radix_power_rejected(self, default_keys, default):
        pk, _ = default_keys
        for bad in (Fraction(1, 100), 0.3, Fraction(2, 3)):
            with pytest.raises(ParameterError):
                smuche_precompute(pk, default, bad, RandomStream(605))

    def test_finer_than_scale_rejected(self, default_keys, default):
        pk, _ = default_keys
        with pytest.raises(ParameterError):
            smuche_precompute(pk, default, Fraction(1, default.delta * 2),
                              RandomStream(606))


class TestSelectPivot:
    def test_quarter_precision(self):
        assert select_pivot(Fraction(1, 4), 2, 10) == 2

    def test_integer_precision(self):
        assert select_pivot(1, 2, 10) == 0

    def test_too_fine_rejected(self):
        with pytest.raises(RangeError):
            select_pivot(Fraction(1, 2 ** 11), 2, 10)

    def test_loop_trace(self):
        # smallest idx with r^-idx <= precision
        for k in range(8):
            assert select_pivot(Fraction(1, 2 ** k), 2, 16) == k
        assert select_pivot(Fraction(3, 8), 2, 16) == 2  # 1/4 <= 3/8 < 1/2


class TestConstruct:
    def test_three_quarters(self, cache128, default_keys, default):
        _, sk = default_keys
        ct = smuche_construct(cache128, 0.75, Fraction(1, 4))
        assert abs(decrypt(sk, ct) - 0.75) <= 3 * default.tol

    def test_identity_pivot(self, cache128, default_keys, default):
        _, sk = default_keys
        ct = smuche_construct(cache128, 1, 1)
        assert ct == ct_scalar_mul(1, cache128.pivots[0])
        assert abs(decrypt(sk, ct) - 1) <= default.tol

    def test_negative_value(self, cache128, default_keys, default):
        _, sk = default_keys
        ct = smuche_construct(cache128, -2.5, Fraction(1, 2))
        assert abs(decrypt(sk, ct) + 2.5) <= 5 * default.tol

    def test_scalar_budget_enforced(self, cache128, default):
        with pytest.raises(RangeError):
            smuche_construct(cache128, float(default.q), 1)


class TestRandomize:
    def test_zero_xi_is_identity(self, cache128, default_keys, zero_rng):
        pk, _ = default_keys
        ct = smuche_construct(cache128, 5.5, Fraction(1, 2))
        assert smuche_randomize(pk, ct, zero_rng) == ct

    def test_decryption_unchanged(self, cache128, default_keys, default):
        pk, sk = default_keys
        ct = smuche_construct(cache128, 5.5, Fraction(1, 2))
        before = decrypt(sk, ct)
        for seed in range(5):
            after = decrypt(sk, smuche_randomize(pk, ct, RandomStream(seed)))
            assert abs(after - before) <= default.tol

    def test_distinct_randomizations(self, cache128, default_keys):
        pk, _ = default_keys
        ct = smuche_construct(cache128, 5.5, Fraction(1, 2))
        a = smuche_randomize(pk, ct, RandomStream(611))
        b = smuche_randomize(pk, ct, RandomStream(612))
        assert a != b

    def test_identity_holds_for_fresh_encryptions(self, default_keys, default):
        # dec(z (x) c (+) rnd) = z*m for ciphertexts straight from encrypt
        pk, sk = default_keys
        rng = RandomStream(613)
        for z, m in [(3, 2.0), (-7, 1.5), (2 ** 20, 0.25), (1, -4.0)]:
            ct = encrypt(pk, Plaintext(m, default.delta), rng)
            out = smuche_randomize(pk, ct_scalar_mul(z, ct), rng)
            assert abs(decrypt(sk, out) - z * m) <= max(abs(z), 1) * default.tol

    def test_exact_op_count(self, cache128, default_keys):
        pk, _ = default_keys
        ct = smuche_construct(cache128, 5.5, Fraction(1, 2))
        with count_ops() as ops:
            smuche_randomize(pk, ct, RandomStream(614))
        assert ops.snapshot() == {"add": 2, "sub": 0, "mul": 2, "scalar_mul": 0}


class TestSmucheEnc:
    def test_quantized_roundtrip(self, cache128, default_keys, default):
        # 3.14 at 2^-7 precision quantizes to 402/128 = 3.140625
        pk, sk = default_keys
        rng = RandomStream(620)
        ct = smuche_enc(cache128, pk, 3.14, Fraction(1, 2 ** 7), rng)
        z = round(3.14 * 2 ** 7)
        assert z == 402 and z / 2 ** 7 == 3.140625
        assert abs(decrypt(sk, ct) - 3.140625) <= (z + 1) * default.tol

    def test_zero_still_randomized(self, cache128, default_keys, default):
        pk, sk = default_keys
        ct = smuche_enc(cache128, pk, 0, 1, RandomStream(621))
        assert abs(decrypt(sk, ct)) <= default.tol
        assert ct.c1.coeffs != (0,) * default.N
        assert ct.c2.coeffs != (0,) * default.N

    def test_constant_op_count(self, cache128, default_keys):
        pk, _ = default_keys
        counts = []
        for m in (0, 1, 10 ** 3, 10 ** 9):
            with count_ops() as ops:
                smuche_enc(cache128, pk, m, 1, RandomStream(622))
            counts.append(ops.snapshot())
        assert all(c == counts[0] for c in counts)
        assert counts[0] == {"add": 2, "sub": 0, "mul": 2, "scalar_mul": 2}

    def test_freshness(self, cache128, default_keys):
        pk, _ = default_keys
        rng = RandomStream(623)
        seen = {smuche_enc(cache128, pk, 7.25, Fraction(1, 4), rng).to_bytes()
                for _ in range(100)}
        assert len(seen) == 100
        bare = smuche_construct(cache128, 7.25, Fraction(1, 4))
        assert bare.to_bytes() not in seen

    def test_cross_scheme_agreement(self, cache128, default_keys, default):
        pk, sk = default_keys
        rng = RandomStream(624)
        rcache = rache_precompute(pk, default, 16, rng)
        for m in (0.25, 3.75, 100.5, 250.0):
            via_smuche = decrypt(sk, smuche_enc(cache128, pk, m, Fraction(1, 4), rng))
            via_rache = decrypt(sk, rache_enc(rcache, int(m * 4), rng)) / 4
            via_plain = decrypt(sk, encrypt(pk, Plaintext(m, default.delta), rng))
            bound = 3 * max(m * 4, 1) * default.tol
            assert abs(via_smuche - via_rache) <= bound
            assert abs(via_smuche - via_plain) <= bound
            assert abs(via_rache - via_plain) <= bound
