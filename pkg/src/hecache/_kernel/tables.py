"""Number-theoretic precomputation shared by kernel backends.

The compiled kernel multiplies in Z_q[X]/(X^N+1) with a negacyclic NTT,
which needs q to be an odd prime with 2N | q-1 and a primitive 2N-th
root of unity psi (psi^N = -1 mod q). Everything here is computed once
per (N, q) pair with plain Python integers.
"""

import random

_MR_ROUNDS = 48
_mr_rng = random.Random(0x5EED)  # fixed witnesses keep support checks deterministic


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed-seed random witnesses (error < 4^-48)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(_MR_ROUNDS):
        a = _mr_rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def find_negacyclic_root(N: int, q: int) -> int:
    """Smallest-base primitive 2N-th root of unity mod q.

    Requires q prime with q = 1 (mod 2N); raises ValueError otherwise.
    """
    if (q - 1) % (2 * N) != 0:
        raise ValueError(f"q-1 not divisible by 2N (q={q}, N={N})")
    exp = (q - 1) // (2 * N)
    for base in range(2, 1000):
        psi = pow(base, exp, q)
        if pow(psi, N, q) == q - 1:
            return psi
    raise ValueError(f"no primitive 2N-th root found for q={q}, N={N}")


def _bit_reverse(x: int, bits: int) -> int:
    out = 0
    for _ in range(bits):
        out = (out << 1) | (x & 1)
        x >>= 1
    return out


def negacyclic_ntt_tables(N: int, q: int) -> dict:
    """Montgomery-domain twiddle tables for the compiled kernel.

    Returns psi powers (forward) and inverse-psi powers (inverse) in
    bit-reversed order, each premultiplied by R = 2^128 mod q, plus the
    plain N^-1 mod q used to fold the inverse scaling into the final
    Montgomery reduction.
    """
    psi = find_negacyclic_root(N, q)
    ipsi = pow(psi, -1, q)
    bits = N.bit_length() - 1

    def mont(x):
        return (x << 128) % q

    psi_pow, ipsi_pow = [1] * N, [1] * N
    for i in range(1, N):
        psi_pow[i] = psi_pow[i - 1] * psi % q
        ipsi_pow[i] = ipsi_pow[i - 1] * ipsi % q

    return {
        "psi_rev_mont": [mont(psi_pow[_bit_reverse(i, bits)]) for i in range(N)],
        "ipsi_rev_mont": [mont(ipsi_pow[_bit_reverse(i, bits)]) for i in range(N)],
        "n_inv": pow(N, -1, q),
        "r2": (1 << 256) % q,
        "q_neg_inv": (-pow(q, -1, 1 << 128)) % (1 << 128),
    }
