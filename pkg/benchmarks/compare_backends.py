#!/usr/bin/env python3
"""Compare the compiled kernel against the pure-Python fallback.

Times the four ring primitives and the three encryption paths on each
available backend at the default profile, and checks along the way
that both backends produce identical ciphertext bytes from identical
seeds. Run after an editable install:

    python benchmarks/compare_backends.py [--messages 40] [--repeat 5]
"""

import argparse
import time
from fractions import Fraction
from statistics import median

from hecache import _kernel, ring
from hecache.he import Plaintext, encrypt, keygen
from hecache.rache import rache_enc, rache_precompute
from hecache.ring import DEFAULT_PARAMS as P
from hecache.ring import RandomStream
from hecache.smuche import smuche_enc, smuche_precompute


def best_ms(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return median(times) * 1000


def bench_backend(name, messages, repeat):
    _kernel.set_backend(name)
    rows = {}

    a = ring.sample_uniform(P, RandomStream(1))
    b = ring.sample_uniform(P, RandomStream(2))
    rows["poly_add"] = best_ms(lambda: ring.poly_add(a, b), repeat * 5)
    rows["poly_scalar_mul"] = best_ms(lambda: ring.poly_scalar_mul(12345, a), repeat * 5)
    rows["poly_mul"] = best_ms(lambda: ring.poly_mul(a, b), repeat)

    pk, sk = keygen(P, RandomStream(3))
    scache = smuche_precompute(pk, P, Fraction(1, 64), RandomStream(4))
    rcache = rache_precompute(pk, P, 16, RandomStream(5))
    values = [(i * 97 % 1000) + 0.5 for i in range(messages)]

    def run_ckks():
        rng = RandomStream(6)
        for v in values:
            encrypt(pk, Plaintext(v, P.delta), rng)

    def run_smuche():
        rng = RandomStream(7)
        for v in values:
            smuche_enc(scache, pk, v, Fraction(1, 64), rng)

    def run_rache():
        rng = RandomStream(8)
        for v in values:
            rache_enc(rcache, int(v), rng)

    rows["ckks_enc"] = best_ms(run_ckks, repeat) / messages
    rows["smuche_enc"] = best_ms(run_smuche, repeat) / messages
    rows["rache_enc_16"] = best_ms(run_rache, repeat) / messages

    # identical seeds must yield identical ciphertext bytes on every backend
    fingerprint = encrypt(pk, Plaintext(3.25, P.delta), RandomStream(9)).to_bytes()
    return rows, fingerprint


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--messages", type=int, default=40)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = []
    if "cython" in _kernel.available_backends():
        backends.append(("cy", "cython"))
    backends.append(("py", "python"))

    initial = _kernel.set_backend("auto")
    results, prints = {}, {}
    for key, label in backends:
        print(f"timing {label} backend ...")
        results[label], prints[label] = bench_backend(key, args.messages, args.repeat)
    _kernel.set_backend(initial)

    if len(prints) == 2:
        vals = list(prints.values())
        assert vals[0] == vals[1], "backends disagree on ciphertext bytes"
        print("cross-backend ciphertext bytes: identical\n")

    labels = [label for _, label in backends]
    width = max(len(k) for k in results[labels[0]])
    header = f"{'operation':<{width}}" + "".join(f"  {l:>12}" for l in labels)
    if len(labels) == 2:
        header += f"  {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for op in results[labels[0]]:
        line = f"{op:<{width}}"
        for l in labels:
            line += f"  {results[l][op]:>9.4f} ms"
        if len(labels) == 2:
            line += f"  {results[labels[1]][op] / results[labels[0]][op]:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
