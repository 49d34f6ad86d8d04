"""hecache: an RLWE encryption library with ciphertext-caching accelerators.

Three encryption paths share one kernel:

* ``ckks``   -- the base scheme (fresh randomness per message),
* ``rache``  -- radix-additive caching, linear in the cache size,
* ``smuche`` -- scalar-multiplicative caching, constant operation count.

See the ``hecache`` CLI for the benchmark harness.
"""

from .bench import BenchConfig, BenchReport, Workload, emit_report, gen_synthetic, load_dataset, run_benchmark
from .he import Ciphertext, Plaintext, PublicKey, SecretKey, ct_add, ct_scalar_mul, ct_sub, decode, decrypt, encode, encrypt, keygen
from .rache import RachePivotCache, digit_decompose, rache_construct, rache_enc, rache_precompute, rache_randomize
from .ring import DEFAULT_PARAMS, DESK_PARAMS, PROFILES, Params, Poly, RandomStream, count_ops, poly_add, poly_mul, poly_scalar_mul, poly_sub, sample_gaussian, sample_ternary, sample_uniform
from .smuche import SmuchePivotCache, select_pivot, smuche_construct, smuche_enc, smuche_precompute, smuche_randomize

__version__ = "0.1.0"
