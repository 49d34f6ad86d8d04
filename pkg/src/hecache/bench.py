"""Benchmark harness: workloads, instrumented timing, report emission.

A run encrypts every workload value under each requested scheme,
recording wall time (median over repeated passes), exact ring-op
counts from an extra instrumented pass, and the worst decryption error
verified against the known plaintexts. Timing covers the encryption
calls only; key generation and cache precomputation happen before the
clock starts. Everything executes single-threaded.

Ring-op counts and error columns are deterministic given the seed and
configuration; only the millisecond columns vary between machines.
"""

import csv as _csv
import hashlib
import io
import math
import time
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from statistics import median

from . import _kernel
from .errors import DatasetError, HecacheError, ParameterError
from .he import Plaintext, decrypt, encrypt, keygen
from .rache import rache_enc, rache_precompute
from .ring import Params, RandomStream, count_ops
from .smuche import smuche_enc, smuche_precompute

SCHEMES = ("ckks", "rache", "smuche")


@dataclass(frozen=True)
class Workload:
    """Plaintext values plus the precision they are encrypted at."""

    values: tuple
    precision_inv: Fraction
    name: str
    source: str  # "csv" or "synthetic"
    skipped_rows: int = 0


def _ceil_log(base: int, bound: int) -> int:
    """Smallest k with base**k >= bound."""
    k, power = 0, 1
    while power < bound:
        power *= base
        k += 1
    return k


def _fraction_exponent(value: float, text: str, radix: int) -> int:
    """Precision exponent k so that radix**-k is not coarser than value's
    fractional part.

    Naturally dyadic values (halves, quarters, ...) use their exact
    binary depth; decimal-born values whose binary expansion explodes
    fall back to the decimal digit count of the source text.
    """
    depth = Fraction(value).denominator.bit_length() - 1
    if depth <= 32:
        return _ceil_log(radix, 1 << depth)
    try:
        exponent = Decimal(text).as_tuple().exponent
    except InvalidOperation:
        exponent = 0
    digits = max(0, -exponent) if isinstance(exponent, int) else 0
    return _ceil_log(radix, 10 ** digits)


def load_dataset(path, column, radix: int = 2) -> Workload:
    """Read one numeric column of a headered CSV into a Workload.

    Unparseable cells are skipped and counted; the precision is the
    finest needed by any surviving value (see _fraction_exponent).
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    reader = _csv.reader(io.StringIO(raw))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError(f"{path} is empty") from None
    if isinstance(column, int) or (isinstance(column, str) and column.isdigit()):
        idx = int(column)
        if not 0 <= idx < len(header):
            raise DatasetError(f"column index {idx} out of range")
    else:
        try:
            idx = header.index(column)
        except ValueError:
            raise DatasetError(
                f"column {column!r} not in header {header}") from None

    values, skipped, k = [], 0, 0
    for row in reader:
        if not row:
            continue
        text = row[idx].strip() if idx < len(row) else ""
        try:
            v = float(text)
        except ValueError:
            skipped += 1
            continue
        if not math.isfinite(v):
            skipped += 1
            continue
        k = max(k, _fraction_exponent(v, text, radix))
        values.append(v)
    if not values:
        raise DatasetError(f"no parseable rows in column {column!r} of {path}")
    return Workload(
        values=tuple(values),
        precision_inv=Fraction(1, radix ** k),
        name=f"{path.name}:{column}",
        source="csv",
        skipped_rows=skipped,
    )


_SYNTH_DEFAULT_BITS = 6  # fractional precision of quantized uniform draws


def gen_synthetic(spec: str, count: int, seed: int, radix: int = 2) -> Workload:
    """Reproducible workload from a descriptor.

    ``uniform(lo,hi)`` draws reals quantized to radix**-k with
    2**6-equivalent precision; ``integers(lo,hi)`` draws integers at
    precision 1.
    """
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    text = spec.replace(" ", "")
    kind, _, rest = text.partition("(")
    if kind not in ("uniform", "integers") or not rest.endswith(")"):
        raise ParameterError(f"malformed synthetic spec {spec!r}")
    parts = rest[:-1].split(",")
    if len(parts) != 2:
        raise ParameterError(f"expected two bounds in {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ParameterError(f"non-numeric bounds in {spec!r}") from None
    if hi <= lo:
        raise ParameterError(f"empty range in {spec!r}")

    rng = RandomStream(seed)
    if kind == "integers":
        values = tuple(
            float(int(lo) + rng.randrange(int(hi) - int(lo))) for _ in range(count))
        pinv = Fraction(1)
    else:
        k = _ceil_log(radix, 1 << _SYNTH_DEFAULT_BITS)
        step = radix ** k
        values = tuple(
            round((lo + (hi - lo) * rng.random()) * step) / step
            for _ in range(count))
        pinv = Fraction(1, step)
    return Workload(values=values, precision_inv=pinv,
                    name=f"{kind}({parts[0]},{parts[1]}):{count}",
                    source="synthetic")


@dataclass(frozen=True)
class BenchConfig:
    schemes: tuple
    params: Params
    workload: Workload
    n_pivots: tuple = (16,)
    message_counts: tuple = ()  # empty -> whole workload
    repeat: int = 5
    seed: int = 1


@dataclass(frozen=True)
class BenchRow:
    scheme: str
    n_pivot: int
    message_count: int
    total_ms: float
    per_message_ms: float
    ring_op_count: int
    max_abs_error: float
    status: str = "ok"
    note: str = ""


@dataclass(frozen=True)
class BenchReport:
    rows: tuple
    metadata: dict


def _derive_seed(*parts) -> int:
    digest = hashlib.blake2b(repr(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _quantizer(workload: Workload):
    """Map value -> scaled integer z at the workload precision; the
    quantized plaintext every cached scheme actually encrypts is
    z * precision_inv."""
    step = workload.precision_inv.denominator
    return lambda v: round(Fraction(v) * step)


def run_benchmark(config: BenchConfig) -> BenchReport:
    """Encrypt the workload under every scheme; see module docstring."""
    for s in config.schemes:
        if s not in SCHEMES:
            raise ParameterError(f"unknown scheme {s!r}")
    if config.repeat < 1:
        raise ParameterError("repeat must be >= 1")
    params = config.params
    workload = config.workload
    counts = tuple(config.message_counts) or (len(workload.values),)
    for c in counts:
        if not 1 <= c <= len(workload.values):
            raise ParameterError(
                f"message count {c} exceeds workload size {len(workload.values)}")

    pk, sk = keygen(params, RandomStream(_derive_seed(config.seed, "keygen")))

    quant = _quantizer(workload)
    pinv = workload.precision_inv

    smuche_cache = None
    if "smuche" in config.schemes:
        try:
            smuche_cache = smuche_precompute(
                pk, params, pinv, RandomStream(_derive_seed(config.seed, "smuche")))
        except HecacheError as exc:
            smuche_cache = exc

    rache_caches = {}
    for npv in (config.n_pivots if "rache" in config.schemes else ()):
        try:
            rache_caches[npv] = rache_precompute(
                pk, params, npv, RandomStream(_derive_seed(config.seed, "rache", npv)))
        except HecacheError as exc:
            rache_caches[npv] = exc

    rows = []
    for scheme in config.schemes:
        if scheme == "rache":
            variants = tuple(config.n_pivots)
        elif scheme == "smuche" and not isinstance(smuche_cache, Exception):
            variants = (len(smuche_cache.pivots),)
        else:
            variants = (0,)
        for npv in variants:
            for count in counts:
                rows.append(_run_one(
                    scheme, npv, count, config, pk, sk,
                    smuche_cache, rache_caches, quant))
    meta = {
        "N": params.N,
        "q_bits": params.q.bit_length(),
        "delta": params.delta,
        "radix": params.radix,
        "sigma": params.sigma,
        "seed": config.seed,
        "repeat": config.repeat,
        "workload": workload.name,
        "source": workload.source,
        "precision_inv": str(pinv),
        "backend": _kernel.active_backend(),
    }
    return BenchReport(rows=tuple(rows), metadata=meta)


def _run_one(scheme, npv, count, config, pk, sk, smuche_cache, rache_caches, quant):
    params = config.params
    values = list(config.workload.values[:count])
    pinv = config.workload.precision_inv
    step = pinv.denominator
    tol = params.tol

    # enc_one encrypts one workload entry; `inputs` are what it consumes,
    # `expected` the value-domain plaintexts validation compares against.
    if scheme == "ckks":
        def enc_one(v, rng):
            return encrypt(pk, Plaintext(v, params.delta), rng)
        inputs = values
        expected = [float(v) for v in values]
        to_value = lambda dec: dec
        threshold = tol
    elif scheme == "smuche":
        if isinstance(smuche_cache, Exception):
            return BenchRow(scheme, npv, count, 0.0, 0.0, 0, 0.0,
                            status="failed", note=str(smuche_cache))

        def enc_one(v, rng):
            return smuche_enc(smuche_cache, pk, v, pinv, rng)
        inputs = values
        zs = [quant(v) for v in values]
        expected = [z / step for z in zs]
        to_value = lambda dec: dec
        threshold = (max(abs(z) for z in zs) + 1) * tol
    else:  # rache
        cache = rache_caches[npv]
        if isinstance(cache, Exception):
            return BenchRow(scheme, npv, count, 0.0, 0.0, 0, 0.0,
                            status="failed", note=str(cache))
        zs = [quant(v) for v in values]
        if any(z < 0 for z in zs):
            return BenchRow(scheme, npv, count, 0.0, 0.0, 0, 0.0,
                            status="failed",
                            note="negative values not representable")

        def enc_one(z, rng):
            return rache_enc(cache, z, rng)
        inputs = zs
        expected = [z / step for z in zs]
        to_value = lambda dec: dec / step
        threshold = 4 * npv * tol / step

    try:
        # untimed warmup so the first timed repeat is not penalized for
        # cold allocator and code paths
        rng = RandomStream(_derive_seed(config.seed, scheme, npv, count, "warm"))
        for x in inputs[:10]:
            enc_one(x, rng)

        times = []
        for rep in range(config.repeat):
            rng = RandomStream(_derive_seed(config.seed, scheme, npv, count, rep))
            t0 = time.perf_counter()
            for x in inputs:
                enc_one(x, rng)
            times.append(time.perf_counter() - t0)

        rng = RandomStream(_derive_seed(config.seed, scheme, npv, count, "ops"))
        with count_ops() as ops:
            cts = [enc_one(x, rng) for x in inputs]
        op_total = ops.total
    except HecacheError as exc:
        return BenchRow(scheme, npv, count, 0.0, 0.0, 0, 0.0,
                        status="failed", note=str(exc))

    max_err = 0.0
    for ct, exp in zip(cts, expected):
        max_err = max(max_err, abs(to_value(decrypt(sk, ct)) - exp))
    status, note = "ok", ""
    if max_err > threshold:
        status = "failed"
        note = f"max error {max_err:.3e} exceeds bound {threshold:.3e}"

    total_ms = median(times) * 1000.0
    return BenchRow(scheme, npv, count, total_ms, total_ms / count,
                    op_total, max_err, status=status, note=note)


def _fmt_err(e: float) -> str:
    return f"{e:.3e}"


def emit_report(report: BenchReport, format: str = "markdown") -> str:
    """Deterministic text rendering; csv is one row per configuration,
    markdown mirrors the shapes of the scaling tables."""
    if format == "csv":
        out = io.StringIO()
        writer = _csv.writer(out, lineterminator="\n")
        writer.writerow(["scheme", "n_pivot", "messages", "total_ms",
                         "per_message_ms", "ring_ops", "max_abs_error",
                         "status", "note"])
        for r in report.rows:
            writer.writerow([r.scheme, r.n_pivot, r.message_count,
                             f"{r.total_ms:.3f}", f"{r.per_message_ms:.4f}",
                             r.ring_op_count, _fmt_err(r.max_abs_error),
                             r.status, r.note])
        return out.getvalue()
    if format != "markdown":
        raise ParameterError(f"unknown report format {format!r}")

    meta = report.metadata
    lines = ["# hecache benchmark", ""]
    lines.append(f"- ring: N={meta['N']}, q of {meta['q_bits']} bits, "
                 f"delta={meta['delta']}, radix={meta['radix']}")
    lines.append(f"- workload: {meta['workload']} ({meta['source']}, "
                 f"precision {meta['precision_inv']})")
    lines.append(f"- seed: {meta['seed']}, repeat: {meta['repeat']}, "
                 f"backend: {meta['backend']}")
    lines.append("")
    lines.append("| Scheme | nPivot | Messages | Total (ms) | ms/msg "
                 "| Ring ops | Max abs err | Status |")
    lines.append("|---|---|---|---|---|---|---|---|")
    for r in report.rows:
        lines.append(
            f"| {r.scheme} | {r.n_pivot} | {r.message_count} "
            f"| {r.total_ms:.3f} | {r.per_message_ms:.4f} "
            f"| {r.ring_op_count} | {_fmt_err(r.max_abs_error)} | {r.status} |")

    ckks_total = {r.message_count: r.total_ms for r in report.rows
                  if r.scheme == "ckks" and r.status == "ok"}

    rache_rows = [r for r in report.rows if r.scheme == "rache" and r.status == "ok"]
    if len({r.n_pivot for r in rache_rows}) > 1 and ckks_total:
        lines.append("")
        lines.append("## Rache scaling")
        lines.append("")
        lines.append("| nPivot | RacheEnc (ms) | Ratio over CkksEnc |")
        lines.append("|---|---|---|")
        for r in rache_rows:
            base = ckks_total.get(r.message_count)
            ratio = f"{r.total_ms / base:.2f}" if base else "-"
            lines.append(f"| {r.n_pivot} | {r.total_ms:.3f} | {ratio} |")

    smuche_rows = [r for r in report.rows if r.scheme == "smuche" and r.status == "ok"]
    if len({r.message_count for r in smuche_rows}) > 1:
        lines.append("")
        lines.append("## Smuche weak scaling")
        lines.append("")
        lines.append("| Messages | Overall Time (ms) | Time / Message (ms) |")
        lines.append("|---|---|---|")
        for r in smuche_rows:
            lines.append(f"| {r.message_count} | {r.total_ms:.3f} "
                         f"| {r.per_message_ms:.4f} |")

    lines.append("")
    return "\n".join(lines)
