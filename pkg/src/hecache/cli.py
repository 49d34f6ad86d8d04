"""Command-line interface.

Subcommands:
    keygen  write params/public/secret key files for a profile
    bench   time the encryption schemes over a CSV or synthetic workload
    enc     encrypt one value to a file (round-trip smoke tooling)
    dec     decrypt a ciphertext file and print the value

Exit codes: 0 success, 1 usage error, 2 correctness failure, 3 I/O error.
"""

import argparse
import secrets
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import _kernel, bench, serde
from .errors import DatasetError, FormatError, HecacheError
from .he import Plaintext, decrypt, encrypt, keygen
from .rache import digit_decompose, rache_enc, rache_precompute
from .ring import PROFILES, RandomStream
from .smuche import smuche_enc, smuche_precompute

PARAMS_FILE = "params.bin"
PUBLIC_FILE = "public_key.bin"
SECRET_FILE = "secret_key.bin"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the CLI contract reserves 2
    # for correctness failures, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(prog="hecache",
                     description="Benchmark CKKS-style encryption with "
                                 "ciphertext-caching accelerators.")
    sub = parser.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate and store a key pair")
    kg.add_argument("--profile", choices=sorted(PROFILES), default="default")
    kg.add_argument("--seed", type=int, default=0)
    kg.add_argument("--out", required=True, help="output directory")

    bn = sub.add_parser("bench", help="run the encryption benchmark")
    bn.add_argument("--schemes", default="ckks,rache,smuche",
                    help="comma-separated subset of ckks,rache,smuche")
    bn.add_argument("--npivot", default="16",
                    help="comma-separated Rache cache sizes")
    bn.add_argument("--messages", default="",
                    help="comma-separated message counts (default: all values)")
    bn.add_argument("--dataset", help="CSV file with a header row")
    bn.add_argument("--column", help="CSV column name or index")
    bn.add_argument("--synthetic", help="workload spec, e.g. uniform(0,1):40")
    bn.add_argument("--radix", type=int, default=2)
    bn.add_argument("--repeat", type=int, default=5)
    bn.add_argument("--seed", type=int, default=1)
    bn.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    bn.add_argument("--out", help="output file (default: stdout)")
    bn.add_argument("--profile", choices=sorted(PROFILES), default="default")
    bn.add_argument("--backend", choices=("auto", "py", "cy"),
                    help="force a kernel backend (default: HECACHE_BACKEND or auto)")

    en = sub.add_parser("enc", help="encrypt a single value")
    en.add_argument("--scheme", choices=bench.SCHEMES, required=True)
    en.add_argument("--value", required=True)
    en.add_argument("--precision", default="1",
                    help="plaintext precision, e.g. 0.25 or 1/64")
    en.add_argument("--keys", required=True, help="directory from keygen")
    en.add_argument("--out", required=True)
    en.add_argument("--seed", type=int,
                    help="randomness seed (default: fresh entropy)")

    de = sub.add_parser("dec", help="decrypt a ciphertext file")
    de.add_argument("--keys", required=True)
    de.add_argument("--in", dest="infile", required=True)

    return parser


def _cmd_keygen(args):
    params = replace(PROFILES[args.profile], seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pk, sk = keygen(params, RandomStream(args.seed))
    (out / PARAMS_FILE).write_bytes(serde.dumps_params(params))
    (out / PUBLIC_FILE).write_bytes(serde.dumps_public_key(pk, params))
    (out / SECRET_FILE).write_bytes(serde.dumps_secret_key(sk, params))
    print(f"wrote {PARAMS_FILE}, {PUBLIC_FILE}, {SECRET_FILE} to {out}")
    return 0


def _load_keys(keys_dir, need_secret=False):
    keys = Path(keys_dir)
    params = serde.loads_params((keys / PARAMS_FILE).read_bytes())
    public = serde.loads_public_key((keys / PUBLIC_FILE).read_bytes(), params)
    secret = None
    if need_secret:
        secret = serde.loads_secret_key((keys / SECRET_FILE).read_bytes(), params)
    return params, public, secret


def _parse_int_list(text, flag):
    try:
        return tuple(int(p) for p in text.split(",") if p)
    except ValueError:
        raise HecacheError(f"{flag} expects comma-separated integers") from None


def _cmd_bench(args, parser):
    if bool(args.dataset) == bool(args.synthetic):
        parser.error("exactly one of --dataset or --synthetic is required")
    if args.dataset and not args.column:
        parser.error("--dataset requires --column")
    if args.backend:
        _kernel.set_backend(args.backend)

    schemes = tuple(s for s in args.schemes.split(",") if s)
    if args.synthetic:
        spec, sep, count = args.synthetic.rpartition(":")
        if not sep:
            parser.error("--synthetic expects SPEC:COUNT, e.g. uniform(0,1):40")
        workload = bench.gen_synthetic(spec, int(count), args.seed, args.radix)
    else:
        workload = bench.load_dataset(args.dataset, args.column, args.radix)

    params = replace(PROFILES[args.profile], radix=args.radix, seed=args.seed)
    config = bench.BenchConfig(
        schemes=schemes,
        params=params,
        workload=workload,
        n_pivots=_parse_int_list(args.npivot, "--npivot"),
        message_counts=_parse_int_list(args.messages, "--messages"),
        repeat=args.repeat,
        seed=args.seed,
    )
    report = bench.run_benchmark(config)
    text = bench.emit_report(report, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if any(row.status != "ok" for row in report.rows):
        print("one or more scheme runs failed; see report", file=sys.stderr)
        return 2
    return 0


def _cmd_enc(args):
    params, pk, _ = _load_keys(args.keys)
    precision = Fraction(args.precision)
    value = float(Fraction(args.value))
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    rng = RandomStream(seed)

    if args.scheme == "ckks":
        ct = encrypt(pk, Plaintext(value, params.delta), rng)
    elif args.scheme == "smuche":
        cache = smuche_precompute(pk, params, precision, rng)
        ct = smuche_enc(cache, pk, value, precision, rng)
    else:
        scaled = round(Fraction(value) / precision)
        if scaled < 0:
            raise HecacheError("rache encrypts nonnegative values only")
        inv = 1 / precision
        if inv.denominator != 1:
            raise HecacheError("rache precision must divide 1")
        n_pivot = len(digit_decompose(scaled, params.radix, 128)) + 2
        cache = rache_precompute(pk, params, n_pivot, rng)
        ct = rache_enc(cache, scaled, rng)
        # fold the workload precision into the stored scale so dec
        # prints the original value, not the scaled integer
        ct = replace(ct, scale=ct.scale * int(inv))

    Path(args.out).write_bytes(serde.dumps_ciphertext(ct, params))
    print(f"encrypted {value} with {args.scheme} -> {args.out}")
    return 0


def _cmd_dec(args):
    params, _, sk = _load_keys(args.keys, need_secret=True)
    ct = serde.loads_ciphertext(Path(args.infile).read_bytes(), params)
    print(f"{decrypt(sk, ct):.12g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "keygen":
            return _cmd_keygen(args)
        if args.command == "bench":
            return _cmd_bench(args, parser)
        if args.command == "enc":
            return _cmd_enc(args)
        return _cmd_dec(args)
    except SystemExit:
        raise
    except (DatasetError, FormatError, OSError) as exc:
        print(f"hecache: {exc}", file=sys.stderr)
        return 3
    except (HecacheError, ValueError) as exc:
        print(f"hecache: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
