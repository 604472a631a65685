"""Command-line entry point.

    lpsparse sparsify INSTANCE.json --p 2 --eps 0.5 --seed 1 [--out result.json]
    lpsparse verify {khintchine,mz,cls} [--p 1 2 4] [--trials 200] [--seed 7] [--csv]

Exit codes: 0 all checks pass, 1 a bound is violated or no witness was found,
2 malformed input or configuration.  Environment variables are not read.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cls_sparsifier as cls
from .errors import CapExceeded, InputError, MaxAttemptsExceeded
from .io import ReportRow, load_instance, write_report
from .suites import SuiteConfig, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _add_output_flags(parser):
    parser.add_argument("--out", type=Path, help="write output here instead of stdout")
    parser.add_argument("--format", choices=("text", "csv", "json"))
    parser.add_argument("--csv", action="store_const", const="csv", dest="format",
                        help="shorthand for --format csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpsparse", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sparsify", help="find a sparse L-tuple approximant for an instance file")
    sp.add_argument("instance", type=Path)
    sp.add_argument("--p", type=float, help="exponent (overrides the file's p)")
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--max-attempts", type=int, default=cls.DEFAULT_MAX_ATTEMPTS)
    sp.add_argument("--renormalize", action="store_true",
                    help="rescale weights to sum to one before validation")
    _add_output_flags(sp)

    vp = sub.add_parser("verify", help="run a seeded batch verification suite")
    vp.add_argument("suite", choices=("khintchine", "mz", "cls"))
    vp.add_argument("--p", type=float, nargs="+", dest="p_list")
    vp.add_argument("--eps", type=float, nargs="+", dest="eps_list")
    vp.add_argument("--seed", type=_seed, default=0)
    vp.add_argument("--trials", type=int)
    vp.add_argument("--n-max", type=int, help="max N (khintchine, mz) or max K (cls)")
    vp.add_argument("--cap", type=int, help="enumeration cap (tuples / sign vectors)")
    vp.add_argument("--max-attempts", type=int, default=cls.DEFAULT_MAX_ATTEMPTS)
    _add_output_flags(vp)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_sparsify(args) -> int:
    inst = load_instance(args.instance, p=args.p, renormalize_weights=args.renormalize)
    try:
        res = cls.sparsify(inst, args.eps, args.seed, args.max_attempts)
    except MaxAttemptsExceeded as exc:
        print(f"lpsparse: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    # independent re-check of the witness through the single-tuple path
    error_p = cls.approximation_error(res.tuple, inst)
    target = args.eps**inst.p
    fmt = args.format or "json"
    if fmt == "json":
        doc = {
            "tuple": list(res.tuple),
            "L": res.L,
            "error_p": error_p,
            "eps_p": target,
            "attempts": res.attempts,
            "seed": res.seed,
        }
        text = json.dumps(doc) + "\n"
    else:
        row = ReportRow("sparsify", res.seed, str(args.instance), inst.p, None, inst.K, res.L,
                        error_p, target, error_p / target, error_p <= target)
        text = write_report([row], fmt)
    _emit(text, args.out)
    return EXIT_OK if error_p <= target else EXIT_VIOLATION


def cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=args.suite,
        seed=args.seed,
        trials=args.trials,
        p_list=tuple(args.p_list) if args.p_list else None,
        n_max=args.n_max,
        cap=args.cap,
        max_attempts=args.max_attempts,
        **({"eps_list": tuple(args.eps_list)} if args.eps_list else {}),
    )
    rows = run_suite(cfg)
    _emit(write_report(rows, args.format or "text"), args.out)
    failed = [r for r in rows if not r.verdict]
    for r in failed[:10]:
        print(f"lpsparse: FAIL {r.suite} instance {r.instance_id} seed {r.seed} p={r.p} "
              f"lhs={r.lhs!r} bound={r.bound!r}", file=sys.stderr)
    print(f"lpsparse: {len(rows) - len(failed)}/{len(rows)} checks passed", file=sys.stderr)
    return EXIT_VIOLATION if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    handler = cmd_sparsify if args.command == "sparsify" else cmd_verify
    try:
        return handler(args)
    except (InputError, CapExceeded, OSError) as exc:
        print(f"lpsparse: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
