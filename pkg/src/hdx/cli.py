"""``hdx`` command line: build, verify and spectrum.

Exit codes: 0 all checks pass, 1 a check fails, 2 usage or parse error,
3 infeasible construction or size cap.  Errors are printed to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would print plain text and exit
        raise UsageError(message)


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {v}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hdx", description="Build and check high-dimensional expander complexes.")
    p.add_argument("--threads", type=_positive_int, help="cap BLAS/OpenMP threads")
    p.add_argument("--size-cap", type=_positive_int, help="vertex cap for dense spectra (default 4000)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="construct a complex and write it with a metadata sidecar")
    b.add_argument("--construction", required=True,
                   choices=["conlon", "three-product", "hdz-minus", "hdz-plus", "hpower", "multipartite"])
    b.add_argument("--params", help="params JSON file, or inline JSON")
    b.add_argument("--seed", type=_u64, default=0)
    b.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run structural checks on a built complex")
    v.add_argument("complex")
    v.add_argument("--checks", help="comma separated; default cts,two-centers,lift")
    v.add_argument("--tol", type=float, default=1e-6, help="tolerance for inequalities")
    v.add_argument("--eig-tol", type=float, default=1e-9, help="eigensolver tolerance")
    v.add_argument("--seed", type=_u64, default=0, help="seed for sampled checks")
    v.add_argument("--out", help="write the report here instead of stdout")

    s = sub.add_parser("spectrum", help="second eigenvalue of a derived graph")
    s.add_argument("complex")
    s.add_argument("--graph", default="walk", choices=["walk", "dual", "L", "rep", "zigzag"])
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--bound", action="store_true", help="also check the walk bound")
    s.add_argument("--bound-tol", type=float, default=1e-6)
    s.add_argument("--out")
    for sp_ in (b, v, s):
        sp_.add_argument("--threads", type=_positive_int, default=argparse.SUPPRESS)
        sp_.add_argument("--size-cap", type=_positive_int, default=argparse.SUPPRESS)
    return p


def _emit_error(payload: dict, code: int) -> int:
    payload = dict(payload)
    payload["exit_code"] = code
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _emit_error({"error": "usage", "message": str(exc)}, 2)
    if args.threads:
        for var in THREAD_VARS:
            os.environ[var] = str(args.threads)
    if args.size_cap:
        os.environ["HDX_SIZE_CAP"] = str(args.size_cap)

    # numpy and the builders load only after the thread limits are in place
    from . import commands
    from .errors import HdxError
    from .io import atomic_write_text

    try:
        if args.command == "build":
            code, text = commands.cmd_build(args.construction, args.params, args.seed, args.out)
            sys.stdout.write(text)
            return code
        if args.command == "verify":
            code, text = commands.cmd_verify(args.complex, args.checks, args.tol, args.eig_tol, args.seed)
        else:
            code, text = commands.cmd_spectrum(args.complex, args.graph, args.tol, args.bound, args.bound_tol)
        if args.out:
            atomic_write_text(args.out, text)
        else:
            sys.stdout.write(text)
        return code
    except HdxError as exc:
        return _emit_error(exc.to_json(), exc.exit_code)
    except MemoryError:
        return _emit_error({"error": "size", "message": "out of memory; reduce the instance or use sampled checks"}, 3)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
