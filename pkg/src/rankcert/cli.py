"""Command-line driver.

Exit codes: 0 success, 2 invalid input (bad parameters, unreadable or malformed
files, infeasible oracle instances), 3 certificate verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from . import charmat
from .bounds import CERT_METHODS, certificate, flattening_bound
from .charmat import col_rank, generic_rank, is_nondegenerate, row_rank
from .construction import DEFAULT_MAX_VOLUME, ConstructionParams, construction_tensor
from .errors import RankCertError
from .galois import FieldSpec
from .hypercube import TensorR, phi, phi_inverse
from .oracle import DEFAULT_MAX_BITS, EXACT, EXCEEDED_BUDGET, exact_rank
from .tensor3 import Tensor3
from .tensorfile import format_tensor, read_tensor

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY = 3


class UsageError(RankCertError):
    pass


def _report(command: str, params: dict, results: dict, valid: bool) -> dict:
    return {"command": command, "params": params, "results": results, "valid": valid}


def _emit(report: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _field(p: int) -> FieldSpec:
    try:
        return FieldSpec(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _params(args: argparse.Namespace) -> ConstructionParams:
    return ConstructionParams(args.n, args.k, _field(args.field), max_volume=args.max_volume)


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _read3(path: str) -> Tensor3:
    T = read_tensor(path)
    if not isinstance(T, Tensor3):
        raise UsageError(f"{path}: expected a tensor3 file")
    return T


def cmd_gen(args: argparse.Namespace) -> int:
    params = _params(args)
    T = construction_tensor(params)
    _write_out(format_tensor(T), args.out)
    summary = "tensor3 {}x{}x{} {} nnz={}".format(*T.dims, T.field, T.nnz())
    print(summary, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_cert(args: argparse.Namespace) -> int:
    params = _params(args)
    t0 = time.perf_counter()
    cert = certificate(params, method=args.method, seed=args.seed)
    results = cert.to_dict()
    results["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    report = _report("cert", {**params.to_dict(), "method": args.method, "seed": args.seed},
                     results, cert.valid)
    lines = [f"certificate n={params.n} k={params.k} over {params.field} ({cert.rank_method} ranks)",
             f"  base: R[A(0)] = {cert.base_bound}"]
    for lv in cert.levels:
        lines.append(
            f"  level {lv.i}: dims {lv.dims[0]}x{lv.dims[1]}x{lv.dims[2]}  row {lv.row_rank}  col {lv.col_rank}"
            f"  nondegenerate {lv.nondegenerate.nondegenerate}  +{lv.increment} -> {lv.cumulative_bound}")
    lines.append(f"  final bound R[A({params.l})] >= {cert.final_bound}"
                 f" (2n^k - n^(k-1) = {cert.expected_final_bound})")
    lines.append("  valid" if cert.valid else f"  INVALID at level {cert.failing_level}: {cert.failure}")
    _emit(report, args.json, lines)
    return EXIT_OK if cert.valid else EXIT_VERIFY


def cmd_rank(args: argparse.Namespace) -> int:
    T = _read3(args.input)
    t0 = time.perf_counter()
    res = exact_rank(T, r_max=args.max, budget=args.budget, time_limit=args.time_limit,
                     max_bits=args.max_bits)
    results = res.to_dict()
    if not args.witness:
        results.pop("witness", None)
    results["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    report = _report("rank", {"input": args.input, "dims": list(T.dims), "p": T.field.p,
                              "max": args.max, "budget": args.budget}, results, True)
    if res.status == EXACT:
        lines = [f"rank {res.rank}"]
        if args.witness and res.witness is not None:
            for t, (a, b, c) in enumerate(res.witness.terms(), 1):
                lines.append(f"  term {t}: a={list(a)} b={list(b)} c={list(c)}")
    elif res.status == EXCEEDED_BUDGET:
        lines = [f"exceeded_budget: rank > {res.searched_up_to} established"]
    else:
        lines = [f"rank > {res.searched_up_to}"]
    _emit(report, args.json, lines)
    return EXIT_OK


def cmd_reshape(args: argparse.Namespace) -> int:
    T = read_tensor(args.input)
    if isinstance(T, Tensor3):
        if args.inverse:
            raise UsageError("--inverse expects a tensorr input")
        out: Tensor3 | TensorR = phi_inverse(T, args.n, args.k)
    else:
        if not args.inverse:
            raise UsageError("tensorr input needs --inverse to map back to tensor3")
        if (T.n, T.k) != (args.n, args.k):
            raise UsageError(f"file has n={T.n}, r={T.r}; arguments say n={args.n}, k={args.k}")
        out = phi(T)
    _write_out(format_tensor(out), args.out)
    return EXIT_OK


def _info3(T: Tensor3, seed: int) -> tuple[dict, list[str]]:
    fb = flattening_bound(T)
    report = is_nondegenerate(T, seed=seed)
    method = charmat.resolve_method("auto", T)
    results: dict[str, Any] = {
        "kind": "tensor3", "dims": list(T.dims), "p": T.field.p, "nnz": T.nnz(),
        "flattening_ranks": fb.inputs["mode_ranks"], "flattening_bound": fb.value,
        "row_rank": row_rank(T, seed=seed), "col_rank": col_rank(T, seed=seed),
        "generic_rank": generic_rank(T, seed=seed), "rank_method": method,
        "nondegeneracy": report.to_dict(),
    }
    lines = ["tensor3 {}x{}x{} over {}  nnz={}".format(*T.dims, T.field, T.nnz()),
             f"  flattening ranks {fb.inputs['mode_ranks']}  bound {fb.value}",
             f"  characteristic matrix: row rank {results['row_rank']}, col rank {results['col_rank']},"
             f" generic rank {results['generic_rank']}",
             f"  nondegenerate {report.nondegenerate} ({report.to_dict()})"]
    return results, lines


def cmd_info(args: argparse.Namespace) -> int:
    T = read_tensor(args.input)
    if isinstance(T, Tensor3):
        results, lines = _info3(T, args.seed)
    else:
        image, image_lines = _info3(phi(T), args.seed)
        results = {"kind": "tensorr", "r": T.r, "n": T.n, "p": T.field.p, "nnz": T.nnz(), "phi_image": image}
        lines = [f"tensorr [{T.n}]^{T.r} over {T.field}  nnz={T.nnz()}", "  image under phi:"]
        lines += ["  " + ln for ln in image_lines]
    _emit(_report("info", {"input": args.input}, results, True), args.json, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankcert",
        description="Explicit n^k x n^k x n tensors with certified rank lower bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def construction_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("-n", type=int, required=True, help="side length, a power of 2")
        p.add_argument("-k", type=int, required=True, help="exponent k >= 1")
        p.add_argument("--field", type=int, default=2, metavar="P", help="prime p of GF(p) (default 2)")
        p.add_argument("--max-volume", type=int, default=DEFAULT_MAX_VOLUME,
                       help="cap on n^k * n^k (default 2^26)")

    p = sub.add_parser("gen", help="write the construction tensor A(l) to a file")
    construction_args(p)
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cert", help="build and check the level-by-level rank certificate")
    construction_args(p)
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized ranks (default 0)")
    p.add_argument("--method", choices=CERT_METHODS, default="auto",
                   help="rank route: symbolic, randomized, both (cross-check) or auto")
    p.set_defaults(func=cmd_cert)

    p = sub.add_parser("rank", help="exact rank by exhaustive search")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--max", type=int, help="largest rank to try")
    p.add_argument("--budget", type=int, help="cap on the number of span tests")
    p.add_argument("--time-limit", type=float, help="wall-clock cap in seconds")
    p.add_argument("--max-bits", type=float, default=DEFAULT_MAX_BITS,
                   help=f"feasibility guard in enumeration bits (default {DEFAULT_MAX_BITS})")
    p.add_argument("--witness", action="store_true", help="print the decomposition")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("reshape", help="map between n^k x n^k x n and [n]^(2k+1)")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.add_argument("--inverse", action="store_true", help="map a tensorr file back to tensor3")
    p.set_defaults(func=cmd_reshape)

    p = sub.add_parser("info", help="dimensions, flattening bounds and nondegeneracy")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RankCertError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())
