"""Command line front end.

Exit codes: 0 success, 2 invalid arguments, 3 I/O or parse failure,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bench import BenchPlan, emit, run_bench
from .datagen import add_awgn, power_function_tensor, spectrum_decay_tensor, tensor_load, tensor_save
from .decompose import SketchConfig, TruncationSpec, tt_rbki, tt_rsi, tt_rsvd, tt_svd
from .errors import InvalidArgumentError, ParseError
from .metrics import psnr, relative_error
from .tt import tt_load, tt_reconstruct, tt_save


def _int_csv(s: str):
    return tuple(int(v) for v in s.split(","))


def _cmd_synth_spectrum(args) -> int:
    tensor_save(spectrum_decay_tensor(args.n, args.T, args.D), args.output)
    return 0


def _cmd_synth_powerfn(args) -> int:
    tensor_save(power_function_tensor(args.dims, args.h), args.output)
    return 0


def _cmd_noise(args) -> int:
    t = tensor_load(args.input)
    tensor_save(add_awgn(t, args.snr, args.seed), args.output)
    return 0


def _cmd_decompose(args) -> int:
    t = tensor_load(args.input)
    if args.method == "svd":
        if args.epsilon is None and args.ranks is None:
            raise InvalidArgumentError("svd needs --epsilon or --ranks")
        # both given is rejected by TruncationSpec
        tt, trace = tt_svd(t, TruncationSpec(epsilon=args.epsilon, ranks=args.ranks))
    else:
        if args.epsilon is not None:
            raise InvalidArgumentError("--epsilon applies to --method svd only")
        if args.ranks is None:
            raise InvalidArgumentError(f"--method {args.method} needs --ranks")
        cfg = SketchConfig(
            ranks=args.ranks,
            p=args.p,
            q=args.q,
            seed=args.seed,
            naive_krylov=args.naive_krylov,
            include_zeroth_block=args.include_zeroth_block,
            svd_truncate=args.svd_truncate,
        )
        fn = {"rsvd": tt_rsvd, "rsi": tt_rsi, "rbki": tt_rbki}[args.method]
        tt, trace = fn(t, cfg)
    tt_save(tt, args.output)
    if args.trace:
        payload = {
            "steps": [
                {
                    "n": s.n,
                    "rank": s.rank,
                    "residual": s.residual,
                    "elapsed_s": s.elapsed_s,
                    "sketch_width": s.sketch_width,
                    "clamped": s.clamped,
                    "padded_cols": s.padded_cols,
                }
                for s in trace.steps
            ],
            "residual_sq_sum": trace.residual_sq_sum,
        }
        with open(args.trace, "w") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
    return 0


def _cmd_reconstruct(args) -> int:
    tensor_save(tt_reconstruct(tt_load(args.input)), args.output)
    return 0


def _cmd_metrics(args) -> int:
    ref = tensor_load(args.ref)
    approx = tensor_load(args.approx)
    print(f"rel_err {relative_error(ref, approx):.17g}")
    print(f"psnr {psnr(ref, approx):.17g}")
    return 0


def _cmd_bench(args) -> int:
    with open(args.plan) as f:
        plan = BenchPlan.from_dict(json.load(f))
    emit(run_bench(plan), args.format, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttapprox",
        description="Tensor-train low-rank approximation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate a synthetic tensor")
    synth_sub = synth.add_subparsers(dest="generator", required=True)
    sp = synth_sub.add_parser("spectrum", help="diagonal-slice tensor with rank plateau")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--D", type=float, required=True)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_synth_spectrum)
    pf = synth_sub.add_parser("powerfn", help="inverse power-sum tensor")
    pf.add_argument("--dims", type=_int_csv, required=True, metavar="I1,I2,...")
    pf.add_argument("--h", type=float, required=True)
    pf.add_argument("-o", "--output", required=True)
    pf.set_defaults(func=_cmd_synth_powerfn)

    noise = sub.add_parser("noise", help="add white Gaussian noise at a target SNR")
    noise.add_argument("--snr", type=float, required=True)
    noise.add_argument("--seed", type=int, required=True)
    noise.add_argument("-i", "--input", required=True)
    noise.add_argument("-o", "--output", required=True)
    noise.set_defaults(func=_cmd_noise)

    dec = sub.add_parser("decompose", help="TT-decompose a .dten tensor")
    dec.add_argument("--method", choices=["svd", "rsvd", "rsi", "rbki"], required=True)
    dec.add_argument("--epsilon", type=float)
    dec.add_argument("--ranks", type=_int_csv, metavar="r1,r2,...")
    dec.add_argument("--p", type=int, default=0)
    dec.add_argument("--q", type=int, default=1)
    dec.add_argument("--seed", type=int, default=0)
    dec.add_argument("--svd-truncate", action="store_true")
    dec.add_argument("--naive-krylov", action="store_true")
    dec.add_argument("--include-zeroth-block", action="store_true")
    dec.add_argument("-i", "--input", required=True)
    dec.add_argument("-o", "--output", required=True)
    dec.add_argument("--trace", help="write per-step trace JSON here")
    dec.set_defaults(func=_cmd_decompose)

    rec = sub.add_parser("reconstruct", help="expand a .ttc back to dense")
    rec.add_argument("-i", "--input", required=True)
    rec.add_argument("-o", "--output", required=True)
    rec.set_defaults(func=_cmd_reconstruct)

    met = sub.add_parser("metrics", help="print rel_err and psnr of two tensors")
    met.add_argument("--ref", required=True)
    met.add_argument("--approx", required=True)
    met.set_defaults(func=_cmd_metrics)

    ben = sub.add_parser("bench", help="run a sweep plan and emit records")
    ben.add_argument("--plan", required=True)
    ben.add_argument("-o", "--output", required=True)
    ben.add_argument("--format", choices=["csv", "json"], default="csv")
    ben.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 3
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
