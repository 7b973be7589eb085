"""Command-line front end: ``belreg {codes,bound,sweep,simulate,train}``.

JSON goes to stdout unless ``--out`` is given; tabular artifacts are CSV.
Every run echoes its resolved configuration (inside the JSON, or as a JSON
line on stderr for CSV outputs).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from belreg import bounds, mc_sim, toytrain
from belreg.codebook import CodeKind, make_code, metrics
from belreg.error_model import model_from_code
from belreg.errors import BELError


def _grid(text: str) -> np.ndarray:
    """``start:stop:count`` with inclusive endpoints, or a single value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError
            return np.linspace(start, stop, count)
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    return lo, hi


def _default_seed() -> int:
    return int(os.environ.get("BEL_SEED", "0"))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _echo(config: dict) -> None:
    sys.stderr.write(json.dumps({"config": config}, sort_keys=True) + "\n")


def cmd_codes(args) -> None:
    C = make_code(args.kind, args.levels)
    met = metrics(C)
    _emit(C.to_csv(), args.out)
    summary = {
        "config": {"kind": C.kind.value, "levels": args.levels, "out": args.out},
        "bits": C.bits,
        "max_transitions": max(met.transitions_per_classifier),
        "min_adjacent_hamming": min(met.adjacent_hamming),
    }
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")


def bound_report(kind: str, N: int, r: float, sigma: float) -> dict:
    if kind == "unary":
        rep = bounds.bound_unary(model_from_code(make_code("unary", N - 1), r, sigma), N)
    else:
        rep = bounds.expected_err_johnson(model_from_code(make_code("johnson", N - 1), r, sigma), N)
    return rep.to_dict()


def cmd_bound(args) -> None:
    out = bound_report(args.kind, args.N, args.r, args.sigma)
    out["config"] = {"kind": args.kind, "N": args.N, "r": args.r, "sigma": args.sigma}
    _emit(json.dumps(out, sort_keys=True) + "\n", args.out)


def cmd_sweep(args) -> None:
    r_grid = args.r_grid if args.r_grid is not None else bounds.default_grid()[0]
    s_grid = args.sigma_grid if args.sigma_grid is not None else bounds.default_grid()[1]
    grid = bounds.compare_sweep(args.N, r_grid, s_grid, workers=args.workers)
    _echo({"N": args.N, "r_grid": grid.r_values, "sigma_grid": grid.sigma_values, "out": args.out})
    _emit(grid.to_csv(), args.out)


def cmd_simulate(args) -> None:
    seed = args.seed if args.seed is not None else _default_seed()
    C = make_code(args.kind, args.levels)
    model = model_from_code(C, args.r, args.sigma)
    rep = mc_sim.simulate(C, args.decoder, model, args.samples, seed, args.streams, args.workers)
    out = json.loads(rep.to_json())
    out["config"] = {
        "kind": C.kind.value, "decoder": args.decoder, "levels": args.levels, "r": args.r,
        "sigma": args.sigma, "samples": args.samples, "seed": seed, "streams": args.streams,
    }
    _emit(json.dumps(out, sort_keys=True) + "\n", args.out)


def cmd_train(args) -> None:
    seed = args.seed if args.seed is not None else _default_seed()
    a, b = args.range
    cfg = toytrain.TrainConfig(
        task=args.task, noise=args.noise, input_dim=args.input_dim, a=a, b=b,
        levels=args.levels, encoding=args.encoding, loss=args.loss, decoder=args.decoder,
        theta=args.theta, hidden=tuple(args.hidden), lr=args.lr, direct_lr=args.direct_lr,
        direct_loss=args.direct_loss, epochs=args.epochs, batch_size=args.batch_size,
        n_train=args.n_train, n_test=args.n_test,
        seeds=tuple(range(seed, seed + args.n_seeds)), outputs=args.outputs,
    )
    rep = toytrain.train(cfg)
    _emit(rep.to_json() + "\n", args.out)
    if args.trace_csv:
        with open(args.trace_csv, "w") as fh:
            fh.write(rep.trace_csv())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="belreg", description="Binary-encoded label regression toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in CodeKind]

    c = sub.add_parser("codes", help="emit a code matrix as CSV")
    c.add_argument("--kind", choices=kinds, required=True)
    c.add_argument("--levels", type=int, required=True)
    c.add_argument("--out", help="CSV path (default stdout)")
    c.set_defaults(func=cmd_codes)

    bd = sub.add_parser("bound", help="closed-form expected error (JSON)")
    bd.add_argument("--kind", choices=["unary", "johnson"], required=True)
    bd.add_argument("--N", type=int, required=True, help="convention size; labels are 1..N-1")
    bd.add_argument("--r", type=float, required=True)
    bd.add_argument("--sigma", type=float, required=True)
    bd.add_argument("--out")
    bd.set_defaults(func=cmd_bound)

    sw = sub.add_parser("sweep", help="unary-vs-Johnson percentage map (CSV)")
    sw.add_argument("--N", type=int, default=16)
    sw.add_argument("--r-grid", type=_grid, help="start:stop:count, inclusive (default 0.05:1:20)")
    sw.add_argument("--sigma-grid", type=_grid, help="start:stop:count, inclusive (default 0.25:4:16)")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)

    sm = sub.add_parser("simulate", help="Monte-Carlo decoding error (JSON)")
    sm.add_argument("--kind", choices=kinds, required=True)
    sm.add_argument("--decoder", choices=[d.value for d in mc_sim.DecoderKind], default="gen")
    sm.add_argument("--levels", type=int, required=True)
    sm.add_argument("--r", type=float, required=True)
    sm.add_argument("--sigma", type=float, required=True)
    sm.add_argument("--samples", type=int, default=100_000)
    sm.add_argument("--seed", type=int, help="default: $BEL_SEED or 0")
    sm.add_argument("--streams", type=int, default=1)
    sm.add_argument("--workers", type=int, default=1)
    sm.add_argument("--out")
    sm.set_defaults(func=cmd_simulate)

    d = toytrain.TrainConfig()
    tr = sub.add_parser("train", help="toy BEL vs direct regression (JSON)")
    tr.add_argument("--task", choices=toytrain.TASKS, default=d.task)
    tr.add_argument("--noise", type=float, default=d.noise)
    tr.add_argument("--input-dim", type=int, default=d.input_dim)
    tr.add_argument("--range", type=_range, default=(d.a, d.b), help="label range a:b (write --range=-3:5 when a is negative)")
    tr.add_argument("--levels", type=int, default=d.levels)
    tr.add_argument("--encoding", choices=kinds, default=d.encoding)
    tr.add_argument("--loss", choices=toytrain.BEL_LOSSES, default=d.loss)
    tr.add_argument("--decoder", choices=["custom", "gen", "gen-ex"], default=d.decoder)
    tr.add_argument("--theta", type=int, default=d.theta)
    tr.add_argument("--hidden", type=int, nargs="+", default=list(d.hidden))
    tr.add_argument("--lr", type=float, default=d.lr)
    tr.add_argument("--direct-lr", type=float, default=d.direct_lr)
    tr.add_argument("--direct-loss", choices=["l1", "l2"], default=d.direct_loss)
    tr.add_argument("--epochs", type=int, default=d.epochs)
    tr.add_argument("--batch-size", type=int, default=d.batch_size)
    tr.add_argument("--n-train", type=int, default=d.n_train)
    tr.add_argument("--n-test", type=int, default=d.n_test)
    tr.add_argument("--seed", type=int, help="first seed (default: $BEL_SEED or 0)")
    tr.add_argument("--n-seeds", type=int, default=len(d.seeds))
    tr.add_argument("--outputs", type=int, default=d.outputs)
    tr.add_argument("--out")
    tr.add_argument("--trace-csv", help="write the first seed's BEL loss trace as epoch,loss")
    tr.set_defaults(func=cmd_train)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (BELError, ValueError, OSError) as exc:
        sys.stderr.write(f"belreg {args.command}: error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
