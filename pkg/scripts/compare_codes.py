"""MC decoding error of every code kind and decoder under one error model.

Bit counts differ across kinds, so the per-classifier model is the same
Gaussian-at-transition shape for all of them.
"""

import argparse
import json

from belreg import mc_sim
from belreg.codebook import CodeKind, make_code
from belreg.error_model import model_from_code
from belreg.errors import InvalidModel


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--levels", type=int, default=64)
    p.add_argument("--r", type=float, default=0.3)
    p.add_argument("--sigma", type=float, default=1.5)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    table = []
    for kind in CodeKind:
        C = make_code(kind, args.levels)
        m = model_from_code(C, args.r, args.sigma)
        decoders = ["gen", "gen-ex"] + (["custom"] if kind in (CodeKind.UNARY, CodeKind.JOHNSON) else [])
        for dec in decoders:
            try:
                rep = mc_sim.simulate(C, dec, m, args.samples, args.seed)
                table.append({"kind": kind.value, "bits": C.bits, "decoder": dec,
                              "mae": rep.mean_abs_error, "se": rep.std_error})
            except InvalidModel as exc:
                table.append({"kind": kind.value, "bits": C.bits, "decoder": dec, "error": str(exc)})
    print(json.dumps({"levels": args.levels, "r": args.r, "sigma": args.sigma, "results": table}, indent=2))


if __name__ == "__main__":
    main()
