"""Tanh baseline on the Poisson demo over several L values and seeds."""

import argparse

from gffpielm.benchmarks import get_case
from gffpielm.tuning import sweep_vanilla_L


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--values", default="1,20,40,60")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--neurons", type=int, default=None)
    args = ap.parse_args()
    case = get_case("poisson1d_demo")
    values = [float(v) for v in args.values.split(",")]
    M = args.neurons or case.neurons
    for s in range(args.seeds):
        out = sweep_vanilla_L(case.problem, case.plan, values, seed=s, M=M)
        cells = "  ".join(f"L={r.L:g}: {r.l2:.2e}" for r in out.rows)
        print(f"seed {s} M={M}  {cells}  best L={out.best.L:g}")


if __name__ == "__main__":
    main()
