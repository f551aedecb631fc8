"""Poisson demo with delta in [1, 400] over many seeds; per-seed and median error."""

import argparse

import numpy as np

from gffpielm.app import RunConfig, run_case


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--rcond", type=float, default=None)
    args = ap.parse_args()
    l2s = []
    for s in range(args.seeds):
        r = run_case(RunConfig(case="poisson1d_demo", seed=s, rcond=args.rcond), write=False).methods[0].result
        l2s.append(r.l2)
        print(f"seed {s:2d} mse={r.mse:.2e} l2={r.l2:.2e} rank={r.effective_rank}")
    l2s = np.array(l2s)
    print(f"median l2 {np.median(l2s):.2e}; seeds with l2 <= 1e-8: {(l2s <= 1e-8).sum()}/{len(l2s)}")


if __name__ == "__main__":
    main()
