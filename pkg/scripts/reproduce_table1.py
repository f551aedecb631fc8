"""Both methods on every registry case; writes table1_<scale>.csv.

    python3 scripts/reproduce_table1.py --scale paper --out runs/table1_paper
"""

import argparse

from gffpielm.app import run_table1
from gffpielm.benchmarks import list_cases


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scale", choices=("desk", "paper"), default="desk")
    ap.add_argument("--out", default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cases", nargs="*", default=None, help=f"subset of {list_cases()}")
    args = ap.parse_args()
    out = args.out or f"runs/table1_{args.scale}"
    run_table1(args.scale, out, seed=args.seed, cases=args.cases, on_row=show)
    print(f"summary written to {out}/table1_{args.scale}.csv")


def show(row):
    if row["error"]:
        print(f"{row['case']:22s} {row['method']:8s} ERROR {row['error']}", flush=True)
    else:
        print(f"{row['case']:22s} {row['method']:8s} {row['initialization']:26s} "
              f"mse={row['mse']:.3e} l2={row['l2']:.3e} (reported {row['reported_mse']} / {row['reported_l2']})"
              f" {row['seconds']:.1f}s", flush=True)


if __name__ == "__main__":
    main()
