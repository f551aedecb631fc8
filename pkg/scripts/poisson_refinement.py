"""Interval refinement on the Poisson demo across seeds, starting from [1, 1000]."""

import argparse

import numpy as np

from gffpielm.benchmarks import get_case
from gffpielm.pipeline import LayerConfig
from gffpielm.sampling import SamplingPlan
from gffpielm.tuning import RefinementSettings, refine_and_resolve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--statistic", choices=("median", "max"), default="median")
    ap.add_argument("--max-iterations", type=int, default=2)
    args = ap.parse_args()
    case = get_case("poisson1d_demo")
    settings = RefinementSettings(statistic=args.statistic)
    in_band = ratio_ok = 0
    for s in range(args.seeds):
        plan = SamplingPlan(case.plan.n_interior, case.plan.n_per_boundary_segment, 0, seed=s)
        out = refine_and_resolve(case.problem, LayerConfig("gff", case.neurons, 1.0, 1000.0, seed=s), plan,
                                 args.max_iterations, settings)
        dM = out.suggested_deltaM
        ratio = out.final.l2 / out.initial.l2
        in_band += 250 <= dM <= 600
        ratio_ok += ratio <= 1e-4
        trail = " -> ".join(f"[{it.delta1:.0f},{it.deltaM:.0f}] l2={it.result.l2:.1e}" for it in out.trail)
        print(f"seed {s:2d} suggested deltaM={dM:7.1f} ratio={ratio:.1e}  {trail}")
    print(f"deltaM in [250, 600]: {in_band}/{args.seeds}; final/initial <= 1e-4: {ratio_ok}/{args.seeds}")


if __name__ == "__main__":
    main()
