"""Success rate of the grid-sample solvers on planted instances.

Sweeps eps and reports how often the returned depth clears the
(1/2 - eps) * k guarantee, for the weighted and the colored solver.
The guarantee is probabilistic, so rates below 100% at tight sample
budgets are expected; the point of the sweep is that they stay high.

Usage:
    python3 scripts/planted_recovery.py --d 2 --trials 50
"""

import argparse

import numpy as np

from maxrs.oracles import make_planted
from maxrs.sample_solver import max_colored_sample, max_weighted_sample


def sweep(d, eps_values, trials, k_range, n_decoys, c_sample, colored):
    rows = []
    for eps in eps_values:
        ok = 0
        ratios = []
        for s in range(trials):
            rng = np.random.default_rng((d, s))
            k = int(rng.integers(*k_range))
            inst = make_planted(d=d, k=k, n_decoys=n_decoys, seed=s, colored=colored)
            if colored:
                out = max_colored_sample(inst.centers, inst.colors, d, eps, c_sample, seed=s)
            else:
                out = max_weighted_sample(inst.centers, inst.weights, d, eps, c_sample, seed=s)
            ratios.append(out.value / k)
            ok += out.value >= (0.5 - eps) * k
        rows.append((eps, ok / trials, float(np.mean(ratios))))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.2, 0.3, 0.4])
    ap.add_argument("--k-min", type=int, default=10)
    ap.add_argument("--k-max", type=int, default=40)
    ap.add_argument("--decoys", type=int, default=100)
    ap.add_argument("--c-sample", type=float, default=4.0)
    args = ap.parse_args()

    for colored in (False, True):
        label = "colored" if colored else "weighted"
        print(f"{label} sampler, d={args.d}, k in [{args.k_min}, {args.k_max}], "
              f"{args.decoys} decoys, {args.trials} trials per eps")
        print(f"  {'eps':>5}  {'success':>7}  {'mean value/k':>12}")
        rows = sweep(args.d, args.eps, args.trials, (args.k_min, args.k_max + 1),
                     args.decoys, args.c_sample, colored)
        for eps, rate, mean_ratio in rows:
            print(f"  {eps:>5.2f}  {rate:>7.0%}  {mean_ratio:>12.3f}")
        print()


if __name__ == "__main__":
    main()
