"""A quick toric-code threshold estimate with matching and with the cluster decoder.

Small trial counts keep this to a couple of minutes on one core; the
acceptance suite runs the same sweep with far more trials.  Pass a trial
count as the first argument to change it.
"""

import sys

import numpy as np

from qeclab.montecarlo import ExperimentConfig, curves_from_rows, estimate_threshold, sweep


def scan(decoder, sizes, ps, trials):
    configs = [ExperimentConfig("toric", {"L": L}, "bitflip", float(p), 0.0, decoder, trials, seed=1)
               for L in sizes for p in ps]
    rows = [r for _, _, r in sweep(configs)]
    curves = curves_from_rows(rows)
    print(f"\n{decoder}: p_logical per size")
    print("   p    " + "".join(f"   L={L:<5d}" for L in sizes))
    for i, p in enumerate(ps):
        print(f"{p:.3f}  " + "".join(f"  {curves[L][i][1]:.4f} " for L in sizes))
    est = estimate_threshold(curves)
    print(f"crossing estimate p_c = {est.p_c:.4f} (spread {est.low:.4f}..{est.high:.4f})")


def main():
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
    scan("mwpm", (8, 12), np.round(np.linspace(0.08, 0.12, 5), 3), trials)
    scan("rg", (8, 16), np.round(np.linspace(0.06, 0.10, 5), 3), trials)


if __name__ == "__main__":
    main()
