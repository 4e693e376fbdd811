"""Logical error rate of noise-free Bacon-Shor codes against the lattice size.

With equal X and Z rates p, only the parity of each column (row) of errors
matters, so decoding is a 1D majority problem on n columns.  Too small an n
has little redundancy; too large an n collects too many errors per column.
The sweep shows the minimum near n = ln 2 / (4p).
"""

import math

from qeclab.montecarlo import ExperimentConfig, run_trials


def main(p=0.02, trials=20_000):
    best = round(math.log(2) / (4 * p))
    print(f"p = {p}, ln2/(4p) = {math.log(2) / (4 * p):.1f}, bound exp(-0.06/p) = {math.exp(-0.06 / p):.2e}")
    for n in sorted({3, 5, best - 4, best, best + 4, 2 * best + 1}):
        s = run_trials(ExperimentConfig("bacon_shor", {"n": n}, "independent_xz", p, 0.0, "bs1d", trials, seed=n))
        lo, hi = s.interval
        print(f"n={n:3d}  p_logical={s.p_logical:.2e}  [{lo:.2e}, {hi:.2e}]")


if __name__ == "__main__":
    main()
