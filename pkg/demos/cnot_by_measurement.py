"""CNOT from joint Pauli measurements, checked on a tableau.

The control starts in |+> and the target in |->, so an ideal CNOT kicks the
phase back: both end up in |->.  Every one of the eight outcome patterns of
the three measurements is forced in turn and the final signs of X_c and X_t
are printed for two correction rules.
"""

import itertools

from qeclab.pauli import parse_pauli
from qeclab.tableau import Tableau, cnot_by_measurement


def run(rule: str, forced) -> tuple[int, int]:
    t = Tableau(3)  # qubits: control 0, ancilla 1, target 2
    t.h(0)
    t.apply_pauli(parse_pauli("IIX")).h(2)
    cnot_by_measurement(t, control=0, ancilla=1, target=2, forced=forced, rule=rule)
    return t.expectation_sign(parse_pauli("XII")), t.expectation_sign(parse_pauli("IIX"))


def main():
    print("outcomes (XX, ZZ, X)   exact rule   target-only rule   (want -1 -1)")
    for forced in itertools.product([1, -1], repeat=3):
        e = run("exact", forced)
        t = run("target_only", forced)
        print(f"{str(forced):22s} {e[0]:+d} {e[1]:+d}        {t[0]:+d} {t[1]:+d}")


if __name__ == "__main__":
    main()
