"""Shor's nine-qubit code from two repetition codes, then a look at decoding.

Builds the code by concatenation, checks its parameters, prints the
syndrome of a few single-qubit errors and compares the minimum-weight and
maximum-likelihood decoders on a degenerate error.
"""

import numpy as np

from qeclab.codes import concatenate, distance
from qeclab.codes.catalogue import repetition, repetition_x
from qeclab.decoders import coset_log_probabilities, decode
from qeclab.noise import ErrorModel, logical_class_bits, syndrome
from qeclab.pauli import parse_pauli


def main():
    code = concatenate(repetition_x(3), repetition(3), name="shor9")
    print(f"[[{code.n},{code.k},{distance(code)}]]")
    for s in code.stabilizers:
        print("  S:", s)

    for err in ("XIIIIIIII", "IIIIZIIII", "IIIIIIIIY"):
        syn = syndrome(code, parse_pauli(err))
        corr = decode("minweight", code, syn)
        resid = logical_class_bits(code, corr.x ^ parse_pauli(err).x_bits, corr.z ^ parse_pauli(err).z_bits)
        print(f"{err}: syndrome {''.join(map(str, syn))} -> correction {corr.pauli}, residual class {resid}")

    # Z1 and Z2 have the same syndrome and differ by a stabilizer: the code is degenerate.
    model = ErrorModel("depolarizing", 0.05)
    syn = syndrome(code, parse_pauli("ZIIIIIIII"))
    logp = coset_log_probabilities(code, syn, model)
    prob = np.exp(logp - logp.max())
    # Cosets are indexed by their logical class bits relative to a fixed error with this syndrome.
    print("posterior over the four logical cosets:", np.round(prob / prob.sum(), 4))
    print("ML choice:", decode("ml", code, syn, model).pauli, " minimum weight:", decode("minweight", code, syn).pauli)


if __name__ == "__main__":
    main()
