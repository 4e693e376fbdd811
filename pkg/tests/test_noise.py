import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qeclab.codes import build_named_code
from qeclab.noise import (
    DefectRecord,
    ErrorModel,
    NotInCentralizer,
    logical_class,
    logical_class_bits,
    reference_class_bits,
    reference_error,
    sample_error_bits,
    sample_history,
    syndrome,
    syndrome_bits,
)
from qeclab.pauli import PauliOp, paulis_to_matrix

CODES = [
    ("surface", {"L": 3}),
    ("toric", {"L": 3}),
    ("steane7", {}),
    ("shor9", {}),
    ("five_one_three", {}),
    ("c6c4", {}),
    ("bacon_shor", {"n": 3}),
    ("subsystem_surface", {"L": 2}),
]
CASES = 10_000


def sym_product(x, z, ops):
    """Oracle: symplectic products of rows ``(x, z)`` with ``ops`` using plain integer arithmetic."""
    m = paulis_to_matrix(list(ops), x.shape[1]).astype(np.int64)
    n = x.shape[1]
    return ((x.astype(np.int64) @ m[:, n:].T + z.astype(np.int64) @ m[:, :n].T) % 2).astype(np.uint8)


def random_group_elements(gens, n, count, rng):
    m = paulis_to_matrix(list(gens), n).astype(np.int64)
    coeff = rng.integers(0, 2, (count, len(m)))
    v = (coeff @ m) % 2
    return v[:, :n].astype(np.uint8), v[:, n:].astype(np.uint8)


@pytest.mark.parametrize("family,params", CODES)
def test_syndrome_matches_oracle_and_is_linear(family, params, rng):
    code = build_named_code(family, **params)
    n = code.n
    x1, z1, x2, z2 = (rng.integers(0, 2, (CASES, n), dtype=np.uint8) for _ in range(4))
    s1 = syndrome_bits(code, x1, z1)
    s2 = syndrome_bits(code, x2, z2)
    np.testing.assert_array_equal(s1, sym_product(x1, z1, code.checks))
    np.testing.assert_array_equal(syndrome_bits(code, x1 ^ x2, z1 ^ z2), s1 ^ s2)


@pytest.mark.parametrize("family,params", CODES)
def test_coset_invariance(family, params, rng):
    code = build_named_code(family, **params)
    n = code.n
    # Random centralizer elements: logical products times random stabilizer/gauge elements.
    lx, lz = random_group_elements([op for pair in code.logicals for op in pair], n, CASES, rng)
    sx, sz = random_group_elements(list(code.stabilizers) + list(code.gauge), n, CASES, rng)
    x, z = lx ^ sx, lz ^ sz
    assert not syndrome_bits(code, x, z).any()
    cls = logical_class_bits(code, x, z)
    np.testing.assert_array_equal(cls, logical_class_bits(code, lx, lz))
    # Canonical pairs: X-bar coefficient is <E, Z-bar>, Z-bar coefficient is <E, X-bar>.
    zbars = [p[1] for p in code.logicals]
    xbars = [p[0] for p in code.logicals]
    oracle = np.hstack([sym_product(x, z, zbars), sym_product(x, z, xbars)])
    np.testing.assert_array_equal(cls, oracle)
    # Multiplying any error by stabilizers or gauge operators keeps its syndrome.
    ex, ez = rng.integers(0, 2, (CASES, n), dtype=np.uint8), rng.integers(0, 2, (CASES, n), dtype=np.uint8)
    np.testing.assert_array_equal(syndrome_bits(code, ex, ez), syndrome_bits(code, ex ^ sx, ez ^ sz))


@pytest.mark.parametrize("family,params", CODES)
def test_reference_error(family, params, rng):
    code = build_named_code(family, **params)
    gens = len(code.stabilizers)
    for _ in range(50):
        ex, ez = rng.integers(0, 2, code.n, dtype=np.uint8), rng.integers(0, 2, code.n, dtype=np.uint8)
        syn = syndrome_bits(code, ex, ez)
        ref = reference_error(code, syn)
        np.testing.assert_array_equal(syndrome(code, ref), syn)
        np.testing.assert_array_equal(reference_class_bits(code, syn), logical_class_bits(code, ref.x_bits, ref.z_bits))
        assert ref.weight <= code.n
    assert not reference_error(code, np.zeros(gens, dtype=np.uint8)).weight


def test_logical_class_labels():
    code = build_named_code("surface", L=3)
    xbar, zbar = code.logicals[0]
    np.testing.assert_array_equal(logical_class(code, xbar), [1, 0])
    np.testing.assert_array_equal(logical_class(code, zbar), [0, 1])
    np.testing.assert_array_equal(logical_class(code, xbar * zbar), [1, 1])
    with pytest.raises(NotInCentralizer):
        logical_class(code, PauliOp.single(code.n, 0, "X"))


@pytest.mark.parametrize("kind,expected", [
    ("depolarizing", [0.7, 0.1, 0.1, 0.1]),
    ("independent_xz", [0.49, 0.21, 0.21, 0.09]),
    ("bitflip", [0.7, 0.3, 0.0, 0.0]),
])
def test_letter_frequencies(kind, expected, rng):
    model = ErrorModel(kind, 0.3)
    np.testing.assert_allclose(model.letter_probs, expected)
    x, z = sample_error_bits(model, 200_000, rng)
    freq = np.bincount(x + 2 * z, minlength=4) / len(x)
    np.testing.assert_allclose(freq, expected, atol=0.005)


def test_model_validation():
    with pytest.raises(ValueError):
        ErrorModel("depolarizing", 1.5)
    with pytest.raises(ValueError):
        ErrorModel("amplitude", 0.1)
    assert ErrorModel("x", 0.1).kind == "bitflip"


@pytest.mark.parametrize("rounds", [1, 3, 6])
def test_history_final_syndrome_is_true_syndrome(rounds, rng):
    code = build_named_code("toric", L=4)
    model = ErrorModel("depolarizing", 0.1, 0.1)
    for _ in range(20):
        h = sample_history(code, model, rounds, rng)
        assert not h.flips[-1].any()
        np.testing.assert_array_equal(h.record.final_syndrome(), syndrome(code, h.final_error))
        # Events telescope back to the measured outcomes round by round.
        np.testing.assert_array_equal(np.cumsum(h.record.event_matrix(), axis=0) % 2, h.measured)


def test_history_noise_free_measurement_has_no_time_events(rng):
    code = build_named_code("surface", L=3)
    h = sample_history(code, ErrorModel("bitflip", 0.0, 0.0), 4, rng)
    assert len(h.record) == 0


@given(arrays(np.uint8, st.tuples(st.integers(1, 5), st.integers(1, 8)), elements=st.integers(0, 1)))
def test_record_text_round_trip(ev):
    rec = DefectRecord.from_matrix(ev)
    back = DefectRecord.from_text(rec.to_text())
    assert back == rec
    np.testing.assert_array_equal(back.event_matrix(), ev)


@pytest.mark.parametrize("text", ["", "3\n", "2 4\n0 9\n", "2 4\n5 0\n", "2 4\n0 1\n0 1\n", "2 4\n0\n"])
def test_record_rejects_bad_text(text):
    with pytest.raises(ValueError):
        DefectRecord.from_text(text)
