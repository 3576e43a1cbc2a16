import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtmsgkp.codes import (
    FIXTURE_NAMES, TESSERACT_GAIN, CodeSpec, Family, build_code, catalog, distance_upper_bound,
    fixture, initial_generator, tesseract_decomposition, verify_fixture_relation,
)
from dtmsgkp.errors import DomainError, UnsupportedError, VerificationError
from dtmsgkp.lattice import ELL, code_distance, gram, is_unimodular
from dtmsgkp.symplectic import I2, Z2, is_symplectic, omega


def test_initial_generator_examples():
    assert np.allclose(initial_generator([2], 2), np.diag([np.sqrt(2)] * 2 + [1, 1]))
    assert np.array_equal(initial_generator([1], 1), np.eye(2))
    assert np.allclose(initial_generator([2, 2], 4), np.diag([np.sqrt(2)] * 4 + [1] * 4))
    with pytest.raises(DomainError):
        initial_generator([0], 2)


def test_build_code_identity_encoder():
    code = build_code(CodeSpec.dtms(2, 2, 1.0))
    assert np.allclose(code.lattice, np.diag([np.sqrt(2), np.sqrt(2), 1, 1]))
    S, M, Mbar = code
    assert np.allclose(S, np.eye(4))


def test_build_code_tesseract_gain_distance():
    rep = code_distance(CodeSpec.dtms(2, 2, (np.sqrt(2) + 1) / 2))
    assert rep.code_distance == pytest.approx(2 ** 0.25 * np.sqrt(np.pi), abs=1e-9)


def _printed_dual_two_qubit_3(G):
    a, b = np.sqrt(G), np.sqrt(G - 1)
    O = np.zeros((2, 2))
    return np.block([[I2 / 2, -I2 / 2, O],
                     [a / 2 * I2, a / 2 * I2, b * Z2],
                     [b / 2 * Z2, b / 2 * Z2, a * I2]])


def _printed_dual_two_qubit_4(G):
    a, b = np.sqrt(G), np.sqrt(G - 1)
    O = np.zeros((2, 2))
    r = 1 / np.sqrt(2)
    return np.block([[I2 / 2, -I2 / 2, O, O],
                     [a / 2 * I2, a / 2 * I2, b * r * Z2, -b * r * Z2],
                     [b / 2 * Z2, b / 2 * Z2, a * r * I2, -a * r * I2],
                     [O, O, r * I2, r * I2]])


@pytest.mark.parametrize("G", [1.0, 4 / 3, 2.0, 3.1])
def test_two_qubit_dual_n3_matches_printed_matrix(G):
    assert np.allclose(build_code(CodeSpec.dtms2(3, G)).dual, _printed_dual_two_qubit_3(G), atol=1e-12)


@pytest.mark.parametrize("G", [1.0, 2.0, 2.7])
def test_two_qubit_dual_n4_matches_printed_matrix_up_to_ancilla_sign(G):
    got = build_code(CodeSpec.dtms2(4, G)).dual
    ref = _printed_dual_two_qubit_4(G)
    # data columns agree exactly; ancilla port 1 of the array carries the
    # opposite staircase sign, which is the same lattice
    assert np.allclose(got[:, :6], ref[:, :6], atol=1e-12)
    assert np.allclose(got[:, 6:], -ref[:, 6:], atol=1e-12)
    U = np.linalg.solve(got, ref)
    assert is_unimodular(np.rint(U)) and np.allclose(U, np.rint(U), atol=1e-12)


def test_distance_upper_bound_examples():
    assert distance_upper_bound(CodeSpec.dtms(2, 2, 1.0)) == pytest.approx(np.sqrt(np.pi))
    assert distance_upper_bound(CodeSpec.dtms2(3, 2.0)) == pytest.approx(np.sqrt(2 * np.pi))
    assert distance_upper_bound(CodeSpec.dtms(3, 2, 1.5)) == pytest.approx(ELL)
    with pytest.raises(UnsupportedError):
        distance_upper_bound(CodeSpec.fixture("tesseract"))


def test_fixture_distances():
    expect = {
        "square": np.sqrt(np.pi), "hex": ELL / 3 ** 0.25,
        "tesseract": 2 ** 0.25 * np.sqrt(np.pi), "code422": np.sqrt(2 * np.pi),
        "code513": np.sqrt(3 * np.pi),
    }
    for name, D in expect.items():
        fx = fixture(name)
        rep = code_distance(fx.lattice, fx.logicals, fx.local_dims,
                            cutoff=3 if name == "code513" else None)
        assert rep.code_distance == pytest.approx(D, abs=1e-6), name
        assert fx.known_distance == pytest.approx(D, abs=1e-12)


def test_fixture_aliases_and_unknown():
    assert fixture("HexQubit").name == "hex"
    assert fixture("Code513").name == "code513"
    assert fixture("SquareQudit", 5).local_dims == (5,)
    with pytest.raises(UnsupportedError):
        fixture("steane")


@pytest.mark.parametrize("name", ["tesseract", "code422", "code513"])
def test_fixture_relations(name):
    assert verify_fixture_relation(name)
    fx = fixture(name)
    assert is_symplectic(fx.symplectic, 1e-9)
    assert is_unimodular(fx.unimodular)


def test_fixture_relation_unavailable_for_plain_lattices():
    with pytest.raises(UnsupportedError):
        verify_fixture_relation("hex")


def test_fixture_relation_reports_deviation(monkeypatch):
    import dtmsgkp.codes as codes
    real = codes.fixture

    def broken(name, d=3):
        fx = real(name, d)
        fx.lattice = fx.lattice.copy()
        fx.lattice[0, 0] += 1e-3
        return fx

    monkeypatch.setattr(codes, "fixture", broken)
    with pytest.raises(VerificationError) as info:
        codes.verify_fixture_relation("code422")
    assert info.value.deviation > 1e-4


def test_tesseract_decomposition():
    B, SG = tesseract_decomposition()
    assert np.allclose(B @ SG, fixture("tesseract").symplectic, atol=1e-9)
    assert np.isclose(TESSERACT_GAIN, (np.sqrt(2) + 1) / 2)


def test_hex_fixture_determinant():
    assert np.isclose(abs(np.linalg.det(fixture("hex").lattice)), 2)


def test_catalog_entries():
    rows = catalog()
    assert len(rows) >= 6
    assert {r["name"] for r in rows} >= set(FIXTURE_NAMES)


def test_codespec_validation():
    with pytest.raises(DomainError):
        CodeSpec.dtms(2, 2, 0.5)
    with pytest.raises(DomainError):
        CodeSpec.dtms(1, 2, 1.5)
    with pytest.raises(DomainError):
        CodeSpec(Family.DTMS2, 2, (2, 2), 1.2)
    with pytest.raises(DomainError):
        CodeSpec(Family.DTMS, 3, (2, 2), 1.2)


def test_codespec_roundtrip():
    spec = CodeSpec.dtms2(4, 1.5, 0.0)
    assert CodeSpec.from_dict(spec.to_dict()) == spec
    assert spec.n_data == 2 and spec.n_ancillae == 2 and spec.is_css


def _q_and_p_rows(n):
    return np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(2, 5), st.floats(1, 4), st.floats(0, 3))
def test_catalog_invariants(N, d, G, phi):
    spec = CodeSpec.dtms(N, d, G if N > 1 else 1.0, phi)
    code = build_code(spec)
    assert is_symplectic(code.encoder, 1e-10 * G)
    assert np.isclose(abs(np.linalg.det(code.lattice)), d)
    W = omega(N)
    assert np.allclose(code.lattice.T @ W @ code.dual, W, atol=1e-8 * G)
    gram(code.lattice)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.floats(1, 4))
def test_css_block_sparsity(N, G):
    M = build_code(CodeSpec.dtms(N, 2, G, 0.0)).lattice
    q, p = _q_and_p_rows(N)
    assert np.all(M[np.ix_(q, p)] == 0) and np.all(M[np.ix_(p, q)] == 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 5), st.floats(1, 3))
def test_two_qubit_distance_below_bound(N, G):
    spec = CodeSpec.dtms2(N, G)
    assert code_distance(spec, verify=False).code_distance <= distance_upper_bound(spec) + 1e-6
