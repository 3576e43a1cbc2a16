import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtmsgkp.codes import CodeSpec, build_code, fixture, initial_generator
from dtmsgkp.errors import DegenerateLatticeError, DomainError, NotGKPLatticeError
from dtmsgkp.lattice import (
    ELL, LatticeSolver, babai_nearest, centered_mod, closest_point, code_distance,
    default_cutoff, dual, gram, is_lll_reduced, is_unimodular, lll_reduce,
    logical_representatives, pauli_distance, syndrome, verify_lattice_membership,
)
from dtmsgkp.symplectic import dtms_encoder, omega
from oracles import (exact_is_lll_reduced, exact_lll, exact_profile, int_columns,
                     naive_closest, naive_grid_distance)

SQ = np.sqrt(2) * np.eye(2)


# ---------------------------------------------------------------------------
# Gram and dual


def test_gram_examples():
    assert np.array_equal(gram(SQ), 2 * omega(1))
    assert np.array_equal(gram(np.eye(2)), omega(1))
    S = dtms_encoder(3, 1.7, 0.3)
    M_in = initial_generator([2], 3)
    assert np.array_equal(gram(S @ M_in), gram(M_in))


def test_gram_rejects_non_integral():
    with pytest.raises(NotGKPLatticeError):
        gram(np.diag([1.3, 1.0]))


def test_dual_examples():
    for d in (2, 3, 5):
        M = np.sqrt(d) * np.eye(2)
        assert np.allclose(dual(M), np.eye(2) / np.sqrt(d))
    assert np.allclose(dual(np.eye(2)), np.eye(2))
    S = dtms_encoder(3, 1.4, 0)
    M_in = initial_generator([2], 3)
    assert np.allclose(dual(S @ M_in), S @ np.linalg.inv(M_in))


def test_dual_relation_and_degenerate():
    M = fixture("code422").lattice
    Mbar = dual(M)
    assert np.allclose(M.T @ omega(4) @ Mbar, omega(4), atol=1e-8)
    with pytest.raises(DegenerateLatticeError):
        dual(np.diag([1.0, 0.0]))


# ---------------------------------------------------------------------------
# LLL


def test_lll_identity_unchanged():
    B, U = lll_reduce(np.eye(4))
    assert np.array_equal(B, np.eye(4))
    assert np.array_equal(U, np.eye(4, dtype=int))


def test_lll_skewed_basis():
    M = np.array([[1.0, 100.0], [0.0, 1.0]])
    B, U = lll_reduce(M)
    assert np.linalg.norm(B, axis=0).max() <= 2
    assert is_unimodular(U)
    assert np.allclose(M @ U, B)
    assert np.isclose(abs(np.linalg.det(B)), abs(np.linalg.det(M)))
    assert verify_lattice_membership(B, M)


def test_lll_code513_matches_exact_reference():
    M = fixture("code513").lattice
    B, U = lll_reduce(M, 0.75)
    assert np.linalg.norm(B, axis=0).max() <= np.linalg.norm(M, axis=0).max() + 1e-12
    ref = exact_lll(int_columns(M, np.sqrt(2)))
    got = int_columns(B, np.sqrt(2))
    assert exact_is_lll_reduced(got)
    assert [float(x) for x in exact_profile(got)] == pytest.approx(
        [float(x) for x in exact_profile(ref)], rel=1e-12)


def test_lll_errors():
    with pytest.raises(DegenerateLatticeError):
        lll_reduce(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(DomainError):
        lll_reduce(np.eye(2), delta=0.2)


def test_is_unimodular_examples():
    assert is_unimodular(np.eye(8, dtype=int))
    assert is_unimodular(fixture("tesseract").unimodular)
    assert not is_unimodular(np.diag([2, 1, 1]))
    assert not is_unimodular(np.eye(2) * 0.5)


# ---------------------------------------------------------------------------
# Babai and closest point


def test_babai_examples():
    assert np.allclose(babai_nearest(np.eye(2), [3.0, -2.0]), [3, -2])
    assert np.allclose(babai_nearest(np.eye(2), [0.6, 0.2]), [1, 0])
    p = babai_nearest(SQ, [1 / np.sqrt(2), 0.0])
    assert np.isclose(np.linalg.norm(p - [1 / np.sqrt(2), 0]), 1 / np.sqrt(2))


def test_closest_point_tie_break_lexicographic():
    cp = closest_point(np.eye(2), [0.5, 0.5], 1)
    assert np.isclose(cp.distance, 1 / np.sqrt(2))
    assert tuple(cp.coefficients) == (0, 0)


def test_closest_point_matches_grid_oracle_on_identity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        v = rng.random(4)
        cp = closest_point(np.eye(4), v, 3)
        assert np.isclose(cp.distance, naive_grid_distance(np.eye(4), v, 3), atol=1e-12)


def test_pauli_distance_square_qubit():
    assert np.isclose(pauli_distance(SQ, [1 / np.sqrt(2), 0]), np.sqrt(np.pi))
    assert np.isclose(pauli_distance(SQ, [0, 1 / np.sqrt(2)]), np.sqrt(np.pi))
    assert np.isclose(pauli_distance(SQ, [1 / np.sqrt(2), 1 / np.sqrt(2)]), np.sqrt(2 * np.pi))
    assert pauli_distance(np.eye(2), [1.0, 0.0]) == pytest.approx(0.0, abs=1e-12)


def test_pauli_distance_tesseract():
    fx = fixture("tesseract")
    assert np.isclose(pauli_distance(fx.lattice, fx.logicals[:, 0]), 2 ** 0.25 * np.sqrt(np.pi))


# ---------------------------------------------------------------------------
# code distance


def test_code_distance_square_and_fixtures():
    rep = code_distance(fixture("square").lattice, fixture("square").logicals, [2])
    assert rep.code_distance == pytest.approx(1.772454, abs=1e-6)
    assert rep.verified_at_cutoff_plus_one
    fx = fixture("code422")
    assert code_distance(fx.lattice, fx.logicals, fx.local_dims).code_distance == pytest.approx(
        2.5066, abs=1e-4)
    fx = fixture("code513")
    rep = code_distance(fx.lattice, fx.logicals, fx.local_dims, cutoff=3)
    assert rep.code_distance == pytest.approx(3.0700, abs=1e-3)


def test_code_distance_report_fields():
    rep = code_distance(CodeSpec.dtms(2, 2, 1.3))
    assert rep.code_distance == min(rep.pauli_distances.values())
    assert set(rep.pauli_distances) == {"X", "Y", "Z"}
    assert rep.cutoff == default_cutoff(2)
    d = rep.to_dict()
    assert d["worst_logical"] in {"X", "Y", "Z"}
    assert np.isclose(np.linalg.norm(d["witness"]), rep.code_distance)


def test_code_distance_needs_logicals_for_bare_matrix():
    with pytest.raises(DomainError):
        code_distance(SQ)


def test_logical_representatives_labels():
    reps = logical_representatives(np.eye(2), [2])
    assert [r[0] for r in reps] == ["Z", "X", "Y"]
    reps = logical_representatives(np.eye(2), [3])
    assert len(reps) == 8
    reps = logical_representatives(np.eye(4), [2, 2])
    assert len(reps) == 15 and "X1Z2" in [r[0] for r in reps]


def test_qudit_distance_square():
    for d in (3, 5):
        fx = fixture("square-qudit", d)
        rep = code_distance(fx.lattice, fx.logicals, [d])
        assert rep.code_distance == pytest.approx(ELL / np.sqrt(d), abs=1e-9)


# ---------------------------------------------------------------------------
# syndromes


def test_syndrome_examples():
    assert np.allclose(syndrome(SQ, np.zeros(2)), 0)
    M = fixture("tesseract").lattice
    assert np.allclose(syndrome(M, ELL * M @ np.array([1, -2, 0, 3])), 0, atol=1e-9)
    assert np.allclose(syndrome(np.eye(2), [0.1, 0.0]), [0.0, -0.1])


def test_centered_mod_range():
    x = np.linspace(-20, 20, 1001)
    r = centered_mod(x, ELL)
    assert np.all(r >= -ELL / 2) and np.all(r < ELL / 2)
    k = (x - r) / ELL
    assert np.allclose(k, np.rint(k), atol=1e-9)


# ---------------------------------------------------------------------------
# properties


def _random_unimodular(rng, n, steps=12):
    U = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(n, 2, replace=False)
        U[:, i] += int(rng.integers(-3, 4)) * U[:, j]
    return U


def _random_code_basis(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 4))
    G = float(rng.uniform(1, 3))
    spec = CodeSpec.dtms(N, int(rng.integers(2, 4)), G if N > 1 else 1.0, float(rng.uniform(0, 3)))
    M = build_code(spec).lattice
    return M @ _random_unimodular(rng, 2 * N), rng


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lll_preserves_lattice(seed):
    M, _ = _random_code_basis(seed)
    B, U = lll_reduce(M)
    assert is_unimodular(U)
    assert np.allclose(M @ U, B, atol=1e-8 * max(1, np.abs(M).max()))
    assert np.isclose(abs(np.linalg.det(B)), abs(np.linalg.det(M)), rtol=1e-8)
    assert np.allclose(B @ np.linalg.inv(U), M, atol=1e-8 * max(1, np.abs(M).max()))
    assert is_lll_reduced(B)


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closest_point_equals_grid_oracle_two_modes(seed):
    rng = np.random.default_rng(seed)
    G = float(rng.uniform(1, 2.5))
    M = build_code(CodeSpec.dtms(2, 2, G, float(rng.uniform(0, 1.6)))).lattice
    v = rng.normal(scale=2.0, size=4)
    cp = closest_point(M, v, 3)
    ref, _ = naive_closest(M, v, 3)
    assert cp.distance == pytest.approx(ref, abs=1e-9)


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_syndrome_invariant_under_stabilizer_shifts(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 4))
    M = build_code(CodeSpec.dtms(N, 2, float(rng.uniform(1, 3)) if N > 1 else 1.0)).lattice
    e = rng.normal(scale=0.5, size=2 * N)
    a = rng.integers(-5, 6, size=2 * N)
    s0 = syndrome(M, e)
    s1 = syndrome(M, e + ELL * M @ a)
    diff = centered_mod(s1 - s0, ELL)
    assert np.allclose(diff, 0, atol=1e-8)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closest_point_monotone_and_below_babai(seed):
    rng = np.random.default_rng(seed)
    M = build_code(CodeSpec.dtms(3, 2, float(rng.uniform(1, 2.5)))).lattice
    v = rng.normal(scale=2.0, size=6)
    solver = LatticeSolver(M)
    d_babai = np.linalg.norm(babai_nearest(M, v) - v)
    ds = [solver.closest(v, l).distance for l in (0, 1, 2, 3)]
    assert ds[0] == pytest.approx(d_babai, abs=1e-12)
    assert all(b <= a + 1e-12 for a, b in zip(ds, ds[1:]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.floats(1, 3), st.floats(0, 1.5))
def test_distance_bounds_and_phase_period(N, G, phi):
    spec = CodeSpec.dtms(N, 2, G, phi)
    code = build_code(spec)
    rep = code_distance(code, verify=False)
    assert rep.code_distance <= np.sqrt(2 * G - 1) * np.sqrt(np.pi) + 1e-6
    for label, vec in logical_representatives(code.logicals, [2]):
        assert rep.pauli_distances[label] <= ELL * np.linalg.norm(vec) + 1e-9
    shifted = code_distance(spec.with_gain(G, phi + np.pi / 2), verify=False)
    assert shifted.code_distance == pytest.approx(rep.code_distance, abs=1e-9)
