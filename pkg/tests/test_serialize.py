import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtmsgkp.codes import CodeSpec, build_code, fixture
from dtmsgkp.errors import DimensionError
from dtmsgkp.lattice import ELL, dual, gram, pauli_distance
from dtmsgkp.serialize import (
    dumps, lattice_from_json, lattice_to_json, matrix_from_json, matrix_to_json, spec_from_json,
    spec_to_json,
)
from dtmsgkp.symplectic import beamsplitter, direct_sum, tms


def test_matrix_roundtrip_is_row_major():
    S = np.arange(16, dtype=float).reshape(4, 4)
    data = matrix_to_json(S)
    assert data["n_modes"] == 2 and data["entries"][:4] == [0.0, 1.0, 2.0, 3.0]
    assert np.array_equal(matrix_from_json(json.loads(dumps(data))), S)


def test_matrix_size_mismatch():
    with pytest.raises(DimensionError):
        matrix_from_json({"n_modes": 2, "entries": [1.0] * 9})


@settings(max_examples=50, deadline=None)
@given(st.floats(1, 5), st.floats(-3, 3), st.floats(-3, 3))
def test_symplectic_roundtrip_exact(G, theta, phi):
    S = beamsplitter(theta, phi, 1, 2, 3) @ direct_sum(tms(G), np.eye(2))
    assert np.array_equal(matrix_from_json(dumps(matrix_to_json(S))), S)


def test_lattice_roundtrip_and_scale():
    M = fixture("tesseract").lattice
    data = lattice_to_json(M)
    assert data["scale"] == ELL
    assert np.array_equal(lattice_from_json(dumps(data)), M)
    # a generator stored in physical units (scale 1) rescales back to units of ELL
    phys = {"n_modes": 2, "generator": (M * ELL).ravel().tolist(), "scale": 1.0}
    assert np.allclose(lattice_from_json(phys), M, atol=1e-14)


def test_lattice_roundtrip_keeps_distance():
    M = build_code(CodeSpec.dtms(3, 2, 1.4)).lattice
    back = lattice_from_json(json.loads(dumps(lattice_to_json(M))))
    assert np.array_equal(gram(back), gram(M))
    v = dual(M)[:, 0]
    assert pauli_distance(back, v, 2) == pauli_distance(M, v, 2)


@pytest.mark.parametrize("spec", [
    CodeSpec.dtms(2, 2, 1.2071, 0.0), CodeSpec.dtms(5, 3, 2.5, 0.3), CodeSpec.dtms2(4, 1.5),
    CodeSpec.fixture("code513"),
])
def test_spec_roundtrip(spec):
    assert spec_from_json(dumps(spec_to_json(spec))) == spec


def test_dumps_is_deterministic_and_handles_numpy():
    obj = {"b": np.float64(0.1), "a": np.arange(3), "c": np.int64(4)}
    text = dumps(obj)
    assert text == dumps(dict(reversed(list(obj.items()))))
    assert json.loads(text) == {"a": [0, 1, 2], "b": 0.1, "c": 4}
    with pytest.raises(TypeError):
        dumps({"x": object()})
