import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from weylseq import (
    DimensionError,
    HermiticityError,
    Tolerance,
    approx_eq,
    hermitian_eig,
    is_psd,
    kron,
    matrix_from_json,
    matrix_to_json,
    partial_trace_first,
    partial_trace_second,
    trace_norm,
)
from weylseq.rand import complex_matrix, hermitian, unitary

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_kron_pauli_expansion():
    got = kron(SX, SZ)
    want = np.array(
        [
            [0, 0, 1, 0],
            [0, 0, 0, -1],
            [1, 0, 0, 0],
            [0, -1, 0, 0],
        ],
        dtype=complex,
    )
    assert np.abs(got - want).max() == 0


def test_kron_index_convention(rng):
    a = complex_matrix(rng, 2)
    b = complex_matrix(rng, 3)
    k = kron(a, b)
    for i1 in range(2):
        for i2 in range(3):
            for j1 in range(2):
                for j2 in range(3):
                    got = k[i1 * 3 + i2, j1 * 3 + j2]
                    assert abs(got - a[i1, j1] * b[i2, j2]) < 1e-14


def test_partial_trace_bell_state():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    rho = np.outer(v, v.conj())
    red = partial_trace_second(rho, 2, 2)
    assert_allclose(red, np.eye(2) / 2, atol=1e-15)
    red1 = partial_trace_first(rho, 2, 2)
    assert_allclose(red1, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_product(rng):
    a = complex_matrix(rng, 3)
    b = complex_matrix(rng, 2)
    t = kron(a, b)
    assert_allclose(partial_trace_second(t, 3, 2), a * np.trace(b), atol=1e-12)
    assert_allclose(partial_trace_first(t, 3, 2), b * np.trace(a), atol=1e-12)


def test_partial_trace_shape_check():
    with pytest.raises(DimensionError):
        partial_trace_second(np.eye(5), 2, 2)


def test_is_psd():
    assert is_psd(np.eye(3))
    assert is_psd(np.zeros((2, 2)))
    assert not is_psd(np.diag([1.0, -0.1]))
    sx_sy_sz = SX + np.array([[0, -1j], [1j, 0]]) + SZ
    s = (np.eye(2) + sx_sy_sz / np.sqrt(3)) / 2
    assert is_psd(s)


def test_is_psd_rejects_non_hermitian():
    with pytest.raises(HermiticityError):
        is_psd(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_trace_norm_values():
    assert trace_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2.0)
    assert trace_norm(np.diag([1.0, -3.0])) == pytest.approx(4.0)
    assert trace_norm(np.zeros((3, 3))) == 0.0


def test_trace_norm_unitary_invariance(rng):
    for _ in range(20):
        t = complex_matrix(rng, 4)
        u = unitary(rng, 4)
        v = unitary(rng, 4)
        assert abs(trace_norm(u @ t @ v) - trace_norm(t)) < 1e-10


def test_hermitian_eig_reconstructs(rng):
    for n in (2, 3, 5):
        h = hermitian(rng, n)
        w, q = hermitian_eig(h)
        back = (q * w) @ q.conj().T
        assert np.linalg.norm(back - h) < 1e-10 * max(np.linalg.norm(h), 1.0)
        assert np.abs(q @ q.conj().T - np.eye(n)).max() < 1e-12


def test_approx_eq():
    a = np.eye(3)
    assert approx_eq(a, a + 1e-12)
    assert not approx_eq(a, a + 1e-6)
    loose = Tolerance(abs_eps=1e-3, rel_eps=0.0)
    assert approx_eq(a, a + 1e-6, loose)
    with pytest.raises(DimensionError):
        approx_eq(np.eye(2), np.eye(3))


def test_matrix_json_roundtrip_bit_exact(rng):
    t = complex_matrix(rng, 3, 4)
    blob = json.dumps(matrix_to_json(t))
    back = matrix_from_json(json.loads(blob))
    assert back.shape == (3, 4)
    assert np.array_equal(back, t)


def test_matrix_json_rejects_bad_data():
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[0.0, 0.0]]})
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 1, "cols": 1, "data": [[float("nan"), 0.0]]})
    with pytest.raises(ValueError):
        matrix_from_json({"cols": 1, "data": [[0.0, 0.0]]})
