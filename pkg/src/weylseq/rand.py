"""Seeded random objects for tests and the verification suites."""

from __future__ import annotations

import numpy as np

from .group import Group
from .instruments import CovariantMeasure


def complex_matrix(rng: np.random.Generator, n: int, m: int | None = None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = complex_matrix(rng, n)
    return (a + a.conj().T) / 2


def unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(complex_matrix(rng, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def state(rng: np.random.Generator, n: int) -> np.ndarray:
    a = complex_matrix(rng, n)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def pure_state(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def covariant_measure(rng: np.random.Generator, group: Group) -> CovariantMeasure:
    n = group.order
    stack = np.empty((n, n, n), dtype=complex)
    for k in range(n):
        a = complex_matrix(rng, n)
        stack[k] = a @ a.conj().T
    stack /= np.trace(stack.sum(axis=0)).real
    return CovariantMeasure(group, stack)


def bloch_state(rng: np.random.Generator) -> np.ndarray:
    """Qubit state with Bloch vector drawn uniformly from the unit ball."""
    while True:
        r = rng.uniform(-1.0, 1.0, size=3)
        if r @ r <= 1.0:
            break
    from .spin import pauli_vector

    return (np.eye(2) + pauli_vector(r)) / 2
