"""Shared generators for randomized property tests (all seeded)."""
import numpy as np
import pytest

from qecss import Channel, ObjectiveOperator, random_channel


def random_hermitian(rng, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_psd(rng, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a @ a.conj().T


def random_objective(rng, dim_in: int, dim_out: int) -> ObjectiveOperator:
    n = dim_in * dim_out
    return ObjectiveOperator(dim_in, dim_out, random_psd(rng, n) / n)


def random_state(rng, n: int) -> np.ndarray:
    """Random density matrix."""
    m = random_psd(rng, n)
    return m / np.trace(m)


def random_tp_channel(rng, dim_in: int, dim_out: int, kraus_count: int | None = None) -> Channel:
    """Random TP channel with a feasible Kraus count."""
    if kraus_count is None:
        kraus_count = dim_in * dim_out
    return random_channel(dim_in, dim_out, kraus_count, rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20260822)
