import numpy as np
import pytest

from qecss import (
    OutOfRange,
    RandomChannelSpec,
    apply,
    bit_flip,
    channel_fidelity,
    choi_of,
    depolarizing,
    identity_channel,
    mix_with_identity,
    random_channel,
    validate_channel,
)
from qecss.linalg import hermitian_eigensystem
from qecss.rng import as_generator
from conftest import random_state


P_GRID = [0.0, 0.05, 0.1, 0.3, 0.5, 0.75, 1.0, 1.2, 4.0 / 3.0]


class TestDepolarizing:
    @pytest.mark.parametrize("p", P_GRID)
    def test_action_law(self, p, rng):
        c = depolarizing(p)
        rho = random_state(rng, 2)
        want = p * np.trace(rho) * np.eye(2) / 2 + (1 - p) * rho
        assert np.allclose(apply(c, rho), want, atol=1e-12)

    @pytest.mark.parametrize("p", P_GRID)
    def test_fidelity_law(self, p):
        assert channel_fidelity(depolarizing(p)) == pytest.approx(1 - 0.75 * p, abs=1e-12)

    @pytest.mark.parametrize("p", P_GRID)
    def test_valid_channel(self, p):
        rep = validate_channel(depolarizing(p))
        assert rep.tp_defect < 1e-10
        assert rep.cp_defect < 1e-10

    def test_boundary_choi_loses_rank(self):
        # at the CP boundary one Choi eigenvalue hits zero
        vals = hermitian_eigensystem(choi_of(depolarizing(4.0 / 3.0)).matrix).eigenvalues
        assert vals[-1] == pytest.approx(0.0, abs=1e-10)
        assert depolarizing(4.0 / 3.0).kraus_count == 3

    @pytest.mark.parametrize("p", [-0.01, 4.0 / 3.0 + 1e-9, 2.0])
    def test_out_of_range(self, p):
        with pytest.raises(OutOfRange):
            depolarizing(p)


class TestBitFlip:
    def test_zero_is_identity(self, rng):
        rho = random_state(rng, 2)
        assert np.allclose(apply(bit_flip(0.0), rho), rho)

    def test_action_law(self, rng):
        q = 0.3
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        rho = random_state(rng, 2)
        want = (1 - q) * rho + q * x @ rho @ x
        assert np.allclose(apply(bit_flip(q), rho), want, atol=1e-12)

    def test_fidelity(self):
        assert channel_fidelity(bit_flip(0.25)) == pytest.approx(0.75, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            bit_flip(1.5)


class TestRandomChannel:
    def test_trace_preserving(self, rng):
        for _ in range(8):
            d_in = int(rng.integers(2, 5))
            d_out = int(rng.integers(2, 5))
            k = int(rng.integers(1, 6))
            if k * d_out < d_in:
                k = d_in
            c = random_channel(d_in, d_out, k, rng=rng)
            assert validate_channel(c).tp_defect < 1e-10

    def test_deterministic_per_seed(self):
        a = random_channel(3, 2, 4, rng=7)
        b = random_channel(3, 2, 4, rng=7)
        assert np.array_equal(a.kraus, b.kraus)

    def test_seeds_differ(self):
        a = random_channel(3, 2, 4, rng=7)
        b = random_channel(3, 2, 4, rng=8)
        assert not np.allclose(a.kraus, b.kraus)

    def test_single_kraus_is_isometry(self, rng):
        c = random_channel(2, 4, 1, rng=rng)
        v = c.kraus[0]
        assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-10)

    def test_row_vector_case_normalized(self, rng):
        # dim_out = 1 with one operator: TP cannot hold, expect unit norm row
        c = random_channel(5, 1, 1, rng=rng)
        v = c.kraus[0]
        assert v.shape == (1, 5)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        # normalization matrix is the rank-1 support projector
        m = v.conj().T @ v
        assert np.allclose(m @ m, m, atol=1e-10)


class TestMixWithIdentity:
    def test_lambda_zero_is_identity(self, rng):
        mixed = mix_with_identity(depolarizing(1.0), 0.0)
        rho = random_state(rng, 2)
        assert np.allclose(apply(mixed, rho), rho, atol=1e-10)

    def test_lambda_one_is_original(self, rng):
        base = random_channel(3, 3, 4, rng=rng)
        mixed = mix_with_identity(base, 1.0)
        rho = random_state(rng, 3)
        assert np.allclose(apply(mixed, rho), apply(base, rho), atol=1e-10)

    def test_half_fully_depolarizing(self, rng):
        mixed = mix_with_identity(depolarizing(1.0), 0.5)
        rho = random_state(rng, 2)
        assert np.allclose(apply(mixed, rho), apply(depolarizing(0.5), rho), atol=1e-10)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            mix_with_identity(identity_channel(2), 1.5)

    def test_rectangular_rejected(self, rng):
        with pytest.raises(Exception):
            mix_with_identity(random_channel(2, 3, 2, rng=rng), 0.5)


class TestRandomChannelSpec:
    def test_build_reproducible(self):
        spec = RandomChannelSpec(dim_in=4, dim_out=4, kraus_count=3, mix_lambda=0.6, seed=11)
        a, b = spec.build(), spec.build()
        assert np.array_equal(a.kraus, b.kraus)
        assert validate_channel(a).tp_defect < 1e-10

    def test_mixing_applied(self, rng):
        pure = RandomChannelSpec(dim_in=3, dim_out=3, kraus_count=2, mix_lambda=1.0, seed=5)
        mixed = RandomChannelSpec(dim_in=3, dim_out=3, kraus_count=2, mix_lambda=0.3, seed=5)
        rho = random_state(rng, 3)
        out_pure = apply(pure.build(), rho)
        out_mixed = apply(mixed.build(), rho)
        want = 0.3 * out_pure + 0.7 * rho
        assert np.allclose(out_mixed, want, atol=1e-10)


def test_as_generator_accepts_common_inputs():
    g = as_generator(3)
    assert as_generator(g) is g
    assert isinstance(as_generator(None), np.random.Generator)
    seq = np.random.SeedSequence(9)
    assert isinstance(as_generator(seq), np.random.Generator)
