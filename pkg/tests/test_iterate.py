import numpy as np
import pytest

from qecss import (
    Channel,
    IterationConfig,
    ObjectiveOperator,
    StopReason,
    ZeroMap,
    apply,
    evaluate_objective,
    fidelity_objective,
    identity_channel,
    iteration_step,
    optimize_channel,
    perturb,
    trace_to_json,
)
from qecss.linalg import hermitian_eigensystem
from conftest import random_objective, random_psd, random_state, random_tp_channel


class TestIterationStep:
    def test_identity_is_fixed_point(self):
        f = fidelity_objective(2)
        new, report = iteration_step(identity_channel(2), f)
        assert np.allclose(apply(new, np.eye(2)), np.eye(2), atol=1e-12)
        assert report.objective_after == pytest.approx(1.0, abs=1e-12)
        assert report.objective_after - report.objective_before == pytest.approx(0.0, abs=1e-12)

    def test_never_decreases(self, rng):
        worst = 0.0
        for _ in range(40):
            d_in = int(rng.integers(2, 5))
            d_out = int(rng.integers(2, 5))
            f = random_objective(rng, d_in, d_out)
            s = random_tp_channel(rng, d_in, d_out, int(rng.integers(1, 5)))
            if s.kraus_count * d_out < d_in:
                s = random_tp_channel(rng, d_in, d_out, d_in)
            _, report = iteration_step(s, f)
            worst = min(worst, report.objective_after - report.objective_before)
        assert worst > -1e-12

    def test_power_inequality_backbone(self, rng):
        # <phi|A^3 phi><phi|phi> >= <phi|A phi><phi|A^2 phi> for PSD A
        worst = 0.0
        for _ in range(60):
            n = int(rng.integers(2, 7))
            a = random_psd(rng, n)
            phi = rng.normal(size=n) + 1j * rng.normal(size=n)
            m1 = (phi.conj() @ a @ phi).real
            m2 = (phi.conj() @ a @ a @ phi).real
            m3 = (phi.conj() @ a @ a @ a @ phi).real
            worst = min(worst, m3 * (phi.conj() @ phi).real - m1 * m2)
        assert worst > -1e-9

    def test_stays_trace_preserving(self, rng):
        for _ in range(15):
            d_in = int(rng.integers(2, 5))
            d_out = int(rng.integers(2, 5))
            f = random_objective(rng, d_in, d_out)
            s = random_tp_channel(rng, d_in, d_out)
            new, report = iteration_step(s, f)
            assert report.tp_defect_after < 1e-10
            gram = np.einsum("kai,kaj->ij", new.kraus.conj(), new.kraus)
            assert np.allclose(gram, np.eye(d_in), atol=1e-10)

    def test_singular_normalization_gives_projector(self, rng):
        # rank-1 objective annihilates part of the input space
        v = np.zeros((2, 2), dtype=complex)
        v[0, 0] = 1.0
        mat = np.outer(v.reshape(-1), v.reshape(-1).conj())
        f = ObjectiveOperator(dim_in=2, dim_out=2, matrix=mat)
        s = random_tp_channel(rng, 2, 2)
        new, report = iteration_step(s, f)
        gram = np.einsum("kai,kaj->ij", new.kraus.conj(), new.kraus)
        assert report.m_rank < 2
        assert np.allclose(gram @ gram, gram, atol=1e-8)

    def test_kraus_count_constant(self, rng):
        s = random_tp_channel(rng, 3, 3, 5)
        f = random_objective(rng, 3, 3)
        new, _ = iteration_step(s, f)
        assert new.kraus_count == 5

    def test_reduces_to_power_method(self, rng):
        # single Kraus row vector: the step is phi -> F phi / ||F phi||
        n = 5
        f_mat = random_psd(rng, n)
        f = ObjectiveOperator(dim_in=n, dim_out=1, matrix=f_mat)
        phi = rng.normal(size=n) + 1j * rng.normal(size=n)
        phi /= np.linalg.norm(phi)
        s = Channel([phi.reshape(1, n)], dim_in=n, dim_out=1)
        for _ in range(20):
            s, _ = iteration_step(s, f)
            phi = f_mat @ phi
            phi /= np.linalg.norm(phi)
            assert np.linalg.norm(s.kraus[0, 0] - phi) < 1e-10

    def test_power_method_converges_to_top_eigenvector(self, rng):
        n = 6
        f_mat = random_psd(rng, n)
        f = ObjectiveOperator(dim_in=n, dim_out=1, matrix=f_mat)
        phi = rng.normal(size=n) + 1j * rng.normal(size=n)
        phi /= np.linalg.norm(phi)
        s = Channel([phi.reshape(1, n)], dim_in=n, dim_out=1)
        for _ in range(400):
            s, report = iteration_step(s, f)
        eig = hermitian_eigensystem(f_mat)
        assert report.objective_after == pytest.approx(eig.eigenvalues[0], abs=1e-8)
        top = eig.eigenvectors[:, 0]
        overlap = abs(np.vdot(top, s.kraus[0, 0]))
        assert overlap == pytest.approx(1.0, abs=1e-6)

    def test_zero_map(self):
        # objective supported where the channel is not
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        mat = np.outer(x.reshape(-1), x.reshape(-1).conj())
        f = ObjectiveOperator(dim_in=2, dim_out=2, matrix=mat)
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        s = Channel([z], dim_in=2, dim_out=2)
        # tr(x z) = 0 and F kills |z>>
        with pytest.raises(ZeroMap):
            iteration_step(s, f)


class TestPerturb:
    def test_zero_magnitude_keeps_action(self, rng):
        s = random_tp_channel(rng, 3, 3)
        out = perturb(s, 0.0, rng)
        rho = random_state(rng, 3)
        assert np.allclose(apply(out, rho), apply(s, rho), atol=1e-12)

    def test_result_trace_preserving(self, rng):
        s = random_tp_channel(rng, 3, 2, 4)
        out = perturb(s, 0.05, rng)
        gram = np.einsum("kai,kaj->ij", out.kraus.conj(), out.kraus)
        assert np.allclose(gram, np.eye(3), atol=1e-10)

    def test_deterministic(self, rng):
        s = random_tp_channel(rng, 2, 2)
        a = perturb(s, 0.1, np.random.default_rng(4))
        b = perturb(s, 0.1, np.random.default_rng(4))
        assert np.array_equal(a.kraus, b.kraus)


class TestOptimizeChannel:
    def test_final_at_least_init(self, rng):
        for _ in range(8):
            f = random_objective(rng, 3, 3)
            s = random_tp_channel(rng, 3, 3)
            trace = optimize_channel(f, s, IterationConfig(max_steps=100))
            assert trace.final_objective >= evaluate_objective(f, s) - 1e-12
            assert evaluate_objective(f, trace.final) == pytest.approx(
                trace.final_objective, abs=1e-12
            )

    def test_steps_monotone_except_after_perturbation(self, rng):
        f = random_objective(rng, 3, 3)
        s = random_tp_channel(rng, 3, 3)
        trace = optimize_channel(f, s, IterationConfig(max_steps=200))
        for report in trace.steps:
            if not report.after_perturbation:
                assert report.objective_after >= report.objective_before - 1e-12

    def test_max_steps(self, rng):
        f = random_objective(rng, 2, 2)
        s = random_tp_channel(rng, 2, 2)
        trace = optimize_channel(f, s, IterationConfig(max_steps=1))
        assert trace.stop_reason is StopReason.MAX_STEPS
        assert len(trace.steps) == 1

    def test_stabilized_convergence_reported(self, rng):
        f = random_objective(rng, 2, 2)
        s = random_tp_channel(rng, 2, 2)
        trace = optimize_channel(
            f, s, IterationConfig(max_steps=500, stabilization_attempts=2)
        )
        assert trace.stop_reason in (StopReason.STABILIZED_CONVERGED, StopReason.MAX_STEPS)
        assert trace.perturbations_used <= 2

    def test_plain_convergence_when_no_perturbations(self, rng):
        f = random_objective(rng, 2, 2)
        s = random_tp_channel(rng, 2, 2)
        trace = optimize_channel(
            f,
            s,
            IterationConfig(max_steps=500, stabilization_attempts=0, perturb_magnitude=0.0),
        )
        assert trace.stop_reason is StopReason.CONVERGED
        assert trace.perturbations_used == 0

    def test_deterministic_per_seed(self, rng):
        f = random_objective(rng, 3, 3)
        s = random_tp_channel(rng, 3, 3)
        cfg = IterationConfig(max_steps=60, seed=9)
        a = optimize_channel(f, s, cfg)
        b = optimize_channel(f, s, cfg)
        assert np.array_equal(a.final.kraus, b.final.kraus)
        assert a.final_objective == b.final_objective

    def test_every_emitted_channel_tp(self, rng):
        f = random_objective(rng, 3, 2)
        s = random_tp_channel(rng, 3, 2)
        trace = optimize_channel(f, s, IterationConfig(max_steps=80))
        for report in trace.steps:
            assert report.tp_defect_after < 1e-8

    def test_trace_json_shape(self, rng):
        f = random_objective(rng, 2, 2)
        s = random_tp_channel(rng, 2, 2)
        trace = optimize_channel(f, s, IterationConfig(max_steps=10))
        obj = trace_to_json(trace)
        assert set(obj) == {"stop_reason", "perturbations_used", "final_objective", "steps"}
        assert obj["steps"][0]["step"] == 0
        for entry in obj["steps"]:
            assert set(entry) == {
                "step",
                "objective",
                "m_rank",
                "tp_defect",
                "after_perturbation",
            }
