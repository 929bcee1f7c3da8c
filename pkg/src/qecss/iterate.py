"""Fidelity-improving iteration on a single slot.

One step maps a channel with Kraus stack ``{s_i}`` to

    s_i' = unvec(F |s_i>>) ,   M = sum_i s_i'^+ s_i' ,   t_i = s_i' M^-1/2 ,

which never decreases the objective ``sum_i <<s_i|F|s_i>>``.  The primed
stack is usually not trace preserving, hence the ``M^-1/2`` normalization;
when M is singular it is inverted on its support and the result is trace
preserving on that support only (``sum t_i^+ t_i`` is a projector).  For a
slot with one-dimensional output and a single Kraus operator the step reduces
to the power method ``phi -> F phi / ||F phi||``.

The optimizer repeats steps until the per-step gain drops below a threshold,
then tries to escape the fixed point a few times by small random
perturbations, keeping the best channel seen.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import Channel
from .errors import DimMismatch, ZeroMap, ZeroMatrix
from .linalg import psd_inv_sqrt
from .objective import ObjectiveOperator, evaluate_objective
from .rng import as_generator
from .standard import _right_normalize

__all__ = [
    "IterationConfig",
    "IterationStepReport",
    "OptimizationTrace",
    "StopReason",
    "iteration_step",
    "optimize_channel",
    "perturb",
    "trace_to_json",
]


class StopReason(str, Enum):
    CONVERGED = "converged"
    MAX_STEPS = "max_steps"
    STABILIZED_CONVERGED = "stabilized_converged"


@dataclass(frozen=True)
class IterationConfig:
    """Knobs for :func:`optimize_channel`.

    ``gain_threshold`` stops the loop once one step gains less than this;
    ``perturb_magnitude`` and ``stabilization_attempts`` control the escape
    tries after convergence; ``pinv_cutoff`` is the relative eigenvalue
    cutoff of the normalization pseudo-inverse.
    """

    gain_threshold: float = 1e-10
    max_steps: int = 10000
    pinv_cutoff: float = 1e-12
    perturb_magnitude: float = 1e-3
    stabilization_attempts: int = 3
    seed: int = 0


@dataclass(frozen=True)
class IterationStepReport:
    """What one step did: objective before/after, the normalization matrix
    M (dim_in square), its rank, the TP defect of the new channel, and
    whether the step directly followed a stabilization perturbation."""

    objective_before: float
    objective_after: float
    normalization: np.ndarray
    m_rank: int
    tp_defect_after: float
    after_perturbation: bool = False


@dataclass(frozen=True)
class OptimizationTrace:
    steps: list[IterationStepReport]
    final: Channel
    stop_reason: StopReason
    perturbations_used: int = 0
    final_objective: float = field(default=float("nan"))


def iteration_step(
    s: Channel, f: ObjectiveOperator, pinv_cutoff: float = 1e-12
) -> tuple[Channel, IterationStepReport]:
    """One fidelity-improving step; returns the new channel and a report.

    Raises :class:`ZeroMap` when the objective annihilates every Kraus
    operator (M = 0).
    """
    if (s.dim_in, s.dim_out) != (f.dim_in, f.dim_out):
        raise DimMismatch(
            f"channel slot {s.dim_in}->{s.dim_out} != objective slot "
            f"{f.dim_in}->{f.dim_out}"
        )
    before = evaluate_objective(f, s)
    v = s.kraus.reshape(s.kraus_count, -1)
    primed = (v @ f.matrix.T).reshape(s.kraus_count, s.dim_out, s.dim_in)
    m = np.einsum("kai,kaj->ij", primed.conj(), primed, optimize=True)
    m = (m + m.conj().T) / 2
    try:
        inv_sqrt, _, m_rank = psd_inv_sqrt(m, cutoff=pinv_cutoff)
    except ZeroMatrix as exc:
        raise ZeroMap("objective annihilates the channel; no step possible") from exc
    new = Channel(primed @ inv_sqrt, dim_in=s.dim_in, dim_out=s.dim_out)
    after = evaluate_objective(f, new)
    gram = np.einsum("kai,kaj->ij", new.kraus.conj(), new.kraus, optimize=True)
    tp_defect = float(np.linalg.norm(gram - np.eye(s.dim_in)))
    report = IterationStepReport(
        objective_before=before,
        objective_after=after,
        normalization=m,
        m_rank=m_rank,
        tp_defect_after=tp_defect,
    )
    return new, report


def perturb(s: Channel, magnitude: float, rng=None) -> Channel:
    """Add i.i.d. complex Gaussian noise of scale ``magnitude * ||s||`` to the
    Kraus stack and re-normalize to trace preserving.  ``magnitude=0`` only
    re-normalizes."""
    g = as_generator(rng)
    scale = magnitude * float(np.linalg.norm(s.kraus))
    shape = s.kraus.shape
    noise = (g.normal(0.0, 1.0, shape) + 1j * g.normal(0.0, 1.0, shape)) / np.sqrt(2.0)
    return _right_normalize(s.kraus + scale * noise)


def optimize_channel(
    f: ObjectiveOperator,
    init: Channel,
    cfg: IterationConfig | None = None,
    rng=None,
) -> OptimizationTrace:
    """Iterate to a (stabilized) fixed point, returning the best channel seen.

    After the gain drops below ``cfg.gain_threshold`` the current point is
    perturbed and re-converged up to ``cfg.stabilization_attempts`` times;
    the returned channel is the best one encountered (never worse than
    ``init``).
    """
    cfg = cfg or IterationConfig()
    g = as_generator(rng if rng is not None else cfg.seed)
    current = init
    best_value = evaluate_objective(f, init)
    best = init
    steps: list[IterationStepReport] = []
    perturbations = 0
    just_perturbed = False
    stop = StopReason.MAX_STEPS
    for _ in range(cfg.max_steps):
        current, report = iteration_step(current, f, cfg.pinv_cutoff)
        if just_perturbed:
            report = dataclasses.replace(report, after_perturbation=True)
            just_perturbed = False
        steps.append(report)
        if report.objective_after > best_value:
            best_value = report.objective_after
            best = current
        gain = report.objective_after - report.objective_before
        if gain < cfg.gain_threshold:
            if perturbations < cfg.stabilization_attempts and cfg.perturb_magnitude > 0:
                current = perturb(current, cfg.perturb_magnitude, g)
                perturbations += 1
                just_perturbed = True
                continue
            stop = (
                StopReason.CONVERGED if perturbations == 0 else StopReason.STABILIZED_CONVERGED
            )
            break
    return OptimizationTrace(
        steps=steps,
        final=best,
        stop_reason=stop,
        perturbations_used=perturbations,
        final_objective=best_value,
    )


def trace_to_json(trace: OptimizationTrace) -> dict:
    """JSON-ready summary: per step index, objective, M rank, TP defect."""
    return {
        "stop_reason": trace.stop_reason.value,
        "perturbations_used": trace.perturbations_used,
        "final_objective": trace.final_objective,
        "steps": [
            {
                "step": i,
                "objective": r.objective_after,
                "m_rank": r.m_rank,
                "tp_defect": r.tp_defect_after,
                "after_perturbation": r.after_perturbation,
            }
            for i, r in enumerate(trace.steps)
        ],
    }
