"""Alternating (see-saw) search for encoder/decoder pairs adapted to a channel.

Each restart draws (or is seeded with) a code pair and alternates: optimize
the decoder for the current encoder, then the encoder for the new decoder,
both via the fidelity-improving iteration.  Every half-round can only raise
the corrected fidelity, so each restart's fidelity sequence is nondecreasing;
restarts are independent and the best pair wins.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import Channel, choi_of, identity_channel
from .codes import CodePair, code_fidelity, trivial_code
from .errors import DimMismatch, OutOfRange, ZeroMatrix
from .iterate import (
    IterationConfig,
    OptimizationTrace,
    optimize_channel,
    trace_to_json,
)
from .linalg import hermitian_eigensystem
from .objective import decoder_objective, encoder_objective, evaluate_objective, middle_objective
from .rng import spawned_generator
from .standard import random_channel

__all__ = [
    "SeesawConfig",
    "CodeSearchResult",
    "DiagnosticsReport",
    "optimize_code",
    "syndrome_diagnostic",
    "isometry_defect",
    "result_to_json",
    "diagnostics_to_json",
]

# a code "corrects some syndrome" when a middle channel reaches this fidelity
_EXACT_TOL = 1e-6


@dataclass(frozen=True)
class SeesawConfig:
    """Restart schedule and round limits for :func:`optimize_code`.

    ``encoder_kraus_count``/``decoder_kraus_count`` size the random starting
    points; the default "full" uses dim_in * dim_out operators, enough to
    reach any channel on the slot.
    """

    inner: IterationConfig = field(default_factory=IterationConfig)
    max_rounds: int = 60
    round_gain_threshold: float = 1e-9
    restarts: int = 5
    encoder_kraus_count: int | str = "full"
    decoder_kraus_count: int | str = "full"
    seed: int = 0


@dataclass(frozen=True)
class CodeSearchResult:
    best: CodePair
    fidelity: float
    per_restart_fidelities: list[float]
    rounds_used: int
    encoder_isometry_defect: float
    traces: list[list[OptimizationTrace]] | None = None


@dataclass(frozen=True)
class DiagnosticsReport:
    """Outcome of probing a code with an adversarially optimized middle
    channel: the best exact-correction fidelity found, whether it reaches 1
    (some syndrome is corrected exactly), and how far the encoder is from an
    isometry."""

    syndrome_max_fidelity: float
    corrects_some_syndrome: bool
    isometry_defect: float


def isometry_defect(e: Channel) -> float:
    """Second-to-first Choi eigenvalue ratio: 0 for a single-Kraus (isometry)
    channel, up to 1 for maximally mixed-rank ones."""
    vals = hermitian_eigensystem(choi_of(e).matrix).eigenvalues
    if vals[0] <= 0:
        raise ZeroMatrix("channel has an empty Choi spectrum")
    return float(max(vals[1], 0.0) / vals[0])


def _count(setting: int | str, full: int) -> int:
    if setting == "full":
        return full
    n = int(setting)
    if n < 1:
        raise OutOfRange(f"Kraus count must be >= 1, got {n}")
    return n


def _auto_seeds(t: Channel, d0: int) -> list[CodePair]:
    """Trivial-code seed when the channel is a qubit register and d0 = 2."""
    if d0 != 2 or t.dim_in != t.dim_out:
        return []
    n = int(math.log2(t.dim_in))
    if 2**n != t.dim_in or n < 1:
        return []
    return [trivial_code(n)]


def _run_restart(
    index: int,
    t: Channel,
    d0: int,
    cfg: SeesawConfig,
    seed_code: CodePair | None,
    keep_traces: bool,
) -> tuple[float, CodePair, int, list[OptimizationTrace], list[float]]:
    g = spawned_generator(cfg.seed, index)
    d1, d2 = t.dim_in, t.dim_out
    if seed_code is not None:
        if seed_code.d0 != d0 or seed_code.d1 != d1 or seed_code.d2 != d2:
            raise DimMismatch(
                f"seed code ({seed_code.d0},{seed_code.d1},{seed_code.d2}) does not "
                f"fit search dims ({d0},{d1},{d2})"
            )
        enc, dec = seed_code.encoder, seed_code.decoder
    else:
        enc = random_channel(d0, d1, _count(cfg.encoder_kraus_count, d0 * d1), g)
        dec = random_channel(d2, d0, _count(cfg.decoder_kraus_count, d2 * d0), g)

    traces: list[OptimizationTrace] = []
    half_fids: list[float] = []
    fid = -np.inf
    rounds = 0
    for _ in range(cfg.max_rounds):
        rounds += 1
        f_dec = decoder_objective(enc, t)
        tr = optimize_channel(f_dec, dec, cfg.inner, g)
        dec = tr.final
        half_fids.append(evaluate_objective(f_dec, dec))
        if keep_traces:
            traces.append(tr)
        f_enc = encoder_objective(dec, t)
        tr = optimize_channel(f_enc, enc, cfg.inner, g)
        enc = tr.final
        new_fid = evaluate_objective(f_enc, enc)
        half_fids.append(new_fid)
        if keep_traces:
            traces.append(tr)
        if new_fid - fid < cfg.round_gain_threshold:
            fid = max(fid, new_fid)
            break
        fid = new_fid
    return fid, CodePair(encoder=enc, decoder=dec), rounds, traces, half_fids


def optimize_code(
    t: Channel,
    d0: int = 2,
    cfg: SeesawConfig | None = None,
    seed_codes: tuple[CodePair, ...] = (),
    max_workers: int | None = None,
    keep_traces: bool = False,
) -> CodeSearchResult:
    """Search for the best (encoder, decoder) pair around ``t``.

    One restart is seeded from the do-nothing code whenever the dimensions
    allow it, plus any pairs in ``seed_codes``; the rest start random.  Each
    restart derives its generator from ``(cfg.seed, restart index)``, so the
    result does not depend on ``max_workers``.
    """
    cfg = cfg or SeesawConfig()
    if d0 < 1:
        raise OutOfRange(f"logical dimension must be >= 1, got {d0}")
    seeds: list[CodePair | None] = [*_auto_seeds(t, d0), *seed_codes]
    n_restarts = max(cfg.restarts, len(seeds))
    seeds += [None] * (n_restarts - len(seeds))

    def run(i: int):
        return _run_restart(i, t, d0, cfg, seeds[i], keep_traces)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run, range(n_restarts)))
    else:
        results = [run(i) for i in range(n_restarts)]

    best_idx = 0
    for i in range(1, n_restarts):
        if results[i][0] > results[best_idx][0]:
            best_idx = i
    _, best_pair, rounds, _, _ = results[best_idx]
    # report the from-scratch fidelity of the winner, not the objective value
    fidelity = code_fidelity(best_pair, t)
    return CodeSearchResult(
        best=best_pair,
        fidelity=fidelity,
        per_restart_fidelities=[r[0] for r in results],
        rounds_used=rounds,
        encoder_isometry_defect=isometry_defect(best_pair.encoder),
        traces=[r[3] for r in results] if keep_traces else None,
    )


def syndrome_diagnostic(
    e: Channel,
    d: Channel,
    cfg: IterationConfig | None = None,
    rng=None,
    restarts: int = 3,
) -> DiagnosticsReport:
    """Maximize the corrected fidelity over the middle channel.

    If the maximum reaches 1 the code corrects some "syndrome": there exists
    a channel between encoder and decoder that the pair inverts exactly.  The
    first restart starts from the identity channel (when the slot is square),
    the others from random full-rank channels.
    """
    cfg = cfg or IterationConfig()
    if restarts < 1:
        raise OutOfRange("need at least one restart")
    f_mid = middle_objective(e, d)
    slot_in, slot_out = f_mid.dim_in, f_mid.dim_out
    best = -np.inf
    for i in range(restarts):
        g = spawned_generator(cfg.seed, i) if rng is None else rng
        if i == 0 and slot_in == slot_out:
            init = identity_channel(slot_in)
        else:
            init = random_channel(slot_in, slot_out, slot_in * slot_out, g)
        tr = optimize_channel(f_mid, init, cfg, g)
        best = max(best, evaluate_objective(f_mid, tr.final))
    return DiagnosticsReport(
        syndrome_max_fidelity=float(best),
        corrects_some_syndrome=bool(best >= 1.0 - _EXACT_TOL),
        isometry_defect=isometry_defect(e),
    )


def result_to_json(r: CodeSearchResult) -> dict:
    from .codes import code_to_json

    out = {
        "fidelity": r.fidelity,
        "per_restart_fidelities": r.per_restart_fidelities,
        "rounds_used": r.rounds_used,
        "encoder_isometry_defect": r.encoder_isometry_defect,
        "code": code_to_json(r.best),
    }
    if r.traces is not None:
        out["traces"] = [[trace_to_json(t) for t in restart] for restart in r.traces]
    return out


def diagnostics_to_json(rep: DiagnosticsReport) -> dict:
    return {
        "syndrome_max_fidelity": rep.syndrome_max_fidelity,
        "corrects_some_syndrome": rep.corrects_some_syndrome,
        "isometry_defect": rep.isometry_defect,
    }
