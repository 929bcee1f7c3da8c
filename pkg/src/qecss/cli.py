"""Command line interface.

Subcommands:
    fidelity   corrected fidelity of a code against a channel
    sweep      depolarizing-noise fidelity curves to CSV (optionally a figure)
    optimize   see-saw code search for a channel, result as JSON
    diagnose   exact-correction probe and isometry defect of a code

Exit codes: 0 success, 2 invalid spec/parse error, 3 dimension mismatch,
4 I/O failure.  ``QECSS_THREADS`` caps concurrent see-saw restarts.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .channel import Channel, channel_from_json, tensor_power
from .codes import (
    CodePair,
    code_fidelity,
    code_from_json,
    code_to_json,
    five_bit_code,
    trivial_code,
)
from .errors import DimMismatch, OutOfRange, QecssError
from .iterate import IterationConfig, optimize_channel, trace_to_json
from .objective import decoder_objective, evaluate_objective
from .rng import spawned_generator, spawned_seed
from .seesaw import (
    SeesawConfig,
    diagnostics_to_json,
    optimize_code,
    result_to_json,
    syndrome_diagnostic,
)
from .standard import depolarizing

_MAX_P = 4.0 / 3.0
_ALL_COLUMNS = ("uncorrected", "fivebit", "optimized", "fivebit_encoder_opt_decoder")


def _fmt(x: float) -> str:
    """Locale-independent, 15 significant digits."""
    return format(float(x), ".15g")


def _threads() -> int | None:
    raw = os.environ.get("QECSS_THREADS", "").strip()
    if not raw:
        return None
    n = int(raw)
    if n < 1:
        raise OutOfRange(f"QECSS_THREADS must be >= 1, got {n}")
    return n


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _parse_channel(spec: str, n_copies: int | None) -> Channel:
    """A channel file path, or ``depolarizing:P`` / ``depolarizing:P^N``."""
    if spec.startswith("depolarizing:"):
        body = spec.split(":", 1)[1]
        if "^" in body:
            p_str, n_str = body.split("^", 1)
            t = tensor_power(depolarizing(float(p_str)), int(n_str))
        else:
            t = depolarizing(float(body))
    else:
        t = channel_from_json(_load_json(spec))
    if n_copies is not None and n_copies > 1:
        t = tensor_power(t, n_copies)
    return t


def _parse_code(spec: str) -> CodePair:
    """A code file path, or the built-ins ``five-bit`` / ``trivial:N``."""
    if spec == "five-bit":
        return five_bit_code()
    if spec.startswith("trivial:"):
        return trivial_code(int(spec.split(":", 1)[1]))
    return code_from_json(_load_json(spec))


@dataclass(frozen=True)
class SweepSpec:
    """Validated parameters of one sweep run."""

    p_start: float
    p_end: float
    p_steps: int
    n_copies: int = 5
    d0: int = 2
    columns: tuple[str, ...] = ()
    restarts: int = 5
    max_rounds: int = 60
    gain_threshold: float = 1e-9
    seed: int = 0
    output: str | None = None
    trace: str | None = None
    figure: str | None = None

    def __post_init__(self):
        if not (0.0 <= self.p_start <= self.p_end <= _MAX_P):
            raise OutOfRange(
                f"need 0 <= p_start <= p_end <= 4/3, got [{self.p_start}, {self.p_end}]"
            )
        if self.p_steps < 1:
            raise OutOfRange("p_steps must be >= 1")
        if self.n_copies < 1:
            raise OutOfRange("n_copies must be >= 1")
        if self.d0 < 1:
            raise OutOfRange("d0 must be >= 1")
        if self.restarts < 1:
            raise OutOfRange("restarts must be >= 1")
        cols = self.columns or _default_columns(self.n_copies)
        for c in cols:
            if c not in _ALL_COLUMNS:
                raise OutOfRange(f"unknown column {c!r}; choose from {_ALL_COLUMNS}")
        if self.n_copies != 5 and any(c.startswith("fivebit") for c in cols):
            raise OutOfRange("fivebit columns require --n-copies 5")
        # canonical order regardless of how the user listed them
        object.__setattr__(
            self, "columns", tuple(c for c in _ALL_COLUMNS if c in cols)
        )

    @property
    def grid(self) -> np.ndarray:
        if self.p_steps == 1:
            return np.array([self.p_start])
        return np.linspace(self.p_start, self.p_end, self.p_steps)


def _default_columns(n_copies: int) -> tuple[str, ...]:
    if n_copies == 5:
        return ("uncorrected", "fivebit", "optimized")
    return ("uncorrected", "optimized")


def _best_decoder_value(t: Channel, code: CodePair, cfg: SeesawConfig, seed: int) -> float:
    """Optimize only the decoder for the given (fixed) encoder."""
    f_dec = decoder_objective(code.encoder, t)
    best = -np.inf
    for r in range(cfg.restarts):
        g = spawned_generator(seed, r, 1)
        if r == 0:
            init = code.decoder
        else:
            from .standard import random_channel

            init = random_channel(t.dim_out, code.d0, t.dim_out * code.d0, g)
        tr = optimize_channel(f_dec, init, cfg.inner, g)
        best = max(best, evaluate_objective(f_dec, tr.final))
    return float(best)


def cmd_sweep(spec: SweepSpec) -> int:
    """Write fidelity-vs-p curves as CSV (and optionally a figure)."""
    base = depolarizing  # one-qubit family; copies taken per grid point
    fivebit = five_bit_code() if any(c.startswith("fivebit") for c in spec.columns) else None
    threads = _threads()
    need_opt = "optimized" in spec.columns
    rows: list[dict[str, float]] = []
    traces = []
    for i, p in enumerate(spec.grid):
        p = float(p)
        point_seed = spawned_seed(spec.seed, i)
        t = tensor_power(base(p), spec.n_copies) if spec.n_copies > 1 else base(p)
        row: dict[str, float] = {"p": p}
        if "uncorrected" in spec.columns:
            row["uncorrected"] = 1.0 - 0.75 * p
        if "fivebit" in spec.columns:
            row["fivebit"] = code_fidelity(fivebit, t)
        cfg = SeesawConfig(
            restarts=spec.restarts,
            max_rounds=spec.max_rounds,
            round_gain_threshold=spec.gain_threshold,
            seed=point_seed,
        )
        if need_opt:
            seeds = (fivebit,) if (fivebit is not None and spec.d0 == 2) else ()
            result = optimize_code(
                t,
                d0=spec.d0,
                cfg=cfg,
                seed_codes=seeds,
                max_workers=threads,
                keep_traces=spec.trace is not None,
            )
            row["optimized"] = result.fidelity
            if spec.trace is not None:
                traces.append(
                    {
                        "p": p,
                        "per_restart_fidelities": result.per_restart_fidelities,
                        "restarts": [
                            [trace_to_json(tr) for tr in restart]
                            for restart in result.traces
                        ],
                    }
                )
        if "fivebit_encoder_opt_decoder" in spec.columns:
            row["fivebit_encoder_opt_decoder"] = _best_decoder_value(
                t, fivebit, cfg, point_seed
            )
        rows.append(row)

    header = ["p", *spec.columns]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in header))
    text = "\n".join(lines) + "\n"
    if spec.output:
        with open(spec.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if spec.trace is not None:
        with open(spec.trace, "w", encoding="utf-8") as fh:
            json.dump(traces, fh, indent=1)
    if spec.figure:
        from .plotting import render_sweep_figure

        render_sweep_figure(
            [row["p"] for row in rows],
            {c: [row[c] for row in rows] for c in spec.columns},
            spec.figure,
            title=f"{spec.n_copies} copies of the depolarizing channel",
        )
    return 0


def cmd_fidelity(code_spec: str, channel_spec: str, n_copies: int | None) -> int:
    code = _parse_code(code_spec)
    t = _parse_channel(channel_spec, n_copies)
    print(_fmt(code_fidelity(code, t)))
    return 0


def cmd_optimize(args) -> int:
    t = _parse_channel(args.channel, args.n_copies)
    cfg = SeesawConfig(
        restarts=args.restarts,
        max_rounds=args.max_rounds,
        round_gain_threshold=args.gain_threshold,
        seed=args.seed,
    )
    seeds: tuple[CodePair, ...] = ()
    if args.d0 == 2 and t.dim_in == t.dim_out == 32:
        seeds = (five_bit_code(),)
    result = optimize_code(
        t,
        d0=args.d0,
        cfg=cfg,
        seed_codes=seeds,
        max_workers=_threads(),
        keep_traces=args.trace is not None,
    )
    payload = result_to_json(result)
    traces = payload.pop("traces", None)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(code_to_json(result.best), fh, indent=1)
        payload.pop("code")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(traces, fh, indent=1)
    print(json.dumps(payload, indent=1))
    return 0


def cmd_diagnose(args) -> int:
    code = _parse_code(args.code)
    cfg = IterationConfig(seed=args.seed)
    report = syndrome_diagnostic(code.encoder, code.decoder, cfg, restarts=args.restarts)
    print(json.dumps(diagnostics_to_json(report), indent=1))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qecss",
        description="Optimize quantum error correcting codes for a given noisy channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fid = sub.add_parser("fidelity", help="corrected fidelity of a code against a channel")
    p_fid.add_argument("--code", required=True, help="code JSON file, 'five-bit' or 'trivial:N'")
    p_fid.add_argument(
        "--channel", required=True, help="channel JSON file or 'depolarizing:P[^N]'"
    )
    p_fid.add_argument("--n-copies", type=int, default=None, help="tensor copies of the channel")

    p_sweep = sub.add_parser("sweep", help="fidelity curves over a depolarizing-noise grid")
    p_sweep.add_argument("--p-start", type=float, default=0.0)
    p_sweep.add_argument("--p-end", type=float, default=_MAX_P)
    p_sweep.add_argument("--p-steps", type=int, default=20)
    p_sweep.add_argument("--n-copies", type=int, default=5)
    p_sweep.add_argument("--d0", type=int, default=2, help="logical dimension")
    p_sweep.add_argument("--restarts", type=int, default=5)
    p_sweep.add_argument("--max-rounds", type=int, default=60)
    p_sweep.add_argument("--gain-threshold", type=float, default=1e-9)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--output", default=None, help="CSV path (stdout when omitted)")
    p_sweep.add_argument("--trace", default=None, help="JSON file for optimization traces")
    p_sweep.add_argument(
        "--columns", default=None, help=f"comma list from {', '.join(_ALL_COLUMNS)}"
    )
    p_sweep.add_argument("--figure", default=None, help="render the curves to this PNG")

    p_opt = sub.add_parser("optimize", help="see-saw code search for a channel")
    p_opt.add_argument(
        "--channel", required=True, help="channel JSON file or 'depolarizing:P[^N]'"
    )
    p_opt.add_argument("--n-copies", type=int, default=None)
    p_opt.add_argument("--d0", type=int, default=2)
    p_opt.add_argument("--restarts", type=int, default=5)
    p_opt.add_argument("--max-rounds", type=int, default=60)
    p_opt.add_argument("--gain-threshold", type=float, default=1e-9)
    p_opt.add_argument("--seed", type=int, default=0)
    p_opt.add_argument("--output", default=None, help="write the best code pair JSON here")
    p_opt.add_argument("--trace", default=None, help="JSON file for optimization traces")

    p_diag = sub.add_parser("diagnose", help="exact-correction probe for a code")
    p_diag.add_argument("--code", required=True, help="code JSON file, 'five-bit' or 'trivial:N'")
    p_diag.add_argument("--restarts", type=int, default=3)
    p_diag.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fidelity":
            return cmd_fidelity(args.code, args.channel, args.n_copies)
        if args.command == "sweep":
            cols = (
                tuple(c.strip() for c in args.columns.split(",") if c.strip())
                if args.columns
                else ()
            )
            spec = SweepSpec(
                p_start=args.p_start,
                p_end=args.p_end,
                p_steps=args.p_steps,
                n_copies=args.n_copies,
                d0=args.d0,
                columns=cols,
                restarts=args.restarts,
                max_rounds=args.max_rounds,
                gain_threshold=args.gain_threshold,
                seed=args.seed,
                output=args.output,
                trace=args.trace,
                figure=args.figure,
            )
            return cmd_sweep(spec)
        if args.command == "optimize":
            return cmd_optimize(args)
        if args.command == "diagnose":
            return cmd_diagnose(args)
        parser.error(f"unknown command {args.command}")
    except DimMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QecssError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
