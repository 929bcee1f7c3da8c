"""Figure rendering for sweep reports.

Renders the fidelity-vs-noise columns of a sweep to a PNG next to the CSV.
Uses the Agg backend so it works headless.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["figsize", "render_sweep_figure"]

_GOLDEN = (1 + 5**0.5) / 2

_STYLES = {
    "uncorrected": {"linestyle": ":", "color": "tab:gray"},
    "fivebit": {"linestyle": "--", "color": "tab:blue"},
    "optimized": {"linestyle": "-", "color": "tab:red"},
    "fivebit_encoder_opt_decoder": {"linestyle": "-.", "color": "tab:green"},
}

_LABELS = {
    "uncorrected": "no correction",
    "fivebit": "five-bit code",
    "optimized": "optimized code",
    "fivebit_encoder_opt_decoder": "five-bit encoder, optimized decoder",
}


def figsize(width: float = 6.0) -> tuple[float, float]:
    """Golden-ratio figure size in inches."""
    return (width, width / _GOLDEN)


def render_sweep_figure(
    ps: list[float],
    columns: dict[str, list[float]],
    path: str,
    title: str | None = None,
) -> None:
    """Plot each sweep column against p and save to ``path``."""
    fig, ax = plt.subplots(figsize=figsize())
    for name, values in columns.items():
        style = _STYLES.get(name, {"linestyle": "-"})
        ax.plot(ps, values, label=_LABELS.get(name, name), **style)
    ax.set_xlabel("depolarization probability p")
    ax.set_ylabel("channel fidelity")
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
