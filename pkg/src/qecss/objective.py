"""Fidelity objectives as operators on the variable slot's Kraus vectors.

With two of the three stages of ``D after T after E`` held fixed, the
corrected fidelity is linear in the remaining stage's Choi operator:

    f(S) = tr(F Choi(S)) = sum_i <<s_i| F |s_i>> ,

where F collects the fixed Kraus products.  Writing ``g_j`` for a Kraus set
of the fixed composition (arranged so the trace of the total map's Kraus
products is ``tr(g_j s_i) = <<g_j^+|s_i>>``),

    F = d0^-2 sum_j |g_j^+>> <<g_j^+| ,

which is the Choi matrix of the fixed composition, complex conjugated, with
the row/column factors of each composite index swapped.  That last form is
how it is computed here: it is independent of the Kraus representation and
needs no eigendecomposition of the (possibly huge) product set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Channel
from .errors import DimMismatch, ShapeMismatch

__all__ = [
    "ObjectiveOperator",
    "fidelity_objective",
    "evaluate_objective",
    "encoder_objective",
    "decoder_objective",
    "middle_objective",
]


@dataclass(frozen=True)
class ObjectiveOperator:
    """PSD operator on the Kraus-vector space of a ``dim_in -> dim_out`` slot."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        n = self.dim_in * self.dim_out
        if m.shape != (n, n):
            raise ShapeMismatch(f"objective matrix shape {m.shape} != ({n}, {n})")
        object.__setattr__(self, "matrix", m)


def fidelity_objective(dim: int) -> ObjectiveOperator:
    """Objective whose value on a square channel is its fidelity with the
    identity: ``dim^-2 |I>><<I|``."""
    eye_vec = np.eye(dim, dtype=np.complex128).reshape(-1)
    return ObjectiveOperator(dim, dim, np.outer(eye_vec, eye_vec) / dim**2)


def evaluate_objective(f: ObjectiveOperator, s: Channel) -> float:
    """``sum_i <<s_i| F |s_i>>`` for a channel living on the objective's slot."""
    if (s.dim_in, s.dim_out) != (f.dim_in, f.dim_out):
        raise DimMismatch(
            f"channel slot {s.dim_in}->{s.dim_out} != objective slot "
            f"{f.dim_in}->{f.dim_out}"
        )
    v = s.kraus.reshape(s.kraus_count, -1)
    return float(np.einsum("ia,ab,ib->", v.conj(), f.matrix, v, optimize=True).real)


def _composition_choi(outer: Channel, inner: Channel) -> np.ndarray:
    """Choi matrix of ``outer after inner`` without materializing a Channel."""
    prods = np.einsum("aij,bjk->abik", outer.kraus, inner.kraus, optimize=True)
    v = prods.reshape(-1, outer.dim_out * inner.dim_in)
    m = v.T @ v.conj()
    return (m + m.conj().T) / 2


def _slot_objective(choi: np.ndarray, g_out: int, g_in: int, logical_dim: int) -> ObjectiveOperator:
    """Objective for the slot facing a fixed composition with Choi ``choi``.

    The slot's Kraus operators have shape ``(g_in, g_out)`` (they multiply the
    fixed part to a square matrix), and

        F[(mu,a),(nu,b)] = d0^-2 * conj(Choi[(a,mu),(b,nu)]) .
    """
    c4 = choi.reshape(g_out, g_in, g_out, g_in)
    n = g_out * g_in
    matrix = c4.transpose(1, 0, 3, 2).conj().reshape(n, n) / logical_dim**2
    return ObjectiveOperator(dim_in=g_out, dim_out=g_in, matrix=np.ascontiguousarray(matrix))


def encoder_objective(d: Channel, t: Channel) -> ObjectiveOperator:
    """Fidelity as a function of the encoder, for fixed decoder and channel.

    Evaluating the result on an encoder E gives ``F(D after T after E)``.
    """
    if t.dim_out != d.dim_in:
        raise DimMismatch(f"channel dim_out {t.dim_out} != decoder dim_in {d.dim_in}")
    choi = _composition_choi(d, t)
    return _slot_objective(choi, g_out=d.dim_out, g_in=t.dim_in, logical_dim=d.dim_out)


def decoder_objective(e: Channel, t: Channel) -> ObjectiveOperator:
    """Fidelity as a function of the decoder, for fixed encoder and channel."""
    if e.dim_out != t.dim_in:
        raise DimMismatch(f"encoder dim_out {e.dim_out} != channel dim_in {t.dim_in}")
    choi = _composition_choi(t, e)
    return _slot_objective(choi, g_out=t.dim_out, g_in=e.dim_in, logical_dim=e.dim_in)


def middle_objective(e: Channel, d: Channel) -> ObjectiveOperator:
    """Fidelity as a function of the channel between a fixed encoder and
    decoder; used to probe which channels a code corrects exactly."""
    if e.dim_in != d.dim_out:
        raise DimMismatch(f"encoder dim_in {e.dim_in} != decoder dim_out {d.dim_out}")
    choi = _composition_choi(e, d)
    return _slot_objective(choi, g_out=e.dim_out, g_in=d.dim_in, logical_dim=e.dim_in)
