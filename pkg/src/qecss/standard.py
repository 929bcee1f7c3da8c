"""Stock channels: depolarizing family, bit flip, seeded random channels.

The depolarizing channel on one qubit is

    T_p(rho) = p * tr(rho) I/2 + (1 - p) rho ,    0 <= p <= 4/3 ,

completely positive on that whole range even though for p > 1 the identity
component enters with negative weight (at p = 4/3 it is the optimal spin
flip approximation).  Its fidelity with the identity is 1 - 3p/4.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Channel, ChoiOperator, choi_of, identity_channel, kraus_of
from .errors import DimMismatch, OutOfRange
from .rng import as_generator

__all__ = [
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "depolarizing",
    "bit_flip",
    "random_channel",
    "mix_with_identity",
    "RandomChannelSpec",
]

PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

_MAX_P = 4.0 / 3.0


def depolarizing(p: float) -> Channel:
    """One-qubit depolarizing channel ``T_p`` for ``0 <= p <= 4/3``.

    For ``p <= 1`` the familiar Pauli Kraus set
    ``{sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}`` is used; for
    ``p > 1`` that weight goes negative, so the channel is built from its
    (still PSD) Choi matrix instead.
    """
    p = float(p)
    if not 0.0 <= p <= _MAX_P:
        raise OutOfRange(f"depolarizing parameter must be in [0, 4/3], got {p}")
    if p <= 1.0:
        w0, w = np.sqrt(1.0 - 0.75 * p), np.sqrt(0.25 * p)
        return Channel([w0 * PAULI_I, w * PAULI_X, w * PAULI_Y, w * PAULI_Z])
    # Choi(T_p) = (1-p) |I>><<I| + (p/2) I_4;  PSD up to p = 4/3
    eye_vec = PAULI_I.reshape(-1)
    matrix = (1.0 - p) * np.outer(eye_vec, eye_vec) + (p / 2.0) * np.eye(4)
    return kraus_of(ChoiOperator(dim_in=2, dim_out=2, matrix=matrix))


def bit_flip(q: float) -> Channel:
    """Flip the qubit with probability ``q``: Kraus ``{sqrt(1-q) I, sqrt(q) X}``."""
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise OutOfRange(f"flip probability must be in [0, 1], got {q}")
    return Channel([np.sqrt(1.0 - q) * PAULI_I, np.sqrt(q) * PAULI_X])


def random_channel(dim_in: int, dim_out: int, kraus_count: int, rng=None) -> Channel:
    """A random channel: i.i.d. uniform Kraus entries, normalized to TP.

    Real and imaginary parts of every entry are drawn uniformly from
    [-1, 1]; the stack is then right-multiplied by ``M^-1/2`` with
    ``M = sum_i s_i^+ s_i``, which makes the result trace preserving (almost
    surely M is nonsingular when ``kraus_count * dim_out >= dim_in``;
    otherwise the result is normalized to a projection, TP on M's support).
    With ``kraus_count=1`` and ``dim_out >= dim_in`` this yields a random
    isometry; with ``dim_out=1`` a unit row vector.  Deterministic for a
    fixed seed.
    """
    if dim_in < 1 or dim_out < 1:
        raise OutOfRange("dimensions must be >= 1")
    if kraus_count < 1:
        raise OutOfRange("kraus_count must be >= 1")
    g = as_generator(rng)
    shape = (kraus_count, dim_out, dim_in)
    ops = g.uniform(-1.0, 1.0, shape) + 1j * g.uniform(-1.0, 1.0, shape)
    return _right_normalize(ops)


def _right_normalize(ops: np.ndarray) -> Channel:
    """Right-multiply a Kraus stack by ``M^-1/2`` so it becomes TP (on the
    support of M)."""
    from .linalg import psd_inv_sqrt

    m = np.einsum("kai,kaj->ij", ops.conj(), ops, optimize=True)
    inv_sqrt, _, _ = psd_inv_sqrt(m)
    return Channel(ops @ inv_sqrt)


def mix_with_identity(c: Channel, lam: float) -> Channel:
    """Convex mixture ``lam * c + (1 - lam) * id`` on the Choi level."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise OutOfRange(f"mixing weight must be in [0, 1], got {lam}")
    if c.dim_in != c.dim_out:
        raise DimMismatch("mixing with the identity needs a square channel")
    ident = identity_channel(c.dim_in)
    matrix = lam * choi_of(c).matrix + (1.0 - lam) * choi_of(ident).matrix
    return kraus_of(ChoiOperator(dim_in=c.dim_in, dim_out=c.dim_out, matrix=matrix))


@dataclass(frozen=True)
class RandomChannelSpec:
    """Recipe for a reproducible random test channel.

    ``mix_lambda`` is the weight of the random part against the identity
    (1.0 means purely random; requires square dims when below 1).
    """

    dim_in: int
    dim_out: int
    kraus_count: int
    mix_lambda: float = 1.0
    seed: int = 0

    def build(self) -> Channel:
        c = random_channel(self.dim_in, self.dim_out, self.kraus_count, self.seed)
        if self.mix_lambda < 1.0:
            c = mix_with_identity(c, self.mix_lambda)
        return c
