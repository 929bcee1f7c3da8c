"""Reference encoder/decoder pairs: the five-bit code and the do-nothing code.

An error correcting code is a pair of channels (E, D): the encoder E embeds a
``d0``-dimensional logical system into the channel's input space, the decoder
D maps the channel's output back.  ``D after E`` must be the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .channel import (
    Channel,
    channel_fidelity,
    channel_from_json,
    channel_to_json,
    compose,
    compress,
    identity_channel,
)
from .errors import DimMismatch, OutOfRange, ShapeMismatch
from .standard import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z

__all__ = ["CodePair", "five_bit_code", "trivial_code", "code_fidelity",
           "code_to_json", "code_from_json"]

# generators of the five-bit code's stabilizer group (cyclic shifts of XZZXI)
_GENERATORS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
_PAULI = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


@dataclass(frozen=True)
class CodePair:
    """Encoder (d0 -> d1) and decoder (d2 -> d0) around a d1 -> d2 channel."""

    encoder: Channel
    decoder: Channel

    def __post_init__(self):
        if self.encoder.dim_in != self.decoder.dim_out:
            raise DimMismatch(
                f"encoder dim_in {self.encoder.dim_in} != decoder dim_out "
                f"{self.decoder.dim_out}"
            )

    @property
    def d0(self) -> int:
        return self.encoder.dim_in

    @property
    def d1(self) -> int:
        return self.encoder.dim_out

    @property
    def d2(self) -> int:
        return self.decoder.dim_in


def _pauli_string(s: str) -> np.ndarray:
    return reduce(np.kron, (_PAULI[c] for c in s))


def five_bit_code() -> CodePair:
    """The five-qubit code protecting one qubit against any single-qubit error.

    The encoder is the isometry onto the joint +1 eigenspace of the four
    stabilizer generators (cyclic shifts of XZZXI); logical operators are
    X..X and Z..Z.  The decoder measures the syndrome, applies the matching
    single-qubit correction and reads the logical qubit out: Kraus operators
    ``V^+ sigma_s P_s`` over all 16 syndromes ``s``.
    """
    gens = [_pauli_string(g) for g in _GENERATORS]
    dim = 32
    eye = np.eye(dim, dtype=np.complex128)

    code_proj = eye.copy()
    for g in gens:
        code_proj = code_proj @ (eye + g) / 2.0

    # |0_L> from projecting |00000>; |1_L> via the logical flip X..X
    v0 = code_proj[:, 0]
    v0 = v0 / np.linalg.norm(v0)
    v1 = _pauli_string("XXXXX") @ v0
    v = np.stack([v0, v1], axis=1)  # (32, 2) isometry

    # correction table: syndrome bits = anticommutation pattern with the generators
    corrections: dict[tuple[int, ...], np.ndarray] = {}
    candidates = [eye] + [
        _pauli_string("I" * i + p + "I" * (4 - i)) for i in range(5) for p in "XYZ"
    ]
    for sigma in candidates:
        syndrome = tuple(
            int(not np.allclose(sigma @ g, g @ sigma)) for g in gens
        )
        if syndrome in corrections:
            raise ShapeMismatch("stabilizer generators do not separate single errors")
        corrections[syndrome] = sigma

    kraus = []
    for syndrome, sigma in corrections.items():
        proj = eye.copy()
        for bit, g in zip(syndrome, gens):
            proj = proj @ (eye + (-1) ** bit * g) / 2.0
        kraus.append(v.conj().T @ sigma @ proj)
    encoder = Channel([v], dim_in=2, dim_out=dim)
    decoder = Channel(kraus, dim_in=dim, dim_out=2)
    return CodePair(encoder=encoder, decoder=decoder)


def trivial_code(n: int) -> CodePair:
    """Do-nothing code on ``n`` qubits: logical qubit in tensor slot 0,
    ancillas prepared in |0>, decoder traces the ancillas out."""
    if n < 1:
        raise OutOfRange(f"need n >= 1 qubits, got {n}")
    if n == 1:
        ident = identity_channel(2)
        return CodePair(encoder=ident, decoder=ident)
    anc = 2 ** (n - 1)
    zero = np.zeros((anc, 1), dtype=np.complex128)
    zero[0, 0] = 1.0
    encoder = Channel([np.kron(PAULI_I, zero)], dim_in=2, dim_out=2 * anc)
    rows = np.eye(anc, dtype=np.complex128)
    decoder = Channel(
        [np.kron(PAULI_I, rows[b : b + 1]) for b in range(anc)],
        dim_in=2 * anc,
        dim_out=2,
    )
    return CodePair(encoder=encoder, decoder=decoder)


def code_fidelity(code: CodePair, t: Channel) -> float:
    """Corrected fidelity ``F(D after T after E)`` with the identity.

    Large intermediate Kraus sets (the products of T and E) are compressed
    through the Choi spectrum before the final composition; the value is
    unchanged, only the representation shrinks.
    """
    if t.dim_in != code.d1 or t.dim_out != code.d2:
        raise DimMismatch(
            f"channel {t.dim_in}->{t.dim_out} does not fit code "
            f"{code.d1}->{code.d2}"
        )
    te = compose(t, code.encoder)
    if te.kraus_count > te.dim_in * te.dim_out:
        te = compress(te)
    return channel_fidelity(compose(code.decoder, te))


def code_to_json(code: CodePair) -> dict:
    return {
        "d0": code.d0,
        "d1": code.d1,
        "d2": code.d2,
        "encoder": channel_to_json(code.encoder),
        "decoder": channel_to_json(code.decoder),
    }


def code_from_json(obj: dict) -> CodePair:
    try:
        encoder = channel_from_json(obj["encoder"])
        decoder = channel_from_json(obj["decoder"])
        d0, d1, d2 = int(obj["d0"]), int(obj["d1"]), int(obj["d2"])
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed code object: {exc}") from exc
    if (encoder.dim_in, encoder.dim_out) != (d0, d1):
        raise ShapeMismatch("encoder dims disagree with d0/d1")
    if (decoder.dim_in, decoder.dim_out) != (d2, d0):
        raise ShapeMismatch("decoder dims disagree with d2/d0")
    return CodePair(encoder=encoder, decoder=decoder)
