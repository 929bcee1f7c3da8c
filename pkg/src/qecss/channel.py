"""Quantum channels in Kraus form and their Choi (Jamiolkowski) duals.

A channel S from a ``dim_in``-dimensional system to a ``dim_out``-dimensional
one acts in the Schroedinger picture as

    S(rho) = sum_i s_i rho s_i^+ ,      sum_i s_i^+ s_i = I   (trace preserving)

with Kraus operators ``s_i`` of shape ``(dim_out, dim_in)``.

Vectorization is row-major: ``|s>>`` stacks the rows of ``s``, so the
Hilbert-Schmidt inner product is ``<<x|y>> = tr(x^+ y) = vec(x)^+ vec(y)``.
The Choi operator acts on that vector space,

    Choi(S) = sum_i |s_i>> <<s_i| ,
    Choi(S)[a*dim_in + mu, b*dim_in + nu] = <a| S(|mu><nu|) |b> ,

and S is completely positive iff Choi(S) is positive semidefinite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotPSD, OutOfRange, ShapeMismatch, ZeroMatrix
from .linalg import hermitian_eigensystem

__all__ = [
    "Channel",
    "ChoiOperator",
    "ValidationReport",
    "identity_channel",
    "validate_channel",
    "choi_of",
    "kraus_of",
    "apply",
    "compose",
    "tensor_product",
    "tensor_power",
    "compress",
    "channel_fidelity",
    "channel_to_json",
    "channel_from_json",
]


class Channel:
    """A completely positive map given by a nonempty stack of Kraus operators.

    Parameters
    ----------
    kraus : sequence of (dim_out, dim_in) complex matrices, or a 3-d array
    dim_in, dim_out : optional dimension checks against the operator shapes

    The Kraus stack is stored as a read-only ``(k, dim_out, dim_in)``
    complex128 array.  Trace preservation is not enforced at construction;
    see :func:`validate_channel`.
    """

    __slots__ = ("dim_in", "dim_out", "kraus")

    def __init__(self, kraus, dim_in: int | None = None, dim_out: int | None = None):
        try:
            arr = np.array(kraus, dtype=np.complex128)
        except (ValueError, TypeError) as exc:
            raise ShapeMismatch(f"Kraus operators do not stack: {exc}") from exc
        if arr.ndim == 2:
            arr = arr[None, :, :]
        if arr.ndim != 3 or arr.shape[0] == 0 or arr.shape[1] == 0 or arr.shape[2] == 0:
            raise ShapeMismatch(f"expected a nonempty stack of matrices, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ShapeMismatch("Kraus operators contain non-finite entries")
        k, rows, cols = arr.shape
        if dim_out is not None and rows != dim_out:
            raise ShapeMismatch(f"Kraus rows {rows} != dim_out {dim_out}")
        if dim_in is not None and cols != dim_in:
            raise ShapeMismatch(f"Kraus cols {cols} != dim_in {dim_in}")
        arr.setflags(write=False)
        object.__setattr__(self, "kraus", arr)
        object.__setattr__(self, "dim_in", cols)
        object.__setattr__(self, "dim_out", rows)

    def __setattr__(self, name, value):  # immutable by contract
        raise AttributeError("Channel is immutable")

    @property
    def kraus_count(self) -> int:
        return self.kraus.shape[0]

    def __repr__(self) -> str:
        return f"Channel(dim_in={self.dim_in}, dim_out={self.dim_out}, kraus_count={self.kraus_count})"


@dataclass(frozen=True)
class ChoiOperator:
    """Choi matrix of a CP map; ``matrix`` is (dim_in*dim_out) square, Hermitian."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        n = self.dim_in * self.dim_out
        if m.shape != (n, n):
            raise ShapeMismatch(f"Choi matrix shape {m.shape} != ({n}, {n})")
        scale = np.linalg.norm(m)
        if scale > 0 and np.linalg.norm(m - m.conj().T) > 1e-10 * scale:
            raise ShapeMismatch("Choi matrix is not Hermitian within 1e-10")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class ValidationReport:
    """Numerical defects of a channel: distance from CP (Choi negativity),
    distance from TP (Frobenius), and the Choi rank."""

    cp_defect: float
    tp_defect: float
    kraus_rank: int


def identity_channel(dim: int) -> Channel:
    """The identity map on a ``dim``-dimensional system."""
    if dim < 1:
        raise OutOfRange(f"dimension must be >= 1, got {dim}")
    return Channel([np.eye(dim, dtype=np.complex128)])


def validate_channel(c: Channel, tol: float = 1e-12) -> ValidationReport:
    """Measure how far ``c`` is from a CPTP map.

    ``tp_defect`` is ``||sum_i s_i^+ s_i - I||_F``; ``cp_defect`` is the
    magnitude of the most negative Choi eigenvalue (0 for Kraus-built
    channels up to roundoff); ``kraus_rank`` counts Choi eigenvalues above
    ``tol * lambda_max``.
    """
    k = c.kraus
    m = np.einsum("kai,kaj->ij", k.conj(), k, optimize=True)
    tp_defect = float(np.linalg.norm(m - np.eye(c.dim_in)))
    vals = hermitian_eigensystem(choi_of(c).matrix).eigenvalues
    cp_defect = float(max(0.0, -vals.min()))
    lmax = float(vals[0])
    kraus_rank = int((vals > tol * lmax).sum()) if lmax > 0 else 0
    return ValidationReport(cp_defect=cp_defect, tp_defect=tp_defect, kraus_rank=kraus_rank)


def choi_of(c: Channel) -> ChoiOperator:
    """Choi matrix ``sum_i |s_i>><<s_i|`` of a channel."""
    v = c.kraus.reshape(c.kraus_count, c.dim_out * c.dim_in)
    matrix = v.T @ v.conj()
    matrix = (matrix + matrix.conj().T) / 2
    return ChoiOperator(dim_in=c.dim_in, dim_out=c.dim_out, matrix=matrix)


def kraus_of(j: ChoiOperator, cutoff: float = 1e-12) -> Channel:
    """Minimal Kraus form of a PSD Choi operator.

    Eigenpairs with eigenvalue above ``cutoff * lambda_max`` become Kraus
    operators ``sqrt(lam) * unvec(v)``; the Kraus count equals the numerical
    Choi rank.
    """
    eig = hermitian_eigensystem(j.matrix)
    vals, vecs = eig.eigenvalues, eig.eigenvectors
    lmax = float(vals[0])
    if lmax <= 0.0:
        raise ZeroMatrix("Choi operator has no positive spectrum")
    if vals.min() < -1e-8 * lmax:
        raise NotPSD(f"Choi eigenvalue {vals.min():.3e} below -1e-8 * lambda_max")
    keep = vals > cutoff * lmax
    ops = (np.sqrt(vals[keep])[:, None] * vecs[:, keep].T).reshape(-1, j.dim_out, j.dim_in)
    return Channel(ops, dim_in=j.dim_in, dim_out=j.dim_out)


def apply(c: Channel, rho: np.ndarray) -> np.ndarray:
    """Act on an operator: ``sum_i s_i rho s_i^+``."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (c.dim_in, c.dim_in):
        raise DimMismatch(f"state shape {rho.shape} != ({c.dim_in}, {c.dim_in})")
    return np.einsum("iab,bc,idc->ad", c.kraus, rho, c.kraus.conj(), optimize=True)


def compose(outer: Channel, inner: Channel) -> Channel:
    """Serial composition ``outer after inner``; Kraus set is all products."""
    if inner.dim_out != outer.dim_in:
        raise DimMismatch(
            f"cannot compose: inner dim_out {inner.dim_out} != outer dim_in {outer.dim_in}"
        )
    prods = np.einsum("aij,bjk->abik", outer.kraus, inner.kraus, optimize=True)
    return Channel(
        prods.reshape(-1, outer.dim_out, inner.dim_in),
        dim_in=inner.dim_in,
        dim_out=outer.dim_out,
    )


def tensor_product(a: Channel, b: Channel) -> Channel:
    """Parallel composition ``a (x) b`` acting on the joint system."""
    ops = np.einsum("iab,jcd->ijacbd", a.kraus, b.kraus, optimize=True)
    return Channel(
        ops.reshape(a.kraus_count * b.kraus_count, a.dim_out * b.dim_out, a.dim_in * b.dim_in),
        dim_in=a.dim_in * b.dim_in,
        dim_out=a.dim_out * b.dim_out,
    )


def tensor_power(c: Channel, n: int) -> Channel:
    """``n`` independent copies of ``c`` in parallel."""
    if n < 1:
        raise OutOfRange(f"tensor power needs n >= 1, got {n}")
    out = c
    for _ in range(n - 1):
        out = tensor_product(out, c)
    return out


def compress(c: Channel, cutoff: float = 1e-12) -> Channel:
    """Re-derive a minimal Kraus set through the Choi spectrum.

    The returned channel implements the same map; the Kraus count drops to
    the numerical Choi rank (never above ``dim_in * dim_out``).
    """
    return kraus_of(choi_of(c), cutoff=cutoff)


def channel_fidelity(c: Channel) -> float:
    """Overlap with the identity: ``dim^-2 sum_i |tr s_i|^2``.

    Equals the maximally entangled state's survival probability
    ``<Omega| (id (x) S)(|Omega><Omega|) |Omega>``; defined for square
    channels only.
    """
    if c.dim_in != c.dim_out:
        raise DimMismatch(f"fidelity needs dim_in == dim_out, got {c.dim_in} != {c.dim_out}")
    traces = np.trace(c.kraus, axis1=1, axis2=2)
    return float((np.abs(traces) ** 2).sum() / c.dim_in**2)


def channel_to_json(c: Channel) -> dict:
    """JSON-ready dict: entries as [re, im] pairs in row-major order."""
    ops = [
        [[float(z.real), float(z.imag)] for z in op.reshape(-1)]
        for op in c.kraus
    ]
    return {"dim_in": c.dim_in, "dim_out": c.dim_out, "kraus": ops}


def channel_from_json(obj: dict) -> Channel:
    """Inverse of :func:`channel_to_json`; raises on malformed input."""
    try:
        dim_in = int(obj["dim_in"])
        dim_out = int(obj["dim_out"])
        raw = obj["kraus"]
        ops = np.array(
            [[complex(re, im) for re, im in op] for op in raw], dtype=np.complex128
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed channel object: {exc}") from exc
    if dim_in < 1 or dim_out < 1:
        raise ShapeMismatch("channel dimensions must be positive")
    if ops.ndim != 2 or ops.shape[1] != dim_in * dim_out:
        raise ShapeMismatch(
            f"each Kraus operator needs dim_in*dim_out = {dim_in * dim_out} entries"
        )
    return Channel(ops.reshape(-1, dim_out, dim_in), dim_in=dim_in, dim_out=dim_out)
