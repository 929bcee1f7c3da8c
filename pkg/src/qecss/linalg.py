"""Dense complex linear algebra used by the channel machinery.

Matrices are numpy ``complex128`` arrays throughout.  Vectorization of a
matrix, wherever it appears in this package, is row-major (C order): the
vector of ``s`` stacks the rows of ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEigenvalue, NonSquare, NotHermitian, ZeroMatrix

__all__ = ["EigenSystem", "kron", "hermitian_eigensystem", "psd_inv_sqrt"]

# relative asymmetry above this is an error, below it we symmetrize silently
_HERM_TOL = 1e-8
# eigenvalues below -1e-8 * lambda_max are an error; small negatives clamp to 0
_NEG_TOL = 1e-8


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are sorted descending; ``eigenvectors[:, k]`` is the
    orthonormal eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the row-major index convention.

    ``kron(a, b)[i*rb + k, j*cb + l] == a[i, j] * b[k, l]`` where ``(rb, cb)``
    is the shape of ``b``.
    """
    return np.kron(np.asarray(a), np.asarray(b))


def hermitian_eigensystem(a: np.ndarray) -> EigenSystem:
    """Eigenvalues (descending) and eigenvectors of a Hermitian matrix.

    The input is symmetrized as ``(a + a^+)/2`` before decomposition; relative
    asymmetry beyond 1e-8 raises :class:`NotHermitian`.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {a.shape}")
    scale = np.linalg.norm(a)
    if scale > 0 and np.linalg.norm(a - a.conj().T) > _HERM_TOL * scale:
        raise NotHermitian("matrix is not Hermitian within relative tolerance 1e-8")
    sym = (a + a.conj().T) / 2
    vals, vecs = np.linalg.eigh(sym)
    order = slice(None, None, -1)
    return EigenSystem(np.ascontiguousarray(vals[order]), np.ascontiguousarray(vecs[:, order]))


def psd_inv_sqrt(a: np.ndarray, cutoff: float = 1e-12) -> tuple[np.ndarray, np.ndarray, int]:
    """Pseudo-inverse square root of a PSD matrix.

    Eigenvalues at or below ``cutoff * lambda_max`` are treated as zero, so the
    result is the inverse square root on the support of ``a`` only.

    Returns
    -------
    (inv_sqrt, support_projector, rank)
        ``inv_sqrt @ a @ inv_sqrt == support_projector`` and for nonsingular
        ``a`` the projector is the identity.

    Raises
    ------
    NegativeEigenvalue
        if some eigenvalue is below ``-1e-8 * lambda_max``.
    ZeroMatrix
        if ``a`` has no positive spectrum at all.
    """
    eig = hermitian_eigensystem(a)
    vals, vecs = eig.eigenvalues, eig.eigenvectors
    scale = float(np.abs(vals).max(initial=0.0))
    if scale == 0.0:
        raise ZeroMatrix("zero matrix has no inverse square root")
    if vals.min() < -_NEG_TOL * scale:
        raise NegativeEigenvalue(
            f"eigenvalue {vals.min():.3e} below -1e-8 * lambda_max ({scale:.3e})"
        )
    lmax = float(vals[0])
    if lmax <= 0.0:
        raise ZeroMatrix("matrix has no positive eigenvalues")
    keep = vals > cutoff * lmax
    rank = int(keep.sum())
    v = vecs[:, keep]
    inv_sqrt = (v / np.sqrt(vals[keep])) @ v.conj().T
    projector = v @ v.conj().T
    return inv_sqrt, projector, rank
