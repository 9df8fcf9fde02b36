"""Dense complex linear algebra for states, operators and channels.

Everything here is a pure function of its inputs. Matrices are plain
``numpy`` arrays of dtype ``complex128``; ``(i, j)`` indexes row ``i`` and
column ``j`` and tensor products use the Kronecker (row-major) ordering, so
the composite index of ``(i1, i2)`` is ``i1 * d2 + i2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, InvalidShapeError

__all__ = [
    "SUPPORT_CUTOFF",
    "SQRT_CLAMP",
    "EigenDecomposition",
    "as_matrix",
    "is_hermitian",
    "hermitize",
    "tensor_product",
    "kron_all",
    "partial_trace",
    "hermitian_eig",
    "hermitian_eigvals",
    "psd_function",
    "sqrt_psd",
    "log_on_support",
    "positive_part",
    "support_mask",
    "schatten_norm",
]

# Eigenvalues at or below this fraction of the largest one are outside the support.
SUPPORT_CUTOFF = 1e-12
# Square roots accept eigenvalues down to -SQRT_CLAMP and clamp them to 0.
SQRT_CLAMP = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition ``A = V diag(eigenvalues) V†``.

    Eigenvalues are ascending; columns of ``eigenvectors`` are orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a: np.ndarray | Sequence) -> np.ndarray:
    """Return ``a`` as a 2-d complex array, rejecting anything else."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise InvalidShapeError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidShapeError(f"expected a square matrix, got shape {m.shape}")


def is_hermitian(a: np.ndarray) -> bool:
    """Entrywise Hermiticity test relative to ``max(1, ‖A‖_F)``."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(m)))
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= 1e-12 * scale)


def hermitize(a: np.ndarray) -> np.ndarray:
    """Symmetrize ``(A + A†)/2``; removes drift left by repeated products."""
    m = as_matrix(a)
    _require_square(m)
    return 0.5 * (m + m.conj().T)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``A ⊗ B``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Left-to-right Kronecker product of a non-empty sequence."""
    out = None
    for f in factors:
        out = as_matrix(f) if out is None else np.kron(out, f)
    if out is None:
        raise InvalidShapeError("kron_all needs at least one factor")
    return out


def partial_trace(a: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    a : ndarray
        Square operator on ``⊗_k C^{dims[k]}``.
    dims : sequence of int
        Subsystem dimensions; their product must equal ``a.shape[0]``.
    keep : iterable of int
        Subsystems to retain. The result keeps them in their original order.

    Raises
    ------
    InvalidShapeError
        If ``a`` is not square, ``dims`` does not factor its size, or a
        subsystem index is out of range.
    """
    m = np.asarray(a)
    dims = [int(x) for x in dims]
    keep_set = sorted(set(int(k) for k in keep))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidShapeError(f"partial_trace needs a square matrix, got {m.shape}")
    if any(x < 1 for x in dims) or int(np.prod(dims)) != m.shape[0]:
        raise InvalidShapeError(f"dims {dims} do not factor a matrix of size {m.shape[0]}")
    n = len(dims)
    if any(k < 0 or k >= n for k in keep_set):
        raise InvalidShapeError(f"keep {keep_set} out of range for {n} subsystems")
    if n > 26:
        raise InvalidShapeError("at most 26 subsystems are supported")

    letters = "abcdefghijklmnopqrstuvwxyz"
    upper = letters.upper()
    row = list(letters[:n])
    col = [letters[k] if k not in keep_set else upper[k] for k in range(n)]
    out = "".join(letters[k] for k in keep_set) + "".join(upper[k] for k in keep_set)
    spec = "".join(row) + "".join(col) + "->" + out
    kept = int(np.prod([dims[k] for k in keep_set])) if keep_set else 1
    return np.einsum(spec, m.reshape(dims + dims)).reshape(kept, kept)


def hermitian_eig(a: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of the Hermitian part of ``a``.

    The input is symmetrized first; eigenvalues come back ascending.

    Raises
    ------
    InvalidShapeError
        If ``a`` is not square.
    """
    m = as_matrix(a)
    _require_square(m)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return EigenDecomposition(w, v)


def hermitian_eigvals(a: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of the Hermitian part of ``a``."""
    m = np.asarray(a, dtype=complex)
    _require_square(m)
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def psd_function(a: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Spectral calculus ``V fn(Λ) V†`` on the Hermitian part of ``a``."""
    eig = hermitian_eig(a)
    vals = np.asarray(fn(eig.eigenvalues), dtype=complex)
    v = eig.eigenvectors
    return (v * vals) @ v.conj().T


def sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues in ``[-1e-10, 0)`` clamp to 0.

    Raises
    ------
    DomainError
        If an eigenvalue is below ``-1e-10``.
    """

    def fn(w: np.ndarray) -> np.ndarray:
        if w.size and w[0] < -SQRT_CLAMP:
            raise DomainError(f"sqrt of a non-PSD matrix (eigenvalue {w[0]:.3g})")
        return np.sqrt(np.maximum(w, 0.0))

    return psd_function(a, fn)


def support_mask(eigenvalues: np.ndarray) -> np.ndarray:
    """Boolean mask of eigenvalues above ``SUPPORT_CUTOFF · λ_max``."""
    w = np.asarray(eigenvalues, dtype=float)
    top = float(np.max(w, initial=0.0))
    if top <= 0.0:
        return np.zeros(w.shape, dtype=bool)
    return w > SUPPORT_CUTOFF * top


def log_on_support(a: np.ndarray) -> np.ndarray:
    """Natural log on the support of a PSD matrix; 0 on its kernel."""

    def fn(w: np.ndarray) -> np.ndarray:
        mask = support_mask(w)
        out = np.zeros_like(w)
        out[mask] = np.log(w[mask])
        return out

    return psd_function(a, fn)


def positive_part(a: np.ndarray) -> np.ndarray:
    """Positive part ``X₊``: non-positive eigenvalues become exactly 0."""
    return psd_function(a, lambda w: np.where(w > 0.0, w, 0.0))


def schatten_norm(a: np.ndarray, p: float | str) -> float:
    """Schatten norm for ``p`` in ``{1, 2, inf}``.

    Hermitian inputs use ``|eigenvalues|``; anything else uses singular values.
    """
    m = as_matrix(a)
    if p in (np.inf, "inf", "∞"):
        key = np.inf
    elif p in (1, 2):
        key = float(p)
    else:
        raise ValueError(f"unsupported Schatten index {p!r}; use 1, 2 or inf")
    if m.shape[0] == m.shape[1] and is_hermitian(m):
        s = np.abs(hermitian_eigvals(m))
    else:
        s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0:
        return 0.0
    if key == np.inf:
        return float(np.max(s))
    if key == 1.0:
        return float(np.sum(s))
    return float(np.sqrt(np.sum(s * s)))
