"""Dense matrix helpers underpinning the error bounds.

Provides the Hadamard (entrywise) product, the spectral norm, the
column-wise l1->l2 operator norm, and a symmetric PSD square root used
for Gaussian sampling.  Matrices are plain float ndarrays; symmetry is
enforced on construction via :func:`symmetrize`.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, NotPSDError, NumericalError

#: Relative tolerance for accepting a matrix as symmetric.
SYMMETRY_RTOL = 1e-12

#: Eigenvalues above -PSD_CLAMP_RTOL * ||S|| are clamped to zero in sym_sqrt;
#: sample covariances of degenerate models legitimately dip slightly below 0.
PSD_CLAMP_RTOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a 2-d float array with finite entries."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("matrix entries must be finite")
    return arr


def symmetrize(a, rtol: float = SYMMETRY_RTOL) -> np.ndarray:
    """Return (A + A^T)/2, rejecting input that is asymmetric beyond ``rtol``.

    The tolerance is relative to max(1, max|entry|).  Exact symmetrization
    on construction prevents floating-point asymmetry from accumulating.
    """
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise InputError(f"square matrix required, got shape {arr.shape}")
    scale = max(1.0, float(np.abs(arr).max()))
    if float(np.abs(arr - arr.T).max()) > rtol * scale:
        raise InputError("matrix is asymmetric beyond tolerance")
    return (arr + arr.T) / 2.0


def is_symmetric(a: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.abs(a).max()))
    return float(np.abs(a - a.T).max()) <= rtol * scale


def hadamard(a, b) -> np.ndarray:
    """Entrywise product of two same-shaped matrices."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch in hadamard: {a.shape} vs {b.shape}")
    return a * b


def spectral_norm(a) -> float:
    """Largest singular value of ``a``.

    Symmetric input goes through a full symmetric eigendecomposition
    (max |eigenvalue|); anything else through the SVD.  Both are LAPACK
    routines, accurate well past the 1e-10 relative contract.
    """
    arr = as_matrix(a)
    try:
        if is_symmetric(arr):
            return float(np.abs(np.linalg.eigvalsh(arr)).max())
        return float(np.linalg.svd(arr, compute_uv=False)[0])
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"spectral norm failed to converge: {exc}",
                             last_iterate=arr) from exc


def norm_one_two(a) -> float:
    """Maximum Euclidean column norm, the l1 -> l2 operator norm."""
    arr = as_matrix(a)
    return float(np.sqrt((arr * arr).sum(axis=0).max()))


def sym_sqrt(s) -> np.ndarray:
    """Symmetric PSD square root T of ``s`` with T @ T == s up to 1e-8.

    Eigenvalues in [-PSD_CLAMP_RTOL * ||s||, 0) are clamped to zero;
    anything more negative raises :class:`NotPSDError`.
    """
    mat = symmetrize(s)
    try:
        w, v = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"eigendecomposition failed: {exc}",
                             last_iterate=mat) from exc
    norm = float(np.abs(w).max()) if w.size else 0.0
    if w.min() < -PSD_CLAMP_RTOL * norm:
        raise NotPSDError(
            f"matrix is not PSD: min eigenvalue {w.min():.3e} "
            f"below -{PSD_CLAMP_RTOL:g} * ||S|| = {-PSD_CLAMP_RTOL * norm:.3e}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return (root + root.T) / 2.0
