"""Mask constructors: minors, banding, tapering, hard thresholding.

Every mask caches the three statistics that drive the error bounds:
max column nonzeros m, the max column norm ||M||_{1,2}, and the
spectral norm ||M||.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InputError
from .linalg import norm_one_two, spectral_norm, symmetrize

KINDS = ("minor", "banded", "taper", "threshold", "custom")


@dataclass(frozen=True)
class Mask:
    matrix: np.ndarray
    max_col_nnz: int
    norm_12: float
    norm_op: float
    kind: str

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _build(matrix: np.ndarray, kind: str) -> Mask:
    mat = symmetrize(matrix)
    return Mask(matrix=mat,
                max_col_nnz=int((mat != 0.0).sum(axis=0).max()),
                norm_12=norm_one_two(mat),
                norm_op=spectral_norm(mat),
                kind=kind)


def minor_mask(p: int, indices: Iterable[int]) -> Mask:
    """All-ones on S x S for an index set S, zero elsewhere."""
    s = sorted(set(int(i) for i in indices))
    if not s:
        raise InputError("minor index set must be nonempty")
    if s[0] < 0 or s[-1] >= p:
        raise InputError(f"minor indices must lie in [0, {p}), got {s}")
    mat = np.zeros((p, p))
    mat[np.ix_(s, s)] = 1.0
    return _build(mat, "minor")


def banded_mask(p: int, k: int) -> Mask:
    """Ones on the 2k+1 central diagonals: entry (i, j) is 1 iff |i-j| <= k."""
    if not 0 <= k <= p - 1:
        raise InputError(f"half-bandwidth must lie in [0, {p - 1}], got {k}")
    idx = np.arange(p)
    mat = (np.abs(idx[:, None] - idx[None, :]) <= k).astype(float)
    return _build(mat, "banded")


def taper_mask(p: int, k: int) -> Mask:
    """Trapezoid taper: weight 1 up to distance k/2, linear decay to 0 at k.

    ``k`` must be even with 2 <= k <= 2(p-1).
    """
    if k % 2 != 0 or not 2 <= k <= 2 * (p - 1):
        raise InputError(
            f"taper width must be even with 2 <= k <= {2 * (p - 1)}, got {k}")
    idx = np.arange(p)
    dist = np.abs(idx[:, None] - idx[None, :])
    mat = np.clip(2.0 - 2.0 * dist / k, 0.0, 1.0)
    return _build(mat, "taper")


def threshold_mask(sigma_hat, h: float) -> Mask:
    """Keep entries of |sigma_hat| >= h plus the full diagonal."""
    if h <= 0:
        raise InputError(f"threshold must be positive, got {h}")
    sig = symmetrize(sigma_hat)
    mat = ((np.abs(sig) >= h) | np.eye(sig.shape[0], dtype=bool)).astype(float)
    return _build(mat, "threshold")


def custom_mask(matrix) -> Mask:
    """Cache statistics for an arbitrary symmetric mask."""
    return _build(np.asarray(matrix, dtype=float), "custom")


def mask_from_spec(spec: dict, p: int, sigma_hat=None) -> Mask:
    """Build a mask from its JSON config object.

    Threshold masks are estimated from data, so ``sigma_hat`` must be
    supplied for them.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError(f"mask spec must be an object with a 'kind': {spec!r}")
    kind = spec["kind"]
    if kind == "minor":
        return minor_mask(p, spec["S"])
    if kind == "banded":
        return banded_mask(p, int(spec["k"]))
    if kind == "taper":
        return taper_mask(p, int(spec["k"]))
    if kind == "threshold":
        if sigma_hat is None:
            raise InputError("threshold mask needs a sample covariance")
        return threshold_mask(sigma_hat, float(spec["h"]))
    if kind == "custom":
        from .serialize import matrix_from_csv

        return custom_mask(matrix_from_csv(spec["path"]))
    raise InputError(f"unknown mask kind {kind!r}; expected one of {KINDS}")
