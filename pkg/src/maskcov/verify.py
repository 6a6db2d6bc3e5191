"""Executable oracles for the probabilistic machinery behind the bounds.

Covers chaos decoupling, Gaussian concentration, operator-norm
discretization over nets and regular vectors, linear-form variances,
and the per-direction deviation functional sigma_x with its mean and
Lipschitz bounds.  Exact combinatorial checks report stderr 0;
Monte Carlo checks pass at a fixed 3-standard-error margin.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NotPSDError
from .linalg import as_matrix, spectral_norm, sym_sqrt, symmetrize
from .masks import Mask
from .sampler import SampleBatch, SeedSpec

#: Exhaustive enumeration over regular vectors is capped at this dimension.
MAX_ENUM_DIM = 14

#: Acceptance margin, in standard errors, for Monte Carlo lemma checks.
STDERR_MARGIN = 3.0

_CHUNK = 200_000


@dataclass(frozen=True)
class RegularVectorSet:
    """All unit vectors with exactly s nonzero coordinates equal to +-1/sqrt(s)."""

    p: int
    s: int
    vectors: np.ndarray  # shape (C(p,s) * 2^s, p)


@dataclass(frozen=True)
class LemmaReport:
    lemma: str
    lhs: float
    rhs: float
    stderr: float
    passed: bool
    trials: int


def _report(lemma: str, lhs: float, rhs: float, stderr: float,
            trials: int) -> LemmaReport:
    return LemmaReport(lemma=lemma, lhs=float(lhs), rhs=float(rhs),
                       stderr=float(stderr),
                       passed=bool(lhs <= rhs + STDERR_MARGIN * stderr),
                       trials=int(trials))


def enum_regular(p: int, s: int) -> RegularVectorSet:
    """Enumerate every regular vector of support size s in R^p.

    Supports come in lexicographic order; within a support, sign
    patterns follow binary counting with bit t flipping coordinate t
    of the support (0 -> +, 1 -> -).
    """
    if not 1 <= s <= p:
        raise InputError(f"need 1 <= s <= p, got s={s}, p={p}")
    if p > MAX_ENUM_DIM:
        raise InputError(
            f"regular-vector enumeration capped at p <= {MAX_ENUM_DIM}, got {p}")
    scale = 1.0 / math.sqrt(s)
    signs = np.empty((2 ** s, s))
    for b in range(2 ** s):
        signs[b] = [-scale if (b >> t) & 1 else scale for t in range(s)]
    supports = list(itertools.combinations(range(p), s))
    vectors = np.zeros((len(supports) * 2 ** s, p))
    for i, support in enumerate(supports):
        vectors[i * 2 ** s:(i + 1) * 2 ** s, support] = signs
    return RegularVectorSet(p=p, s=s, vectors=vectors)


_union_cache: dict[int, np.ndarray] = {}


def regular_union(p: int) -> np.ndarray:
    """All regular vectors of every support size, stacked row-wise."""
    if p not in _union_cache:
        _union_cache[p] = np.vstack(
            [enum_regular(p, s).vectors for s in range(1, p + 1)])
    return _union_cache[p]


def _max_over_regular(w: np.ndarray) -> np.ndarray:
    """Row-wise max of <w_row, y> over all regular y, in closed form.

    The best regular y with support size s picks the s largest |w_i|
    with matching signs, giving (sum of top-s |w_i|) / sqrt(s); this is
    exactly the exhaustive maximum, without enumerating y.
    """
    ordered = np.sort(np.abs(w), axis=-1)[..., ::-1]
    cums = np.cumsum(ordered, axis=-1)
    return (cums / np.sqrt(np.arange(1, w.shape[-1] + 1))).max(axis=-1)


def max_bilinear_regular(a) -> float:
    """max <Ax, y> over all pairs of regular vectors x, y."""
    arr = as_matrix(a)
    p = arr.shape[0]
    if arr.shape[0] != arr.shape[1]:
        raise InputError("square matrix required")
    if p > MAX_ENUM_DIM:
        raise InputError(f"enumeration capped at p <= {MAX_ENUM_DIM}, got {p}")
    xs = regular_union(p)
    best = 0.0
    for lo in range(0, xs.shape[0], _CHUNK):
        w = xs[lo:lo + _CHUNK] @ arr.T  # row i = A @ x_i
        best = max(best, float(_max_over_regular(w).max()))
    return best


def reg_norm_bound_check(a) -> LemmaReport:
    """||A|| <= 12 ceil(ln 2p)^2 max over regular x, y of <Ax, y>."""
    arr = as_matrix(a)
    p = arr.shape[0]
    factor = 12.0 * math.ceil(math.log(2 * p)) ** 2
    rhs = factor * max_bilinear_regular(arr)
    count = regular_union(p).shape[0]
    return _report("reg_norm_bound", spectral_norm(arr), rhs, 0.0,
                   count * count)


def circle_net(points: int) -> tuple[np.ndarray, float]:
    """Evenly spaced net on the unit circle with its covering radius delta.

    Any circle point is within arc theta/2 of the net for spacing
    theta = 2 pi / points, i.e. within chord 2 sin(theta/4).
    """
    if points < 4:
        raise InputError(f"need at least 4 net points, got {points}")
    angles = 2.0 * math.pi * np.arange(points) / points
    net = np.column_stack([np.cos(angles), np.sin(angles)])
    return net, 2.0 * math.sin(math.pi / (2.0 * points))


def net_norm_bound_check(a, net, delta: float) -> LemmaReport:
    """||A|| <= (1 - delta)^-2 max over net pairs of <Ax, y>."""
    if not 0.0 <= delta < 1.0:
        raise InputError(f"delta must lie in [0, 1), got {delta}")
    arr = as_matrix(a)
    pts = np.atleast_2d(np.asarray(net, dtype=float))
    if pts.shape[1] != arr.shape[0]:
        raise InputError("net vectors do not match matrix dimension")
    rhs = float((pts @ arr.T @ pts.T).max()) / (1.0 - delta) ** 2
    return _report("net_norm_bound", spectral_norm(arr), rhs, 0.0,
                   pts.shape[0] ** 2)


def linear_form_std(sigma, a) -> float:
    """Standard deviation ||Sigma^{1/2} a||_2 of the linear form <a, Z>."""
    sig = symmetrize(sigma)
    vec = np.asarray(a, dtype=float)
    w = np.linalg.eigvalsh(sig)
    norm = float(np.abs(w).max()) if w.size else 0.0
    if w.min() < -1e-10 * norm:
        raise NotPSDError(f"covariance is not PSD: min eigenvalue {w.min():.3e}")
    value = math.sqrt(max(float(vec @ sig @ vec), 0.0))
    cap = math.sqrt(norm) * float(np.linalg.norm(vec))
    if value > cap + 1e-9:  # pragma: no cover - mathematically impossible
        raise InputError(f"std {value} exceeds sqrt(||Sigma||) ||a|| = {cap}")
    return value


def _gaussian_blocks(factor: np.ndarray, trials: int,
                     rng: np.random.Generator, copies: int = 1):
    """Yield chunks of ``copies`` independent N(0, Sigma) sample blocks."""
    d = factor.shape[0]
    left = trials
    while left > 0:
        size = min(left, max(1, _CHUNK // max(d, 1)))
        yield tuple(rng.standard_normal((size, d)) @ factor
                    for _ in range(copies))
        left -= size


def decoupling_check(family, sigma, trials: int,
                     seed: SeedSpec) -> LemmaReport:
    """Monte Carlo check of chaos decoupling over a family of matrices.

    lhs estimates E sup_A |<AZ, Z> - E<AZ, Z>| with the inner
    expectation computed analytically as trace(A Sigma); rhs estimates
    2 E sup_A |<AZ, Z'>| for an independent copy Z'.
    """
    mats = [symmetrize(m) for m in family]
    if not mats:
        raise InputError("decoupling family must be nonempty")
    if trials < 10_000:
        raise InputError(f"need at least 10^4 trials, got {trials}")
    sig = symmetrize(sigma)
    factor = sym_sqrt(sig)
    traces = np.array([float(np.trace(m @ sig)) for m in mats])
    rng = seed.generator()
    sup_same = np.empty(trials)
    sup_cross = np.empty(trials)
    pos = 0
    for z, zp in _gaussian_blocks(factor, trials, rng, copies=2):
        same = np.abs(np.stack(
            [np.einsum("ti,ij,tj->t", z, m, z) - tr
             for m, tr in zip(mats, traces)])).max(axis=0)
        cross = np.abs(np.stack(
            [np.einsum("ti,ij,tj->t", z, m, zp) for m in mats])).max(axis=0)
        sup_same[pos:pos + same.size] = same
        sup_cross[pos:pos + cross.size] = cross
        pos += same.size
    lhs = sup_same.mean()
    rhs = 2.0 * sup_cross.mean()
    stderr = math.sqrt(sup_same.var(ddof=1) / trials
                       + 4.0 * sup_cross.var(ddof=1) / trials)
    return _report("decoupling_chaos", lhs, rhs, stderr, trials)


_LIPSCHITZ_FNS = {
    "linear": lambda z: z[:, 0],
    "sup-norm": lambda z: np.abs(z).max(axis=1),
    "euclidean-norm": lambda z: np.linalg.norm(z, axis=1),
}


def concentration_check(fn: str, lipschitz: float, sigma, trials: int,
                        t_grid, seed: SeedSpec) -> list[LemmaReport]:
    """Empirical tails of f(Z) - mean against (1/2) exp(-t^2 / 2 L^2 ||Sigma||).

    The empirical mean substitutes E f(Z); one report per t with a
    binomial standard error.
    """
    if fn not in _LIPSCHITZ_FNS:
        raise InputError(
            f"unknown function tag {fn!r}; expected one of {sorted(_LIPSCHITZ_FNS)}")
    if trials < 1:
        raise InputError("need at least one trial")
    sig = symmetrize(sigma)
    factor = sym_sqrt(sig)
    sigma_norm = spectral_norm(sig)
    func = _LIPSCHITZ_FNS[fn]
    rng = seed.generator()
    values = np.empty(trials)
    pos = 0
    for (z,) in _gaussian_blocks(factor, trials, rng):
        values[pos:pos + z.shape[0]] = func(z)
        pos += z.shape[0]
    centered = values - values.mean()
    reports = []
    for t in t_grid:
        tail = float((centered >= t).mean())
        rhs = 0.5 * math.exp(-t * t / (2.0 * lipschitz ** 2 * sigma_norm))
        stderr = math.sqrt(tail * (1.0 - tail) / trials)
        reports.append(_report(f"concentration_{fn}_t{t:g}", tail, rhs,
                               stderr, trials))
    return reports


def sigma_x(mask: Mask, x, batch: SampleBatch) -> float:
    """(1/n) sqrt(sum_k ||M (x o X_k)||_2^2) for a unit direction x."""
    vec = np.asarray(x, dtype=float)
    if vec.shape != (mask.dim,) or batch.dim != mask.dim:
        raise InputError("dimension mismatch between mask, x, and batch")
    if abs(float(np.linalg.norm(vec)) - 1.0) > 1e-9:
        raise InputError("x must be a unit vector")
    scaled = batch.observations * vec  # row k = x o X_k
    return float(np.sqrt((np.square(scaled @ mask.matrix)).sum())) / batch.n


def sigma_x_mean_check(mask: Mask, x, n: int, batches: int,
                       seed: SeedSpec) -> LemmaReport:
    """Monte Carlo mean of sigma_x against ||M||_{1,2} / sqrt(n).

    Batches are drawn from N(0, I), the unit-covariance case the mean
    bound is stated for.
    """
    vec = np.asarray(x, dtype=float)
    if vec.shape != (mask.dim,):
        raise InputError("x does not match the mask dimension")
    if abs(float(np.linalg.norm(vec)) - 1.0) > 1e-9:
        raise InputError("x must be a unit vector")
    if batches < 2:
        raise InputError("need at least 2 batches for a standard error")
    rng = seed.generator()
    p = mask.dim
    vals = np.empty(batches)
    pos = 0
    left = batches
    while left > 0:
        size = min(left, max(1, _CHUNK // max(n * p, 1)))
        blocks = rng.standard_normal((size, n, p))
        vals[pos:pos + size] = np.sqrt(
            np.square((blocks * vec) @ mask.matrix).sum(axis=(1, 2))) / n
        pos += size
        left -= size
    stderr = math.sqrt(vals.var(ddof=1) / batches)
    return _report("sigma_x_mean", vals.mean(),
                   mask.norm_12 / math.sqrt(n), stderr, batches)


def sigma_x_lipschitz_check(mask: Mask, r: int, trials: int, seed: SeedSpec,
                            n: int = 20) -> LemmaReport:
    """Check |sigma_x(B) - sigma_x(B')| <= ||M|| / (sqrt(r) n) * ||B - B'||_F.

    Directions x are drawn uniformly from the regular vectors of
    support size r; lhs is the worst observed ratio against the bound
    (with 1e-9 additive slack), rhs is 1.
    """
    p = mask.dim
    if not 1 <= r <= p or p > MAX_ENUM_DIM:
        raise InputError(f"need 1 <= r <= p <= {MAX_ENUM_DIM}, got r={r}, p={p}")
    xs = enum_regular(p, r).vectors
    rng = seed.generator()
    lip = mask.norm_op / (math.sqrt(r) * n)
    worst = 0.0
    left = trials
    while left > 0:
        size = min(left, max(1, _CHUNK // max(n * p, 1)))
        x = xs[rng.integers(0, xs.shape[0], size=size)]  # (size, p)
        b = rng.standard_normal((size, n, p))
        bp = rng.standard_normal((size, n, p))
        sx = np.sqrt(np.square((b * x[:, None, :]) @ mask.matrix
                               ).sum(axis=(1, 2))) / n
        sxp = np.sqrt(np.square((bp * x[:, None, :]) @ mask.matrix
                                ).sum(axis=(1, 2))) / n
        dist = np.linalg.norm((b - bp).reshape(size, -1), axis=1)
        ratio = np.abs(sx - sxp) / (lip * dist + 1e-9)
        worst = max(worst, float(ratio.max()))
        left -= size
    return _report("sigma_x_lipschitz", worst, 1.0, 0.0, trials)
