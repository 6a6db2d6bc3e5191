"""Seeded Monte Carlo experiment runner.

Sweeps sample sizes and replicates, estimates the masked estimation
error ||M . Sigma_hat_n - M . Sigma|| in spectral norm, attaches the
closed-form bounds to every trial, and fits log-log scaling exponents.
Identical configs reproduce identical output bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import bound_bai_yin, bound_minor, bound_refined, bound_theorem_main
from .errors import CheckFailedError, InputError
from .linalg import hadamard, spectral_norm
from .masks import Mask, mask_from_spec
from .sampler import (GaussianModel, SeedSpec, decoupled_covariance,
                      draw_samples, mix64, sample_covariance,
                      sample_covariance_centered)
from .serialize import matrix_from_csv

#: Finite-sample tolerance policy, echoed into run metadata.  The
#: asymptotic envelopes carry o(1) terms, so the harness checks them
#: with a multiplicative band rather than as hard bounds.
POLICY = {
    "minor_envelope_factor": 1.3,
    "identity_band": [0.5, 3.0],
    "default_replicates": 200,
    "stderr_margin": 3.0,
}

_BOUND_ORDER = ("refined", "theorem_main", "bai_yin", "minor", "decoupled")


@dataclass(frozen=True)
class ExperimentConfig:
    sigma_spec: dict
    mask_spec: dict
    n_grid: tuple
    p: int
    replicates: int
    master_seed: int
    centered: bool = False
    error_metric: str = "absolute"

    def __post_init__(self):
        if self.p < 1:
            raise InputError(f"p must be >= 1, got {self.p}")
        if self.replicates < 1:
            raise InputError(f"replicates must be >= 1, got {self.replicates}")
        grid = tuple(int(n) for n in self.n_grid)
        if not grid or list(grid) != sorted(grid) or len(set(grid)) != len(grid):
            raise InputError(f"n_grid must be nonempty ascending, got {grid}")
        if grid[0] < 1:
            raise InputError("sample sizes must be >= 1")
        object.__setattr__(self, "n_grid", grid)
        if self.error_metric not in ("absolute", "relative"):
            raise InputError(
                f"error_metric must be absolute|relative, got {self.error_metric!r}")
        if self.sigma_spec.get("kind") == "ar1":
            rho = float(self.sigma_spec.get("rho", 0.0))
            if not -1.0 < rho < 1.0:
                raise InputError(f"ar1 rho must lie in (-1, 1), got {rho}")

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        try:
            return cls(sigma_spec=dict(obj["sigma"]),
                       mask_spec=dict(obj["mask"]),
                       n_grid=tuple(obj["n_grid"]),
                       p=int(obj["p"]),
                       replicates=int(obj["replicates"]),
                       master_seed=int(obj["master_seed"]),
                       centered=bool(obj.get("centered", False)),
                       error_metric=str(obj.get("error_metric", "absolute")))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed experiment config: {exc}") from exc

    def to_dict(self) -> dict:
        return {"sigma": self.sigma_spec, "mask": self.mask_spec,
                "n_grid": list(self.n_grid), "p": self.p,
                "replicates": self.replicates,
                "master_seed": self.master_seed, "centered": self.centered,
                "error_metric": self.error_metric}


@dataclass(frozen=True)
class TrialResult:
    n: int
    p: int
    m: int
    replicate: int
    error: float
    bounds: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScalingReport:
    axis: str
    slope: float
    slope_stderr: float
    intercept: float
    points: int


def build_model(config: ExperimentConfig) -> GaussianModel:
    spec = config.sigma_spec
    kind = spec.get("kind")
    if kind == "identity":
        return GaussianModel.identity(config.p)
    if kind == "zero":
        return GaussianModel.from_covariance(np.zeros((config.p, config.p)))
    if kind == "ar1":
        return GaussianModel.ar1(config.p, float(spec["rho"]))
    if kind == "custom":
        model = GaussianModel.from_covariance(matrix_from_csv(spec["path"]))
        if model.dim != config.p:
            raise InputError(
                f"custom covariance is {model.dim}x{model.dim}, config p={config.p}")
        return model
    raise InputError(f"unknown sigma kind {kind!r}")


def _is_binary(mask: Mask) -> bool:
    return bool(np.isin(mask.matrix, (0.0, 1.0)).all())


def _trial_bounds(mask: Mask, n: int, p: int, sigma_norm: float) -> dict:
    out = {
        "refined": bound_refined(mask.norm_12, mask.norm_op, n, p,
                                 sigma_norm).value,
        "theorem_main": bound_theorem_main(mask.norm_12, mask.norm_op, n, p,
                                           sigma_norm, c=1.0).value,
        "bai_yin": bound_bai_yin(p, n, sigma_norm).value,
    }
    if _is_binary(mask):
        out["minor"] = bound_minor(mask.max_col_nnz, n, sigma_norm).value
    return out


def _run(config: ExperimentConfig, decoupled: bool) -> list:
    model = build_model(config)
    static_mask = None
    if config.mask_spec.get("kind") != "threshold":
        static_mask = mask_from_spec(config.mask_spec, config.p)
    # relative metric divides errors and bounds alike by ||Sigma||
    divisor = 1.0
    if config.error_metric == "relative" and model.sigma_norm > 0.0:
        divisor = model.sigma_norm
    results = []
    for ni, n in enumerate(config.n_grid):
        for rep in range(config.replicates):
            batch = draw_samples(
                model, n, SeedSpec(config.master_seed, mix64(ni, rep, 0)))
            sigma_hat = (sample_covariance_centered(batch) if config.centered
                         else sample_covariance(batch))
            mask = static_mask or mask_from_spec(config.mask_spec, config.p,
                                                 sigma_hat=sigma_hat)
            err = spectral_norm(
                hadamard(mask.matrix, sigma_hat - model.sigma)) / divisor
            bnds = _trial_bounds(mask, n, config.p,
                                 model.sigma_norm / divisor)
            if err > bnds["refined"] * (1.0 + 1e-12) + 1e-12:
                raise CheckFailedError(
                    f"explicit-constant bound violated at n={n} replicate={rep}: "
                    f"error {err} > refined bound {bnds['refined']}")
            if decoupled:
                prime = draw_samples(
                    model, n, SeedSpec(config.master_seed, mix64(ni, rep, 1)))
                bnds["decoupled"] = 2.0 * spectral_norm(hadamard(
                    mask.matrix, decoupled_covariance(batch, prime))) / divisor
            results.append(TrialResult(n=n, p=config.p, m=mask.max_col_nnz,
                                       replicate=rep, error=err, bounds=bnds))
    return results


def run_error_experiment(config: ExperimentConfig) -> list:
    """Estimation-error sweep over (n_grid x replicates)."""
    return _run(config, decoupled=False)


def run_decoupled_experiment(config: ExperimentConfig) -> list:
    """Sweep recording both the error and 2 ||M . Sigma'_n|| per replicate.

    Asserts, per sample size, that the mean error does not exceed the
    mean decoupled value by more than 3 combined standard errors.
    """
    results = _run(config, decoupled=True)
    for n in config.n_grid:
        errs = np.array([t.error for t in results if t.n == n])
        decs = np.array([t.bounds["decoupled"] for t in results if t.n == n])
        if errs.size < 2:
            continue  # no stderr from a single replicate
        stderr = math.sqrt(errs.var(ddof=1) / errs.size
                           + decs.var(ddof=1) / decs.size)
        if errs.mean() > decs.mean() + POLICY["stderr_margin"] * stderr:
            raise CheckFailedError(
                f"decoupling inequality violated at n={n}: "
                f"mean error {errs.mean():.6g} > mean decoupled "
                f"{decs.mean():.6g} + 3 * {stderr:.3g}")
    return results


def fit_scaling(results, axis: str) -> ScalingReport:
    """OLS fit of ln(mean error) against ln(axis value), axis in {n, m}."""
    if axis not in ("n", "m"):
        raise InputError(f"axis must be 'n' or 'm', got {axis!r}")
    groups: dict[int, list] = {}
    for t in results:
        groups.setdefault(getattr(t, axis), []).append(t.error)
    if len(groups) < 3:
        raise InputError(
            f"need >= 3 distinct {axis} values for a fit, got {len(groups)}")
    vals = sorted(groups)
    means = np.array([np.mean(groups[v]) for v in vals])
    if (means <= 0.0).any():
        raise InputError("all mean errors must be positive for a log-log fit")
    x = np.log(np.array(vals, dtype=float))
    y = np.log(means)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx == 0.0:
        raise InputError("axis values are degenerate")
    slope = float(xc @ y) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    dof = len(vals) - 2
    sigma2 = float(resid @ resid) / dof if dof > 0 else 0.0
    return ScalingReport(axis=axis, slope=slope,
                         slope_stderr=math.sqrt(max(sigma2, 0.0) / sxx),
                         intercept=intercept, points=len(vals))


def _bound_columns(results) -> list:
    seen = set()
    for t in results:
        seen.update(t.bounds)
    extras = sorted(seen.difference(_BOUND_ORDER))
    return [k for k in _BOUND_ORDER if k in seen] + extras


def _rows(results):
    cols = _bound_columns(results)
    header = ["n", "p", "m", "replicate", "error"] + [f"bound_{c}" for c in cols]
    rows = [[t.n, t.p, t.m, t.replicate, t.error]
            + [t.bounds.get(c, "") for c in cols] for t in results]
    return header, rows


def emit_results(results, fmt: str, path) -> None:
    """Write TrialResults as CSV or JSON with round-trip float precision."""
    header, rows = _rows(results)
    try:
        if fmt == "csv":
            lines = [",".join(header)]
            lines += [",".join(repr(v) if isinstance(v, float) else str(v)
                               for v in row) for row in rows]
            Path(path).write_text("\n".join(lines) + "\n")
        elif fmt == "json":
            Path(path).write_text(json.dumps(
                [dict(zip(header, row)) for row in rows], indent=1) + "\n")
        else:
            raise InputError(f"unknown output format {fmt!r}")
    except OSError as exc:
        raise InputError(f"cannot write results to {path}: {exc}") from exc


def read_results(path) -> list:
    """Round-trip parse of :func:`emit_results` output (CSV or JSON)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read results from {path}: {exc}") from exc
    if str(path).endswith(".json") or text.lstrip().startswith("["):
        records = json.loads(text)
    else:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InputError(f"no result rows in {path}")
        header = lines[0].split(",")
        records = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    results = []
    for rec in records:
        bounds = {k[len("bound_"):]: float(v) for k, v in rec.items()
                  if k.startswith("bound_") and v != ""}
        results.append(TrialResult(n=int(rec["n"]), p=int(rec["p"]),
                                   m=int(rec["m"]),
                                   replicate=int(rec["replicate"]),
                                   error=float(rec["error"]), bounds=bounds))
    return results
