"""Masked (partial) covariance estimation with verified error bounds.

The estimator is the Hadamard product M . Sigma_hat_n of a fixed
symmetric mask with the sample covariance matrix.  The package couples
the estimator with closed-form operator-norm error bounds, Monte Carlo
oracles for the probabilistic lemmas behind them, and a seeded
experiment harness that reproduces their scaling laws.
"""

from .bounds import (BoundReport, bound_bai_yin, bound_centering,
                     bound_identity_case, bound_minor, bound_refined,
                     bound_theorem_main, sample_size_partial)
from .errors import (CheckFailedError, InputError, MaskcovError, NotPSDError,
                     NumericalError)
from .harness import (ExperimentConfig, ScalingReport, TrialResult,
                      emit_results, fit_scaling, read_results,
                      run_decoupled_experiment, run_error_experiment)
from .linalg import hadamard, norm_one_two, spectral_norm, sym_sqrt, symmetrize
from .masks import (Mask, banded_mask, custom_mask, mask_from_spec, minor_mask,
                    taper_mask, threshold_mask)
from .sampler import (GaussianModel, SampleBatch, SeedSpec,
                      decoupled_covariance, draw_samples, mix64,
                      sample_covariance, sample_covariance_centered)
from .verify import (LemmaReport, RegularVectorSet, circle_net,
                     concentration_check, decoupling_check, enum_regular,
                     linear_form_std, max_bilinear_regular,
                     net_norm_bound_check, reg_norm_bound_check, regular_union,
                     sigma_x, sigma_x_lipschitz_check, sigma_x_mean_check)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
