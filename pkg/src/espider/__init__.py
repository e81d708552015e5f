"""Multi-type Ehrenfest chain on an extended star graph and its OU diffusion on the spider."""

__version__ = "0.1.0"

from .chain import (Interior, ModelParams, Origin, build_generator, example_switch_matrix,
                    switch_stationary)
from .diffusion import (DiffusionParams, fokker_planck_evolve, moments_X, simulate_spider_ou,
                        stationary_density_w)
from .montecarlo import estimate_pk, simulate_path
from .special import SignedLogValue, hyp2f1_terminating
from .stationary import entropy, entropy_argmax, g, g_approx, moments, rho_k
from .transient import (laplace_H, level_probs_closed, p0_closed, pgf_F, pr_closed, roots_of_P,
                        transient_oracle)

__all__ = [
    "__version__",
    "SignedLogValue", "hyp2f1_terminating",
    "ModelParams", "Origin", "Interior", "build_generator", "example_switch_matrix",
    "switch_stationary",
    "transient_oracle", "roots_of_P", "p0_closed", "pr_closed", "level_probs_closed",
    "laplace_H", "pgf_F",
    "g", "rho_k", "moments", "g_approx", "entropy", "entropy_argmax",
    "estimate_pk", "simulate_path",
    "DiffusionParams", "stationary_density_w", "moments_X", "simulate_spider_ou",
    "fokker_planck_evolve",
]
