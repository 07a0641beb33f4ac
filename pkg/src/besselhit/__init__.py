"""First hitting times of Bessel processes: exact transforms, numerical
inversion, tail asymptotics and Monte Carlo cross-checks."""
from .errors import BesselHitError, DomainError, InstabilityError
from .hitting import (
    TailEstimate,
    asymptotic_constant,
    asymptotic_tail,
    cdf,
    closed_form_tail,
    density,
    duality_density_factor,
    laplace_transform,
    prob_hit_ever,
    survival,
    tail_inversion,
    tail_transform,
)
from .inversion import InversionConfig, invert, stehfest_weights
from .montecarlo import McConfig, McEstimate, tail_mc_indicator, tail_mc_lemma22
from .process import BesselParams, moment_bounds, neg_moment, transition_density
from .special import bessel_i, bessel_k, gamma, lgamma

__version__ = "0.1.0"
