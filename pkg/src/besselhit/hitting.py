"""The law of the first hitting time tau_b of a Bessel process started at a > b.

The Laplace transform

    E_a[exp(-lam tau_b)] = (b/a)^nu K_nu(a sqrt(2 lam)) / K_nu(b sqrt(2 lam))

is exact for every real index.  Tails are obtained by inverting
(P(tau_b < inf) - transform) / lam, the transform of the tail function
itself, instead of inverting the distribution function and subtracting.

For nu > 0 the process escapes with positive probability, so "tail" means
P(t < tau_b < inf); for nu <= 0 it means P(tau_b > t).
"""
import math
import warnings
from dataclasses import dataclass

import mpmath

from .errors import DomainError, InstabilityError
from .inversion import InversionConfig, invert
from .special import bessel_ke, erf, gamma

__all__ = [
    "TailEstimate",
    "METHODS",
    "TAIL_CONFIG",
    "prob_hit_ever",
    "laplace_transform",
    "tail_transform",
    "tail_inversion",
    "cdf",
    "survival",
    "density",
    "closed_form_tail",
    "asymptotic_tail",
    "asymptotic_constant",
    "duality_density_factor",
]

METHODS = ("inversion", "monte_carlo_indicator", "monte_carlo_lemma22", "asymptotic", "closed_form")

TAIL_CONFIG = InversionConfig.extended(40)
TAIL_RTOL = 1e-4
# Densities below this are only resolved to about 1e-3 of it in absolute
# terms; deep in the t -> 0 corner the shape exp(-c/t) defeats any
# relative standard for Gaver-Stehfest.
DENSITY_FLOOR = 1e-7
SMALL_NU = 1e-8


@dataclass(frozen=True)
class TailEstimate:
    """A tail probability with the method that produced it and its error.

    ``err`` is the ladder spread for inversion, the standard error for Monte
    Carlo, a heuristic next-order size for the asymptotic formula (``inf``
    when no rate is known) and 0 for closed forms.
    """

    t: float
    value: float
    method: str
    err: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")


def _warn_small_nu(nu):
    if nu != 0.0 and abs(nu) < SMALL_NU:
        warnings.warn(
            f"|nu| = {abs(nu):g} is below {SMALL_NU:g}; asymptotics switch to the "
            "logarithmic law only at nu == 0 exactly",
            RuntimeWarning,
            stacklevel=3,
        )


def _check_t(t):
    t = float(t)
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and > 0, got {t!r}")
    return t


def prob_hit_ever(params):
    """P_a(tau_b < inf): (b/a)^{2 nu} for nu > 0 and 1 otherwise."""
    params.require_downward()
    if params.nu > 0.0:
        return (params.b / params.a) ** (2.0 * params.nu)
    return 1.0


def laplace_transform(params, lam, precision="double"):
    """E_a[exp(-lam tau_b)] for lam > 0.

    In double precision the ratio of K functions is formed from the
    exponentially scaled values so that neither factor over- or underflows.
    ``precision="extended"`` evaluates in the current mpmath context and
    returns an mpf.
    """
    params.require_downward()
    nu, a, b = params.nu, params.a, params.b
    if precision == "extended":
        lam = mpmath.mpf(lam)
        if not lam > 0:
            raise DomainError(f"lambda must be > 0, got {lam!r}")
        x = mpmath.sqrt(2 * lam)
        ratio = mpmath.mpf(b) / a
        return ratio**nu * mpmath.besselk(nu, a * x) / mpmath.besselk(nu, b * x)
    lam = float(lam)
    if not lam > 0.0:
        raise DomainError(f"lambda must be > 0, got {lam!r}")
    x = math.sqrt(2.0 * lam)
    ke_ratio = bessel_ke(nu, a * x) / bessel_ke(nu, b * x)
    return (b / a) ** nu * ke_ratio * math.exp(-(a - b) * x)


def tail_transform(params, precision="double"):
    """Return lam -> (P(tau_b < inf) - E[exp(-lam tau_b)]) / lam."""
    mass = prob_hit_ever(params)
    if precision == "extended":
        nu = params.nu

        def psi(lam):
            full = (mpmath.mpf(params.b) / params.a) ** (2 * nu) if nu > 0 else mpmath.mpf(1)
            return (full - laplace_transform(params, lam, "extended")) / lam

        return psi

    def psi(lam):
        return (mass - laplace_transform(params, lam)) / lam

    return psi


def _guard_digits(params, t):
    # Cancellation in mass - transform near lam = 0 and the decay of the
    # tail itself both cost about log10(t) digits per unit of index.
    return int(math.ceil((abs(params.nu) + 1.0) * math.log10(max(t, 1.0)))) + 5


def _check_spread(value, err, t, cfg):
    if err > TAIL_RTOL * max(abs(value), 1e-300):
        lo, hi = cfg.ladder
        raise InstabilityError(
            f"inversion orders {lo} and {hi} disagree by {err:.3g} on a tail of "
            f"{value:.6g} at t={t!r}; t is too extreme for precision {cfg.precision!r}"
        )


def tail_inversion(params, t, cfg=TAIL_CONFIG):
    """Tail of tau_b by numerical Laplace inversion.

    Returns P(t < tau_b < inf) for nu > 0 and P(tau_b > t) for nu <= 0.
    """
    params.require_downward()
    t = _check_t(t)
    _warn_small_nu(params.nu)
    psi = tail_transform(params, cfg.precision)
    value, err = invert(psi, t, cfg, extra_dps=_guard_digits(params, t))
    _check_spread(value, err, t, cfg)
    return TailEstimate(t, value, "inversion", err)


def cdf(params, t, cfg=TAIL_CONFIG):
    """P(tau_b <= t) and its inversion error, as a pair."""
    est = tail_inversion(params, t, cfg)
    return prob_hit_ever(params) - est.value, est.err


def survival(params, t, cfg=TAIL_CONFIG):
    """P(tau_b > t), which for nu > 0 includes the escape mass 1 - (b/a)^{2nu}."""
    est = tail_inversion(params, t, cfg)
    return 1.0 - prob_hit_ever(params) + est.value, est.err


def density(params, t, cfg=TAIL_CONFIG):
    """Density of tau_b at t, by inverting the transform itself."""
    params.require_downward()
    t = _check_t(t)
    _warn_small_nu(params.nu)
    if cfg.precision == "extended":

        def phi(lam):
            return laplace_transform(params, lam, "extended")

    else:

        def phi(lam):
            return laplace_transform(params, lam)

    value, _ = invert(phi, t, cfg, extra_dps=_guard_digits(params, t), floor=DENSITY_FLOOR)
    # Negative output can only be inversion noise around a vanishing density.
    return value if value > 0.0 else 0.0


def closed_form_tail(params, t):
    """Exact tail for nu = 1/2: (b/a) erf((a - b) / sqrt(2t)).

    At nu = 1/2 the transform collapses to (b/a) exp(-(a-b) sqrt(2 lam)),
    i.e. (b/a) times the Brownian first-passage law of level a - b.
    """
    if params.nu != 0.5:
        raise DomainError(f"closed_form_tail needs nu = 1/2 exactly, got {params.nu!r}")
    params.require_downward()
    t = _check_t(t)
    a, b = params.a, params.b
    return TailEstimate(t, (b / a) * erf((a - b) / math.sqrt(2.0 * t)), "closed_form", 0.0)


def asymptotic_constant(params):
    """Limit of (2t)^{|nu|} Gamma(1+|nu|) * tail(t) as t -> inf, for nu != 0."""
    params.require_downward()
    nu, a, b = params.nu, params.a, params.b
    if nu == 0.0:
        raise DomainError("the nu = 0 tail decays logarithmically; no power-law constant")
    m = abs(nu)
    level = b if nu > 0 else a
    return level ** (2.0 * m) * (1.0 - (b / a) ** (2.0 * m))


def asymptotic_tail(params, t):
    """Large-t tail law.

    nu > 0:  b^{2nu} (1 - (b/a)^{2nu}) / (Gamma(1+nu) (2t)^nu)
    nu < 0:  a^{2|nu|} (1 - (b/a)^{2|nu|}) / (Gamma(1+|nu|) (2t)^{|nu|})
    nu = 0:  2 log(a/b) / log t, requires t > 1
    """
    params.require_downward()
    t = _check_t(t)
    nu = params.nu
    _warn_small_nu(nu)
    if nu == 0.0:
        if not t > 1.0:
            raise DomainError(f"the nu = 0 law needs t > 1, got {t!r}")
        value = 2.0 * math.log(params.a / params.b) / math.log(t)
        return TailEstimate(t, value, "asymptotic", math.inf)
    m = abs(nu)
    value = asymptotic_constant(params) / (gamma(1.0 + m) * (2.0 * t) ** m)
    # Heuristic remainder size with half the admissible exponent gain and unit
    # constant; for reporting only.
    eps0 = m / (2.0 * (1.0 + m))
    return TailEstimate(t, value, "asymptotic", t ** (-m - eps0))


def duality_density_factor(params):
    """(a/b)^{2nu}: P^{(-nu)}(tau_b in dt) = (a/b)^{2nu} P^{(nu)}(tau_b in dt), nu > 0."""
    if not params.nu > 0.0:
        raise DomainError(f"duality factor is defined for nu > 0, got {params.nu!r}")
    params.require_downward()
    return (params.a / params.b) ** (2.0 * params.nu)
