"""Bessel process parameters, transition density and negative moments."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special import SERIES_RTOL, SeriesEval, bessel_ie

__all__ = [
    "BesselParams",
    "transition_density",
    "neg_moment",
    "sandwich_constant",
    "moment_bounds",
]


@dataclass(frozen=True)
class BesselParams:
    """Index ``nu``, starting point ``a`` and barrier ``b`` of a Bessel process."""

    nu: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("nu", "a", "b"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not self.a > 0.0:
            raise DomainError(f"start a must be > 0, got {self.a!r}")
        if not self.b > 0.0:
            raise DomainError(f"barrier b must be > 0, got {self.b!r}")

    @property
    def dimension(self):
        return 2.0 * (self.nu + 1.0)

    def require_downward(self):
        """Raise unless 0 < b < a.

        Only the downward hitting problem is handled; for a < b the tail
        decays exponentially and is not treated here.
        """
        if not self.b < self.a:
            raise DomainError(
                f"hitting-time laws need the downward case 0 < b < a "
                f"(got a={self.a!r}, b={self.b!r})"
            )
        return self


def _density_scalar(nu, a, t, y):
    if y == 0.0:
        return 0.0
    z = a * y / t
    gauss = math.exp(-((a - y) ** 2) / (2.0 * t))
    if gauss == 0.0:
        return 0.0
    return (y / a) ** nu * (y / t) * gauss * bessel_ie(nu, z)


def transition_density(params, t, y):
    """Density of R_t at ``y`` for the process started at ``params.a``.

    p_t(a, y) = (1/t) (y/a)^nu y exp(-(a^2 + y^2)/2t) I_nu(a y / t),
    evaluated with the exponentially scaled I so large a*y/t cannot overflow.
    ``y`` may be a scalar or an array.
    """
    nu = params.nu
    if nu < 0.0:
        raise DomainError(f"transition_density is defined here for nu >= 0, got {nu!r}")
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0.0) or np.any(~np.isfinite(arr)):
        raise DomainError("transition_density needs finite y >= 0")
    if arr.ndim == 0:
        return _density_scalar(nu, params.a, t, float(arr))
    out = np.empty_like(arr)
    for idx, val in np.ndenumerate(arr):
        out[idx] = _density_scalar(nu, params.a, t, float(val))
    return out


def _check_moment(params, p):
    nu = params.nu
    p = float(p)
    if not nu > -1.0:
        raise DomainError(f"neg_moment requires nu > -1, got {nu!r}")
    if not p > 0.0:
        raise DomainError(f"moment order p must be > 0, got {p!r}")
    if not p < 1.0 + nu:
        raise DomainError(f"moment order p must be < 1 + nu = {1.0 + nu!r}, got {p!r}")
    return nu, p


def _moment_series(nu, p, w, log_shift):
    """Sum_n Gamma(n+nu+1-p) / (n! Gamma(n+nu+1)) w^n, times exp(log_shift).

    Returns (total, terms_used, remainder_bound).  All terms are positive and
    consecutive ratios are below w/(n+1), which gives the geometric bound.
    """
    log_t0 = math.lgamma(nu + 1.0 - p) - math.lgamma(nu + 1.0) + log_shift
    if log_t0 > -700.0 or w == 0.0:
        term = math.exp(log_t0)
        total = term
        n = 0
        while True:
            nxt = term * w * (n + nu + 1.0 - p) / ((n + 1.0) * (n + 1.0 + nu))
            n += 1
            if nxt <= SERIES_RTOL * (total + nxt):
                r = w / (n + 1.0)
                if r < 1.0:
                    return total, n, nxt / (1.0 - r)
            total += nxt
            term = nxt
    # Huge w: the first terms underflow, so sum in the log domain.
    log_w = math.log(w)
    total = 0.0
    n = 0
    while True:
        log_term = (
            math.lgamma(n + nu + 1.0 - p)
            - math.lgamma(n + 1.0)
            - math.lgamma(n + nu + 1.0)
            + n * log_w
            + log_shift
        )
        term = math.exp(log_term)
        if n > w and term <= SERIES_RTOL * total:
            r = w / (n + 1.0)
            if r < 1.0:
                return total, n, term / (1.0 - r)
        total += term
        n += 1


def neg_moment(params, p, t):
    """E_a[R_t^{-2p}] from its power series in a^2/2t, 0 < p < 1 + nu.

    E = (2t)^{-p} exp(-a^2/2t) sum_n a^{2n} Gamma(n+nu+1-p)
        / (Gamma(n+1) Gamma(1+n+nu) (2t)^n)
    """
    nu, p = _check_moment(params, p)
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    w = params.a * params.a / (2.0 * t)
    total, n, rem = _moment_series(nu, p, w, -w)
    pref = (2.0 * t) ** (-p)
    return SeriesEval(pref * total, n, pref * rem)


def sandwich_constant(params, p):
    """Constant C with E_a[R_t^{-2p}] <= lead(t) + C t^{-1-p} for all t >= 1.

    For t >= 1 each n >= 1 term of the moment series is at most its t = 1
    value times 1/t, and exp(-a^2/2t) <= 1, so C is 2^{-p} times the n >= 1
    part of the series at w = a^2/2 (plus its remainder bound).
    """
    nu, p = _check_moment(params, p)
    w = params.a * params.a / 2.0
    total, _, rem = _moment_series(nu, p, w, 0.0)
    head = math.exp(math.lgamma(nu + 1.0 - p) - math.lgamma(nu + 1.0))
    # pad for the rounding of the subtraction
    return 2.0 ** (-p) * (total - head + rem + 4.0 * 2.0**-52 * total)


def moment_bounds(params, p, t):
    """Lower and upper sandwich bounds on E_a[R_t^{-2p}], valid for t >= 1."""
    nu, p = _check_moment(params, p)
    t = float(t)
    if not t >= 1.0:
        raise DomainError(f"moment sandwich bounds hold for t >= 1, got {t!r}")
    lead = math.exp(math.lgamma(nu + 1.0 - p) - math.lgamma(nu + 1.0)) * (2.0 * t) ** (-p)
    lower = lead * math.exp(-params.a * params.a / (2.0 * t))
    upper = lead + sandwich_constant(params, p) * t ** (-1.0 - p)
    return lower, upper
