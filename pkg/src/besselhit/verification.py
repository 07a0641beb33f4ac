"""Checks that turn the tail asymptotics into measurable numbers.

Every report is a pure function of its inputs: grid points are evaluated in
order and nothing random is involved, so re-running reproduces the same
rows exactly.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .hitting import TAIL_CONFIG, asymptotic_constant, asymptotic_tail, tail_inversion
from .process import BesselParams, moment_bounds, neg_moment
from .special import gamma

__all__ = [
    "SlopeFit",
    "Report",
    "log_grid",
    "parse_grid",
    "fit_decay_slope",
    "remainder_slope",
    "check_constant",
    "check_moment_sandwich",
    "check_duality",
    "scaled_tail_spread",
]

SLOPE_MARGIN = 0.05
CONSTANT_RTOL = 0.02


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float
    grid: tuple

    def predict(self, t):
        return math.exp(self.intercept) * t**self.slope


@dataclass
class Report:
    """Rows of a check plus the overall verdict."""

    name: str
    rows: list
    passed: bool
    summary: dict = field(default_factory=dict)


def log_grid(lo, hi, n=None, per_decade=8):
    """``n`` log-spaced points on [lo, hi]; by default ``per_decade`` per decade."""
    lo = float(lo)
    hi = float(hi)
    if not 0.0 < lo < hi:
        raise DomainError(f"log grid needs 0 < lo < hi, got {lo!r}, {hi!r}")
    if n is None:
        n = int(round(per_decade * math.log10(hi / lo))) + 1
    if n < 2:
        raise DomainError(f"log grid needs at least 2 points, got {n!r}")
    pts = np.geomspace(lo, hi, int(n))
    pts[0], pts[-1] = lo, hi
    return [float(v) for v in pts]


def parse_grid(text):
    """Parse ``lo:hi:n-log`` (or ``lo:hi:n-lin``) into a list of floats."""
    try:
        lo, hi, tail = text.split(":")
        count, _, kind = tail.partition("-")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise DomainError(f"grid must look like lo:hi:n-log, got {text!r}") from None
    kind = kind or "log"
    if count < 1:
        raise DomainError(f"grid needs n >= 1, got {count!r}")
    if count == 1:
        return [lo]
    if kind == "log":
        return log_grid(lo, hi, count)
    if kind == "lin":
        if not lo < hi:
            raise DomainError(f"grid needs lo < hi, got {lo!r}, {hi!r}")
        return [float(v) for v in np.linspace(lo, hi, count)]
    raise DomainError(f"grid spacing must be 'log' or 'lin', got {kind!r}")


def fit_decay_slope(points):
    """Least-squares line through (log t, log v).

    Parameters
    ----------
    points : sequence of (t, v)
        At least four points, t strictly increasing, all values positive.
    """
    pts = [(float(t), float(v)) for t, v in points]
    if len(pts) < 4:
        raise DomainError(f"slope fit needs at least 4 points, got {len(pts)}")
    ts = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if np.any(ts <= 0.0) or np.any(np.diff(ts) <= 0.0):
        raise DomainError("slope fit needs t > 0 and strictly increasing")
    if np.any(vs <= 0.0) or not np.all(np.isfinite(vs)):
        raise DomainError("slope fit needs finite positive values")
    x = np.log(ts)
    y = np.log(vs)
    xm = x.mean()
    ym = y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if sst == 0.0 else max(0.0, min(1.0, 1.0 - float(np.sum(resid**2)) / sst))
    return SlopeFit(slope, intercept, r2, tuple(pts))


def remainder_slope(params, t_grid, cfg=TAIL_CONFIG):
    """Fit the decay of |tail_inversion - asymptotic_tail| over ``t_grid``.

    The tail laws predict a remainder of order t^{-|nu| - eps} for some
    eps > 0; the report passes when the fitted slope is <= -|nu| - 0.05.
    """
    if params.nu == 0.0:
        raise DomainError("remainder exponent check needs nu != 0")
    rows = []
    for t in t_grid:
        inv = tail_inversion(params, t, cfg)
        asym = asymptotic_tail(params, t)
        rows.append({
            "t": t,
            "tail": inv.value,
            "tail_err": inv.err,
            "asymptotic": asym.value,
            "difference": abs(inv.value - asym.value),
        })
    fit = fit_decay_slope([(r["t"], r["difference"]) for r in rows])
    bound = -abs(params.nu) - SLOPE_MARGIN
    return Report(
        "remainder-slope",
        rows,
        fit.slope <= bound,
        {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared,
         "bound": bound},
    )


def check_constant(params, t_grid, cfg=TAIL_CONFIG, rtol=CONSTANT_RTOL):
    """Tabulate (2t)^{|nu|} Gamma(1+|nu|) tail(t) against its limit.

    Passes when the last grid point is within ``rtol`` of the target
    b^{2nu}(1-(b/a)^{2nu}) (nu > 0) or a^{2|nu|}(1-(b/a)^{2|nu|}) (nu < 0).
    """
    if params.nu == 0.0:
        raise DomainError("constant check needs nu != 0")
    m = abs(params.nu)
    target = asymptotic_constant(params)
    g = gamma(1.0 + m)
    rows = []
    for t in t_grid:
        est = tail_inversion(params, t, cfg)
        normalized = (2.0 * t) ** m * g * est.value
        rows.append({
            "t": t,
            "tail": est.value,
            "tail_err": est.err,
            "normalized": normalized,
            "target": target,
            "rel_err": abs(normalized / target - 1.0),
        })
    final = rows[-1]["rel_err"]
    return Report("constant", rows, final <= rtol,
                  {"target": target, "final_rel_err": final, "rtol": rtol})


def check_moment_sandwich(nu, a, p, t_grid):
    """Check lower <= E_a[R_t^{-2p}] <= upper at every t in ``t_grid`` (t >= 1)."""
    params = BesselParams(nu, a, a)
    rows = []
    for t in t_grid:
        if not t >= 1.0:
            raise DomainError(f"sandwich grid must lie in [1, inf), got t={t!r}")
        lower, upper = moment_bounds(params, p, t)
        value = neg_moment(params, p, t).value
        rows.append({"t": t, "lower": lower, "value": value, "upper": upper,
                     "ok": lower <= value <= upper})
    return Report("moment-sandwich", rows, all(r["ok"] for r in rows),
                  {"nu": float(nu), "a": float(a), "p": float(p)})


def check_duality(nu, a, b, t_grid, cfg=TAIL_CONFIG, rtol=1e-6):
    """Compare P^{(-nu)}(tau_b > t) with (a/b)^{2nu} P^{(nu)}(t < tau_b < inf)."""
    if not nu > 0.0:
        raise DomainError(f"duality check takes nu > 0, got {nu!r}")
    pos = BesselParams(nu, a, b)
    neg = BesselParams(-nu, a, b)
    factor = (a / b) ** (2.0 * nu)
    rows = []
    for t in t_grid:
        lhs = tail_inversion(neg, t, cfg).value
        rhs = factor * tail_inversion(pos, t, cfg).value
        rows.append({"t": t, "negative_index": lhs, "scaled_positive": rhs,
                     "rel_err": abs(lhs / rhs - 1.0)})
    worst = max(r["rel_err"] for r in rows)
    return Report("duality", rows, worst <= rtol, {"factor": factor, "max_rel_err": worst})


def scaled_tail_spread(params, t_grid, cfg=TAIL_CONFIG, max_ratio=2.0):
    """Spread of t^{|nu|} * tail(t) over ``t_grid``: max / min versus ``max_ratio``."""
    rows = []
    for t in t_grid:
        est = tail_inversion(params, t, cfg)
        rows.append({"t": t, "tail": est.value, "scaled": t ** abs(params.nu) * est.value})
    scaled = [r["scaled"] for r in rows]
    ratio = max(scaled) / min(scaled)
    return Report("scaled-tail-spread", rows, ratio < max_ratio,
                  {"ratio": ratio, "max_ratio": max_ratio,
                   "bound_vs_last": max(scaled) / scaled[-1]})
