"""Monte Carlo estimators of the hitting-time tail.

Paths of the squared Bessel process X = R^2 are sampled exactly on a time
grid: X_{s+h} / h given X_s is noncentral chi-square with delta = 2(nu+1)
degrees of freedom and noncentrality X_s / h.  Barrier crossings are
checked on the grid and, by default, between grid points with the
Brownian-bridge crossing probability of R.  Grid-only detection
(``bridge=False``) misses excursions below b between grid points and biases
both estimators upwards by O(sqrt(step)); the bridge test brings the bias
down to O(step).

Paths are split into ``streams`` contiguous blocks.  Each block draws from
its own generator spawned from ``SeedSequence(seed)``, and results are
reassembled in path order before any reduction.  The outcome depends only on
(seed, streams, paths, step, horizon), not on how many threads run the
blocks.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._accel import HAVE_NUMBA, default_backend
from .errors import DomainError

__all__ = [
    "McConfig",
    "McEstimate",
    "PathBatch",
    "sample_squared_bessel_step",
    "simulate_paths",
    "tail_mc_indicator",
    "tail_mc_lemma22",
]

HORIZON_FACTOR = 1000.0


@dataclass(frozen=True)
class McConfig:
    """Simulation settings.

    ``horizon=None`` means HORIZON_FACTOR * t for the nu > 0 indicator
    estimator and t otherwise.
    """

    paths: int = 100_000
    step: float = 0.01
    horizon: float = None
    seed: int = 42
    streams: int = 64
    bridge: bool = True

    def __post_init__(self):
        if int(self.paths) < 1:
            raise DomainError(f"paths must be >= 1, got {self.paths!r}")
        if not float(self.step) > 0.0:
            raise DomainError(f"step must be > 0, got {self.step!r}")
        if self.horizon is not None:
            if not float(self.horizon) > 0.0:
                raise DomainError(f"horizon must be > 0, got {self.horizon!r}")
            if float(self.step) > float(self.horizon):
                raise DomainError("step must not exceed horizon")
        if int(self.streams) < 1:
            raise DomainError(f"streams must be >= 1, got {self.streams!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        object.__setattr__(self, "paths", int(self.paths))
        object.__setattr__(self, "streams", int(self.streams))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "step", float(self.step))


@dataclass(frozen=True)
class McEstimate:
    """Sample mean of a per-path payoff with its standard error.

    ``truncation`` is the hitting mass still outstanding at the simulation
    horizon (indicator estimator with nu > 0 only).  Paths alive there are
    settled by a Bernoulli draw with their exact hitting probability, so this
    is the share of ``mean`` not resolved by path simulation.
    """

    mean: float
    std_error: float
    paths: int
    estimator: str
    truncation: float = 0.0

    @property
    def variance(self):
        return self.std_error**2 * self.paths


@dataclass
class PathBatch:
    """Per-path outcomes, in path order."""

    alive: np.ndarray
    xt: np.ndarray
    hit: np.ndarray
    trunc: np.ndarray


def sample_squared_bessel_step(x, h, delta, rng):
    """One exact transition of the squared Bessel process of dimension ``delta``.

    Draws X_{s+h} given X_s = x; ``x`` may be a scalar or an array and ``rng``
    is a ``numpy.random.Generator``.  R_{s+h} is the square root of the draw.
    """
    delta = float(delta)
    h = float(h)
    if not delta > 0.0:
        raise DomainError(f"dimension delta must be > 0, got {delta!r}")
    if not h > 0.0:
        raise DomainError(f"step h must be > 0, got {h!r}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("squared Bessel state must be >= 0")
    draw = h * _kernels._ncx2_vec(rng, delta, np.atleast_1d(arr) / h)
    return float(draw[0]) if arr.ndim == 0 else draw.reshape(arr.shape)


def _stream_bounds(paths, streams):
    streams = min(streams, paths)
    return [(i * paths // streams, (i + 1) * paths // streams) for i in range(streams)]


def _resolve_backend(backend):
    backend = backend or os.environ.get("BESSELHIT_BACKEND") or default_backend()
    if backend not in ("numba", "numpy"):
        raise DomainError(f"backend must be 'numba' or 'numpy', got {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise DomainError("numba backend requested but numba is unavailable or disabled")
    return backend


def simulate_paths(params, t, cfg, horizon=None, post=False, backend=None, threads=None):
    """Simulate ``cfg.paths`` paths and return their per-path outcomes.

    The grid on [0, t] is uniform with spacing t/ceil(t/step) <= step.  With
    ``post`` set, surviving paths continue to ``horizon`` on a grid that
    stretches away from the barrier but never drops below ``step``; paths
    still alive at the horizon are resolved with one Bernoulli draw.
    """
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    delta = params.dimension
    if not delta > 0.0:
        raise DomainError(f"simulation needs dimension 2(nu+1) > 0, got {delta!r}")
    if cfg.step > t:
        raise DomainError(f"step {cfg.step!r} exceeds t {t!r}")
    n_pre = int(math.ceil(t / cfg.step - 1e-9))
    h = t / n_pre
    horizon = t if horizon is None else float(horizon)
    kernel = _kernels.stream_numba if _resolve_backend(backend) == "numba" else _kernels.stream_numpy

    n = cfg.paths
    batch = PathBatch(
        alive=np.zeros(n, dtype=np.bool_),
        xt=np.empty(n),
        hit=np.zeros(n, dtype=np.bool_),
        trunc=np.zeros(n),
    )
    bounds = _stream_bounds(n, cfg.streams)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(bounds))

    def run(k):
        lo, hi = bounds[k]
        gen = np.random.Generator(np.random.PCG64(seeds[k]))
        kernel(gen, params.a**2, params.b, params.nu, delta, h, n_pre, t, horizon,
               cfg.step, post, bool(cfg.bridge), batch.alive[lo:hi], batch.xt[lo:hi],
               batch.hit[lo:hi], batch.trunc[lo:hi])

    workers = threads or os.cpu_count() or 1
    if workers == 1:
        for k in range(len(bounds)):
            run(k)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(len(bounds))))
    return batch


def _prepare(params, t, cfg):
    params.require_downward()
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    return t


def tail_mc_indicator(params, t, cfg, backend=None, threads=None):
    """Plain indicator estimator of the tail.

    nu > 0: P(t < tau_b < inf) estimated by the fraction of paths that stay
    above b on [0, t] and reach b afterwards.
    nu <= 0: P(tau_b > t) estimated by the fraction staying above b on [0, t].
    The standard error is the binomial one.
    """
    t = _prepare(params, t, cfg)
    if cfg.step > t / 100.0:
        raise DomainError(f"indicator estimator needs step <= t/100 = {t / 100.0!r}")
    if params.nu > 0.0:
        horizon = HORIZON_FACTOR * t if cfg.horizon is None else float(cfg.horizon)
        if horizon < t:
            raise DomainError(f"horizon {horizon!r} is shorter than t {t!r}")
        batch = simulate_paths(params, t, cfg, horizon, post=True, backend=backend, threads=threads)
        payoff = batch.alive & batch.hit
        truncation = float(np.mean(batch.trunc))
    else:
        batch = simulate_paths(params, t, cfg, backend=backend, threads=threads)
        payoff = batch.alive
        truncation = 0.0
    n = payoff.shape[0]
    p = float(np.mean(payoff))
    return McEstimate(p, math.sqrt(p * (1.0 - p) / n), n, "indicator", truncation)


def tail_mc_lemma22(params, t, cfg, backend=None, threads=None):
    """Estimate P(t < tau_b < inf) as E[(b/R_t)^{2nu} ; min_{[0,t]} R > b].

    Uses the escape probability 1 - (b/r)^{2nu} from level r > b, so no
    simulation past t is needed.  Requires nu > 0.
    """
    t = _prepare(params, t, cfg)
    if not params.nu > 0.0:
        raise DomainError(f"the escape-weighted estimator needs nu > 0, got {params.nu!r}")
    batch = simulate_paths(params, t, cfg, backend=backend, threads=threads)
    payoff = np.zeros(batch.alive.shape[0])
    up = batch.alive
    payoff[up] = (params.b**2 / batch.xt[up]) ** params.nu
    n = payoff.shape[0]
    std = float(np.std(payoff, ddof=1)) if n > 1 else 0.0
    return McEstimate(float(np.mean(payoff)), std / math.sqrt(n), n, "lemma22")
