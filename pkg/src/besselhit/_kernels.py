"""Path kernels for the squared Bessel process.

Each kernel simulates one substream of paths from a started
``numpy.random.Generator``.  ``stream_numba`` walks paths one at a time
(compiled, GIL released); ``stream_numpy`` advances all paths of the stream
together.  Both implement the same sampling scheme, so they agree in law;
they consume random numbers in different orders and so are not bit-identical
to each other.

Per path the kernels report whether the path stayed strictly above the
barrier on [0, t], the squared value at t, whether the barrier was reached
after t, and the conditional hitting mass (b^2/X_H)^nu still outstanding at
the horizon.  A path alive at the horizon is settled by one Bernoulli draw
with that probability, which is its exact chance of ever reaching b.

With ``bridge`` set, a step from r0 to r1 (both above b) also counts as a
crossing with the Brownian-bridge probability exp(-2 (r0-b)(r1-b) / h).
Without it only grid values are checked, which misses excursions below b
between grid points.
"""
import math

import numpy as np

from ._accel import njit

# Far from the barrier the post-t grid stretches so that a Brownian motion
# would need a SAFETY_Z standard-deviation excursion to cross within a step.
SAFETY_Z = 6.0
# Bridge crossing probabilities below this are not worth a uniform draw.
BRIDGE_CUTOFF = 1e-14


@njit(nogil=True, cache=True)
def _ncx2(gen, df, nonc):
    if df > 1.0:
        z = gen.standard_normal() + math.sqrt(nonc)
        return 2.0 * gen.standard_gamma(0.5 * (df - 1.0)) + z * z
    k = gen.poisson(0.5 * nonc) if nonc > 0.0 else 0
    return 2.0 * gen.standard_gamma(0.5 * df + k)


@njit(nogil=True, cache=True)
def _bridge_hit(gen, x0, x1, b, h):
    p = math.exp(-2.0 * (math.sqrt(x0) - b) * (math.sqrt(x1) - b) / h)
    return p > BRIDGE_CUTOFF and gen.random() < p


@njit(nogil=True, cache=True)
def stream_numba(gen, x0, b, nu, delta, h, n_pre, t, horizon, step, post, bridge,
                 alive, xt, hit, trunc):
    b2 = b * b
    for i in range(alive.shape[0]):
        x = x0
        up = True
        for _ in range(n_pre):
            xn = h * _ncx2(gen, delta, x / h)
            if xn <= b2 or (bridge and _bridge_hit(gen, x, xn, b, h)):
                up = False
                break
            x = xn
        alive[i] = up
        xt[i] = x if up else np.nan
        hit[i] = False
        trunc[i] = 0.0
        if not (up and post):
            continue
        s = t
        while True:
            gap = horizon - s
            if gap <= 1e-12 * horizon:
                trunc[i] = (b2 / x) ** nu
                hit[i] = gen.random() < trunc[i]
                break
            d = (math.sqrt(x) - b) / SAFETY_Z
            hh = min(max(d * d, step), gap)
            xn = hh * _ncx2(gen, delta, x / hh)
            s += hh
            if xn <= b2 or (bridge and _bridge_hit(gen, x, xn, b, hh)):
                hit[i] = True
                break
            x = xn


def _ncx2_vec(gen, df, nonc):
    if df > 1.0:
        z = gen.standard_normal(nonc.shape[0]) + np.sqrt(nonc)
        return 2.0 * gen.standard_gamma(0.5 * (df - 1.0), nonc.shape[0]) + z * z
    k = gen.poisson(0.5 * nonc)
    return 2.0 * gen.standard_gamma(0.5 * df + k)


def _bridge_vec(gen, x0, x1, b, h):
    p = np.exp(-2.0 * (np.sqrt(x0) - b) * (np.sqrt(x1) - b) / h)
    out = np.zeros(p.shape[0], dtype=np.bool_)
    live = np.flatnonzero(p > BRIDGE_CUTOFF)
    if live.size:
        out[live] = gen.random(live.size) < p[live]
    return out


def stream_numpy(gen, x0, b, nu, delta, h, n_pre, t, horizon, step, post, bridge,
                 alive, xt, hit, trunc):
    n = alive.shape[0]
    b2 = b * b
    idx = np.arange(n)
    x = np.full(n, float(x0))
    for _ in range(n_pre):
        if idx.size == 0:
            break
        xn = h * _ncx2_vec(gen, delta, x / h)
        keep = xn > b2
        if bridge:
            keep[keep] = ~_bridge_vec(gen, x[keep], xn[keep], b, h)
        x = xn
        if not keep.all():
            idx = idx[keep]
            x = x[keep]
    alive[:] = False
    alive[idx] = True
    xt[:] = np.nan
    xt[idx] = x
    hit[:] = False
    trunc[:] = 0.0
    if not post:
        return
    s = np.full(idx.size, float(t))
    while idx.size:
        gap = horizon - s
        done = gap <= 1e-12 * horizon
        if done.any():
            mass = (b2 / x[done]) ** nu
            trunc[idx[done]] = mass
            hit[idx[done]] = gen.random(mass.size) < mass
            live = ~done
            idx, x, s, gap = idx[live], x[live], s[live], gap[live]
            if idx.size == 0:
                break
        d = (np.sqrt(x) - b) / SAFETY_Z
        hh = np.minimum(np.maximum(d * d, step), gap)
        xn = hh * _ncx2_vec(gen, delta, x / hh)
        s = s + hh
        crossed = xn <= b2
        if bridge:
            ok = ~crossed
            crossed[ok] = _bridge_vec(gen, x[ok], xn[ok], b, hh[ok])
        x = xn
        if crossed.any():
            hit[idx[crossed]] = True
            live = ~crossed
            idx, x, s = idx[live], x[live], s[live]
