"""Jit-compiled inner loops for the ODE integrator and the lattice simulation.

These kernels consume a ``np.random.Generator`` directly; numba advances the
same underlying bit stream as numpy, so results are bitwise reproducible and
the stream stays continuous across the Python/kernel boundary. Per iteration
the lattice kernel draws exactly three uniform blocks of length n (neighbor
pick, adoption coin, exploration coin) followed by the replacement draws of
the agents that explore, in agent-index order. Any change to that order is a
break in the reproducibility contract.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _drift(a, b, c, mu, x):
    y = 1.0 - x
    base = x * y * (c * (a + b) * x - (b - (1.0 - c) * a))
    return base + mu * (x * y * (1.0 - c) * (b - a) + (y * y * b - x * x * a))


@njit(cache=True, inline="always")
def _rk4_step(a, b, c, mu, x, dt):
    k1 = _drift(a, b, c, mu, x)
    x1 = x + 0.5 * dt * k1
    k2 = _drift(a, b, c, mu, x1)
    x2 = x + 0.5 * dt * k2
    k3 = _drift(a, b, c, mu, x2)
    x3 = x + dt * k3
    k4 = _drift(a, b, c, mu, x3)
    return x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


@njit(cache=True)
def rk4_path(a, b, c, mu, x0, dt, n_steps, out):
    """Fill ``out`` (length n_steps + 1) with the clamped trajectory.

    Returns -1 on success, else the index of the first non-finite step.
    """
    x = x0
    out[0] = x
    for i in range(n_steps):
        x = _rk4_step(a, b, c, mu, x, dt)
        if not np.isfinite(x):
            return i + 1
        if x < 0.0:
            x = 0.0
        elif x > 1.0:
            x = 1.0
        out[i + 1] = x
    return -1


@njit(cache=True)
def rk4_final(a, b, c, mu, x0, dt, n_steps):
    """Final state only; used for fine-step reference solutions."""
    x = x0
    for _ in range(n_steps):
        x = _rk4_step(a, b, c, mu, x, dt)
        if not np.isfinite(x):
            return np.nan
        if x < 0.0:
            x = 0.0
        elif x > 1.0:
            x = 1.0
    return x


@njit(cache=True, inline="always")
def _sigmoid(z):
    if z >= 0.0:
        return 1.0 / (1.0 + np.exp(-z))
    e = np.exp(z)
    return e / (1.0 + e)


@njit(cache=True)
def simulate_segment(
    nbr_flat,
    offsets,
    actions,
    rate_idx,
    rates_l,
    mu_fixed,
    full_scope,
    m00,
    m01,
    m10,
    m11,
    s,
    mean_payoff,
    n_iters,
    rng,
    prop_a,
    shares,
    out_start,
):
    """Run ``n_iters`` synchronous iterations under a fixed payoff matrix.

    ``actions`` (and ``rate_idx`` in evolving mode, i.e. when it has length
    n) are updated in place. Per-iteration action shares land in
    ``prop_a[out_start:]`` and, in evolving mode, rate-class shares in
    ``shares[out_start:]``.
    """
    n = actions.shape[0]
    n_l = rates_l.shape[0]
    evolving = rate_idx.shape[0] == n
    pay = np.empty(n, dtype=np.float64)
    new_actions = np.empty_like(actions)
    new_rate = np.empty_like(rate_idx)

    for it in range(n_iters):
        # interaction phase: every edge plays once, totals per agent
        for i in range(n):
            lo = offsets[i]
            hi = offsets[i + 1]
            nb = 0
            for k in range(lo, hi):
                nb += actions[nbr_flat[k]]
            deg = hi - lo
            na = deg - nb
            if actions[i] == 0:
                u = m00 * na + m01 * nb
            else:
                u = m10 * na + m11 * nb
            pay[i] = u / deg if mean_payoff else u

        # imitation phase: everyone samples one neighbor from the snapshot
        u_pick = rng.random(n)
        u_adopt = rng.random(n)
        for i in range(n):
            lo = offsets[i]
            deg = offsets[i + 1] - lo
            j = nbr_flat[lo + int(u_pick[i] * deg)]
            new_actions[i] = actions[i]
            if evolving:
                new_rate[i] = rate_idx[i]
                differs = actions[j] != actions[i] or rate_idx[j] != rate_idx[i]
            else:
                differs = actions[j] != actions[i]
            if differs:
                p = _sigmoid(s * (pay[j] - pay[i]))
                if u_adopt[i] < p:
                    new_actions[i] = actions[j]
                    if evolving:
                        new_rate[i] = rate_idx[j]

        # exploration phase: uses the post-adoption exploration rate
        u_explore = rng.random(n)
        n_a = 0
        for i in range(n):
            r = rates_l[new_rate[i]] if evolving else mu_fixed
            if u_explore[i] < r:
                new_actions[i] = np.int8(rng.integers(0, 2))
                if evolving and full_scope:
                    new_rate[i] = np.int8(rng.integers(0, n_l))
            actions[i] = new_actions[i]
            if evolving:
                rate_idx[i] = new_rate[i]
            if actions[i] == 0:
                n_a += 1

        row = out_start + it
        prop_a[row] = n_a / n
        if evolving:
            for i in range(n):
                shares[row, rate_idx[i]] += 1.0
            inv = 1.0 / n
            for k in range(n_l):
                shares[row, k] *= inv
