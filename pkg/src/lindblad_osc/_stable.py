"""Shared numerically stable scalar kernels for the closed-form propagators.

All relaxation propagators in this package are built from the pair
cosh(gamma t) and sinh(gamma t)/gamma with gamma^2 = mu^2 - omega^2.  Both
are even in gamma, hence real for any sign of gamma^2; near gamma t = 0 they
are evaluated by a degree-7 Taylor polynomial in (gamma t)^2 to avoid
cancellation and the 0/0 in sinh(gamma t)/gamma.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["cosh_sinhc", "damped_cosh_sinhc", "spectrum_is_degenerate", "rk4_linear", "rk4_linear_path"]

# (gamma t)^2 below this is handled by the Taylor branch; 1e-8 in the square
# corresponds to |gamma t| < 1e-4.
_TAYLOR_CUT = 1e-8

# fallback integrator resolution for degenerate relaxation spectra
DEGENERATE_STEP = 1e-3


def cosh_sinhc(nu_sq: float, t: float) -> tuple[float, float]:
    """Return (cosh(g t), sinh(g t)/g) for g = sqrt(nu_sq + 0j), as floats."""
    x = nu_sq * t * t
    if abs(x) < _TAYLOR_CUT:
        ch = 1.0 + x * (0.5 + x * (1.0 / 24.0 + x / 720.0))
        shc = t * (1.0 + x * (1.0 / 6.0 + x * (1.0 / 120.0 + x / 5040.0)))
        return ch, shc
    if nu_sq > 0.0:
        nu = math.sqrt(nu_sq)
        return math.cosh(nu * t), math.sinh(nu * t) / nu
    big_omega = math.sqrt(-nu_sq)
    return math.cos(big_omega * t), math.sin(big_omega * t) / big_omega


def damped_cosh_sinhc(lam: float, nu_sq: float, t: float) -> tuple[float, float]:
    """Return exp(-lam t) * (cosh(g t), sinh(g t)/g) without overflow.

    In the overdamped regime cosh(nu t) alone can overflow while the damped
    product stays bounded, so the two exponentials exp(-(lam -+ nu) t) are
    combined directly.
    """
    x = nu_sq * t * t
    if abs(x) >= _TAYLOR_CUT and nu_sq > 0.0:
        nu = math.sqrt(nu_sq)
        ep = math.exp(-(lam - nu) * t)
        em = math.exp(-(lam + nu) * t)
        return 0.5 * (ep + em), 0.5 * (ep - em) / nu
    ch, shc = cosh_sinhc(nu_sq, t)
    damp = math.exp(-lam * t)
    return damp * ch, damp * shc


def spectrum_is_degenerate(lam: float, mu: float, omega: float) -> bool:
    """True when the relaxation matrices with eigenvalues -2 lam,
    -2(lam +- gamma) are (nearly) singular, i.e. lam (lam^2 - gamma^2) ~ 0."""
    nu_sq = mu * mu - omega * omega
    det_factor = lam * (lam * lam - nu_sq)
    scale = max(abs(lam), abs(mu), omega)
    return abs(det_factor) <= 1e-8 * scale**3


def rk4_linear(mat, const, y0, t: float, max_step: float):
    """Integrate y' = mat @ y + const from y(0)=y0 to time t by fixed-step RK4."""
    mat = np.asarray(mat)
    const = np.asarray(const)
    y = np.array(y0, dtype=np.result_type(mat, const, y0, float))
    if t == 0.0:
        return y
    n = max(1, math.ceil(abs(t) / max_step))
    h = t / n
    for _ in range(n):
        k1 = mat @ y + const
        k2 = mat @ (y + 0.5 * h * k1) + const
        k3 = mat @ (y + 0.5 * h * k2) + const
        k4 = mat @ (y + h * k3) + const
        y += (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return y


def rk4_linear_path(mat, const, y0, times, max_step: float):
    """Like rk4_linear but returns y at each time of an ascending grid."""
    out = []
    y = np.array(y0, dtype=np.result_type(np.asarray(mat), np.asarray(const), y0, float))
    t_prev = 0.0
    for t in times:
        if t < t_prev:
            raise ValueError("times must be ascending and nonnegative")
        y = rk4_linear(mat, const, y, t - t_prev, max_step)
        t_prev = t
        out.append(y.copy())
    return out
