"""Normally ordered characteristic function of the damped oscillator.

For a coherent initial state the characteristic function stays the
exponential of a quadratic in (Lambda, Lambda*): a linear part driven by the
mean-field propagator pair (u, v) and a width part (f, h) obeying a constant
linear 3x3 system in (Re f, Im f, h).  The widths are evolved through the
same damped cosh/sinhc kernels as the moments; the textbook relaxation
constants (M, N, P and the asymptotic widths) are exposed separately and
raise DegenerateSpectrum where their denominators vanish.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._stable import DEGENERATE_STEP, damped_cosh_sinhc, rk4_linear, spectrum_is_degenerate
from .errors import DegenerateSpectrum
from .moments import CovarianceTriple, FirstMoments
from .params import OscillatorParams, derived_coefficients

__all__ = [
    "PropagatorPair",
    "CharConstants",
    "CharWidths",
    "propagator_uv",
    "char_constants",
    "char_widths",
    "evaluate_char",
    "moments_from_char",
]


@dataclass(frozen=True)
class PropagatorPair:
    """Mean-field propagators: <a+>(t) = u <a+>(0) - v <a>(0); v is real."""

    u: complex
    v: complex


@dataclass(frozen=True)
class CharConstants:
    """Relaxation constants of the width system written in exponential form:
    h(t) = M e^{-2 lam t} + N e^{-2 (lam - gamma) t} + P e^{-2 (lam + gamma) t} + h_inf."""

    big_m: float
    big_n: complex
    big_p: complex
    r_inf: float
    i_inf: float
    h_inf: float


@dataclass(frozen=True)
class CharWidths:
    f: complex
    h: float


def propagator_uv(params: OscillatorParams, t: float) -> PropagatorPair:
    nu_sq = params.mu * params.mu - params.omega * params.omega
    ech, eshc = damped_cosh_sinhc(params.lam, nu_sq, t)
    u = complex(ech, params.omega * eshc)
    v = complex(-params.mu * eshc, 0.0)
    return PropagatorPair(u=u, v=v)


def _width_system(params: OscillatorParams):
    """Constant system w' = Q w + b for w = (Re f, Im f, h)."""
    lam, mu, w = params.lam, params.mu, params.omega
    der = derived_coefficients(params)
    q = np.array(
        [
            [-2.0 * lam, -2.0 * w, -mu],
            [2.0 * w, -2.0 * lam, 0.0],
            [-4.0 * mu, 0.0, -2.0 * lam],
        ]
    )
    b = np.array([der.c.real, der.c.imag, der.ell])
    return q, b


def _width_propagator(params: OscillatorParams, t: float) -> np.ndarray:
    """exp(t Q), built from the damped cosh/sinhc pair (finite at gamma = 0)."""
    lam, mu, w = params.lam, params.mu, params.omega
    nu_sq = mu * mu - w * w
    ech, eshc = damped_cosh_sinhc(lam, nu_sq, t)
    e2 = math.exp(-2.0 * lam * t)
    c2 = 2.0 * ech * ech - e2  # e^{-2 lam t} cosh(2 gamma t)
    s2 = 2.0 * eshc * ech  # e^{-2 lam t} sinh(2 gamma t)/gamma
    d2 = 2.0 * eshc * eshc  # e^{-2 lam t} (cosh(2 gamma t) - 1)/gamma^2
    return np.array(
        [
            [c2, -w * s2, -0.5 * mu * s2],
            [w * s2, c2 - mu * mu * d2, -0.5 * w * mu * d2],
            [-2.0 * mu * s2, 2.0 * w * mu * d2, c2 + w * w * d2],
        ]
    )


def char_widths(params: OscillatorParams, t: float) -> CharWidths:
    """Widths (f, h) at time t, from vanishing initial widths."""
    q, b = _width_system(params)
    if spectrum_is_degenerate(params.lam, params.mu, params.omega):
        w = rk4_linear(q, b, np.zeros(3), t, min(DEGENERATE_STEP, DEGENERATE_STEP / params.omega))
    else:
        w_fix = np.linalg.solve(q, -b)
        w = _width_propagator(params, t) @ (-w_fix) + w_fix
    return CharWidths(f=complex(w[0], w[1]), h=w[2])


def char_constants(params: OscillatorParams) -> CharConstants:
    lam, mu, w = params.lam, params.mu, params.omega
    der = derived_coefficients(params)
    nu_sq, gamma = der.nu_sq, der.gamma
    scale = max(abs(lam), abs(mu), w)
    if spectrum_is_degenerate(lam, mu, w) or abs(nu_sq) <= 1e-8 * scale * scale:
        raise DegenerateSpectrum(
            "relaxation constants are singular at lambda (lambda^2 - gamma^2) = 0 or gamma = 0"
        )
    re_c, im_c, ell = der.c.real, der.c.imag, der.ell
    rate = lam * lam - nu_sq  # lambda^2 - gamma^2, real
    big_m = (w / (lam * nu_sq)) * (mu * im_c + 0.5 * w * ell)
    big_n = (mu / (2.0 * nu_sq * (lam - gamma))) * (gamma * re_c - w * im_c - 0.5 * mu * ell)
    big_p = -(mu / (2.0 * nu_sq * (lam + gamma))) * (gamma * re_c + w * im_c + 0.5 * mu * ell)
    r_inf = (2.0 * (lam * re_c - w * im_c) - ell * mu) / (4.0 * rate)
    i_inf = (2.0 * w * lam * re_c + 2.0 * (lam * lam - mu * mu) * im_c - ell * mu * w) / (4.0 * lam * rate)
    h_inf = (ell * (lam * lam + w * w) - 2.0 * mu * (lam * re_c - w * im_c)) / (2.0 * lam * rate)
    return CharConstants(big_m=big_m, big_n=big_n, big_p=big_p, r_inf=r_inf, i_inf=i_inf, h_inf=h_inf)


def evaluate_char(params: OscillatorParams, alpha0: complex, lambda_arg: complex, t: float) -> complex:
    """chi(Lambda, t) for the initial coherent state |alpha0>."""
    pair = propagator_uv(params, t)
    widths = char_widths(params, t)
    u, v = pair.u, pair.v
    lin = (u * alpha0.conjugate() - v * alpha0) * lambda_arg + (
        -u.conjugate() * alpha0 + v * alpha0.conjugate()
    ) * lambda_arg.conjugate()
    quad = (
        widths.f * lambda_arg * lambda_arg
        + widths.f.conjugate() * lambda_arg.conjugate() * lambda_arg.conjugate()
        + widths.h * (lambda_arg * lambda_arg.conjugate())
    )
    return cmath.exp(lin + quad)


def moments_from_char(params: OscillatorParams, alpha0: complex, t: float):
    """First and second moments read off the characteristic function.

    Returns (FirstMoments, CovarianceTriple); must agree with the direct
    moment evolution from the same coherent initial data.
    """
    pair = propagator_uv(params, t)
    widths = char_widths(params, t)
    mw = params.m * params.omega
    hbar = params.hbar
    adag = pair.u * alpha0.conjugate() - pair.v * alpha0  # <a+>(t)
    sigma_q = math.sqrt(hbar / (2.0 * mw)) * 2.0 * adag.real
    sigma_p = -math.sqrt(hbar * mw / 2.0) * 2.0 * adag.imag
    big_r, big_i, h = widths.f.real, widths.f.imag, widths.h
    sigma_qq = (hbar / mw) * (2.0 * big_r - h + 0.5)
    sigma_pp = -hbar * mw * (2.0 * big_r + h - 0.5)
    sigma_pq = -2.0 * hbar * big_i
    return (
        FirstMoments(sigma_q=sigma_q, sigma_p=sigma_p),
        CovarianceTriple(sigma_qq=sigma_qq, sigma_pp=sigma_pp, sigma_pq=sigma_pq),
    )
