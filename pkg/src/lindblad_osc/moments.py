"""Closed-form evolution of first and second moments.

The mean coordinate/momentum pair relaxes under a constant 2x2 matrix; the
three variances (sigma_qq, sigma_pp, sigma_pq) relax under a constant 3x3
matrix obtained from the same generator, so the covariance propagator is the
induced action of the 2x2 one on symmetric matrices.  Both are evaluated
through the damped cosh/sinhc pair, which is finite in all damping regimes.
When the 3x3 relaxation matrix is (nearly) singular the code silently falls
back to fixed-step RK4 on the linear variance system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._stable import DEGENERATE_STEP, damped_cosh_sinhc, rk4_linear, rk4_linear_path, spectrum_is_degenerate
from .errors import NoSteadyState
from .params import OscillatorParams

__all__ = [
    "FirstMoments",
    "CovarianceTriple",
    "MomentTrajectory",
    "evolve_first_moments",
    "evolve_covariances",
    "asymptotic_covariances",
    "asymptotic_energy",
    "diffusion_from_asymptotic",
    "check_asymptotic_constraint",
    "check_initial_restriction",
    "energy_expectation",
    "trajectory",
]


@dataclass(frozen=True)
class FirstMoments:
    sigma_q: float
    sigma_p: float


@dataclass(frozen=True)
class CovarianceTriple:
    sigma_qq: float
    sigma_pp: float
    sigma_pq: float


@dataclass(frozen=True)
class MomentTrajectory:
    """Moments sampled on a time grid, stored as parallel arrays."""

    times: np.ndarray
    sigma_q: np.ndarray
    sigma_p: np.ndarray
    sigma_qq: np.ndarray
    sigma_pp: np.ndarray
    sigma_pq: np.ndarray
    energy: np.ndarray


def _propagator_2x2(params: OscillatorParams, t: float) -> np.ndarray:
    """exp(t M) for d/dt (sigma_q, sigma_p) = M (sigma_q, sigma_p)."""
    der_nu_sq = params.mu * params.mu - params.omega * params.omega
    ech, eshc = damped_cosh_sinhc(params.lam, der_nu_sq, t)
    m, mu = params.m, params.mu
    mw2 = m * params.omega * params.omega
    return np.array(
        [
            [ech + mu * eshc, eshc / m],
            [-mw2 * eshc, ech - mu * eshc],
        ]
    )


def evolve_first_moments(params: OscillatorParams, init: FirstMoments, t: float) -> FirstMoments:
    g = _propagator_2x2(params, t)
    q = g[0, 0] * init.sigma_q + g[0, 1] * init.sigma_p
    p = g[1, 0] * init.sigma_q + g[1, 1] * init.sigma_p
    return FirstMoments(sigma_q=q, sigma_p=p)


# The variance system is written in the scaled variables
# X = (m w sigma_qq, sigma_pp/(m w), sigma_pq), where it reads X' = R X + Dv.


def _variance_system(params: OscillatorParams):
    lam, mu, w = params.lam, params.mu, params.omega
    mw = params.m * w
    r = np.array(
        [
            [-2.0 * (lam - mu), 0.0, 2.0 * w],
            [0.0, -2.0 * (lam + mu), -2.0 * w],
            [-w, w, -2.0 * lam],
        ]
    )
    dv = np.array([2.0 * mw * params.d_qq, 2.0 * params.d_pp / mw, 2.0 * params.d_pq])
    return r, dv


def _variance_propagator(params: OscillatorParams, t: float) -> np.ndarray:
    """exp(t R) as the induced action of the scaled 2x2 propagator
    [[a, b], [c, d]] on symmetric matrices."""
    der_nu_sq = params.mu * params.mu - params.omega * params.omega
    ech, eshc = damped_cosh_sinhc(params.lam, der_nu_sq, t)
    mu, w = params.mu, params.omega
    a = ech + mu * eshc
    b = w * eshc
    c = -w * eshc
    d = ech - mu * eshc
    return np.array(
        [
            [a * a, b * b, 2.0 * a * b],
            [c * c, d * d, 2.0 * c * d],
            [a * c, b * d, a * d + b * c],
        ]
    )


def _to_scaled(params: OscillatorParams, cov: CovarianceTriple) -> np.ndarray:
    mw = params.m * params.omega
    return np.array([mw * cov.sigma_qq, cov.sigma_pp / mw, cov.sigma_pq])


def _from_scaled(params: OscillatorParams, x) -> CovarianceTriple:
    mw = params.m * params.omega
    return CovarianceTriple(sigma_qq=x[0] / mw, sigma_pp=x[1] * mw, sigma_pq=x[2])


def _fallback_step(params: OscillatorParams) -> float:
    return min(DEGENERATE_STEP, DEGENERATE_STEP / params.omega)


def evolve_covariances(params: OscillatorParams, init: CovarianceTriple, t: float) -> CovarianceTriple:
    r, dv = _variance_system(params)
    x0 = _to_scaled(params, init)
    if spectrum_is_degenerate(params.lam, params.mu, params.omega):
        x = rk4_linear(r, dv, x0, t, _fallback_step(params))
    else:
        x_fix = np.linalg.solve(r, -dv)
        x = _variance_propagator(params, t) @ (x0 - x_fix) + x_fix
    return _from_scaled(params, x)


def _require_steady_state(params: OscillatorParams) -> float:
    rate = params.lam * params.lam + params.omega * params.omega - params.mu * params.mu
    if not (params.lam > 0.0 and rate > 0.0):
        raise NoSteadyState(
            f"no relaxing fixed point for lambda={params.lam}, mu={params.mu}, omega={params.omega}"
        )
    return rate


def asymptotic_covariances(params: OscillatorParams) -> CovarianceTriple:
    rate = _require_steady_state(params)
    lam, mu, w, m = params.lam, params.mu, params.omega, params.m
    dqq, dpp, dpq = params.d_qq, params.d_pp, params.d_pq
    mw = m * w
    denom = 2.0 * lam * rate
    s_qq = (
        mw * mw * (2.0 * lam * (lam + mu) + w * w) * dqq
        + w * w * dpp
        + 2.0 * m * w * w * (lam + mu) * dpq
    ) / (mw * mw * denom)
    s_pp = (
        mw * mw * w * w * dqq
        + (2.0 * lam * (lam - mu) + w * w) * dpp
        - 2.0 * m * w * w * (lam - mu) * dpq
    ) / denom
    s_pq = (
        -(lam + mu) * mw * mw * dqq + (lam - mu) * dpp + 2.0 * m * (lam * lam - mu * mu) * dpq
    ) / (m * denom)
    return CovarianceTriple(sigma_qq=s_qq, sigma_pp=s_pp, sigma_pq=s_pq)


def asymptotic_energy(params: OscillatorParams) -> float:
    """Asymptotic mean energy, proportional to the total diffusion rate."""
    _require_steady_state(params)
    return (
        params.d_pp / (2.0 * params.m)
        + params.m * params.omega * params.omega * params.d_qq / 2.0
        + params.mu * params.d_pq
    ) / params.lam


def diffusion_from_asymptotic(params: OscillatorParams, cov_inf: CovarianceTriple):
    """Invert the asymptotic variances for (d_qq, d_pp, d_pq).

    Only m, omega, lam, mu of params are read.
    """
    lam, mu, w, m = params.lam, params.mu, params.omega, params.m
    d_qq = (lam - mu) * cov_inf.sigma_qq - cov_inf.sigma_pq / m
    d_pp = (lam + mu) * cov_inf.sigma_pp + m * w * w * cov_inf.sigma_pq
    d_pq = 0.5 * (
        m * w * w * cov_inf.sigma_qq - cov_inf.sigma_pp / m + 2.0 * lam * cov_inf.sigma_pq
    )
    return d_qq, d_pp, d_pq


def check_asymptotic_constraint(params: OscillatorParams, cov_inf: CovarianceTriple):
    """Uncertainty-style inequality the asymptotic variances must satisfy.

    Returns (ok, margin) with margin >= 0 iff the inequality holds.
    """
    lam, mu, w, m = params.lam, params.mu, params.omega, params.m
    det = cov_inf.sigma_qq * cov_inf.sigma_pp - cov_inf.sigma_pq**2
    mixed = m * w * w * cov_inf.sigma_qq + cov_inf.sigma_pp / m + 2.0 * mu * cov_inf.sigma_pq
    margin = (
        4.0 * (lam * lam + w * w - mu * mu) * det
        - mixed * mixed
        - params.hbar * params.hbar * lam * lam
    )
    return bool(margin >= 0.0), float(margin)


def check_initial_restriction(params: OscillatorParams, cov0: CovarianceTriple, cov_inf: CovarianceTriple):
    """Bilinear restriction pairing initial and asymptotic variances.

    Evaluates the pairing of cov0 with cov_inf against hbar^2 lambda / 2;
    returns (ok, margin).
    """
    cinf = cov_inf
    lam, mu, w, m = params.lam, params.mu, params.omega, params.m
    lhs = (
        lam * (cinf.sigma_qq * cov0.sigma_pp + cinf.sigma_pp * cov0.sigma_qq - 2.0 * cinf.sigma_pq * cov0.sigma_pq)
        - mu * (cinf.sigma_qq * cov0.sigma_pp - cinf.sigma_pp * cov0.sigma_qq)
        - (cinf.sigma_pq * cov0.sigma_pp - cinf.sigma_pp * cov0.sigma_pq) / m
        + m * w * w * (cinf.sigma_pq * cov0.sigma_qq - cinf.sigma_qq * cov0.sigma_pq)
    )
    margin = lhs - params.hbar * params.hbar * lam / 2.0
    return bool(margin >= 0.0), float(margin)


def energy_expectation(params: OscillatorParams, first: FirstMoments, cov: CovarianceTriple) -> float:
    q, p = first.sigma_q, first.sigma_p
    return (
        (cov.sigma_pp + p * p) / (2.0 * params.m)
        + params.m * params.omega * params.omega * (cov.sigma_qq + q * q) / 2.0
        + params.mu * (cov.sigma_pq + q * p)
    )


def trajectory(params: OscillatorParams, first0: FirstMoments, cov0: CovarianceTriple, times) -> MomentTrajectory:
    """Evaluate moments and energy on an ascending time grid."""
    times = np.asarray(times, dtype=float)
    n = times.size
    s_q = np.empty(n)
    s_p = np.empty(n)
    s_qq = np.empty(n)
    s_pp = np.empty(n)
    s_pq = np.empty(n)
    energy = np.empty(n)

    degenerate = spectrum_is_degenerate(params.lam, params.mu, params.omega)
    r, dv = _variance_system(params)
    if degenerate:
        xs = rk4_linear_path(r, dv, _to_scaled(params, cov0), times, _fallback_step(params))
    else:
        x_fix = np.linalg.solve(r, -dv)
        x0_rel = _to_scaled(params, cov0) - x_fix

    for i, t in enumerate(times):
        fm = evolve_first_moments(params, first0, t)
        if degenerate:
            cov = _from_scaled(params, xs[i])
        else:
            cov = _from_scaled(params, _variance_propagator(params, t) @ x0_rel + x_fix)
        s_q[i], s_p[i] = fm.sigma_q, fm.sigma_p
        s_qq[i], s_pp[i], s_pq[i] = cov.sigma_qq, cov.sigma_pp, cov.sigma_pq
        energy[i] = energy_expectation(params, fm, cov)

    return MomentTrajectory(
        times=times, sigma_q=s_q, sigma_p=s_p, sigma_qq=s_qq, sigma_pp=s_pp, sigma_pq=s_pq, energy=energy
    )
