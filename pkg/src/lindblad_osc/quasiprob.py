"""Quasiprobability distributions in the s-ordered family (P, Wigner, Q).

Phase-space coordinates are x1 + i x2 = sqrt(m w / 2 hbar) <q> + i <p> /
sqrt(2 hbar m w).  For each ordering s in {1 (P), 0 (Wigner), -1 (Q)} the
distribution obeys a linear Fokker-Planck equation with the same drift
matrix and an s-dependent diffusion matrix, so a Gaussian stays Gaussian;
its covariance matrix differs from the s'-ordered one only by (s'-s)/4 on
the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import moments
from .errors import NonPositiveDefinite, NoSteadyState
from .params import OscillatorParams

__all__ = [
    "S_GLAUBER_P",
    "S_WIGNER",
    "S_HUSIMI_Q",
    "FPCoefficients",
    "GaussianDistribution",
    "fp_coefficients",
    "covariance_evolution_s",
    "steady_state_distribution",
    "distribution_from_moments",
    "evaluate_distribution",
    "wigner_from_p_convolution_check",
]

S_GLAUBER_P = 1
S_WIGNER = 0
S_HUSIMI_Q = -1

_VALID_S = (S_GLAUBER_P, S_WIGNER, S_HUSIMI_Q)


def _check_s(s: int) -> int:
    if s not in _VALID_S:
        raise ValueError(f"ordering parameter must be one of {_VALID_S}, got {s!r}")
    return int(s)


@dataclass(frozen=True)
class FPCoefficients:
    """Drift and diffusion matrices of the s-ordered Fokker-Planck equation."""

    drift: np.ndarray
    diffusion: np.ndarray


@dataclass(frozen=True)
class GaussianDistribution:
    """Gaussian quasiprobability with ordering s.

    positive_definite is False for a P function whose formal covariance is
    not positive definite (no regular P distribution exists); such a
    distribution cannot be evaluated pointwise.
    """

    s: int
    mean: np.ndarray
    cov: np.ndarray
    positive_definite: bool = True


def fp_coefficients(params: OscillatorParams, s: int) -> FPCoefficients:
    s = _check_s(s)
    lam, mu, w = params.lam, params.mu, params.omega
    mw = params.m * w
    drift = np.array([[lam - mu, -w], [w, lam + mu]])
    d11 = mw * params.d_qq / params.hbar - 0.5 * s * (lam - mu)
    d22 = params.d_pp / (params.hbar * mw) - 0.5 * s * (lam + mu)
    d12 = params.d_pq / params.hbar
    diffusion = np.array([[d11, d12], [d12, d22]])
    return FPCoefficients(drift=drift, diffusion=diffusion)


def _phys_from_s(params: OscillatorParams, s: int, sigma: np.ndarray) -> moments.CovarianceTriple:
    mw = params.m * params.omega
    hbar = params.hbar
    shift = 0.25 * s
    return moments.CovarianceTriple(
        sigma_qq=(2.0 * hbar / mw) * (sigma[0, 0] + shift),
        sigma_pp=2.0 * hbar * mw * (sigma[1, 1] + shift),
        sigma_pq=2.0 * hbar * sigma[0, 1],
    )


def _s_from_phys(params: OscillatorParams, s: int, cov: moments.CovarianceTriple) -> np.ndarray:
    mw = params.m * params.omega
    hbar = params.hbar
    shift = 0.25 * s
    s11 = mw * cov.sigma_qq / (2.0 * hbar) - shift
    s22 = cov.sigma_pp / (2.0 * hbar * mw) - shift
    s12 = cov.sigma_pq / (2.0 * hbar)
    return np.array([[s11, s12], [s12, s22]])


def covariance_evolution_s(params: OscillatorParams, s: int, sigma0: np.ndarray, t: float) -> np.ndarray:
    """Covariance of the s-ordered Gaussian at time t (solves
    dsigma/dt = -A sigma - sigma A^T + D^(s))."""
    s = _check_s(s)
    sigma0 = np.asarray(sigma0, dtype=float)
    cov_t = moments.evolve_covariances(params, _phys_from_s(params, s, sigma0), t)
    return _s_from_phys(params, s, cov_t)


def steady_state_distribution(params: OscillatorParams, s: int) -> GaussianDistribution:
    s = _check_s(s)
    lam, mu, w = params.lam, params.mu, params.omega
    rate = lam * lam + w * w - mu * mu
    if not (lam > 0.0 and rate > 0.0):
        raise NoSteadyState(
            f"no relaxing fixed point for lambda={lam}, mu={mu}, omega={w}"
        )
    fp = fp_coefficients(params, s)
    d11, d22, d12 = fp.diffusion[0, 0], fp.diffusion[1, 1], fp.diffusion[0, 1]
    denom = 4.0 * lam * rate
    s11 = ((2.0 * lam * (lam + mu) + w * w) * d11 + w * w * d22 + 2.0 * w * (lam + mu) * d12) / denom
    s22 = (w * w * d11 + (2.0 * lam * (lam - mu) + w * w) * d22 - 2.0 * w * (lam - mu) * d12) / denom
    s12 = (-w * (lam + mu) * d11 + w * (lam - mu) * d22 + 2.0 * (lam * lam - mu * mu) * d12) / denom
    cov = np.array([[s11, s12], [s12, s22]])
    pos_def = s11 > 0.0 and s11 * s22 - s12 * s12 > 0.0
    return GaussianDistribution(s=s, mean=np.zeros(2), cov=cov, positive_definite=bool(pos_def))


def distribution_from_moments(
    params: OscillatorParams, s: int, first: moments.FirstMoments, cov: moments.CovarianceTriple
) -> GaussianDistribution:
    """Gaussian s-ordered distribution with the given physical moments."""
    s = _check_s(s)
    mw = params.m * params.omega
    hbar = params.hbar
    mean = np.array([
        np.sqrt(mw / (2.0 * hbar)) * first.sigma_q,
        first.sigma_p / np.sqrt(2.0 * hbar * mw),
    ])
    sig = _s_from_phys(params, s, cov)
    pos_def = sig[0, 0] > 0.0 and sig[0, 0] * sig[1, 1] - sig[0, 1] ** 2 > 0.0
    return GaussianDistribution(s=s, mean=mean, cov=sig, positive_definite=bool(pos_def))


def evaluate_distribution(dist: GaussianDistribution, points) -> np.ndarray:
    """Evaluate the Gaussian at (n, 2) phase-space points."""
    if not dist.positive_definite:
        raise NonPositiveDefinite(
            "distribution covariance is not positive definite; no regular density exists"
        )
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    det = dist.cov[0, 0] * dist.cov[1, 1] - dist.cov[0, 1] * dist.cov[1, 0]
    inv = np.array(
        [[dist.cov[1, 1], -dist.cov[0, 1]], [-dist.cov[1, 0], dist.cov[0, 0]]]
    ) / det
    d = pts - dist.mean
    quad = inv[0, 0] * d[:, 0] ** 2 + 2.0 * inv[0, 1] * d[:, 0] * d[:, 1] + inv[1, 1] * d[:, 1] ** 2
    values = np.exp(-0.5 * quad) / (2.0 * np.pi * np.sqrt(det))
    return values if np.ndim(points) == 2 else values[0]


def wigner_from_p_convolution_check(p_dist: GaussianDistribution, w_dist: GaussianDistribution, tol: float = 1e-10) -> bool:
    """Check the Gaussian-convolution relation between the P and Wigner
    functions: same mean, Wigner covariance = P covariance + I/4."""
    if p_dist.s != S_GLAUBER_P or w_dist.s != S_WIGNER:
        raise ValueError("arguments must be (P distribution, Wigner distribution)")
    cov_ok = np.max(np.abs(w_dist.cov - (p_dist.cov + 0.25 * np.eye(2)))) <= tol
    mean_ok = np.max(np.abs(w_dist.mean - p_dist.mean)) <= tol
    return bool(cov_ok and mean_ok)
