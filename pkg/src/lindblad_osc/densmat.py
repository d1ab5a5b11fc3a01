"""Fock-basis density matrix via the generating-function method.

The double generating function G(x, y, t) = sum_mn x^m y^n rho_mn /
sqrt(m! n!) of a Gaussian state keeps the form

    G = (1/A) exp{ x y - [B (x-C)^2 + D (y-E)^2 + F (x-C)(y-E)] / H },

where (B, D, F) obey a constant linear 3x3 system, (C, E) relax through the
mean-field pair (u, v), and the normalization gauge H = B D - F^2/4,
A = sqrt(-H)/2 pins Tr rho = 1.  Matrix elements are read off G by a triple
binomial sum evaluated with log-factorials and explicit phase tracking so
that dimensions well past m, n ~ 30 do not overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._stable import DEGENERATE_STEP, rk4_linear, spectrum_is_degenerate
from .charfunc import propagator_uv, _width_propagator
from .errors import GaugeViolation, NoSteadyState, NotSpecialCase, NotThermal
from .params import OscillatorParams, derived_coefficients

__all__ = [
    "GenFuncCoeffs",
    "FockDensityMatrix",
    "packet_coeffs",
    "stationary_coeffs",
    "evolve_genfunc_coeffs",
    "genfunc_value",
    "density_matrix_from_coeffs",
    "bose_einstein_matrix",
    "glauber_packet_evolution",
]


@dataclass(frozen=True)
class GenFuncCoeffs:
    """Coefficients of the Gaussian generating function.

    a_norm is the normalization A; b, d, f are the quadratic coefficients
    (d = conj(b) and f real for a Hermitian state); c, e the displacement
    centers (e = conj(c) for a Hermitian state); h the gauge combination
    b d - f^2/4, kept negative for normalizable states.
    """

    a_norm: float
    b: complex
    c: complex
    d: complex
    e: complex
    f: float
    h: float


@dataclass(frozen=True)
class FockDensityMatrix:
    """dim x dim density matrix in the number basis, indices 0..dim-1."""

    dim: int
    entries: np.ndarray


def _check_gauge(coeffs: GenFuncCoeffs, tol: float = 1e-6) -> None:
    gauge = coeffs.b * coeffs.d - 0.25 * coeffs.f * coeffs.f
    scale = max(abs(coeffs.h), 1.0)
    if abs(gauge - coeffs.h) > tol * scale:
        raise GaugeViolation(
            f"coefficients violate the gauge B D - F^2/4 = H: residual {abs(gauge - coeffs.h):.3e}"
        )
    if not coeffs.h < 0.0:
        raise GaugeViolation(f"gauge combination H = {coeffs.h} is not negative; state not normalizable")
    if abs(coeffs.a_norm * coeffs.a_norm - (-coeffs.h / 4.0)) > tol * max(abs(coeffs.h), 1.0):
        raise GaugeViolation("normalization A^2 = -H/4 violated")


def packet_coeffs(alpha0: complex) -> GenFuncCoeffs:
    """Coefficients of the coherent packet |alpha0><alpha0|."""
    alpha0 = complex(alpha0)
    return GenFuncCoeffs(
        a_norm=1.0, b=0.0, c=alpha0.conjugate(), d=0.0, e=alpha0, f=-4.0, h=-4.0
    )


def _bdf_system(params: OscillatorParams):
    """Constant system w' = Q w + b for w = (Re D, Im D, F), D = conj(B)."""
    lam, mu, w = params.lam, params.mu, params.omega
    der = derived_coefficients(params)
    q = np.array(
        [
            [-2.0 * lam, -2.0 * w, -mu],
            [2.0 * w, -2.0 * lam, 0.0],
            [-4.0 * mu, 0.0, -2.0 * lam],
        ]
    )
    b = np.array(
        [2.0 * (der.d1.real - mu), -2.0 * der.d1.imag, -4.0 * (der.d2 + lam)]
    )
    return q, b


def stationary_coeffs(params: OscillatorParams) -> GenFuncCoeffs:
    """Coefficients of the asymptotic (relaxed) state."""
    rate = params.lam**2 + params.omega**2 - params.mu**2
    if not (params.lam > 0.0 and rate > 0.0):
        raise NoSteadyState(
            f"no relaxing fixed point for lambda={params.lam}, mu={params.mu}, omega={params.omega}"
        )
    q, b = _bdf_system(params)
    big_r, big_i, big_f = np.linalg.solve(q, -b)
    return _coeffs_from_widths(big_r, big_i, big_f, 0.0, 0.0)


def _coeffs_from_widths(big_r: float, big_i: float, big_f: float, c: complex, e: complex) -> GenFuncCoeffs:
    h = big_r * big_r + big_i * big_i - 0.25 * big_f * big_f
    if not h < 0.0:
        raise GaugeViolation(f"coefficients give H = {h} >= 0; state not normalizable")
    return GenFuncCoeffs(
        a_norm=0.5 * math.sqrt(-h),
        b=complex(big_r, -big_i),
        c=c,
        d=complex(big_r, big_i),
        e=e,
        f=big_f,
        h=h,
    )


def evolve_genfunc_coeffs(params: OscillatorParams, coeffs: GenFuncCoeffs, t: float) -> GenFuncCoeffs:
    """Propagate generating-function coefficients to time t."""
    _check_gauge(coeffs)
    if abs(coeffs.d - coeffs.b.conjugate()) > 1e-9 * max(1.0, abs(coeffs.b)):
        raise ValueError("coefficients must satisfy D = conj(B) (Hermitian state)")
    pair = propagator_uv(params, t)
    c_t = pair.u * coeffs.c - pair.v * coeffs.e
    e_t = pair.u.conjugate() * coeffs.e - pair.v * coeffs.c
    w0 = np.array([coeffs.d.real, coeffs.d.imag, coeffs.f])
    q, b = _bdf_system(params)
    if spectrum_is_degenerate(params.lam, params.mu, params.omega):
        w = rk4_linear(q, b, w0, t, min(DEGENERATE_STEP, DEGENERATE_STEP / params.omega))
    else:
        w_fix = np.linalg.solve(q, -b)
        w = _width_propagator(params, t) @ (w0 - w_fix) + w_fix
    return _coeffs_from_widths(w[0], w[1], w[2], c_t, e_t)


def genfunc_value(coeffs: GenFuncCoeffs, x: complex, y: complex) -> complex:
    """Evaluate G(x, y) for the given coefficients."""
    dx = x - coeffs.c
    dy = y - coeffs.e
    quad = (coeffs.b * dx * dx + coeffs.d * dy * dy + coeffs.f * dx * dy) / coeffs.h
    return cmath.exp(x * y - quad) / coeffs.a_norm


def _series_scaled(g: complex, p: complex, dim: int):
    """Scaled series shat[k] = sum_j g^j p^(k-2j) / (j! (k-2j)!), returned as
    (log magnitude, unit phase) arrays of length dim."""
    logmag = np.full(dim, -np.inf)
    phase = np.zeros(dim, dtype=complex)
    abs_g, abs_p = abs(g), abs(p)
    lg = math.log(abs_g) if abs_g > 0.0 else None
    lp = math.log(abs_p) if abs_p > 0.0 else None
    ph_g = g / abs_g if abs_g > 0.0 else 0.0
    ph_p = p / abs_p if abs_p > 0.0 else 0.0
    for k in range(dim):
        terms = []
        for j in range(k // 2 + 1):
            kp = k - 2 * j
            if (j > 0 and lg is None) or (kp > 0 and lp is None):
                continue
            lm = -math.lgamma(j + 1) - math.lgamma(kp + 1)
            if j > 0:
                lm += j * lg
            if kp > 0:
                lm += kp * lp
            terms.append((lm, (ph_g**j) * (ph_p**kp)))
        if not terms:
            continue
        lmax = max(lm for lm, _ in terms)
        total = sum(cmath.exp(lm - lmax) * ph for lm, ph in terms)
        mag = abs(total)
        if mag > 0.0:
            logmag[k] = lmax + math.log(mag)
            phase[k] = total / mag
    return logmag, phase


def density_matrix_from_coeffs(coeffs: GenFuncCoeffs, dim: int) -> FockDensityMatrix:
    """Fock matrix elements 0..dim-1 of the state with the given coefficients."""
    _check_gauge(coeffs)
    b, c, d, e = coeffs.b, coeffs.c, coeffs.d, coeffs.e
    f, h, a = coeffs.f, coeffs.h, coeffs.a_norm
    g3 = 1.0 - f / h
    pref = cmath.exp(-(b * c * c + d * e * e + f * c * e) / h) / a

    s1_logmag, s1_phase = _series_scaled(-b / h, (2.0 * b * c + f * e) / h, dim)
    s2_logmag, s2_phase = _series_scaled(-d / h, (2.0 * d * e + f * c) / h, dim)

    half_lg = np.array([0.5 * math.lgamma(k + 1) for k in range(dim)])
    lg_fact = np.array([math.lgamma(k + 1) for k in range(dim)])
    if g3 != 0.0:
        ln_g3 = math.log(abs(g3))
        sign_g3 = np.sign(g3) ** np.arange(dim)
    # for conjugate-paired coefficients the series gives an exactly Hermitian
    # matrix, so only the upper triangle needs to be evaluated
    hermitian = abs(d - b.conjugate()) <= 1e-14 * max(1.0, abs(b)) and abs(
        e - c.conjugate()
    ) <= 1e-14 * max(1.0, abs(c))
    rho = np.empty((dim, dim), dtype=complex)
    for m in range(dim):
        n_start = m if hermitian else 0
        for n in range(n_start, dim):
            top = min(m, n)
            if g3 == 0.0:
                top = 0
            n3 = np.arange(top + 1)
            logs = (
                half_lg[m]
                + half_lg[n]
                - lg_fact[: top + 1]
                + s1_logmag[m - top : m + 1][::-1]
                + s2_logmag[n - top : n + 1][::-1]
            )
            phases = s1_phase[m - top : m + 1][::-1] * s2_phase[n - top : n + 1][::-1]
            if g3 != 0.0:
                logs = logs + n3 * ln_g3
                phases = phases * sign_g3[: top + 1]
            rho[m, n] = pref * np.sum(np.exp(logs) * phases)
            if hermitian and n > m:
                rho[n, m] = rho[m, n].conjugate()
    return FockDensityMatrix(dim=dim, entries=rho)


def bose_einstein_matrix(params: OscillatorParams, dim: int) -> FockDensityMatrix:
    """Asymptotic thermal occupation matrix diag((1-x) x^n).

    Requires a thermal bath: balanced diffusion (d1 ~ 0), mu ~ 0, and an
    effective Boltzmann factor x = (d2 - lambda)/(d2 + lambda) in [0, 1).
    """
    der = derived_coefficients(params)
    scale = max(params.omega, abs(params.lam))
    if abs(params.mu) > 1e-12 * scale:
        raise NotThermal(f"mu = {params.mu} is not zero (relative to {scale})")
    if abs(der.d1) > 1e-12 * abs(der.d2):
        raise NotThermal("diffusion coefficients are not thermally balanced (d1 != 0)")
    if not params.lam > 0.0:
        raise NotThermal("lambda must be positive for a relaxed thermal state")
    x = (der.d2 - params.lam) / (der.d2 + params.lam)
    if not 0.0 <= x < 1.0:
        raise NotThermal(f"Boltzmann factor x = {x} outside [0, 1); d2 < lambda")
    n = np.arange(dim)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[n, n] = (1.0 - x) * x**n
    return FockDensityMatrix(dim=dim, entries=rho)


def glauber_packet_evolution(params: OscillatorParams, alpha0: complex, t: float, dim: int) -> FockDensityMatrix:
    """Pure-decay packet: for d1 = 0, mu = 0, d2 = lambda a coherent state
    stays coherent, rho_mn(t) = conj(C)^m C^n e^{-|C|^2}/sqrt(m! n!) with
    C(t) = u(t) conj(alpha0)."""
    der = derived_coefficients(params)
    scale = max(params.omega, abs(params.lam))
    if (
        abs(params.mu) > 1e-12 * scale
        or abs(der.d1) > 1e-12 * abs(der.d2)
        or abs(der.d2 - params.lam) > 1e-12 * abs(params.lam)
    ):
        raise NotSpecialCase("pure-decay packet requires d1 = 0, mu = 0, d2 = lambda")
    pair = propagator_uv(params, t)
    c_t = pair.u * complex(alpha0).conjugate() - pair.v * complex(alpha0)
    vec = np.empty(dim, dtype=complex)
    vec[0] = 1.0
    for n in range(1, dim):
        vec[n] = vec[n - 1] * c_t / math.sqrt(n)
    rho = math.exp(-abs(c_t) ** 2) * np.outer(np.conj(vec), vec)
    return FockDensityMatrix(dim=dim, entries=rho)
