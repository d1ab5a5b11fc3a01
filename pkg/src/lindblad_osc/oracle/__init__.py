"""Brute-force integrator in a truncated number basis.

This is the numerical reference the closed-form solvers are validated
against: the master equation is integrated directly as a linear ODE on the
dim x dim density matrix by classical fixed-step RK4.  A compiled kernel is
used when available; set LINDBLAD_OSC_FORCE_NUMPY=1 to force the pure NumPy
fallback (same stencil, shifted slices).
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import StepTooLarge
from ..moments import CovarianceTriple, FirstMoments
from ..params import OscillatorParams, derived_coefficients
from . import _reference

if os.environ.get("LINDBLAD_OSC_FORCE_NUMPY"):
    _core = None
else:
    try:
        from . import _core
    except ImportError:  # extension not built
        _core = None

BACKEND = "compiled" if _core is not None else "numpy"

__all__ = [
    "BACKEND",
    "TruncatedState",
    "IntegratorConfig",
    "DiagnosticsReport",
    "coherent_state",
    "recommended_step",
    "apply_liouvillian",
    "integrate",
    "moments_of",
    "diagnostics",
]


@dataclass(frozen=True)
class TruncatedState:
    """Density matrix truncated to number states 0..dim-1."""

    dim: int
    rho: np.ndarray


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed step size and ascending output time grid."""

    step: float
    t_grid: tuple
    method: str = "rk4"

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError("step must be positive")
        if self.method.lower() != "rk4":
            raise ValueError(f"unknown method {self.method!r}")
        grid = tuple(float(t) for t in self.t_grid)
        if any(t < 0.0 for t in grid) or any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be ascending and nonnegative")
        object.__setattr__(self, "t_grid", grid)


@dataclass(frozen=True)
class DiagnosticsReport:
    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float
    tail_mass: float


def recommended_step(params: OscillatorParams) -> float:
    """Step size heuristic: resolve both the rotation and the fastest decay."""
    der = derived_coefficients(params)
    fastest = max(abs(params.lam), abs(params.mu), abs(der.d2), 1e-12)
    return 0.01 * min(1.0 / params.omega, 1.0 / fastest)


def coherent_state(alpha: complex, dim: int) -> TruncatedState:
    vec = np.empty(dim, dtype=complex)
    vec[0] = 1.0
    for n in range(1, dim):
        vec[n] = vec[n - 1] * alpha / math.sqrt(n)
    vec *= math.exp(-abs(alpha) ** 2 / 2.0)
    return TruncatedState(dim=dim, rho=np.outer(vec, np.conj(vec)))


def _tables(params: OscillatorParams, dim: int) -> _reference.LiouvillianTables:
    der = derived_coefficients(params)
    return _reference.LiouvillianTables(dim, params.omega, params.lam, params.mu, der.d1, der.d2)


def apply_liouvillian(params: OscillatorParams, state: TruncatedState) -> np.ndarray:
    """Time derivative of rho under the truncated master equation."""
    out = np.empty_like(state.rho)
    _tables(params, state.dim).apply(state.rho, out)
    return out


def integrate(params: OscillatorParams, state: TruncatedState, config: IntegratorConfig) -> list[TruncatedState]:
    """Integrate from t=0 and snapshot the state at each grid time."""
    rho = np.array(state.rho, dtype=complex, order="C")
    dim = state.dim
    der = derived_coefficients(params)
    tables = None if _core is not None else _tables(params, dim)
    out = []
    t_prev = 0.0
    for t in config.t_grid:
        delta = t - t_prev
        if delta > 0.0:
            nsteps = max(1, math.ceil(delta / config.step - 1e-12))
            h = delta / nsteps
            if _core is not None:
                _core.rk4_evolve(rho, h, nsteps, params.omega, params.lam, params.mu, der.d1, der.d2)
            else:
                tables.rk4(rho, h, nsteps)
        t_prev = t
        trace_err = abs(np.trace(rho).real - 1.0)
        if trace_err > 1e-6:
            raise StepTooLarge(
                f"trace error {trace_err:.3e} at t={t}; reduce the step or enlarge dim"
            )
        out.append(TruncatedState(dim=dim, rho=rho.copy()))
    return out


def _ladder(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(1, dim)
    a[idx - 1, idx] = np.sqrt(idx)
    return a


def moments_of(state: TruncatedState, params: OscillatorParams):
    """First moments, covariances and mean energy of a truncated state.

    Warns when the occupation of the top five levels exceeds 1e-8, since
    truncation then contaminates the moments.
    """
    tail = tail_mass(state)
    if tail >= 1e-8:
        warnings.warn(f"tail mass {tail:.3e} indicates truncation error", stacklevel=2)
    dim = state.dim
    rho = state.rho
    a = _ladder(dim)
    mw = params.m * params.omega
    q = math.sqrt(params.hbar / (2.0 * mw)) * (a.conj().T + a)
    p = 1j * math.sqrt(params.hbar * mw / 2.0) * (a.conj().T - a)

    def expect(op):
        return np.sum(rho * op.T).real

    s_q = expect(q)
    s_p = expect(p)
    qq = q @ q
    pp = p @ p
    qp_sym = 0.5 * (q @ p + p @ q)
    s_qq = expect(qq) - s_q * s_q
    s_pp = expect(pp) - s_p * s_p
    s_pq = expect(qp_sym) - s_q * s_p
    energy = (
        expect(pp) / (2.0 * params.m)
        + params.m * params.omega**2 * expect(qq) / 2.0
        + params.mu * expect(qp_sym)
    )
    return (
        FirstMoments(sigma_q=s_q, sigma_p=s_p),
        CovarianceTriple(sigma_qq=s_qq, sigma_pp=s_pp, sigma_pq=s_pq),
        energy,
    )


def tail_mass(state: TruncatedState) -> float:
    ntail = min(5, state.dim)
    return float(np.sum(np.diag(state.rho)[-ntail:]).real)


def diagnostics(state: TruncatedState) -> DiagnosticsReport:
    rho = state.rho
    trace_error = abs(np.trace(rho).real - 1.0)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    return DiagnosticsReport(
        trace_error=trace_error,
        hermiticity_error=herm,
        min_eigenvalue=min_eig,
        tail_mass=tail_mass(state),
    )
