"""Pure NumPy kernels for the truncated Fock-space integrator.

The number-basis master equation couples rho[m, n] to the eight neighbors
reachable by total shifts of 0 or +-2 quanta; each coupling coefficient is a
square-root ladder factor times a constant built from (d1, d2, lambda, mu).
The shifted-slice implementation below is the reference the compiled kernel
is checked against.
"""

from __future__ import annotations

import numpy as np


class LiouvillianTables:
    """Precomputed coefficient tables for one (dim, params) combination."""

    def __init__(self, dim: int, omega: float, lam: float, mu: float, d1: complex, d2: float):
        self.dim = dim
        k = np.arange(dim, dtype=float)
        m = k[:, None]
        n = k[None, :]
        d1c = np.conjugate(d1)
        self.cdiag = lam - (m + n + 1.0) * d2 - 1j * omega * (m - n)
        self.t1 = 0.5 * np.sqrt(m * (m - 1.0)) * (d1 + mu)
        self.t2 = -np.sqrt(m * (n + 1.0)) * d1
        self.t3 = 0.5 * np.sqrt((n + 1.0) * (n + 2.0)) * (d1 - mu)
        self.t4 = 0.5 * np.sqrt((m + 1.0) * (m + 2.0)) * (d1c - mu)
        self.t5 = -np.sqrt((m + 1.0) * n) * d1c
        self.t6 = 0.5 * np.sqrt(n * (n - 1.0)) * (d1c + mu)
        self.t7 = np.sqrt((m + 1.0) * (n + 1.0)) * (d2 + lam)
        self.t8 = np.sqrt(m * n) * (d2 - lam)

    def apply(self, rho: np.ndarray, out: np.ndarray) -> np.ndarray:
        """out = L(rho); returns out."""
        np.multiply(self.cdiag, rho, out=out)
        out[2:, :] += self.t1[2:, :] * rho[:-2, :]
        out[1:, :-1] += self.t2[1:, :-1] * rho[:-1, 1:]
        out[:, :-2] += self.t3[:, :-2] * rho[:, 2:]
        out[:-2, :] += self.t4[:-2, :] * rho[2:, :]
        out[:-1, 1:] += self.t5[:-1, 1:] * rho[1:, :-1]
        out[:, 2:] += self.t6[:, 2:] * rho[:, :-2]
        out[:-1, :-1] += self.t7[:-1, :-1] * rho[1:, 1:]
        out[1:, 1:] += self.t8[1:, 1:] * rho[:-1, :-1]
        return out

    def rk4(self, rho: np.ndarray, dt: float, nsteps: int) -> None:
        """Advance rho in place by nsteps classical RK4 steps of size dt."""
        k = np.empty_like(rho)
        ytmp = np.empty_like(rho)
        acc = np.empty_like(rho)
        for _ in range(nsteps):
            self.apply(rho, k)
            np.multiply(k, dt / 6.0, out=acc)
            acc += rho
            np.multiply(k, 0.5 * dt, out=ytmp)
            ytmp += rho
            self.apply(ytmp, k)
            acc += (dt / 3.0) * k
            np.multiply(k, 0.5 * dt, out=ytmp)
            ytmp += rho
            self.apply(ytmp, k)
            acc += (dt / 3.0) * k
            np.multiply(k, dt, out=ytmp)
            ytmp += rho
            self.apply(ytmp, k)
            acc += (dt / 6.0) * k
            rho[:] = acc
