# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the truncated Fock-space integrator.

Same stencil as the NumPy reference in _reference.py, but with the full RK4
loop in C.  The Liouvillian preserves Hermiticity, so only the upper
triangle is evaluated and the lower one is mirrored.
"""

import numpy as np

cimport numpy as cnp

ctypedef double complex dc


cdef void _apply_herm(dc[:, ::1] rho, dc[:, ::1] out,
                      double[::1] sq, double[::1] sq2,
                      double omega, double lam, double mu,
                      dc d1, dc d1c, double d2) noexcept nogil:
    cdef Py_ssize_t dim = rho.shape[0]
    cdef Py_ssize_t m, n
    cdef dc acc
    cdef dc c1 = 0.5 * (d1 + mu)
    cdef dc c2 = -d1
    cdef dc c3 = 0.5 * (d1 - mu)
    cdef dc c4 = 0.5 * (d1c - mu)
    cdef dc c5 = -d1c
    cdef dc c6 = 0.5 * (d1c + mu)
    cdef double c7 = d2 + lam
    cdef double c8 = d2 - lam
    cdef double dre, dim_part
    for m in range(dim):
        for n in range(m, dim):
            dre = lam - (m + n + 1) * d2
            dim_part = -omega * (m - n)
            acc = (dre + 1j * dim_part) * rho[m, n]
            if m >= 2:
                acc = acc + c1 * sq2[m] * rho[m - 2, n]
            if m >= 1 and n + 1 < dim:
                acc = acc + c2 * (sq[m] * sq[n + 1]) * rho[m - 1, n + 1]
            if n + 2 < dim:
                acc = acc + c3 * sq2[n + 2] * rho[m, n + 2]
            if m + 2 < dim:
                acc = acc + c4 * sq2[m + 2] * rho[m + 2, n]
            if n >= 1 and m + 1 < dim:
                acc = acc + c5 * (sq[m + 1] * sq[n]) * rho[m + 1, n - 1]
            if n >= 2:
                acc = acc + c6 * sq2[n] * rho[m, n - 2]
            if m + 1 < dim and n + 1 < dim:
                acc = acc + c7 * (sq[m + 1] * sq[n + 1]) * rho[m + 1, n + 1]
            if m >= 1 and n >= 1:
                acc = acc + c8 * (sq[m] * sq[n]) * rho[m - 1, n - 1]
            out[m, n] = acc
            if n > m:
                out[n, m] = acc.real - 1j * acc.imag


def apply_liouvillian_herm(rho, out, double omega, double lam, double mu, d1, double d2):
    """out = L(rho) for Hermitian rho (upper triangle + mirror)."""
    cdef dc[:, ::1] rho_v = rho
    cdef dc[:, ::1] out_v = out
    cdef dc d1_c = d1
    cdef dc d1c_c = d1.conjugate()
    cdef Py_ssize_t dim = rho.shape[0]
    sq_arr = np.sqrt(np.arange(dim + 1, dtype=float))
    sq2_arr = np.sqrt(np.arange(dim + 1, dtype=float) * (np.arange(dim + 1) - 1.0))
    cdef double[::1] sq = sq_arr
    cdef double[::1] sq2 = sq2_arr
    with nogil:
        _apply_herm(rho_v, out_v, sq, sq2, omega, lam, mu, d1_c, d1c_c, d2)
    return out


def rk4_evolve(rho, double dt, Py_ssize_t nsteps,
               double omega, double lam, double mu, d1, double d2):
    """Advance Hermitian rho in place by nsteps RK4 steps of size dt."""
    cdef dc[:, ::1] y = rho
    cdef Py_ssize_t dim = rho.shape[0]
    cdef dc d1_c = d1
    cdef dc d1c_c = d1.conjugate()
    sq_arr = np.sqrt(np.arange(dim + 1, dtype=float))
    sq2_arr = np.sqrt(np.arange(dim + 1, dtype=float) * (np.arange(dim + 1) - 1.0))
    cdef double[::1] sq = sq_arr
    cdef double[::1] sq2 = sq2_arr
    k_arr = np.empty_like(rho)
    ytmp_arr = np.empty_like(rho)
    acc_arr = np.empty_like(rho)
    cdef dc[:, ::1] k = k_arr
    cdef dc[:, ::1] ytmp = ytmp_arr
    cdef dc[:, ::1] acc = acc_arr
    cdef Py_ssize_t step, m, n
    cdef double h6 = dt / 6.0
    cdef double h3 = dt / 3.0
    cdef double h2 = dt / 2.0
    with nogil:
        for step in range(nsteps):
            _apply_herm(y, k, sq, sq2, omega, lam, mu, d1_c, d1c_c, d2)
            for m in range(dim):
                for n in range(dim):
                    acc[m, n] = y[m, n] + h6 * k[m, n]
                    ytmp[m, n] = y[m, n] + h2 * k[m, n]
            _apply_herm(ytmp, k, sq, sq2, omega, lam, mu, d1_c, d1c_c, d2)
            for m in range(dim):
                for n in range(dim):
                    acc[m, n] = acc[m, n] + h3 * k[m, n]
                    ytmp[m, n] = y[m, n] + h2 * k[m, n]
            _apply_herm(ytmp, k, sq, sq2, omega, lam, mu, d1_c, d1c_c, d2)
            for m in range(dim):
                for n in range(dim):
                    acc[m, n] = acc[m, n] + h3 * k[m, n]
                    ytmp[m, n] = y[m, n] + dt * k[m, n]
            _apply_herm(ytmp, k, sq, sq2, omega, lam, mu, d1_c, d1c_c, d2)
            for m in range(dim):
                for n in range(dim):
                    y[m, n] = acc[m, n] + h6 * k[m, n]
    return rho
