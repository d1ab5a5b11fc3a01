"""Timing comparison of the two truncated-basis integrator backends.

Runs the same RK4 evolution once with the compiled kernel and once with the
numpy fallback, prints ms per step and the speedup.  Usage:

    python3 benchmarks/bench_oracle.py [dim] [steps]
"""

import sys
import time

import numpy as np

from lindblad_osc import OscillatorParams, oracle
from lindblad_osc.oracle import _reference


def _params():
    return OscillatorParams(m=1.0, omega=1.0, lam=0.5, mu=0.2, d_qq=0.3, d_pp=0.7, d_pq=0.0)


def bench_numpy(params, rho0, dt, steps):
    der = params_derived(params)
    tables = _reference.LiouvillianTables(rho0.shape[0], params.omega, params.lam, params.mu, der.d1, der.d2)
    rho = rho0.copy()
    start = time.perf_counter()
    tables.rk4(rho, dt, steps)
    return time.perf_counter() - start, rho


def bench_compiled(params, rho0, dt, steps):
    from lindblad_osc.oracle import _core

    der = params_derived(params)
    rho = rho0.copy()
    start = time.perf_counter()
    _core.rk4_evolve(rho, dt, steps, params.omega, params.lam, params.mu, der.d1, der.d2)
    return time.perf_counter() - start, rho


def params_derived(params):
    from lindblad_osc.params import derived_coefficients

    return derived_coefficients(params)


def main(argv):
    dim = int(argv[1]) if len(argv) > 1 else 100
    steps = int(argv[2]) if len(argv) > 2 else 200
    dt = 1e-3
    params = _params()
    rho0 = oracle.coherent_state(0.6 + 0.3j, dim).rho

    t_np, rho_np = bench_numpy(params, rho0, dt, steps)
    print(f"numpy backend:    dim={dim} steps={steps}  {1e3 * t_np / steps:8.3f} ms/step")

    try:
        t_c, rho_c = bench_compiled(params, rho0, dt, steps)
    except ImportError:
        print("compiled backend: not built (pip install -e . compiles it)")
        return
    print(f"compiled backend: dim={dim} steps={steps}  {1e3 * t_c / steps:8.3f} ms/step")
    print(f"speedup: {t_np / t_c:.1f}x, max deviation between backends: "
          f"{np.max(np.abs(rho_np - rho_c)):.3e}")


if __name__ == "__main__":
    main(sys.argv)
