"""Shared oracle machinery for the test suite.

Everything here is independent of the library internals: right-hand sides are
transcribed term by term from the underlying linear systems, and Fock-space
checks are built from dense ladder matrices.  Tests compare library closed
forms against fixed-step RK4 runs of these systems or against dense-matrix
algebra, never against a second copy of the production code path.
"""

import math

import numpy as np

from lindblad_osc.params import OscillatorParams


# ---------------------------------------------------------------------------
# generic fixed-step RK4
# ---------------------------------------------------------------------------

def rk4(deriv, y0, t, dt):
    """Integrate y' = deriv(y) from 0 to t with steps of size ~dt.

    The step count is rounded so the integration lands exactly on t.  Works
    for any ndarray-shaped state (vectors, matrices, complex dtypes).
    """
    y = np.array(y0, dtype=complex)
    if t == 0.0:
        return y
    n = max(1, int(round(t / dt)))
    h = t / n
    for _ in range(n):
        k1 = deriv(y)
        k2 = deriv(y + 0.5 * h * k1)
        k3 = deriv(y + 0.5 * h * k2)
        k4 = deriv(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def rk4_samples(deriv, y0, times, dt):
    """RK4 states at each time of an ascending grid starting at times[0] >= 0."""
    out = []
    y = np.array(y0, dtype=complex)
    prev = 0.0
    for t in times:
        y = rk4(deriv, y, t - prev, dt)
        prev = t
        out.append(y.copy())
    return out


# ---------------------------------------------------------------------------
# parameter builders
# ---------------------------------------------------------------------------

def gibbs_params(lam, mu, coth, m=1.0, omega=1.0, hbar=1.0):
    """Thermal-equilibrium diffusion coefficients for given friction constants."""
    return OscillatorParams(
        m=m,
        omega=omega,
        lam=lam,
        mu=mu,
        d_qq=(lam - mu) * hbar * coth / (2.0 * m * omega),
        d_pp=(lam + mu) * hbar * m * omega * coth / 2.0,
        d_pq=0.0,
        hbar=hbar,
    )


def random_gibbs_params(rng, lam_range=(0.1, 1.0), mu_factor=0.9, coth_range=(1.0, 5.0)):
    """One constraint-satisfying thermal parameter set (rejection sampled)."""
    while True:
        lam = rng.uniform(*lam_range)
        mu = rng.uniform(0.0, mu_factor * lam)
        coth = rng.uniform(*coth_range)
        if (lam * lam - mu * mu) * coth * coth >= lam * lam:
            return gibbs_params(lam, mu, coth)


def d1_d2(p):
    """Annihilation-basis diffusion combinations, written out from scratch."""
    mw = p.m * p.omega
    d1 = (mw * p.d_qq - p.d_pp / mw) / p.hbar + 2j * p.d_pq / p.hbar
    d2 = (mw * p.d_qq + p.d_pp / mw) / p.hbar
    return d1, d2


# ---------------------------------------------------------------------------
# linear systems for the moment, width and coefficient evolutions
# ---------------------------------------------------------------------------

def first_moment_rhs(p):
    """d<q>/dt = -(lam-mu)<q> + <p>/m;  d<p>/dt = -m w^2 <q> - (lam+mu)<p>."""
    lam, mu, m, w = p.lam, p.mu, p.m, p.omega

    def deriv(y):
        q, pp = y
        return np.array([
            -(lam - mu) * q + pp / m,
            -m * w * w * q - (lam + mu) * pp,
        ])

    return deriv


def covariance_rhs(p):
    """Linear system for (sigma_qq, sigma_pp, sigma_pq) with diffusion sources."""
    lam, mu, m, w = p.lam, p.mu, p.m, p.omega

    def deriv(y):
        qq, pp, pq = y
        return np.array([
            -2.0 * (lam - mu) * qq + 2.0 * pq / m + 2.0 * p.d_qq,
            -2.0 * (lam + mu) * pp - 2.0 * m * w * w * pq + 2.0 * p.d_pp,
            -m * w * w * qq + pp / m - 2.0 * lam * pq + 2.0 * p.d_pq,
        ])

    return deriv


def uv_rhs(p):
    """Mean-field pair system dA = -(lam-iw)A - mu B, dB = -mu A - (lam+iw)B."""
    lam, mu, w = p.lam, p.mu, p.omega

    def deriv(y):
        a, b = y
        return np.array([
            -(lam - 1j * w) * a - mu * b,
            -mu * a - (lam + 1j * w) * b,
        ])

    return deriv


def uv_propagator_rk4(p, t, dt):
    """2x2 propagator of the mean-field pair system, column by column."""
    deriv = uv_rhs(p)
    c1 = rk4(deriv, [1.0, 0.0], t, dt)
    c2 = rk4(deriv, [0.0, 1.0], t, dt)
    return np.array([[c1[0], c2[0]], [c1[1], c2[1]]])


def width_rhs(p):
    """(R, I, h) width system of the normally ordered characteristic function."""
    lam, mu, w = p.lam, p.mu, p.omega
    d1, d2 = d1_d2(p)
    big_c = 0.5 * (mu + d1.conjugate())
    big_l = lam - d2

    def deriv(y):
        r, i, h = y
        return np.array([
            -2.0 * lam * r - 2.0 * w * i - mu * h + big_c.real,
            2.0 * w * r - 2.0 * lam * i + big_c.imag,
            -4.0 * mu * r - 2.0 * lam * h + big_l,
        ])

    return deriv


def ce_rhs(p):
    """Displacement pair dC = -(lam-iw)C + mu E, dE = -(lam+iw)E + mu C."""
    lam, mu, w = p.lam, p.mu, p.omega

    def deriv(y):
        c, e = y
        return np.array([
            -(lam - 1j * w) * c + mu * e,
            -(lam + 1j * w) * e + mu * c,
        ])

    return deriv


def bdf_rhs(p):
    """Gauge-fixed generating-function quadratic coefficients (B, D, F)."""
    lam, mu, w = p.lam, p.mu, p.omega
    d1, d2 = d1_d2(p)

    def deriv(y):
        b, d, f = y
        return np.array([
            -2.0 * (lam + 1j * w) * b - mu * f + 2.0 * (d1 - mu),
            -2.0 * (lam - 1j * w) * d - mu * f + 2.0 * (d1.conjugate() - mu),
            -2.0 * mu * (b + d) - 2.0 * lam * f - 4.0 * (d2 + lam),
        ])

    return deriv


def pregauge_rhs(p):
    """Ungauged generating-function system for (A, b, d, f).

    b, d, f are the scale-free ratios of the quadratic coefficients to the
    arbitrary scaling function, A the normalization.  The combination
    (f^2/4 - b d) A^2 is a constant of motion and pins Tr rho.
    """
    lam, mu, w = p.lam, p.mu, p.omega
    d1, d2 = d1_d2(p)
    d1c = d1.conjugate()

    def deriv(y):
        a, b, d, f = y
        da = a * ((d1c - mu) * b + (d1 - mu) * d + (d2 + lam) * f - 2.0 * lam)
        db = (
            2.0 * (lam - 1j * w) * b - mu * f - 0.5 * (d1 - mu) * f * f
            - 2.0 * (d2 + lam) * f * b - 2.0 * (d1c - mu) * b * b
        )
        dd = (
            2.0 * (lam + 1j * w) * d - mu * f - 0.5 * (d1c - mu) * f * f
            - 2.0 * (d2 + lam) * d * f - 2.0 * (d1 - mu) * d * d
        )
        df = (
            2.0 * lam * f - (d2 + lam) * f * f - 2.0 * mu * (b + d)
            - 4.0 * (d2 + lam) * d * b - 2.0 * (d1c - mu) * b * f
            - 2.0 * (d1 - mu) * d * f
        )
        return np.array([da, db, dd, df])

    return deriv


def phase_space_cov_rhs(p, s):
    """Matrix equation d sigma/dt = -A sigma - sigma A^T + D for the s-ordered
    phase-space covariance, with the drift and diffusion written out directly."""
    lam, mu, w = p.lam, p.mu, p.omega
    drift = np.array([[lam - mu, -w], [w, lam + mu]])
    mw = p.m * p.omega
    dmat = np.array([
        [mw * p.d_qq / p.hbar - 0.5 * s * (lam - mu), p.d_pq / p.hbar],
        [p.d_pq / p.hbar, p.d_pp / (p.hbar * mw) - 0.5 * s * (lam + mu)],
    ])

    def deriv(sig):
        return -(drift @ sig) - (sig @ drift.T) + dmat

    return deriv


# ---------------------------------------------------------------------------
# dense Fock-space operators
# ---------------------------------------------------------------------------

def ladder(dim):
    """Annihilation operator a on the truncated number basis."""
    a = np.zeros((dim, dim), dtype=complex)
    n = np.arange(1, dim)
    a[n - 1, n] = np.sqrt(n)
    return a


def qp_matrices(p, dim):
    """Position and momentum matrices from the ladder operators."""
    a = ladder(dim)
    ad = a.conj().T
    q = math.sqrt(p.hbar / (2.0 * p.m * p.omega)) * (ad + a)
    pm = 1j * math.sqrt(p.hbar * p.m * p.omega / 2.0) * (ad - a)
    return q, pm


def _comm(x, y):
    return x @ y - y @ x


def liouvillian_qp_form(p, rho):
    """Master-equation right-hand side in the explicit commutator form.

    Built from dense q, p matrices: the conservative part plus friction
    commutators and the three double-commutator diffusion terms.  Independent
    of the library's number-basis recurrence implementation.
    """
    dim = rho.shape[0]
    q, pm = qp_matrices(p, dim)
    hb = p.hbar
    h0 = pm @ pm / (2.0 * p.m) + 0.5 * p.m * p.omega**2 * (q @ q)
    out = (-1j / hb) * _comm(h0, rho)
    out += (-0.5j * (p.lam + p.mu) / hb) * _comm(q, rho @ pm + pm @ rho)
    out += (0.5j * (p.lam - p.mu) / hb) * _comm(pm, rho @ q + q @ rho)
    out += (-p.d_pp / hb**2) * _comm(q, _comm(q, rho))
    out += (-p.d_qq / hb**2) * _comm(pm, _comm(pm, rho))
    out += (p.d_pq / hb**2) * (_comm(q, _comm(pm, rho)) + _comm(pm, _comm(q, rho)))
    return out


def coherent_vec(alpha, dim):
    """Coherent-state amplitudes on the truncated basis."""
    alpha = complex(alpha)
    v = np.empty(dim, dtype=complex)
    v[0] = 1.0
    for n in range(1, dim):
        v[n] = v[n - 1] * alpha / math.sqrt(n)
    return v * math.exp(-0.5 * abs(alpha) ** 2)


def squeezed_vacuum_vec(r, dim):
    """Squeezed vacuum with real squeezing r: even-number amplitudes
    (-tanh r)^n sqrt((2n)!)/(2^n n!) / sqrt(cosh r)."""
    v = np.zeros(dim, dtype=complex)
    c = 1.0
    v[0] = c
    n = 1
    while 2 * n < dim:
        c *= -math.tanh(r) * math.sqrt(2.0 * n * (2.0 * n - 1.0)) / (2.0 * n)
        v[2 * n] = c
        n += 1
    return v / math.sqrt(math.cosh(r))


def exp_lambda_adag(lmbda, dim):
    """Exact matrix of exp(Lambda a^dagger): lower triangular, entry (m, n) =
    Lambda^(m-n) sqrt(m!/n!)/(m-n)! for m >= n."""
    lmbda = complex(lmbda)
    out = np.zeros((dim, dim), dtype=complex)
    for n in range(dim):
        out[n, n] = 1.0
        val = 1.0 + 0j
        for m in range(n + 1, dim):
            k = m - n
            val = val * lmbda * math.sqrt(m) / k
            out[m, n] = val
    return out


def char_trace(rho, lmbda):
    """Normally ordered characteristic value Tr[rho e^{L a+} e^{-L* a}]."""
    dim = rho.shape[0]
    left = exp_lambda_adag(lmbda, dim)
    right = exp_lambda_adag(-complex(lmbda), dim).conj().T
    return np.trace(rho @ left @ right)


def dense_moments(rho, p):
    """First and second central moments of rho via dense matrix traces."""
    dim = rho.shape[0]
    q, pm = qp_matrices(p, dim)
    mq = np.trace(rho @ q).real
    mp = np.trace(rho @ pm).real
    qq = np.trace(rho @ q @ q).real - mq * mq
    pp = np.trace(rho @ pm @ pm).real - mp * mp
    qp_sym = 0.5 * np.trace(rho @ (q @ pm + pm @ q)).real
    return mq, mp, qq, pp, qp_sym - mq * mp


def dense_energy(rho, p):
    """Tr(rho H) with H = p^2/2m + m w^2 q^2/2 + mu (qp+pq)/2."""
    dim = rho.shape[0]
    q, pm = qp_matrices(p, dim)
    h = pm @ pm / (2.0 * p.m) + 0.5 * p.m * p.omega**2 * (q @ q) + 0.5 * p.mu * (q @ pm + pm @ q)
    return np.trace(rho @ h).real


# ---------------------------------------------------------------------------
# generating-function coefficient extraction by contour quadrature
# ---------------------------------------------------------------------------

def fock_from_genfunc(genfunc, dim, radius=1.0, grid=128):
    """Recover rho_mn from a callable G(x, y) by 2-D Cauchy coefficients.

    G(x, y) = sum_mn x^m y^n rho_mn / sqrt(m! n!); the double power-series
    coefficients are read off with FFTs over circles |x| = |y| = radius and
    rescaled by sqrt(m! n!).
    """
    k = np.arange(grid)
    ring = radius * np.exp(2j * np.pi * k / grid)
    vals = np.empty((grid, grid), dtype=complex)
    for j, x in enumerate(ring):
        for l, y in enumerate(ring):
            vals[j, l] = genfunc(x, y)
    coeff = np.fft.fft2(vals) / grid**2
    half_fact = np.exp([0.5 * math.lgamma(n + 1) for n in range(dim)])
    scale = np.power(radius, -np.arange(dim, dtype=float))
    block = coeff[:dim, :dim] * np.outer(scale * half_fact, scale * half_fact)
    return block
