"""Exception types raised by the oscillator solvers."""


class LindbladOscError(Exception):
    """Base class for all package-specific errors."""


class NoSteadyState(LindbladOscError):
    """Raised when an asymptotic quantity is requested but the relaxing
    fixed point does not exist (lambda <= 0 or lambda^2 + omega^2 - mu^2 <= 0)."""


class DegenerateSpectrum(LindbladOscError):
    """Raised when the closed-form relaxation constants are singular
    (lambda, lambda - gamma or lambda + gamma vanishes, or gamma = 0)."""


class NonPositiveDefinite(LindbladOscError):
    """Raised when a Gaussian quasiprobability distribution cannot be
    evaluated because its covariance matrix is not positive definite."""


class NotThermal(LindbladOscError):
    """Raised when a Bose-Einstein density matrix is requested for
    parameters that do not describe a thermal bath."""


class NotSpecialCase(LindbladOscError):
    """Raised when the pure-decay packet solution is requested for
    parameters outside the special case d1 = 0, mu = 0, d2 = lambda."""


class GaugeViolation(LindbladOscError):
    """Raised when generating-function coefficients no longer satisfy the
    normalization gauge F^2/4 - B D = -H within tolerance."""


class StepTooLarge(LindbladOscError):
    """Raised by the brute-force integrator when the trace error exceeds
    1e-6, indicating the step size or truncation dimension is inadequate."""


class MissingParam(LindbladOscError):
    """Raised when a catalog model is instantiated without one of its
    required free parameters."""
