"""Model parameters, derived coefficients and fundamental constraints.

The model is the one-dimensional harmonic oscillator (mass m, frequency
omega) damped by a Markovian environment.  The friction is split into a
symmetric part lambda and an antisymmetric part mu, and the three momentum /
position diffusion coefficients are d_pp, d_qq, d_pq.
"""

from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass

__all__ = [
    "OscillatorParams",
    "DerivedCoefficients",
    "RegimeTag",
    "Regime",
    "ConstraintReport",
    "derived_coefficients",
    "classify_regime",
    "check_fundamental_constraints",
]

# JSON field names; "lambda" is a Python keyword so the attribute is "lam".
_FIELD_TO_JSON = {
    "m": "m",
    "omega": "omega",
    "hbar": "hbar",
    "lam": "lambda",
    "mu": "mu",
    "d_qq": "d_qq",
    "d_pp": "d_pp",
    "d_pq": "d_pq",
}


@dataclass(frozen=True)
class OscillatorParams:
    """Static parameters of the damped oscillator.

    m, omega and hbar must be positive; the friction coefficients lam (the
    JSON field "lambda") and mu and the diffusion coefficients d_qq, d_pp,
    d_pq are unrestricted here.  Whether the diffusion matrix is physically
    admissible is a separate question answered by
    check_fundamental_constraints, never enforced at construction.
    """

    m: float
    omega: float
    lam: float
    mu: float
    d_qq: float
    d_pp: float
    d_pq: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "omega", "lam", "mu", "d_qq", "d_pp", "d_pq", "hbar"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("m", "omega", "hbar"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"{name} must be positive, got {value}")

    def replace(self, **kwargs) -> "OscillatorParams":
        fields = {name: getattr(self, name) for name in _FIELD_TO_JSON}
        fields.update(kwargs)
        return OscillatorParams(**fields)

    def to_dict(self) -> dict:
        return {json_name: getattr(self, attr) for attr, json_name in _FIELD_TO_JSON.items()}

    @classmethod
    def from_dict(cls, data: dict) -> "OscillatorParams":
        kwargs = {}
        for attr, json_name in _FIELD_TO_JSON.items():
            if json_name in data:
                kwargs[attr] = data[json_name]
            elif attr in ("m", "omega", "hbar"):
                kwargs[attr] = 1.0
            else:
                raise KeyError(f"missing parameter field {json_name!r}")
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "OscillatorParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class DerivedCoefficients:
    """Diffusion and friction data in the annihilation/creation basis.

    d1 = (m w d_qq - d_pp/(m w) + 2i d_pq) / hbar        (complex)
    d2 = (m w d_qq + d_pp/(m w)) / hbar                  (real)
    ell = lam - d2                                       (drive of the width h)
    c = (mu + conj(d1)) / 2                              (drive of the width f)
    nu_sq = mu^2 - omega^2
    gamma = sqrt(nu_sq + 0j), principal branch
    """

    d1: complex
    d2: float
    ell: float
    c: complex
    nu_sq: float
    gamma: complex


def derived_coefficients(params: OscillatorParams) -> DerivedCoefficients:
    mw = params.m * params.omega
    d1 = (mw * params.d_qq - params.d_pp / mw + 2j * params.d_pq) / params.hbar
    d2 = (mw * params.d_qq + params.d_pp / mw) / params.hbar
    ell = params.lam - d2
    c = (params.mu + d1.conjugate()) / 2.0
    nu_sq = params.mu * params.mu - params.omega * params.omega
    # complex(nu_sq, 0.0) keeps the imaginary part +0.0 so the principal
    # square root of a negative nu_sq lands on the +i axis.
    gamma = cmath.sqrt(complex(nu_sq, 0.0))
    return DerivedCoefficients(d1=d1, d2=d2, ell=ell, c=c, nu_sq=nu_sq, gamma=gamma)


class RegimeTag(enum.Enum):
    UNDERDAMPED = "underdamped"
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"


@dataclass(frozen=True)
class Regime:
    """Damping regime and the associated real oscillation/relaxation rate.

    nu_or_omega is Omega = sqrt(omega^2 - mu^2) when underdamped,
    nu = sqrt(mu^2 - omega^2) when overdamped and 0 at critical damping.
    """

    tag: RegimeTag
    nu_or_omega: float


_REGIME_EPS = 1e-9


def classify_regime(params: OscillatorParams) -> Regime:
    mu, omega = params.mu, params.omega
    if mu < omega * (1.0 - _REGIME_EPS):
        return Regime(RegimeTag.UNDERDAMPED, math.sqrt(omega * omega - mu * mu))
    if mu > omega * (1.0 + _REGIME_EPS):
        return Regime(RegimeTag.OVERDAMPED, math.sqrt(mu * mu - omega * omega))
    return Regime(RegimeTag.CRITICAL, 0.0)


@dataclass(frozen=True)
class ConstraintReport:
    """Result of the fundamental diffusion-coefficient inequalities.

    The three conditions are d_pp > 0, d_qq > 0 and
    d_pp d_qq - d_pq^2 >= lambda^2 hbar^2 / 4; determinant_margin is the
    left side minus the right side of the third one.  has_steady_state is
    the independent relaxation condition lambda > 0 and
    lambda^2 + omega^2 - mu^2 > 0.
    """

    dpp_positive: bool
    dqq_positive: bool
    determinant_ok: bool
    determinant_margin: float
    all_satisfied: bool
    has_steady_state: bool


def check_fundamental_constraints(params: OscillatorParams) -> ConstraintReport:
    dpp_positive = params.d_pp > 0.0
    dqq_positive = params.d_qq > 0.0
    margin = (
        params.d_pp * params.d_qq
        - params.d_pq * params.d_pq
        - params.lam * params.lam * params.hbar * params.hbar / 4.0
    )
    determinant_ok = margin >= 0.0
    has_steady_state = params.lam > 0.0 and (
        params.lam * params.lam + params.omega * params.omega - params.mu * params.mu > 0.0
    )
    return ConstraintReport(
        dpp_positive=dpp_positive,
        dqq_positive=dqq_positive,
        determinant_ok=determinant_ok,
        determinant_margin=margin,
        all_satisfied=dpp_positive and dqq_positive and determinant_ok,
        has_steady_state=has_steady_state,
    )
