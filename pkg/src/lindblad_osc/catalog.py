"""Catalog of literature damping models mapped onto the common parameter set.

Each entry names a master equation from the open-systems literature, its
free parameters with representative default values, the mapping onto
(lambda, mu, d_qq, d_pp, d_pq), and whether the fundamental diffusion
constraints are expected to hold: "satisfied" / "violated" for models where
the outcome is parameter-independent (given positive rates), "conditional"
when it depends on the supplied free parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .errors import MissingParam
from .params import ConstraintReport, OscillatorParams, check_fundamental_constraints

__all__ = [
    "LiteratureModel",
    "CatalogReport",
    "MODELS",
    "get_model",
    "instantiate",
    "report_model",
    "verify_catalog",
]


@dataclass(frozen=True)
class LiteratureModel:
    id: str
    description: str
    free_params: Mapping[str, float]
    expected_verdict: str  # "satisfied" | "violated" | "conditional"
    condition: Optional[str] = None


def _dekker(p):
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=p["lambda"], mu=p["lambda"],
        d_qq=p["d_qq"], d_pp=p["d_pp"], d_pq=p["d_pq"],
    )


def _hofmann(p):
    rate = p["gamma"] / (2.0 * p["m"])
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=rate, mu=rate,
        d_qq=0.0, d_pp=p["gamma"] * p["t_star"], d_pq=0.0,
    )


def _hasse(p):
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=p["gamma"] / 2.0, mu=p["gamma"] / 2.0,
        d_qq=0.0, d_pp=p["big_d"], d_pq=-p["small_d"] / 2.0,
    )


def _spina_i(p):
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=p["gamma"] / 2.0, mu=p["gamma"] / 2.0,
        d_qq=0.0, d_pp=p["big_d"] / 2.0, d_pq=p["b"] / 2.0,
    )


def _spina_ii(p):
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=p["lambda"], mu=0.0,
        d_qq=p["d_r"] / 2.0, d_pp=p["d_p"] / 2.0, d_pq=0.0,
    )


def _from_d1_d2(m, omega, hbar, lam, mu, d1, d2):
    """Invert the annihilation-basis diffusion pair for (d_qq, d_pp, d_pq)."""
    mw = m * omega
    d_qq = hbar * (d2 + d1.real) / (2.0 * mw)
    d_pp = hbar * mw * (d2 - d1.real) / 2.0
    d_pq = hbar * d1.imag / 2.0
    return OscillatorParams(m=m, omega=omega, hbar=hbar, lam=lam, mu=mu, d_qq=d_qq, d_pp=d_pp, d_pq=d_pq)


def _squeezed(p):
    lam = p["gamma"]
    big_m = complex(p["m_re"], p["m_im"])
    return _from_d1_d2(
        p["m"], p["omega"], p["hbar"], lam, 0.0,
        2.0 * lam * big_m, lam * (2.0 * p["big_n"] + 1.0),
    )


def _harmonic(p):
    g = p["gamma"]
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=g, mu=g,
        d_qq=0.0, d_pp=p["hbar"] * p["m"] * p["omega"] * g * (2.0 * p["nbar"] + 1.0), d_pq=0.0,
    )


def _correlated(p):
    l1 = complex(p["l1_re"], p["l1_im"])
    l2 = complex(p["l2_re"], p["l2_im"])
    l3, l4 = p["l3"], p["l4"]
    diff = l2 - l1
    total = l1 + l2
    if abs(total.imag) > 1e-12 * max(1.0, abs(total)):
        raise ValueError("l1 + l2 must be real (it is the symmetric diffusion rate)")
    return _from_d1_d2(p["m"], 1.0, p["hbar"], diff.real, l4 - l3, l4 + l3, total.real).replace(
        omega=diff.imag
    )


def _jang_rwa(p):
    g, nbar = p["gamma"], p["nbar"]
    mw = p["m"] * p["omega"]
    d_qq = (2.0 * nbar + 1.0) * g * p["hbar"] / (4.0 * mw)
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=g / 2.0, mu=0.0,
        d_qq=d_qq, d_pp=mw * mw * d_qq, d_pq=0.0,
    )


def _jang_extended(p):
    g, nbar = p["gamma"], p["nbar"]
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=g / 2.0, mu=g / 2.0,
        d_qq=0.0, d_pp=p["hbar"] * p["m"] * p["omega"] * (2.0 * nbar + 1.0) * g / 2.0, d_pq=0.0,
    )


def _gibbs(p):
    lam, mu, coth = p["lambda"], p["mu"], p["coth"]
    mw = p["m"] * p["omega"]
    return OscillatorParams(
        m=p["m"], omega=p["omega"], hbar=p["hbar"],
        lam=lam, mu=mu,
        d_qq=(lam - mu) * p["hbar"] * coth / (2.0 * mw),
        d_pp=(lam + mu) * p["hbar"] * mw * coth / 2.0,
        d_pq=0.0,
    )


def _cond_constraints(p, params) -> bool:
    return check_fundamental_constraints(params).all_satisfied


def _cond_squeezed(p, params) -> bool:
    return p["big_n"] * (p["big_n"] + 1.0) >= p["m_re"] ** 2 + p["m_im"] ** 2


def _cond_gibbs(p, params) -> bool:
    lam, mu, coth = p["lambda"], p["mu"], p["coth"]
    return lam > mu and (lam * lam - mu * mu) * coth * coth >= lam * lam


_COMMON = {"m": 1.0, "omega": 1.0, "hbar": 1.0}


@dataclass(frozen=True)
class _Entry:
    model: LiteratureModel
    build: Callable[[dict], OscillatorParams]
    condition_fn: Optional[Callable[[dict, OscillatorParams], bool]] = None


_ENTRIES = [
    _Entry(
        LiteratureModel(
            id="dekker",
            description="Dekker oscillator: symmetric friction mu = lambda with user-supplied diffusion",
            free_params={"lambda": 0.2, "d_qq": 0.4, "d_pp": 0.4, "d_pq": 0.0, **_COMMON},
            expected_verdict="conditional",
            condition="supplied diffusion satisfies the determinant bound",
        ),
        _dekker,
        _cond_constraints,
    ),
    _Entry(
        LiteratureModel(
            id="hofmann",
            description="Hofmann et al. charge-equilibration mode: momentum diffusion only",
            free_params={"gamma": 0.4, "t_star": 0.5, **_COMMON},
            expected_verdict="violated",
        ),
        _hofmann,
    ),
    _Entry(
        LiteratureModel(
            id="hasse",
            description="Hasse heavy-ion model: momentum and cross diffusion, no position diffusion",
            free_params={"gamma": 0.4, "big_d": 0.2, "small_d": 0.1, **_COMMON},
            expected_verdict="violated",
        ),
        _hasse,
    ),
    _Entry(
        LiteratureModel(
            id="spina-weidenmuller-i",
            description="Spina-Weidenmuller eq. I for deep inelastic collisions (driving term dropped, "
            "static frequency shift absorbed into omega)",
            free_params={"gamma": 0.4, "big_d": 0.3, "b": 0.1, **_COMMON},
            expected_verdict="violated",
        ),
        _spina_i,
    ),
    _Entry(
        LiteratureModel(
            id="spina-weidenmuller-ii",
            description="Spina-Weidenmuller eq. II: symmetric rates, both diffusion channels open",
            free_params={"lambda": 0.2, "d_p": 0.5, "d_r": 0.5, **_COMMON},
            expected_verdict="satisfied",
        ),
        _spina_ii,
    ),
    _Entry(
        LiteratureModel(
            id="squeezed-bath",
            description="field mode in a squeezed bath: d2 = lambda (2N+1), d1 = 2 lambda M",
            free_params={"gamma": 0.4, "big_n": 1.0, "m_re": 0.6, "m_im": 0.3, **_COMMON},
            expected_verdict="conditional",
            condition="N (N + 1) >= |M|^2",
        ),
        _squeezed,
        _cond_squeezed,
    ),
    _Entry(
        LiteratureModel(
            id="harmonic-bath",
            description="oscillator coupled to a bath of oscillators: momentum diffusion only",
            free_params={"gamma": 0.3, "nbar": 1.0, **_COMMON},
            expected_verdict="violated",
        ),
        _harmonic,
    ),
    _Entry(
        LiteratureModel(
            id="correlated-emission",
            description="correlated-emission laser: rates given as the four Lambda couplings "
            "(omega is derived from Im(l2 - l1), so there is no omega free parameter)",
            free_params={
                "l1_re": 0.25, "l1_im": -0.5, "l2_re": 0.75, "l2_im": 0.5,
                "l3": -0.3, "l4": -0.1, "m": 1.0, "hbar": 1.0,
            },
            expected_verdict="conditional",
            condition="resulting diffusion satisfies the determinant bound",
        ),
        _correlated,
        _cond_constraints,
    ),
    _Entry(
        LiteratureModel(
            id="jang-rwa",
            description="Jang resonant (rotating-wave) master equation: balanced diffusion, mu = 0",
            free_params={"gamma": 0.4, "nbar": 1.0, **_COMMON},
            expected_verdict="satisfied",
        ),
        _jang_rwa,
    ),
    _Entry(
        LiteratureModel(
            id="jang-extended",
            description="Jang extended master equation: momentum diffusion only, mu = lambda",
            free_params={"gamma": 0.4, "nbar": 1.0, **_COMMON},
            expected_verdict="violated",
        ),
        _jang_extended,
    ),
    _Entry(
        LiteratureModel(
            id="gibbs",
            description="thermal (Gibbs) parametrization: detailed-balance diffusion at coth = coth(hbar w / 2kT)",
            free_params={"lambda": 0.5, "mu": 0.2, "coth": 2.0, **_COMMON},
            expected_verdict="conditional",
            condition="lambda > mu and (lambda^2 - mu^2) coth^2 >= lambda^2",
        ),
        _gibbs,
        _cond_gibbs,
    ),
]

MODELS: dict[str, LiteratureModel] = {e.model.id: e.model for e in _ENTRIES}
_BY_ID: dict[str, _Entry] = {e.model.id: e for e in _ENTRIES}


def get_model(model_id: str) -> LiteratureModel:
    try:
        return MODELS[model_id]
    except KeyError:
        raise KeyError(f"unknown model {model_id!r}; known: {sorted(MODELS)}") from None


def instantiate(model, params: Optional[Mapping[str, float]] = None, **overrides) -> OscillatorParams:
    """Build OscillatorParams for a catalog model.

    With `params` given, exactly those free parameters are used and missing
    ones raise MissingParam; otherwise the model defaults updated by keyword
    overrides are used.
    """
    model_id = model.id if isinstance(model, LiteratureModel) else str(model)
    entry = _BY_ID.get(model_id)
    if entry is None:
        raise KeyError(f"unknown model {model_id!r}; known: {sorted(MODELS)}")
    known = entry.model.free_params
    if params is not None:
        unknown = set(params) - set(known)
        if unknown:
            raise ValueError(f"unknown free parameters for {model_id}: {sorted(unknown)}")
        missing = set(known) - set(params)
        if missing:
            raise MissingParam(f"model {model_id} requires {sorted(missing)}")
        merged = dict(params)
    else:
        unknown = set(overrides) - set(known)
        if unknown:
            raise ValueError(f"unknown free parameters for {model_id}: {sorted(unknown)}")
        merged = {**known, **overrides}
    return entry.build(merged)


@dataclass(frozen=True)
class CatalogReport:
    model: LiteratureModel
    params: OscillatorParams
    constraints: ConstraintReport
    observed_verdict: str
    condition_holds: Optional[bool]
    consistent: bool


def report_model(model, params: Optional[Mapping[str, float]] = None, **overrides) -> CatalogReport:
    """Instantiate one model and compare the constraint outcome against its
    expected verdict ("conditional" entries must agree with their printed
    condition on the actual free parameters)."""
    model_id = model.id if isinstance(model, LiteratureModel) else str(model)
    entry = _BY_ID.get(model_id)
    if entry is None:
        raise KeyError(f"unknown model {model_id!r}; known: {sorted(MODELS)}")
    if params is not None:
        free = dict(entry.model.free_params)
        free.update(params)
    else:
        free = {**entry.model.free_params, **overrides}
    built = instantiate(model_id, free)
    constraints = check_fundamental_constraints(built)
    observed = "satisfied" if constraints.all_satisfied else "violated"
    condition_holds = None
    if entry.condition_fn is not None:
        condition_holds = bool(entry.condition_fn(free, built))
    expected = entry.model.expected_verdict
    if expected == "conditional":
        consistent = condition_holds == constraints.all_satisfied
    else:
        consistent = observed == expected
    return CatalogReport(
        model=entry.model,
        params=built,
        constraints=constraints,
        observed_verdict=observed,
        condition_holds=condition_holds,
        consistent=consistent,
    )


def verify_catalog() -> list[CatalogReport]:
    """Instantiate every model at its defaults and compare the constraint
    outcome against the expected verdict."""
    return [report_model(e.model.id) for e in _ENTRIES]
