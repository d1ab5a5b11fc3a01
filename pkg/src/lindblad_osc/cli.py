"""Command-line front end.

Commands: simulate (moment trajectories as CSV, optionally cross-checked
against the truncated number-basis integrator), steady (steady-state summary
JSON), density-matrix (number-basis matrix JSON), distribution (phase-space
grid CSV), charfunc (characteristic-function value), validate (constraint
checks and the literature-model catalog), sweep (parameter grids).

Conventions shared by all commands:
  * parameters come from flags and/or a JSON config file; flags win;
  * every CSV output starts with a `# config: {...}` comment carrying the
    fully resolved configuration, JSON outputs carry the same dict under a
    "config" key;
  * numbers are printed with %.17g (full double precision), CSV uses `.`
    decimal points and LF newlines, output is byte-identical for identical
    inputs;
  * exit codes: 0 success, 1 usage or config error, 2 fundamental-constraint
    violation under --strict, 3 no steady state.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import catalog, charfunc, densmat, moments, oracle, quasiprob
from .errors import LindbladOscError, NonPositiveDefinite, NoSteadyState
from .params import OscillatorParams, check_fundamental_constraints

__all__ = ["RunConfig", "main"]

_PARAM_KEYS = ["m", "omega", "lambda", "mu", "d_qq", "d_pp", "d_pq", "hbar"]
_PARAM_DEFAULTS = {
    "m": 1.0, "omega": 1.0, "hbar": 1.0,
    "lambda": 0.0, "mu": 0.0, "d_qq": 0.0, "d_pp": 0.0, "d_pq": 0.0,
}
_CONFIG_KEYS = {
    "params", "initial", "t_max", "n_points", "outputs",
    "oracle", "oracle_dim", "oracle_step",
}
_S_BY_NAME = {"p": quasiprob.S_GLAUBER_P, "wigner": quasiprob.S_WIGNER, "q": quasiprob.S_HUSIMI_Q}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad arguments; this front end reserves
    2 for --strict constraint violations, so remap parse errors to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    return "%.17g" % float(x)


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one simulate run."""

    params: OscillatorParams
    initial: str = "coherent:0,0"
    t_max: float = 10.0
    n_points: int = 201
    outputs: tuple = ("moments", "energy")
    oracle: bool = False
    oracle_dim: int = 80
    oracle_step: Optional[float] = None

    def __post_init__(self):
        if not self.t_max > 0.0:
            raise ValueError("t_max must be positive")
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2")
        outs = tuple(self.outputs)
        for name in outs:
            if name in ("density", "wigner", "p", "q"):
                raise ValueError(
                    f"output {name!r} is served by the density-matrix / distribution commands"
                )
            if name not in ("moments", "energy"):
                raise ValueError(f"unknown output {name!r}")
        if not outs:
            raise ValueError("outputs must not be empty")
        object.__setattr__(self, "outputs", outs)
        if self.oracle_dim < 2:
            raise ValueError("oracle_dim must be at least 2")
        if self.oracle_step is not None and not self.oracle_step > 0.0:
            raise ValueError("oracle_step must be positive")


def _load_config_file(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read config file {path}: {exc}")
    if not isinstance(data, dict):
        raise _UsageError("config file must contain a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise _UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def _resolve_params(args, cfg: dict) -> OscillatorParams:
    merged = dict(_PARAM_DEFAULTS)
    file_params = cfg.get("params", {})
    if not isinstance(file_params, dict):
        raise _UsageError("config key 'params' must be an object")
    unknown = set(file_params) - set(_PARAM_KEYS)
    if unknown:
        raise _UsageError(f"unknown parameter keys in config: {sorted(unknown)}")
    merged.update(file_params)
    for key in _PARAM_KEYS:
        value = getattr(args, "p_" + key.replace("lambda", "lam"), None)
        if value is not None:
            merged[key] = value
    try:
        return OscillatorParams.from_dict(merged)
    except (ValueError, KeyError) as exc:
        raise _UsageError(f"invalid parameters: {exc}")


def _parse_state(spec: str, params: OscillatorParams):
    """Parse a state spec into (first moments, covariances, alpha0 or None).

    Forms: coherent:RE[,IM] | moments:sq,sp,sqq,spp,spq | stationary.
    """
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    mw = params.m * params.omega
    hbar = params.hbar
    if kind == "coherent":
        parts = [p.strip() for p in rest.split(",")] if rest else ["0"]
        if len(parts) == 1:
            parts.append("0")
        if len(parts) != 2:
            raise _UsageError(f"coherent state spec needs RE[,IM], got {spec!r}")
        try:
            alpha0 = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise _UsageError(f"bad coherent state spec {spec!r}")
        first = moments.FirstMoments(
            sigma_q=math.sqrt(2.0 * hbar / mw) * alpha0.real,
            sigma_p=math.sqrt(2.0 * hbar * mw) * alpha0.imag,
        )
        cov = moments.CovarianceTriple(
            sigma_qq=hbar / (2.0 * mw), sigma_pp=hbar * mw / 2.0, sigma_pq=0.0
        )
        return first, cov, alpha0
    if kind == "moments":
        parts = [p.strip() for p in rest.split(",")] if rest else []
        if len(parts) != 5:
            raise _UsageError(f"moments state spec needs sq,sp,sqq,spp,spq, got {spec!r}")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise _UsageError(f"bad moments state spec {spec!r}")
        first = moments.FirstMoments(sigma_q=vals[0], sigma_p=vals[1])
        cov = moments.CovarianceTriple(sigma_qq=vals[2], sigma_pp=vals[3], sigma_pq=vals[4])
        return first, cov, None
    if kind == "stationary":
        if rest:
            raise _UsageError("stationary state spec takes no arguments")
        cov = moments.asymptotic_covariances(params)
        return moments.FirstMoments(0.0, 0.0), cov, None
    raise _UsageError(f"unknown state spec {spec!r} (coherent:RE,IM | moments:... | stationary)")


def _emit(output: Optional[str], text: str) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _config_comment(resolved: dict) -> str:
    return "# config: " + json.dumps(resolved, sort_keys=True)


def _dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _constraints_dict(rep) -> dict:
    return {
        "dpp_positive": rep.dpp_positive,
        "dqq_positive": rep.dqq_positive,
        "determinant_ok": rep.determinant_ok,
        "determinant_margin": rep.determinant_margin,
        "all_satisfied": rep.all_satisfied,
        "has_steady_state": rep.has_steady_state,
    }


def _strict_gate(args, params: OscillatorParams) -> Optional[int]:
    """Under --strict, refuse to run with unphysical diffusion coefficients."""
    if not getattr(args, "strict", False):
        return None
    rep = check_fundamental_constraints(params)
    if rep.all_satisfied:
        return None
    print(
        "error: fundamental diffusion constraints violated "
        f"(determinant margin {rep.determinant_margin:g})",
        file=sys.stderr,
    )
    return 2


def _add_param_flags(parser) -> None:
    group = parser.add_argument_group("model parameters")
    group.add_argument("--m", dest="p_m", type=float, default=None, help="mass (default 1)")
    group.add_argument("--omega", dest="p_omega", type=float, default=None, help="frequency (default 1)")
    group.add_argument("--lambda", dest="p_lam", type=float, default=None, help="relaxation rate (default 0)")
    group.add_argument("--mu", dest="p_mu", type=float, default=None, help="friction asymmetry (default 0)")
    group.add_argument("--d-qq", dest="p_d_qq", type=float, default=None, help="position diffusion (default 0)")
    group.add_argument("--d-pp", dest="p_d_pp", type=float, default=None, help="momentum diffusion (default 0)")
    group.add_argument("--d-pq", dest="p_d_pq", type=float, default=None, help="cross diffusion (default 0)")
    group.add_argument("--hbar", dest="p_hbar", type=float, default=None, help="hbar (default 1)")


def _add_common_flags(parser, strict: bool = True) -> None:
    parser.add_argument("--config", default=None, metavar="FILE", help="JSON config file; flags override it")
    parser.add_argument("--output", "-o", default=None, metavar="FILE", help="output file (default stdout)")
    if strict:
        parser.add_argument("--strict", action="store_true",
                            help="exit 2 if the fundamental diffusion constraints are violated")
    _add_param_flags(parser)


# ---------------------------------------------------------------- simulate


def cmd_simulate(args) -> int:
    cfg = _load_config_file(args.config)
    params = _resolve_params(args, cfg)

    initial = args.state if args.state is not None else cfg.get("initial", "coherent:0,0")
    t_max = args.t_max if args.t_max is not None else cfg.get("t_max", 10.0)
    n_points = args.n_points if args.n_points is not None else cfg.get("n_points", 201)
    outputs = cfg.get("outputs", ["moments", "energy"])
    if args.outputs is not None:
        outputs = [s.strip() for s in args.outputs.split(",") if s.strip()]
    use_oracle = bool(cfg.get("oracle", False)) or args.oracle
    oracle_dim = args.oracle_dim if args.oracle_dim is not None else cfg.get("oracle_dim", 80)
    oracle_step = args.oracle_step if args.oracle_step is not None else cfg.get("oracle_step")

    try:
        run = RunConfig(
            params=params, initial=str(initial), t_max=float(t_max), n_points=int(n_points),
            outputs=tuple(outputs), oracle=use_oracle, oracle_dim=int(oracle_dim),
            oracle_step=None if oracle_step is None else float(oracle_step),
        )
    except (TypeError, ValueError) as exc:
        raise _UsageError(str(exc))

    code = _strict_gate(args, params)
    if code is not None:
        return code

    first0, cov0, alpha0 = _parse_state(run.initial, params)
    times = np.linspace(0.0, run.t_max, run.n_points)
    traj = moments.trajectory(params, first0, cov0, times)

    resolved = {
        "command": "simulate",
        "params": params.to_dict(),
        "initial": run.initial,
        "t_max": run.t_max,
        "n_points": run.n_points,
        "outputs": list(run.outputs),
        "oracle": run.oracle,
    }

    columns = [("t", traj.times)]
    if "moments" in run.outputs:
        columns += [
            ("sigma_q", traj.sigma_q), ("sigma_p", traj.sigma_p),
            ("sigma_qq", traj.sigma_qq), ("sigma_pp", traj.sigma_pp), ("sigma_pq", traj.sigma_pq),
        ]
    if "energy" in run.outputs:
        columns.append(("energy", traj.energy))

    max_dev = None
    if run.oracle:
        if alpha0 is None:
            raise _UsageError("--oracle needs a coherent:RE,IM initial state")
        step = run.oracle_step if run.oracle_step is not None else oracle.recommended_step(params)
        resolved["oracle_dim"] = run.oracle_dim
        resolved["oracle_step"] = step
        state0 = oracle.coherent_state(alpha0, run.oracle_dim)
        states = oracle.integrate(params, state0, oracle.IntegratorConfig(step=step, t_grid=tuple(times)))
        n = len(states)
        diag_cols = {k: np.empty(n) for k in ("trace_err", "herm_err", "min_eig", "tail_mass")}
        devs = np.empty(n)
        for i, state in enumerate(states):
            rep = oracle.diagnostics(state)
            diag_cols["trace_err"][i] = rep.trace_error
            diag_cols["herm_err"][i] = rep.hermiticity_error
            diag_cols["min_eig"][i] = rep.min_eigenvalue
            diag_cols["tail_mass"][i] = rep.tail_mass
            of, oc, oe = oracle.moments_of(state, params)
            devs[i] = max(
                abs(of.sigma_q - traj.sigma_q[i]), abs(of.sigma_p - traj.sigma_p[i]),
                abs(oc.sigma_qq - traj.sigma_qq[i]), abs(oc.sigma_pp - traj.sigma_pp[i]),
                abs(oc.sigma_pq - traj.sigma_pq[i]), abs(oe - traj.energy[i]),
            )
        for key in ("trace_err", "herm_err", "min_eig", "tail_mass"):
            columns.append((key, diag_cols[key]))
        columns.append(("dev_max", devs))
        max_dev = float(np.max(devs))

    lines = [_config_comment(resolved), ",".join(name for name, _ in columns)]
    data = [col for _, col in columns]
    for i in range(len(traj.times)):
        lines.append(",".join(_fmt(col[i]) for col in data))
    if max_dev is not None:
        lines.append("# oracle_max_deviation: " + _fmt(max_dev))
    _emit(args.output, "\n".join(lines) + "\n")
    if max_dev is not None and args.output not in (None, "-"):
        print("oracle max deviation: " + _fmt(max_dev))
    return 0


# ------------------------------------------------------------------ steady


def cmd_steady(args) -> int:
    cfg = _load_config_file(args.config)
    params = _resolve_params(args, cfg)
    code = _strict_gate(args, params)
    if code is not None:
        return code

    names = [s.strip().lower() for s in args.s_list.split(",") if s.strip()]
    for name in names:
        if name not in _S_BY_NAME:
            raise _UsageError(f"unknown representation {name!r} (choose from p, wigner, q)")

    cov = moments.asymptotic_covariances(params)
    energy = moments.asymptotic_energy(params)
    ok, margin = moments.check_asymptotic_constraint(params, cov)
    reps = {}
    for name in names:
        dist = quasiprob.steady_state_distribution(params, _S_BY_NAME[name])
        reps[name] = {
            "s": dist.s,
            "mean": [float(v) for v in dist.mean],
            "cov": [[float(v) for v in row] for row in dist.cov],
            "positive_definite": dist.positive_definite,
        }
    data = {
        "config": {"command": "steady", "params": params.to_dict(), "s_list": names},
        "covariances": {
            "sigma_qq": cov.sigma_qq, "sigma_pp": cov.sigma_pp, "sigma_pq": cov.sigma_pq,
        },
        "energy": energy,
        "asymptotic_constraint": {"ok": ok, "margin": margin},
        "constraints": _constraints_dict(check_fundamental_constraints(params)),
        "representations": reps,
    }
    _emit(args.output, _dump_json(data))
    return 0


# ---------------------------------------------------------- density-matrix


def cmd_density(args) -> int:
    cfg = _load_config_file(args.config)
    params = _resolve_params(args, cfg)
    code = _strict_gate(args, params)
    if code is not None:
        return code
    if args.n < 1:
        raise _UsageError("--n must be at least 1")
    if args.t < 0.0:
        raise _UsageError("--t must be nonnegative")

    kind = args.state.partition(":")[0].strip().lower()
    if kind == "coherent":
        _, _, alpha0 = _parse_state(args.state, params)
        coeffs = densmat.packet_coeffs(alpha0)
        if args.t > 0.0:
            coeffs = densmat.evolve_genfunc_coeffs(params, coeffs, args.t)
    elif kind == "stationary":
        coeffs = densmat.stationary_coeffs(params)
    else:
        raise _UsageError(
            "density-matrix supports coherent:RE,IM or stationary initial states"
        )
    matrix = densmat.density_matrix_from_coeffs(coeffs, args.n)
    trace = complex(np.trace(matrix.entries))
    data = {
        "config": {
            "command": "density-matrix", "params": params.to_dict(),
            "initial": args.state, "t": args.t, "dim": args.n,
        },
        "dim": matrix.dim,
        "t": args.t,
        "trace": {"re": trace.real, "im": trace.imag},
        "entries": [
            [{"re": z.real, "im": z.imag} for z in row] for row in matrix.entries
        ],
    }
    _emit(args.output, _dump_json(data))
    return 0


# ------------------------------------------------------------ distribution


def _parse_grid(spec: str, flag: str):
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != 3:
        raise _UsageError(f"{flag} must be MIN,MAX,N, got {spec!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"bad grid spec {spec!r}")
    if n < 2 or not hi > lo:
        raise _UsageError(f"{flag} needs MAX > MIN and N >= 2")
    return np.linspace(lo, hi, n)


def cmd_distribution(args) -> int:
    cfg = _load_config_file(args.config)
    params = _resolve_params(args, cfg)
    code = _strict_gate(args, params)
    if code is not None:
        return code

    rep_name = args.rep.strip().lower()
    if rep_name not in _S_BY_NAME:
        raise _UsageError(f"unknown representation {args.rep!r} (choose from p, wigner, q)")
    s = _S_BY_NAME[rep_name]

    if args.steady and args.t is not None:
        raise _UsageError("--steady and --t are mutually exclusive")
    if args.steady:
        dist = quasiprob.steady_state_distribution(params, s)
        when = "steady"
    else:
        t = 0.0 if args.t is None else args.t
        if t < 0.0:
            raise _UsageError("--t must be nonnegative")
        first0, cov0, _ = _parse_state(args.state, params)
        first_t = moments.evolve_first_moments(params, first0, t)
        cov_t = moments.evolve_covariances(params, cov0, t)
        dist = quasiprob.distribution_from_moments(params, s, first_t, cov_t)
        when = t

    grid1 = _parse_grid(args.grid, "--grid")
    grid2 = _parse_grid(args.grid2, "--grid2") if args.grid2 is not None else grid1
    x1, x2 = np.meshgrid(grid1, grid2, indexing="ij")
    points = np.column_stack([x1.ravel(), x2.ravel()])
    values = quasiprob.evaluate_distribution(dist, points)

    resolved = {
        "command": "distribution", "params": params.to_dict(), "rep": rep_name,
        "at": when, "initial": None if args.steady else args.state,
        "grid": [float(grid1[0]), float(grid1[-1]), int(grid1.size)],
        "grid2": [float(grid2[0]), float(grid2[-1]), int(grid2.size)],
    }
    lines = [_config_comment(resolved), "x1,x2,value"]
    for i in range(points.shape[0]):
        lines.append(f"{_fmt(points[i, 0])},{_fmt(points[i, 1])},{_fmt(values[i])}")
    _emit(args.output, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------- charfunc


def cmd_charfunc(args) -> int:
    cfg = _load_config_file(args.config)
    params = _resolve_params(args, cfg)
    code = _strict_gate(args, params)
    if code is not None:
        return code
    if args.t < 0.0:
        raise _UsageError("--t must be nonnegative")
    kind = args.state.partition(":")[0].strip().lower()
    if kind != "coherent":
        raise _UsageError("charfunc needs a coherent:RE,IM initial state")
    _, _, alpha0 = _parse_state(args.state, params)

    parts = [p.strip() for p in args.lambda_arg.split(",")]
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise _UsageError(f"--lambda-arg must be RE[,IM], got {args.lambda_arg!r}")
    try:
        lam_arg = complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise _UsageError(f"bad --lambda-arg {args.lambda_arg!r}")

    value = charfunc.evaluate_char(params, alpha0, lam_arg, args.t)
    widths = charfunc.char_widths(params, args.t)
    data = {
        "config": {
            "command": "charfunc", "params": params.to_dict(), "initial": args.state,
            "t": args.t, "lambda_arg": {"re": lam_arg.real, "im": lam_arg.imag},
        },
        "t": args.t,
        "value": {"re": value.real, "im": value.imag},
        "widths": {"f": {"re": widths.f.real, "im": widths.f.imag}, "h": widths.h},
    }
    _emit(args.output, _dump_json(data))
    return 0


# ---------------------------------------------------------------- validate


def _report_dict(rep: catalog.CatalogReport) -> dict:
    return {
        "model": rep.model.id,
        "description": rep.model.description,
        "expected_verdict": rep.model.expected_verdict,
        "condition": rep.model.condition,
        "params": rep.params.to_dict(),
        "constraints": _constraints_dict(rep.constraints),
        "verdict": rep.observed_verdict,
        "condition_holds": rep.condition_holds,
        "consistent": rep.consistent,
    }


def cmd_validate(args) -> int:
    cfg = _load_config_file(args.config)
    if args.all and args.model is not None:
        raise _UsageError("--all and --model are mutually exclusive")

    if args.all:
        reports = catalog.verify_catalog()
        data = {
            "config": {"command": "validate", "all": True},
            "reports": [_report_dict(r) for r in reports],
            "all_consistent": all(r.consistent for r in reports),
        }
        _emit(args.output, _dump_json(data))
        if args.strict and not data["all_consistent"]:
            return 2
        return 0

    if args.model is not None:
        overrides = {}
        for item in args.set or []:
            key, sep, value = item.partition("=")
            if not sep:
                raise _UsageError(f"--set needs KEY=VALUE, got {item!r}")
            try:
                overrides[key.strip()] = float(value)
            except ValueError:
                raise _UsageError(f"--set value must be a number, got {item!r}")
        try:
            report = catalog.report_model(args.model, **overrides)
        except (KeyError, ValueError) as exc:
            raise _UsageError(str(exc))
        data = {
            "config": {"command": "validate", "model": args.model, "set": overrides},
            **_report_dict(report),
        }
        _emit(args.output, _dump_json(data))
        if args.strict and not report.constraints.all_satisfied:
            return 2
        return 0

    params = _resolve_params(args, cfg)
    rep = check_fundamental_constraints(params)
    data = {
        "config": {"command": "validate", "params": params.to_dict()},
        "constraints": _constraints_dict(rep),
        "verdict": "satisfied" if rep.all_satisfied else "violated",
    }
    _emit(args.output, _dump_json(data))
    if args.strict and not rep.all_satisfied:
        return 2
    return 0


# ------------------------------------------------------------------- sweep


def _sweep_point(item):
    lam, mu, temp, m, omega, hbar = item
    coth = 1.0 / math.tanh(hbar * omega / (2.0 * temp))
    params = catalog.instantiate(
        "gibbs", {"lambda": lam, "mu": mu, "coth": coth, "m": m, "omega": omega, "hbar": hbar}
    )
    rep = check_fundamental_constraints(params)
    if rep.has_steady_state:
        cov = moments.asymptotic_covariances(params)
        tail = (cov.sigma_qq, cov.sigma_pp, cov.sigma_pq, moments.asymptotic_energy(params))
    else:
        tail = (math.nan, math.nan, math.nan, math.nan)
    return (lam, mu, temp, coth, float(rep.all_satisfied), float(rep.has_steady_state)) + tail


def _resolve_jobs(requested: Optional[int]) -> int:
    env = os.environ.get("LINDBLAD_OSC_JOBS")
    if env is not None and env != "":
        try:
            jobs = int(env)
        except ValueError:
            raise _UsageError(f"LINDBLAD_OSC_JOBS must be an integer, got {env!r}")
    elif requested is not None:
        jobs = requested
    else:
        jobs = os.cpu_count() or 1
    if jobs < 1:
        raise _UsageError("jobs must be at least 1")
    return jobs


def cmd_sweep(args) -> int:
    cfg = _load_config_file(args.config)
    base = _resolve_params(args, cfg)
    lams = _parse_grid(args.lambda_range, "--lambda-range")
    mus = _parse_grid(args.mu_range, "--mu-range")
    temps = _parse_grid(args.temp_range, "--temp-range")
    if temps[0] <= 0.0:
        raise _UsageError("--temp-range must be positive (temperature in units of hbar omega / k)")
    jobs = _resolve_jobs(args.jobs)

    items = [
        (float(lam), float(mu), float(temp), base.m, base.omega, base.hbar)
        for lam in lams for mu in mus for temp in temps
    ]
    if jobs == 1 or len(items) <= 1:
        rows = [_sweep_point(item) for item in items]
    else:
        chunk = max(1, len(items) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, items, chunksize=chunk))

    resolved = {
        "command": "sweep",
        "m": base.m, "omega": base.omega, "hbar": base.hbar,
        "lambda_range": [float(lams[0]), float(lams[-1]), int(lams.size)],
        "mu_range": [float(mus[0]), float(mus[-1]), int(mus.size)],
        "temp_range": [float(temps[0]), float(temps[-1]), int(temps.size)],
        "jobs": jobs,
    }
    lines = [
        _config_comment(resolved),
        "lambda,mu,temperature,coth,constraints_satisfied,steady_state,"
        "sigma_qq_inf,sigma_pp_inf,sigma_pq_inf,energy_inf",
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _emit(args.output, "\n".join(lines) + "\n")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> _Parser:
    parser = _Parser(
        prog="lindblad-osc",
        description="Damped quantum harmonic oscillator: closed-form moments, "
        "characteristic function, quasiprobability distributions, number-basis "
        "density matrices and a brute-force truncated-basis cross-check.",
    )
    sub = parser.add_subparsers(dest="cmd", metavar="COMMAND")

    p = sub.add_parser("simulate", help="write a moment trajectory CSV")
    _add_common_flags(p)
    p.add_argument("--state", default=None, metavar="SPEC",
                   help="initial state: coherent:RE,IM | moments:sq,sp,sqq,spp,spq | stationary")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--n-points", type=int, default=None)
    p.add_argument("--outputs", default=None, metavar="LIST",
                   help="comma list from {moments, energy} (default both)")
    p.add_argument("--oracle", action="store_true",
                   help="also run the truncated number-basis integrator and report deviations")
    p.add_argument("--oracle-dim", type=int, default=None, help="truncation dimension (default 80)")
    p.add_argument("--oracle-step", type=float, default=None, help="integrator step (default auto)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("steady", help="steady-state covariances, energy and distributions as JSON")
    _add_common_flags(p)
    p.add_argument("--s-list", default="p,wigner,q", metavar="LIST",
                   help="representations to include (default p,wigner,q)")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("density-matrix", aliases=["density"],
                       help="number-basis density matrix as JSON")
    _add_common_flags(p)
    p.add_argument("--state", default="coherent:0,0", metavar="SPEC",
                   help="coherent:RE,IM or stationary")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--n", type=int, default=20, help="matrix dimension (indices 0..n-1)")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("distribution", help="quasiprobability values on a phase-space grid (CSV)")
    _add_common_flags(p)
    p.add_argument("--rep", required=True, help="p, wigner or q")
    p.add_argument("--steady", action="store_true", help="use the steady-state distribution")
    p.add_argument("--t", type=float, default=None, help="evaluate at this time (with --state)")
    p.add_argument("--state", default="coherent:0,0", metavar="SPEC")
    p.add_argument("--grid", default="-6,6,241", metavar="MIN,MAX,N")
    p.add_argument("--grid2", default=None, metavar="MIN,MAX,N",
                   help="second axis grid (default: same as --grid)")
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("charfunc", help="normally ordered characteristic function value as JSON")
    _add_common_flags(p)
    p.add_argument("--state", default="coherent:0,0", metavar="SPEC")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--lambda-arg", required=True, metavar="RE[,IM]",
                   help="argument of the characteristic function")
    p.set_defaults(func=cmd_charfunc)

    p = sub.add_parser("validate", help="constraint checks and literature-model verdicts as JSON")
    _add_common_flags(p)
    p.add_argument("--model", default=None, help="catalog model id (see --all for the list)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a model free parameter (repeatable)")
    p.add_argument("--all", action="store_true", help="report every catalog model at its defaults")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="steady-state summary over a (lambda, mu, T) grid (CSV)")
    _add_common_flags(p, strict=False)
    p.add_argument("--lambda-range", required=True, metavar="MIN,MAX,N")
    p.add_argument("--mu-range", required=True, metavar="MIN,MAX,N")
    p.add_argument("--temp-range", required=True, metavar="MIN,MAX,N")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: CPU count; env LINDBLAD_OSC_JOBS wins)")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. | head); exit quietly
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NoSteadyState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NonPositiveDefinite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LindbladOscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
