"""Declarative run configurations: TOML parsing, validation, serialization.

A configuration is a flat set of sections with unit-suffixed scalar keys
(``gamma_over_2pi_hz``, ``delta_over_gamma``, ``tau_p_s``).  Parsing fills
literal defaults; defaults that derive from other fields (``b_upper_hz``
from ``b_lower_hz``, ``s_b`` from ``s0``, the repetition period from
``gamma``) stay None until the physics objects are built, so scans that
override the base field propagate correctly.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import tomli

from .classical import DegreeOfFreedom, SechPulseTrain
from .constants import CODATA
from .exceptions import ConfigError
from .rates import SaturationContext
from .structure import MoleculeSpec, thermal_j_max

MODES = ("classical_cw", "classical_sech", "narrowband", "broadband",
         "fortrat", "scan")
QUANTIZED_MODES = ("narrowband", "broadband")


@dataclass(frozen=True)
class MoleculeSection:
    b_lower_hz: float
    gamma_over_2pi_hz: float
    b_upper_hz: float | None = None
    lambda_lower: int = 0
    lambda_upper: int = 0
    q_doubling_hz: float = 0.0
    j_max: int | None = None


@dataclass(frozen=True)
class CwLaserSection:
    s0: float
    delta_over_gamma: float
    s_b: float | None = None
    gamma_over_2pi_hz: float | None = None   # classical modes only


@dataclass(frozen=True)
class PulseLaserSection:
    theta0_rad: float
    tau_p_s: float
    delta_tau_p: float
    rep_period_s: float | None = None
    gamma_over_2pi_hz: float | None = None   # classical modes only


@dataclass(frozen=True)
class DofSection:
    kind: str                      # "rotation" | "translation"
    inertia_kg_m2: float | None = None
    recoil_over_gamma: float | None = None
    mass_kg: float | None = None
    wavelength_m: float | None = None


@dataclass(frozen=True)
class CurveSection:
    x_max: float = 1.5
    n_points: int = 401


@dataclass(frozen=True)
class MonteCarloSection:
    n_particles: int = 1000
    t_end_s: float | None = None
    t_end_tau_e: float | None = 8.0
    n_outputs: int = 400


@dataclass(frozen=True)
class RunSection:
    initial_T_K: float | None = None
    duration_s: float | None = None
    steady_state: bool = False
    output_times_s: tuple[float, ...] | None = None
    num_times: int = 1
    time_spacing: str = "log"
    t_first_s: float | None = None
    method: str = "auto"


@dataclass(frozen=True)
class ObservablesSection:
    j_cut: int | None = None
    fit_j_max: int | None = None
    # Boltzmann-fit window: "auto" detects the cold-peak valley, "full"
    # fits everything, "equilibrium" spans the predicted fixed point J0
    # (narrowband steady states).
    fit_window: str = "auto"


@dataclass(frozen=True)
class ScanSection:
    parameter: str
    values: tuple[float, ...]
    secondary_parameter: str | None = None
    secondary_values: tuple[float, ...] | None = None


@dataclass(frozen=True)
class OutputSection:
    dir: str = "."


@dataclass(frozen=True)
class RunConfig:
    mode: str
    base_mode: str | None = None
    seed: int = 0
    molecule: MoleculeSection | None = None
    laser_cw: CwLaserSection | None = None
    laser_pulse: PulseLaserSection | None = None
    dof: DofSection | None = None
    curve: CurveSection | None = None
    monte_carlo: MonteCarloSection | None = None
    run: RunSection = field(default_factory=RunSection)
    observables: ObservablesSection = field(default_factory=ObservablesSection)
    scan: ScanSection | None = None
    output: OutputSection = field(default_factory=OutputSection)

    @property
    def effective_mode(self) -> str:
        return self.base_mode if self.mode == "scan" else self.mode


_SECTION_TYPES = {
    "molecule": MoleculeSection,
    "dof": DofSection,
    "curve": CurveSection,
    "monte_carlo": MonteCarloSection,
    "run": RunSection,
    "observables": ObservablesSection,
    "scan": ScanSection,
    "output": OutputSection,
}

# Scan parameters that may be overridden, mapped to (config attr, field).
SCANNABLE = {
    "laser.s0": ("laser_cw", "s0"),
    "laser.delta_over_gamma": ("laser_cw", "delta_over_gamma"),
    "laser.s_b": ("laser_cw", "s_b"),
    "laser.theta0_rad": ("laser_pulse", "theta0_rad"),
    "laser.tau_p_s": ("laser_pulse", "tau_p_s"),
    "laser.delta_tau_p": ("laser_pulse", "delta_tau_p"),
    "molecule.b_lower_hz": ("molecule", "b_lower_hz"),
    "molecule.q_doubling_hz": ("molecule", "q_doubling_hz"),
    "run.initial_T_K": ("run", "initial_T_K"),
    "run.duration_s": ("run", "duration_s"),
}


def _coerce_section(name: str, cls, data: dict, errors: list[str]):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            errors.append(f"{name}.{key}: unknown field")
            continue
        if isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        errors.append(f"{name}: {exc}")
        return None


def parse_config(path: str | Path) -> RunConfig:
    """Parse and validate a TOML configuration file."""
    return parse_config_text(Path(path).read_text())


def parse_config_text(source: str | dict) -> RunConfig:
    """Parse and validate a run configuration from TOML text (or an
    already-decoded dict).  Raises ConfigError naming every offending
    field and constraint."""
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = tomli.loads(source)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"TOML syntax error: {exc}") from exc

    errors: list[str] = []
    mode = data.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode: must be one of {MODES}, got {mode!r}")

    kwargs: dict[str, Any] = {"mode": mode}
    if "base_mode" in data:
        kwargs["base_mode"] = data["base_mode"]
    if "seed" in data:
        kwargs["seed"] = int(data["seed"])

    laser_data = data.get("laser", {})
    effective = kwargs.get("base_mode") if mode == "scan" else mode
    if laser_data:
        if effective in ("classical_cw", "narrowband"):
            section = _coerce_section("laser", CwLaserSection, laser_data, errors)
            kwargs["laser_cw"] = section
        elif effective in ("classical_sech", "broadband"):
            section = _coerce_section("laser", PulseLaserSection, laser_data, errors)
            kwargs["laser_pulse"] = section

    for name, cls in _SECTION_TYPES.items():
        if name in data:
            section = _coerce_section(name, cls, data[name], errors)
            if section is not None:
                kwargs[name] = section

    known = set(_SECTION_TYPES) | {"mode", "base_mode", "seed", "laser"}
    for key in data:
        if key not in known:
            errors.append(f"{key}: unknown top-level key")

    if errors:
        raise ConfigError("; ".join(errors))
    cfg = RunConfig(**kwargs)
    _validate(cfg)
    return cfg


def _require(cond: bool, msg: str, errors: list[str]) -> None:
    if not cond:
        errors.append(msg)


def _validate(cfg: RunConfig) -> None:
    errors: list[str] = []
    mode = cfg.mode

    if mode == "scan":
        _require(cfg.base_mode in MODES and cfg.base_mode != "scan",
                 "base_mode: scan requires a non-scan base_mode", errors)
        _require(cfg.scan is not None, "scan: section required in scan mode", errors)
        if cfg.scan is not None:
            _require(len(cfg.scan.values) > 0, "scan.values: must be non-empty", errors)
            _require(cfg.scan.parameter in SCANNABLE,
                     f"scan.parameter: {cfg.scan.parameter!r} is not scannable "
                     f"(choose from {sorted(SCANNABLE)})", errors)
            _require(all(math.isfinite(v) for v in cfg.scan.values),
                     "scan.values: must be finite", errors)
            if cfg.scan.secondary_parameter is not None:
                _require(cfg.scan.secondary_parameter in SCANNABLE,
                         f"scan.secondary_parameter: {cfg.scan.secondary_parameter!r} "
                         "is not scannable", errors)
                _require(bool(cfg.scan.secondary_values),
                         "scan.secondary_values: required with secondary_parameter",
                         errors)

    effective = cfg.effective_mode
    if effective in QUANTIZED_MODES + ("fortrat",):
        _require(cfg.molecule is not None,
                 "molecule: section required for quantized modes", errors)
        if cfg.molecule is not None:
            m = cfg.molecule
            _require(m.b_lower_hz > 0, "molecule.b_lower_hz: must be positive", errors)
            _require(m.b_upper_hz is None or m.b_upper_hz > 0,
                     "molecule.b_upper_hz: must be positive", errors)
            _require(m.gamma_over_2pi_hz > 0,
                     "molecule.gamma_over_2pi_hz: must be positive", errors)
            _require(m.lambda_lower in (0, 1) and m.lambda_upper in (0, 1),
                     "molecule.lambda: only Sigma (0) and Pi (1) states supported",
                     errors)

    if effective == "narrowband":
        _require(cfg.laser_cw is not None, "laser: section required", errors)
        if cfg.laser_cw is not None:
            _require(cfg.laser_cw.s0 >= 0, "laser.s0: must be non-negative", errors)
    if effective == "classical_cw":
        _require(cfg.laser_cw is not None, "laser: section required", errors)
    if effective in ("broadband", "classical_sech"):
        _require(cfg.laser_pulse is not None, "laser: section required", errors)
        if cfg.laser_pulse is not None:
            p = cfg.laser_pulse
            _require(p.tau_p_s > 0, "laser.tau_p_s: must be positive", errors)
            _require(p.theta0_rad >= 0, "laser.theta0_rad: must be non-negative",
                     errors)

    if effective in QUANTIZED_MODES:
        r = cfg.run
        _require(r.initial_T_K is not None and r.initial_T_K > 0,
                 "run.initial_T_K: positive temperature required", errors)
        if not r.steady_state:
            _require((r.duration_s is not None and r.duration_s > 0)
                     or r.output_times_s,
                     "run.duration_s: positive duration (or explicit "
                     "output_times_s) required unless steady_state", errors)
        _require(r.time_spacing in ("linear", "log"),
                 "run.time_spacing: must be 'linear' or 'log'", errors)
        _require(r.method in ("auto", "krylov", "expm", "explicit"),
                 "run.method: unknown propagation method", errors)
        _require(cfg.observables.fit_window in ("auto", "full", "equilibrium"),
                 "observables.fit_window: must be 'auto', 'full' or "
                 "'equilibrium'", errors)

    if effective in ("classical_cw", "classical_sech") and cfg.monte_carlo:
        _require(cfg.monte_carlo.n_particles >= 1,
                 "monte_carlo.n_particles: must be >= 1", errors)
        _require(cfg.dof is not None,
                 "dof: section required for a Monte Carlo run", errors)
    if cfg.dof is not None:
        d = cfg.dof
        _require(d.kind in ("rotation", "translation"),
                 "dof.kind: must be 'rotation' or 'translation'", errors)
        if d.kind == "rotation":
            _require(d.inertia_kg_m2 is not None or d.recoil_over_gamma is not None,
                     "dof: rotation needs inertia_kg_m2 or recoil_over_gamma", errors)
        else:
            _require(d.mass_kg is not None and d.wavelength_m is not None,
                     "dof: translation needs mass_kg and wavelength_m", errors)

    if errors:
        raise ConfigError("; ".join(errors))


# ---------------------------------------------------------------------------
# Serialization (minimal TOML emitter for this flat schema)


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def _section_dict(section) -> dict:
    out = {}
    for f in dataclasses.fields(section):
        v = getattr(section, f.name)
        if v is not None:
            out[f.name] = v
    return out


def serialize_config(cfg: RunConfig) -> str:
    """Emit the configuration as TOML; parse(serialize(cfg)) == cfg."""
    lines = [f"mode = {_toml_value(cfg.mode)}"]
    if cfg.base_mode is not None:
        lines.append(f"base_mode = {_toml_value(cfg.base_mode)}")
    lines.append(f"seed = {_toml_value(cfg.seed)}")
    sections: list[tuple[str, Any]] = [
        ("molecule", cfg.molecule),
        ("laser", cfg.laser_cw if cfg.laser_cw is not None else cfg.laser_pulse),
        ("dof", cfg.dof),
        ("curve", cfg.curve),
        ("monte_carlo", cfg.monte_carlo),
        ("run", cfg.run),
        ("observables", cfg.observables),
        ("scan", cfg.scan),
        ("output", cfg.output),
    ]
    for name, section in sections:
        if section is None:
            continue
        body = _section_dict(section)
        if not body:
            continue
        lines.append("")
        lines.append(f"[{name}]")
        for key, value in body.items():
            lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    """Deterministic digest of the normalized configuration."""
    return hashlib.sha256(serialize_config(cfg).encode()).hexdigest()[:16]


def apply_override(cfg: RunConfig, parameter: str, value: float) -> RunConfig:
    """Return a copy of cfg with one scannable dotted parameter replaced."""
    if parameter not in SCANNABLE:
        raise ConfigError(f"scan.parameter: {parameter!r} is not scannable")
    attr, fld = SCANNABLE[parameter]
    section = getattr(cfg, attr)
    if section is None:
        raise ConfigError(f"scan.parameter: config has no {attr} section")
    return dataclasses.replace(cfg, **{attr: dataclasses.replace(section,
                                                                 **{fld: value})})


# ---------------------------------------------------------------------------
# Physics-object construction


def build_molecule_spec(cfg: RunConfig) -> MoleculeSpec:
    m = cfg.molecule
    if m is None:
        raise ConfigError("molecule: section required")
    gamma = 2.0 * math.pi * m.gamma_over_2pi_hz
    j_max = m.j_max
    if j_max is None:
        if cfg.run.initial_T_K is None:
            raise ConfigError("molecule.j_max: required without run.initial_T_K")
        j_max = thermal_j_max(m.b_lower_hz, cfg.run.initial_T_K)
    return MoleculeSpec(
        b_lower_hz=m.b_lower_hz,
        b_upper_hz=m.b_upper_hz if m.b_upper_hz is not None else m.b_lower_hz,
        lambda_lower=m.lambda_lower, lambda_upper=m.lambda_upper,
        gamma=gamma, q_doubling_hz=m.q_doubling_hz, j_max=j_max)


def build_saturation_context(cfg: RunConfig) -> SaturationContext:
    if cfg.laser_cw is None:
        raise ConfigError("laser: CW section required")
    return SaturationContext(s0=cfg.laser_cw.s0, s_B=cfg.laser_cw.s_b)


def build_pulse(cfg: RunConfig, gamma: float) -> SechPulseTrain:
    p = cfg.laser_pulse
    if p is None:
        raise ConfigError("laser: pulse section required")
    rep = p.rep_period_s if p.rep_period_s is not None else 7.0 / gamma
    return SechPulseTrain(tau_p=p.tau_p_s, rep_period=rep, theta0=p.theta0_rad,
                          delta=p.delta_tau_p / p.tau_p_s)


def build_dof(cfg: RunConfig, gamma: float | None) -> DegreeOfFreedom:
    d = cfg.dof
    if d is None:
        raise ConfigError("dof: section required")
    if d.kind == "translation":
        return DegreeOfFreedom.translation(d.mass_kg, d.wavelength_m)
    if d.inertia_kg_m2 is not None:
        return DegreeOfFreedom.rotation(d.inertia_kg_m2)
    if gamma is None:
        raise ConfigError("dof.recoil_over_gamma: needs a gamma to resolve")
    omega_r = d.recoil_over_gamma * gamma
    return DegreeOfFreedom.rotation(CODATA.hbar / (2.0 * omega_r))


def output_times(cfg: RunConfig) -> list[float]:
    r = cfg.run
    if r.output_times_s:
        return sorted(r.output_times_s)
    if r.duration_s is None:
        raise ConfigError("run.duration_s: required to derive output times")
    if r.num_times <= 1:
        return [r.duration_s]
    if r.time_spacing == "linear":
        step = r.duration_s / r.num_times
        return [step * (i + 1) for i in range(r.num_times)]
    t_first = r.t_first_s if r.t_first_s is not None else r.duration_s / 1000.0
    ratio = (r.duration_s / t_first) ** (1.0 / (r.num_times - 1))
    return [t_first * ratio**i for i in range(r.num_times)]
