"""Scenario files, command line overrides and the built-in preset registry.

A scenario is flat `key = value` text with `#` comments. Every physical parameter
must be given explicitly; only numerical settings have defaults.
"""

import argparse
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from logzero import logger

from ..core.correlations import OptimizerConfig
from ..core.dissipator import BathParams
from ..core.model import DensityMatrix, SystemParams, validate_params
from . import errors

PHYSICS_KEYS = ("J", "chi", "B", "b", "D", "T1", "T2", "gamma1", "gamma2", "gamma0")
REQUIRED_KEYS = PHYSICS_KEYS + ("initial_state",)
CUSTOM_DIAGONAL_KEYS = ("rho_11", "rho_22", "rho_33", "rho_44")
CUSTOM_COHERENCE_KEYS = ("rho_14_re", "rho_14_im", "rho_23_re", "rho_23_im")
OPTIONAL_KEYS = (
    "t_stop",
    "t_points",
    "geometry",
    "degeneracy_tol",
    "optimizer_theta_points",
    "optimizer_phi_points",
    "optimizer_iterations",
) + CUSTOM_DIAGONAL_KEYS + CUSTOM_COHERENCE_KEYS
KNOWN_KEYS = REQUIRED_KEYS + OPTIONAL_KEYS

INITIAL_STATES = ("bell_psi_plus", "separable_nonzero_discord", "custom")
GEOMETRIES = ("direct", "indirect")
SWEEP_AXES = ("T", "dT", "b", "D")

DEFAULT_T_POINTS = 201

# weight of |ψ⁺><ψ⁺| in the separable preset; below 1/3 the mixture is separable
SEPARABLE_BELL_WEIGHT = 0.3


@dataclass(frozen=True)
class SweepSpec:
    """`points` evenly spaced values of `axis` from `start` to `stop` inclusive."""

    axis: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            errors.raise_error(
                f"Unknown sweep axis '{self.axis}', expected one of {SWEEP_AXES}.",
                suggest_report=False,
                error=errors.ConfigError,
            )
        if self.points < 1:
            errors.raise_error(
                f"A sweep needs at least one point, got {self.points}.",
                suggest_report=False,
                error=errors.ConfigError,
            )

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class Scenario:
    """Everything a run needs: system, baths, initial state and numerical settings."""

    name: str
    system: SystemParams
    baths: BathParams
    initial_state: str
    rho0: DensityMatrix
    t_grid: Optional[np.ndarray] = None
    geometry: Optional[str] = None
    degeneracy_tol: Optional[float] = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def at(self, axis: str, value: float) -> Tuple[SystemParams, BathParams]:
        """System and baths with one sweep axis moved to `value`.

        `T` moves the mean temperature keeping T1 - T2, `dT` moves T1 - T2 keeping
        the mean temperature, `b` and `D` replace the field inhomogeneity and the
        Dzyaloshinskii-Moriya strength.
        """

        baths = self.baths
        if axis == "T":
            baths = BathParams.from_mean(
                value, baths.delta_t, baths.gamma1, baths.gamma2, baths.gamma0
            )
        elif axis == "dT":
            baths = BathParams.from_mean(
                baths.t_mean, value, baths.gamma1, baths.gamma2, baths.gamma0
            )
        elif axis == "b":
            return replace(self.system, b=value), baths
        elif axis == "D":
            return replace(self.system, D=value), baths
        else:
            raise ValueError(f"Unknown sweep axis '{axis}'.")
        return self.system, baths


@dataclass(frozen=True)
class Preset:
    description: str
    text: str


def _preset(description: str, **values) -> Preset:
    lines = [f"# {description}"]
    lines.extend(f"{key} = {value}" for key, value in values.items())
    return Preset(description=description, text="\n".join(lines) + "\n")


# γ₁ = γ₂ = 0.05 throughout, so γ₀ = 10 gives γ₀/γ̄ = 200 and γ₀ = 0.05 gives 1.
_FIG1_SYSTEM = dict(J=1, chi=0.9, B=2, b=1, D=1, T1=1.25, T2=0.75, gamma1=0.05, gamma2=0.05)
_FIG7_SYSTEM = dict(J=1, chi=0.9, B=2, b=2, D=2, T1=1, T2=1, gamma1=0.05, gamma2=0.05)
_FIG8_SYSTEM = dict(J=1, chi=0.9, B=2, b=1, D=2, gamma1=0.05, gamma2=0.05)

PRESETS: Dict[str, Preset] = {
    "fig1": _preset(
        "Bell state, gamma0/gamma_bar = 200; vary D around D_c = 1.68 with --set D=...",
        **_FIG1_SYSTEM,
        gamma0=10,
        initial_state="bell_psi_plus",
        t_stop=100,
        t_points=201,
        geometry="direct",
    ),
    "fig4-bell": _preset(
        "Bell state, near-Markovian memory (gamma0/gamma_bar = 200)",
        **_FIG1_SYSTEM,
        gamma0=10,
        initial_state="bell_psi_plus",
        t_stop=200,
        t_points=401,
        geometry="direct",
    ),
    "fig4-bell-memory": _preset(
        "Bell state, long memory (gamma0/gamma_bar = 1)",
        **_FIG1_SYSTEM,
        gamma0=0.05,
        initial_state="bell_psi_plus",
        t_stop=200,
        t_points=401,
        geometry="direct",
    ),
    "fig4-separable": _preset(
        "Separable state with discord, near-Markovian memory (gamma0/gamma_bar = 200)",
        **_FIG1_SYSTEM,
        gamma0=10,
        initial_state="separable_nonzero_discord",
        t_stop=200,
        t_points=401,
        geometry="direct",
    ),
    "fig4-separable-memory": _preset(
        "Separable state with discord, long memory (gamma0/gamma_bar = 1)",
        **_FIG1_SYSTEM,
        gamma0=0.05,
        initial_state="separable_nonzero_discord",
        t_stop=200,
        t_points=401,
        geometry="direct",
    ),
    "fig7": _preset(
        "Equal bath temperatures, B = b = 2, D = 2; sweep with --axis T",
        **_FIG7_SYSTEM,
        gamma0=10,
        initial_state="bell_psi_plus",
    ),
    "fig8-direct": _preset(
        "Hotter bath on the qubit in the stronger field (b dT > 0); sweep with --axis b",
        **_FIG8_SYSTEM,
        T1=1.25,
        T2=0.75,
        gamma0=10,
        initial_state="bell_psi_plus",
        geometry="direct",
    ),
    "fig8-indirect": _preset(
        "Hotter bath on the qubit in the weaker field (b dT < 0); sweep with --axis b",
        **_FIG8_SYSTEM,
        T1=0.75,
        T2=1.25,
        gamma0=10,
        initial_state="bell_psi_plus",
        geometry="indirect",
    ),
    "fig8-equilibrium": _preset(
        "Thermal equilibrium T1 = T2 = 1; sweep with --axis b",
        **_FIG8_SYSTEM,
        T1=1,
        T2=1,
        gamma0=10,
        initial_state="bell_psi_plus",
    ),
}


def _config_error(message: str) -> None:
    errors.raise_error(message, suggest_report=False, error=errors.ConfigError)


def _split(line: str, where: str) -> Tuple[str, str]:
    if "=" not in line:
        _config_error(f"{where}: expected `key = value`, got '{line.strip()}'.")
    key, value = line.split("=", 1)
    key, value = key.strip(), value.strip()
    if not key or not value:
        _config_error(f"{where}: expected `key = value`, got '{line.strip()}'.")
    if key not in KNOWN_KEYS:
        _config_error(f"{where}: unknown key '{key}'.")
    return key, value


def read_entries(
    text: str, source: str = "<config>", overrides: Sequence[str] = ()
) -> Dict[str, Tuple[str, str]]:
    """Parses scenario text into {key: (value, location)}; overrides win.

    Raises:
        ConfigError: on malformed lines, unknown keys or keys repeated within the text.
    """

    entries: Dict[str, Tuple[str, str]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        where = f"{source}, line {number}"
        key, value = _split(line, where)
        if key in entries:
            _config_error(f"{where}: duplicate key '{key}' (first given at {entries[key][1]}).")
        entries[key] = (value, where)

    for override in overrides:
        key, value = _split(override, f"--set {override}")
        if key in entries:
            logger.debug("Overriding %s = %s with %s.", key, entries[key][0], value)
        entries[key] = (value, f"--set {override}")
    return entries


def _number(entries: Dict[str, Tuple[str, str]], key: str) -> float:
    value, where = entries[key]
    try:
        number = float(value)
    except ValueError:
        _config_error(f"{where}: '{key}' must be a number, got '{value}'.")
    if not math.isfinite(number):
        _config_error(f"{where}: '{key}' must be finite, got '{value}'.")
    return number


def _integer(entries: Dict[str, Tuple[str, str]], key: str, default: int) -> int:
    if key not in entries:
        return default
    number = _number(entries, key)
    if number != int(number) or number < 1:
        _config_error(f"{entries[key][1]}: '{key}' must be a positive integer.")
    return int(number)


def _initial_state(entries: Dict[str, Tuple[str, str]]) -> DensityMatrix:
    name, where = entries["initial_state"]
    if name not in INITIAL_STATES:
        _config_error(f"{where}: initial_state must be one of {INITIAL_STATES}, got '{name}'.")

    custom_given = [key for key in CUSTOM_DIAGONAL_KEYS + CUSTOM_COHERENCE_KEYS if key in entries]
    if name != "custom" and custom_given:
        _config_error(f"rho_* keys {custom_given} require initial_state = custom.")

    if name == "bell_psi_plus":
        return DensityMatrix.from_pure(np.array([0.0, 1.0, 1.0, 0.0]))
    if name == "separable_nonzero_discord":
        bell = DensityMatrix.from_pure(np.array([0.0, 1.0, 1.0, 0.0])).elements
        mixed = SEPARABLE_BELL_WEIGHT * bell + (1.0 - SEPARABLE_BELL_WEIGHT) * np.eye(4) / 4.0
        return DensityMatrix(mixed)

    missing = [key for key in CUSTOM_DIAGONAL_KEYS if key not in entries]
    if missing:
        _config_error(f"initial_state = custom requires {', '.join(missing)}.")
    elements = np.diag([_number(entries, key) for key in CUSTOM_DIAGONAL_KEYS]).astype(complex)
    coherence = {
        key: _number(entries, key) if key in entries else 0.0 for key in CUSTOM_COHERENCE_KEYS
    }
    rho_14 = complex(coherence["rho_14_re"], coherence["rho_14_im"])
    rho_23 = complex(coherence["rho_23_re"], coherence["rho_23_im"])
    elements[0, 3], elements[3, 0] = rho_14, rho_14.conjugate()
    elements[1, 2], elements[2, 1] = rho_23, rho_23.conjugate()
    return DensityMatrix(elements).check()


def _check_geometry(geometry: Optional[str], system: SystemParams, baths: BathParams) -> None:
    if geometry is None:
        return
    if geometry not in GEOMETRIES:
        _config_error(f"geometry must be one of {GEOMETRIES}, got '{geometry}'.")
    product = system.b * baths.delta_t
    expected = "direct" if product > 0.0 else "indirect" if product < 0.0 else None
    if expected != geometry:
        _config_error(
            f"geometry = {geometry} needs b·(T1 - T2) {'> 0' if geometry == 'direct' else '< 0'}, "
            + f"got b = {system.b}, T1 - T2 = {baths.delta_t}."
        )


def build_scenario(entries: Dict[str, Tuple[str, str]], name: str = "scenario") -> Scenario:
    """Validates parsed entries and assembles the Scenario.

    Raises:
        ConfigError: on missing keys or malformed values (naming the key).
        PhysicsDomainError: when the parameters are well formed but unphysical, e.g.
            InvalidAnisotropy for |chi| > 1.
    """

    missing = [key for key in REQUIRED_KEYS if key not in entries]
    if missing:
        _config_error(f"Missing required key(s): {', '.join(missing)}.")

    numbers = {key: _number(entries, key) for key in PHYSICS_KEYS}
    system = SystemParams(
        J=numbers["J"], chi=numbers["chi"], B=numbers["B"], b=numbers["b"], D=numbers["D"]
    )
    baths = BathParams(
        T1=numbers["T1"],
        T2=numbers["T2"],
        gamma1=numbers["gamma1"],
        gamma2=numbers["gamma2"],
        gamma0=numbers["gamma0"],
    )

    degeneracy_tol = _number(entries, "degeneracy_tol") if "degeneracy_tol" in entries else None
    validated = validate_params(system, degeneracy_tol)
    baths.validate(require_coupling=True)

    t_grid = None
    if "t_stop" in entries:
        t_stop = _number(entries, "t_stop")
        if not t_stop > 0.0:
            _config_error(f"{entries['t_stop'][1]}: t_stop must be positive.")
        t_points = _integer(entries, "t_points", DEFAULT_T_POINTS)
        if t_points < 2:
            _config_error(f"{entries['t_points'][1]}: t_points must be at least 2.")
        t_grid = np.linspace(0.0, t_stop, t_points)
    elif "t_points" in entries:
        _config_error(f"{entries['t_points'][1]}: t_points requires t_stop.")

    geometry = entries["geometry"][0] if "geometry" in entries else None
    _check_geometry(geometry, system, baths)

    default = OptimizerConfig()
    optimizer = OptimizerConfig(
        n_theta=_integer(entries, "optimizer_theta_points", default.n_theta),
        n_phi=_integer(entries, "optimizer_phi_points", default.n_phi),
        iterations=_integer(entries, "optimizer_iterations", default.iterations),
    )

    scenario = Scenario(
        name=name,
        system=system,
        baths=baths,
        initial_state=entries["initial_state"][0],
        rho0=_initial_state(entries),
        t_grid=t_grid,
        geometry=geometry,
        degeneracy_tol=degeneracy_tol,
        optimizer=optimizer,
    )
    logger.info(
        "Scenario %s: ξ = %.6g, η = %.6g, T1 = %g, T2 = %g, γ₀/γ̄ = %.6g.",
        name,
        validated.xi,
        validated.eta,
        baths.T1,
        baths.T2,
        baths.gamma0 / baths.gamma_bar,
    )
    return scenario


def parse_config_text(
    text: str, source: str = "<config>", overrides: Sequence[str] = (), name: str = "scenario"
) -> Scenario:
    return build_scenario(read_entries(text, source, overrides), name)


def parse_config(path: str, overrides: Sequence[str] = ()) -> Scenario:
    """Reads a scenario file.

    Raises:
        ConfigError: if the file cannot be read or does not describe a scenario.
    """

    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        _config_error(f"Could not read config file '{path}': {err.strerror}.")
    return parse_config_text(text, source=path, overrides=overrides, name=path)


def preset_names() -> List[str]:
    return list(PRESETS)


def get_preset(name: str) -> Preset:
    if name not in PRESETS:
        _config_error(f"Unknown preset '{name}'. Available: {', '.join(PRESETS)}.")
    return PRESETS[name]


def parse_preset(name: str, overrides: Sequence[str] = ()) -> Scenario:
    return parse_config_text(
        get_preset(name).text, source=f"preset {name}", overrides=overrides, name=name
    )


def load(args: argparse.Namespace) -> Scenario:
    """Scenario named by `--config` or `--preset`, with `--set` overrides applied."""

    overrides = getattr(args, "overrides", None) or []
    if getattr(args, "config", None):
        return parse_config(args.config, overrides)
    return parse_preset(args.preset, overrides)
