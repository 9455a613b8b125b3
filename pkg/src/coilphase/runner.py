"""Config parsing, experiment orchestration and deterministic row output."""
from __future__ import annotations

import copy
import csv
import hashlib
import io
import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from scipy.constants import c as SPEED_OF_LIGHT

from . import __version__
from .chiral_medium import ChiralMedium, dispersion, precession_split, small_zeta_threshold
from .evolution import (HelicalPath, StepSizeError, berry_phase_closed_form, extract_phases,
                        geometric_phase)
from .fiber_geometry import HelixSpec, helix_polar_angle, solid_angle
from .fock_modes import (hannay_relation_check, occupation_phase_table, second_quantized_berry_phase,
                         vacuum_phase_magnitude)
from .spin_algebra import make_spin_operators

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid run configuration; the message starts with the offending field path."""


SCHEMA = {
    "medium": {"epsilon": float, "zeta": float, "zeta_sweep": list},
    "helix": {"radius_m": float, "pitch_m": float},
    "light": {"vacuum_wavelength_nm": float, "omega_rad_s": float},
    "simulation": {"spin_j": object, "n_max": int, "steps_per_cycle": int, "cycles": int,
                   "adiabatic_ratio": float, "n_show": int, "method": str},
    "output": {"format": str, "path": str},
}
REQUIRED_SECTIONS = ("helix", "light")
DEFAULTS = {
    "medium": {"epsilon": 2.25, "zeta": 0.0},
    "simulation": {"spin_j": 1.0, "n_max": 30, "steps_per_cycle": 10_000, "cycles": 1,
                   "adiabatic_ratio": 1000.0, "n_show": 5, "method": "magnus4"},
    "output": {"format": "csv", "path": None},
}


@dataclass
class RunConfig:
    epsilon: float
    zeta: float
    radius_m: float
    pitch_m: float
    omega: float
    spin_j: float
    n_max: int
    steps_per_cycle: int
    cycles: int
    adiabatic_ratio: float
    n_show: int = 5
    method: str = "magnus4"
    zeta_sweep: list[float] | None = None
    output_format: str = "csv"
    output_path: str | None = None
    warnings: list[str] = field(default_factory=list)
    normalized: dict = field(default_factory=dict, repr=False)

    @property
    def medium(self) -> ChiralMedium:
        return ChiralMedium(self.epsilon, self.zeta)

    @property
    def helix(self) -> HelixSpec:
        return HelixSpec(self.radius_m, self.pitch_m, refractive_index=math.sqrt(self.epsilon))

    @property
    def theta(self) -> float:
        return helix_polar_angle(self.helix)

    def digest(self) -> str:
        text = json.dumps(self.normalized, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _number(value, path: str, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}: must be finite")
    return value


def _spin(value, path: str) -> float:
    try:
        j = Fraction(value) if isinstance(value, str) else Fraction(value).limit_denominator(8)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ConfigError(f"{path}: expected 1/2 or 1, got {value!r}") from None
    if j not in (Fraction(1, 2), Fraction(1)):
        raise ConfigError(f"{path}: spin_j must be 1/2 or 1, got {value!r}")
    return float(j)


def parse_config(text) -> RunConfig:
    """Validate a JSON document (string or already-decoded dict) into a RunConfig."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"<root>: not valid JSON ({exc})") from None
    else:
        doc = copy.deepcopy(text)
    if not isinstance(doc, dict):
        raise ConfigError("<root>: expected an object")
    for key in doc:
        if key not in SCHEMA:
            raise ConfigError(f"{key}: unknown section")
    for section in REQUIRED_SECTIONS:
        if section not in doc:
            raise ConfigError(f"{section}: missing required section")
    merged = {}
    for section, keys in SCHEMA.items():
        body = doc.get(section, {})
        if not isinstance(body, dict):
            raise ConfigError(f"{section}: expected an object")
        for key in body:
            if key not in keys:
                raise ConfigError(f"{section}.{key}: unknown key")
        merged[section] = {**DEFAULTS.get(section, {}), **body}

    med, hel, light, sim, out = (merged[s] for s in ("medium", "helix", "light", "simulation", "output"))
    notes = []

    epsilon = _number(med["epsilon"], "medium.epsilon")
    if epsilon < 1.0:
        raise ConfigError(f"medium.epsilon: must be >= 1 (refractive index sqrt(eps) >= 1), got {epsilon}")
    zeta = _number(med["zeta"], "medium.zeta")
    thresh = small_zeta_threshold(epsilon)
    sweep = None
    if "zeta_sweep" in med:
        if not isinstance(med["zeta_sweep"], list) or not med["zeta_sweep"]:
            raise ConfigError("medium.zeta_sweep: expected a non-empty list of numbers")
        sweep = [_number(z, f"medium.zeta_sweep[{i}]") for i, z in enumerate(med["zeta_sweep"])]
    for path, z in [("medium.zeta", zeta)] + [(f"medium.zeta_sweep[{i}]", z) for i, z in enumerate(sweep or [])]:
        if abs(z) >= thresh:
            notes.append(f"{path}: |zeta| = {abs(z):.6g} S is not below the small-zeta threshold {thresh:.6g} S")

    for key in ("radius_m", "pitch_m"):
        if key not in hel:
            raise ConfigError(f"helix.{key}: missing required field")
    radius = _number(hel["radius_m"], "helix.radius_m")
    pitch = _number(hel["pitch_m"], "helix.pitch_m")
    if radius < 0:
        raise ConfigError(f"helix.radius_m: must be >= 0, got {radius}")
    if pitch < 0:
        raise ConfigError(f"helix.pitch_m: must be >= 0, got {pitch}")
    if radius == 0 and pitch == 0:
        raise ConfigError("helix: radius_m and pitch_m cannot both be zero")

    has_wl, has_w = "vacuum_wavelength_nm" in light, "omega_rad_s" in light
    if has_wl and has_w:
        raise ConfigError("light: give only one of light.vacuum_wavelength_nm and light.omega_rad_s")
    if not (has_wl or has_w):
        raise ConfigError("light: missing light.vacuum_wavelength_nm or light.omega_rad_s")
    if has_wl:
        wl = _number(light["vacuum_wavelength_nm"], "light.vacuum_wavelength_nm")
        if wl <= 0:
            raise ConfigError(f"light.vacuum_wavelength_nm: must be > 0, got {wl}")
        omega = 2.0 * math.pi * SPEED_OF_LIGHT / (wl * 1e-9)
    else:
        omega = _number(light["omega_rad_s"], "light.omega_rad_s")
        if omega <= 0:
            raise ConfigError(f"light.omega_rad_s: must be > 0, got {omega}")

    spin_j = _spin(sim["spin_j"], "simulation.spin_j")
    ints = {}
    for key, lo in (("n_max", 1), ("steps_per_cycle", 1), ("cycles", 1), ("n_show", 0)):
        ints[key] = _number(sim[key], f"simulation.{key}", int)
        if ints[key] < lo:
            raise ConfigError(f"simulation.{key}: must be >= {lo}, got {ints[key]}")
    if ints["n_show"] >= ints["n_max"]:
        raise ConfigError(f"simulation.n_show: must be below simulation.n_max={ints['n_max']}")
    ratio = _number(sim["adiabatic_ratio"], "simulation.adiabatic_ratio")
    if ratio <= 0:
        raise ConfigError(f"simulation.adiabatic_ratio: must be > 0, got {ratio}")
    if sim["method"] not in ("magnus4", "rk4"):
        raise ConfigError(f"simulation.method: expected 'magnus4' or 'rk4', got {sim['method']!r}")

    fmt = out["format"]
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: expected 'csv' or 'json', got {fmt!r}")
    path = out["path"]
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path: expected a string")

    for note in notes:
        log.warning(note)
    return RunConfig(
        epsilon=epsilon, zeta=zeta, radius_m=radius, pitch_m=pitch, omega=omega, spin_j=spin_j,
        n_max=ints["n_max"], steps_per_cycle=ints["steps_per_cycle"], cycles=ints["cycles"],
        adiabatic_ratio=ratio, n_show=ints["n_show"], method=sim["method"], zeta_sweep=sweep,
        output_format=fmt, output_path=path, warnings=notes, normalized=merged,
    )


# Column orders are part of the output contract.
PHASES_COLUMNS = ("handedness", "n", "theta", "solid_angle", "first_quantized", "second_quantized",
                  "vacuum", "hannay_delta_theta", "gamma0")
EVOLVE_COLUMNS = ("m", "physical", "closed_form", "extracted", "dynamical", "abs_error", "steps", "adiabatic_ratio")
CHIRAL_COLUMNS = ("zeta", "small_zeta", "k_R", "k_L", "delta_k", "Omega_R", "Omega_L", "delta_Omega_closed",
                  "delta_Omega_exact", "delta_T_closed", "delta_T_exact")
FOCK_COLUMNS = ("handedness", "n", "theta", "gamma_g")

# helicity carried by each circular mode
HELICITY = {"R": +1, "L": -1}


def run_phases(cfg: RunConfig) -> list[dict]:
    """First- and second-quantized cyclic phases per handedness and occupation."""
    theta = cfg.theta
    ops = make_spin_operators(1)
    path = HelicalPath.from_helix(cfg.helix, cfg.omega, cycles=1)
    rows = []
    for hand in ("L", "R"):
        per_photon = geometric_phase(path, HELICITY[hand], ops)
        vac = math.copysign(vacuum_phase_magnitude(theta), -HELICITY[hand])
        for n in range(cfg.n_show + 1):
            dtheta, g0 = hannay_relation_check(hand, n, theta)
            rows.append({
                "handedness": hand, "n": n, "theta": theta, "solid_angle": solid_angle(theta),
                "first_quantized": per_photon, "second_quantized": second_quantized_berry_phase(hand, n, theta),
                "vacuum": vac, "hannay_delta_theta": dtheta, "gamma0": g0,
            })
    return rows


def run_evolve(cfg: RunConfig) -> list[dict]:
    """Extracted vs closed-form geometric phase for each helicity of spin j.

    The simulation runs in scaled units with Omega = 1 and omega equal to the
    configured adiabatic ratio; only the ratio matters for the phases.
    """
    ops = make_spin_operators(cfg.spin_j)
    path = HelicalPath.one_cycle(cfg.theta, 1.0, cfg.adiabatic_ratio, cycles=cfg.cycles)
    rows = []
    for m in ops.m_values:
        try:
            dec = extract_phases(path, ops.basis_state(m), ops, steps=cfg.steps_per_cycle * cfg.cycles, method=cfg.method)
        except StepSizeError as exc:
            raise StepSizeError(f"{exc} (raise simulation.steps_per_cycle)") from None
        closed = cfg.cycles * berry_phase_closed_form(cfg.theta, m)
        rows.append({
            "m": float(m), "physical": dec.physical, "closed_form": closed, "extracted": dec.geometric,
            "dynamical": dec.dynamical, "abs_error": abs(dec.geometric - closed), "steps": dec.steps,
            "adiabatic_ratio": cfg.adiabatic_ratio,
        })
    return rows


def run_chiral(cfg: RunConfig, zeta_sweep=None) -> list[dict]:
    """Dispersion and precession split for each chirality in the sweep."""
    zetas = zeta_sweep if zeta_sweep is not None else (cfg.zeta_sweep or [cfg.zeta])
    helix = cfg.helix
    rows = []
    for z in zetas:
        medium = ChiralMedium(cfg.epsilon, float(z))
        d = dispersion(cfg.omega, medium)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sp = precession_split(medium, helix, cfg.omega)
        rows.append({
            "zeta": float(z), "small_zeta": medium.small_zeta, "k_R": d.k_R, "k_L": d.k_L, "delta_k": d.delta_k,
            "Omega_R": sp.Omega_R, "Omega_L": sp.Omega_L, "delta_Omega_closed": sp.delta_Omega_closed,
            "delta_Omega_exact": sp.delta_Omega_exact, "delta_T_closed": sp.delta_T_closed,
            "delta_T_exact": sp.delta_T_exact,
        })
    return rows


def run_fock(cfg: RunConfig) -> list[dict]:
    """Occupation phase table for n = 0..n_show."""
    table = occupation_phase_table(cfg.theta, range(cfg.n_show + 1))
    return [{"handedness": r.handedness, "n": r.n, "theta": r.theta, "gamma_g": r.gamma_g} for r in table]


def run_validate(cfg: RunConfig) -> tuple[int, list[dict]]:
    from .validation import run_all
    report = run_all(n_max=min(cfg.n_max, 12))
    return (0 if all(r["passed"] for r in report) else 1), report


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.15g" % (value + 0.0)  # no "-0"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        if not math.isfinite(value):
            return format_value(value)
        return float("%.15g" % (value + 0.0))
    return value


def metadata(cfg: RunConfig, subcommand: str, seed: int | None = None) -> dict:
    return {"tool": "coilphase", "version": __version__, "subcommand": subcommand,
            "config_sha256": cfg.digest(), "seed": seed}


def render(rows: list[dict], columns, fmt: str, meta: dict) -> str:
    """Serialize rows as CSV (LF, comment metadata line) or JSON."""
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("# " + " ".join(f"{k}={'' if v is None else v}" for k, v in meta.items()) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        body = {"metadata": meta, "columns": list(columns),
                "rows": [{c: _json_value(row[c]) for c in columns} for row in rows]}
        return json.dumps(body, indent=2) + "\n"
    raise ValueError(f"unknown output format {fmt!r}")
