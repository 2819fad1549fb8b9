"""Strict JSON configuration ingestion.

The file carries the physical setup (geometry, cavity, pose, trap
frequencies), optionally two drive tones and optionally a sweep block.
All frequencies in the file are cyclic (Hz) and angles are degrees; the
loader converts to internal angular units exactly once.  Unknown keys are
errors, so typos never silently fall back to defaults.  The only default
is the sweep axis resolution (64 points).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from scipy.constants import c as _C_LIGHT

import math

from .errors import ParseError
from .model import (
    CavitySpec,
    DriveTone,
    ModeFrequencies,
    ParticlePose,
    ParticleSpec,
    PhysicalSetup,
    to_angular,
    validate_setup,
)
from .sweep import AxisSpec, SweepSpec

_TOP_KEYS = {
    "density",
    "semi_axis_long",
    "semi_axis_short",
    "rel_permittivity",
    "cavity_length",
    "wavelength",
    "finesse",
    "pose",
    "freqs_hz",
    "axes_convention",
    "drives",
    "sweep",
}
_POSE_KEYS = {"x", "y", "z", "phi_deg"}
_FREQ_KEYS = {"omega_m", "omega_phi"}
_DRIVE_KEYS = {"rabi_hz", "detuning_hz"}
_SWEEP_KEYS = {"scheme", "axis1", "axis2", "fixed", "evaluate_at"}
_AXIS_KEYS = {"name", "min_hz", "max_hz", "count"}
_FIXED_KEYS = {"G_hz", "delta_hz", "kappa_hz"}

DEFAULT_AXIS_COUNT = 64


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run needs: the validated setup, the optional drive
    pair and the optional sweep specification."""

    setup: PhysicalSetup
    drives: tuple | None
    sweep: SweepSpec | None


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ParseError(f"unknown key {sorted(unknown)[0]!r} in {where}")


def _number(mapping: dict, key: str, where: str) -> float:
    if key not in mapping:
        raise ParseError(f"missing key {key!r} in {where}")
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"key {key!r} in {where} must be a number")
    return float(value)


def _mapping(parent: dict, key: str, where: str) -> dict:
    if key not in parent:
        raise ParseError(f"missing key {key!r} in {where}")
    value = parent[key]
    if not isinstance(value, dict):
        raise ParseError(f"key {key!r} in {where} must be an object")
    return value


def _parse_axis(raw: dict, where: str) -> AxisSpec:
    _reject_unknown(raw, _AXIS_KEYS, where)
    name = raw.get("name")
    if name not in ("G", "delta", "kappa"):
        raise ParseError(f"axis name in {where} must be one of G, delta, kappa")
    count = raw.get("count", DEFAULT_AXIS_COUNT)
    if isinstance(count, bool) or not isinstance(count, int):
        raise ParseError(f"key 'count' in {where} must be an integer")
    return AxisSpec(
        name=name,
        start=to_angular(_number(raw, "min_hz", where)),
        stop=to_angular(_number(raw, "max_hz", where)),
        count=count,
    )


def _parse_sweep(raw: dict) -> SweepSpec:
    _reject_unknown(raw, _SWEEP_KEYS, "sweep")
    scheme = raw.get("scheme")
    if scheme not in ("detuned", "resonant"):
        raise ParseError("sweep scheme must be 'detuned' or 'resonant'")
    fixed_raw = _mapping(raw, "fixed", "sweep")
    _reject_unknown(fixed_raw, _FIXED_KEYS, "sweep.fixed")
    fixed = {
        key.removesuffix("_hz"): to_angular(_number(fixed_raw, key, "sweep.fixed"))
        for key in fixed_raw
    }
    evaluate_at = raw.get("evaluate_at", "formula")
    if evaluate_at not in ("formula", "numeric-max"):
        raise ParseError("sweep evaluate_at must be 'formula' or 'numeric-max'")
    return SweepSpec(
        scheme=scheme,
        axis1=_parse_axis(_mapping(raw, "axis1", "sweep"), "sweep.axis1"),
        axis2=_parse_axis(_mapping(raw, "axis2", "sweep"), "sweep.axis2"),
        fixed=fixed,
        evaluate_at=evaluate_at,
    )


def load_config(path) -> RunConfig:
    """Parse and validate a configuration file.

    Raises ParseError for structural problems (with the offending key
    named) and ValidationError with the complete violation list when the
    physical setup breaks an invariant.
    """
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError("top level must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "top level")

    convention = raw.get("axes_convention", "semi")
    if convention not in ("semi", "full"):
        raise ParseError("axes_convention must be 'semi' or 'full'")
    axis_scale = 0.5 if convention == "full" else 1.0

    particle = ParticleSpec(
        density=_number(raw, "density", "top level"),
        semi_axis_long=axis_scale * _number(raw, "semi_axis_long", "top level"),
        semi_axis_short=axis_scale * _number(raw, "semi_axis_short", "top level"),
        rel_permittivity=_number(raw, "rel_permittivity", "top level"),
    )
    cavity = CavitySpec(
        length=_number(raw, "cavity_length", "top level"),
        wavelength=_number(raw, "wavelength", "top level"),
        finesse=_number(raw, "finesse", "top level"),
    )
    pose_raw = _mapping(raw, "pose", "top level")
    _reject_unknown(pose_raw, _POSE_KEYS, "pose")
    pose = ParticlePose(
        x=_number(pose_raw, "x", "pose"),
        y=_number(pose_raw, "y", "pose"),
        z=_number(pose_raw, "z", "pose"),
        phi=math.radians(_number(pose_raw, "phi_deg", "pose")),
    )
    freqs_raw = _mapping(raw, "freqs_hz", "top level")
    _reject_unknown(freqs_raw, _FREQ_KEYS, "freqs_hz")
    freqs = ModeFrequencies(
        omega_cav=to_angular(_C_LIGHT / cavity.wavelength),
        omega_m=to_angular(_number(freqs_raw, "omega_m", "freqs_hz")),
        omega_phi=to_angular(_number(freqs_raw, "omega_phi", "freqs_hz")),
    )
    setup = validate_setup(particle, cavity, pose, freqs)

    drives = None
    if "drives" in raw:
        drives_raw = raw["drives"]
        if not isinstance(drives_raw, list) or len(drives_raw) != 2:
            raise ParseError("drives must be a list of exactly two tones")
        tones = []
        for i, tone_raw in enumerate(drives_raw):
            where = f"drives[{i}]"
            if not isinstance(tone_raw, dict):
                raise ParseError(f"{where} must be an object")
            _reject_unknown(tone_raw, _DRIVE_KEYS, where)
            rabi = to_angular(_number(tone_raw, "rabi_hz", where))
            if rabi < 0:
                raise ParseError(f"{where}.rabi_hz must be nonnegative")
            tones.append(
                DriveTone(rabi=rabi, detuning=to_angular(_number(tone_raw, "detuning_hz", where)))
            )
        drives = tuple(tones)

    sweep = _parse_sweep(_mapping(raw, "sweep", "top level")) if "sweep" in raw else None
    return RunConfig(setup=setup, drives=drives, sweep=sweep)
