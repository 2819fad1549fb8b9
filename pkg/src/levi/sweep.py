"""Deterministic two-axis parameter sweeps of the transfer schemes.

A sweep evaluates the closed forms on a rectangular grid, cell by cell:
transfer time first (either the closed-form expression or the numerically
located fidelity maximum), then fidelity and success probability at that
time.  Cells whose parameters admit no transfer carry NaN values and a
status string explaining why; every non-ok status accompanies the NaN.

Cells are evaluated concurrently into preallocated per-cell slots and
serialized sequentially, so the CSV output is byte-identical for any
thread count and across repeated runs.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    fidelity_and_probability,
    numeric_fidelity_maximum,
    scheme_amplitudes,
    transfer_time,
)
from .errors import DegenerateSpectrum, NoTransfer, SpecError, VanishedBranch
from .model import from_angular

AXIS_PARAMETERS = ("G", "delta", "kappa")
_SCHEME_PARAMS = {"detuned": ("G", "delta", "kappa"), "resonant": ("G", "kappa")}
EVALUATE_MODES = ("formula", "numeric-max")

#: Serialized numbers carry this many significant digits.
CSV_DIGITS = 12


@dataclass(frozen=True)
class AxisSpec:
    """One linearly spaced sweep axis over a named parameter (rad/s)."""

    name: str
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """Scheme, two axes, the remaining fixed parameters (rad/s) and the
    transfer-time rule ('formula' or 'numeric-max')."""

    scheme: str
    axis1: AxisSpec
    axis2: AxisSpec
    fixed: dict
    evaluate_at: str = "formula"

    def __post_init__(self):
        needed = _SCHEME_PARAMS.get(self.scheme)
        if needed is None:
            raise SpecError(f"unknown sweep scheme {self.scheme!r}")
        if self.evaluate_at not in EVALUATE_MODES:
            raise SpecError(f"unknown evaluate_at {self.evaluate_at!r}")
        for axis in (self.axis1, self.axis2):
            if axis.name not in AXIS_PARAMETERS:
                raise SpecError(f"axis parameter {axis.name!r} not in {AXIS_PARAMETERS}")
            if axis.name not in needed:
                raise SpecError(
                    f"axis parameter {axis.name!r} is not used by the "
                    f"{self.scheme} scheme"
                )
            if axis.count < 2:
                raise SpecError(f"axis {axis.name!r} needs count >= 2")
        if self.axis1.name == self.axis2.name:
            raise SpecError("the two axes must name distinct parameters")
        wanted = set(needed) - {self.axis1.name, self.axis2.name}
        given = set(self.fixed)
        if given != wanted:
            raise SpecError(
                f"fixed parameters must be exactly {sorted(wanted)}, got {sorted(given)}"
            )


@dataclass(frozen=True)
class SweepResult:
    """Grid outputs: transfer times (s), fidelity, probability and status
    per cell, indexed [axis1, axis2]."""

    spec: SweepSpec
    axis1_values: np.ndarray = field(repr=False)
    axis2_values: np.ndarray = field(repr=False)
    times: np.ndarray = field(repr=False)
    fidelities: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)
    statuses: list = field(repr=False)


def _evaluate_cell(scheme: str, params: dict, evaluate_at: str) -> tuple:
    g = params["G"]
    delta = params.get("delta")
    kappa = params["kappa"]
    try:
        if evaluate_at == "formula":
            t = transfer_time(scheme, g, delta=delta, kappa=kappa)
        else:
            t, _ = numeric_fidelity_maximum(scheme, g, delta=delta, kappa=kappa)
        state = scheme_amplitudes(scheme, t, g, delta=delta, kappa=kappa)
        f, p = fidelity_and_probability(state)
        return float(t), float(f), float(p), "ok"
    except NoTransfer:
        return math.nan, math.nan, math.nan, "no-transfer"
    except DegenerateSpectrum:
        return math.nan, math.nan, math.nan, "degenerate-spectrum"
    except VanishedBranch:
        return math.nan, math.nan, math.nan, "vanished-branch"


def _default_threads() -> int:
    env = os.environ.get("LEVI_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise SpecError(f"LEVI_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise SpecError("LEVI_THREADS must be at least 1")
        return n
    return min(8, os.cpu_count() or 1)


def run_sweep(spec: SweepSpec, threads: int | None = None) -> SweepResult:
    """Evaluate the sweep grid; results are independent of thread count."""
    v1 = spec.axis1.values()
    v2 = spec.axis2.values()
    n1, n2 = v1.size, v2.size
    times = np.empty((n1, n2))
    fids = np.empty((n1, n2))
    probs = np.empty((n1, n2))
    statuses = [[""] * n2 for _ in range(n1)]

    def fill_row(i: int) -> None:
        for j in range(n2):
            params = dict(spec.fixed)
            params[spec.axis1.name] = float(v1[i])
            params[spec.axis2.name] = float(v2[j])
            t, f, p, status = _evaluate_cell(spec.scheme, params, spec.evaluate_at)
            times[i, j] = t
            fids[i, j] = f
            probs[i, j] = p
            statuses[i][j] = status

    workers = threads if threads is not None else _default_threads()
    if workers <= 1:
        for i in range(n1):
            fill_row(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill_row, range(n1)))
    return SweepResult(
        spec=spec,
        axis1_values=v1,
        axis2_values=v2,
        times=times,
        fidelities=fids,
        probabilities=probs,
        statuses=statuses,
    )


def _fmt(x: float) -> str:
    return format(x, f".{CSV_DIGITS}g")


def sweep_to_csv(result: SweepResult) -> str:
    """Serialize a sweep row-major as CSV with columns
    param1, param2, t, F, P, status.

    Axis parameters are written as cyclic frequencies (Hz), times in
    seconds, with 12 significant digits and plain newline endings so that
    repeated runs are byte-identical.
    """
    lines = ["param1,param2,t,F,P,status"]
    for i, p1 in enumerate(result.axis1_values):
        for j, p2 in enumerate(result.axis2_values):
            lines.append(
                ",".join(
                    (
                        _fmt(from_angular(p1)),
                        _fmt(from_angular(p2)),
                        _fmt(result.times[i, j]),
                        _fmt(result.fidelities[i, j]),
                        _fmt(result.probabilities[i, j]),
                        result.statuses[i][j],
                    )
                )
            )
    return "\n".join(lines) + "\n"
