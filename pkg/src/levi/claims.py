"""Benchmark report: derived quantities against the reference design
targets of the standard operating configuration.

Each row pairs a reference value with the value this library derives from
the given configuration and flags it match, mismatch, or not-assertable.
Not-assertable rows are printed with both numbers: those targets either
follow from expressions that are inconsistent as quoted (the exchange
coupling target and the transfer time derived from it) or have no
independent reference at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import physics
from .dynamics import (
    fidelity_and_probability,
    numeric_fidelity_maximum,
    scheme_amplitudes,
    transfer_time,
)
from .errors import LeviError
from .model import TWO_PI, PhysicalSetup, from_angular

FLAG_MATCH = "match"
FLAG_MISMATCH = "mismatch"
FLAG_NOT_ASSERTABLE = "not-assertable"

# Reference targets for the standard configuration.
REF_KAPPA_HZ = 75.2e3
REF_G_AB_HZ = 0.3056
REF_G_AC_HZ = 0.2189
REF_G3_HZ = 25e3
REF_T_BEAMSPLITTER_S = 1e-5
REF_ALPHA_RANGE = (1e4, 1e5)
REF_FLUCTUATION_RANGE = (10.0**1.5, 10.0**2.5)

# Conditional-scheme operating point (angular rad/s): these coordinate
# values are cyclic kHz figures times 2*pi, fixed independently of the
# configured cavity so the conditional rows always refer to the same
# operating point.
OP_G = TWO_PI * 50e3
OP_DELTA = TWO_PI * 200e3
OP_KAPPA = TWO_PI * 75.2e3
REF_DETUNED_F = (0.95, 0.01)
REF_DETUNED_P = (0.68, 0.02)
REF_RESONANT_F = (0.926, 0.003)
REF_RESONANT_P = (0.59, 0.01)

#: The closed-form transfer times must deliver a fidelity within this
#: relative distance of the numerically located maximum.
TIME_AUDIT_RTOL = 0.02


@dataclass(frozen=True)
class ClaimRow:
    key: str
    description: str
    reference: object
    computed: object
    unit: str
    flag: str
    detail: str = ""


@dataclass(frozen=True)
class ClaimsReport:
    rows: tuple

    def mismatches(self) -> list:
        return [r for r in self.rows if r.flag == FLAG_MISMATCH]

    def to_json_dict(self) -> dict:
        return {
            "rows": [
                {
                    "key": r.key,
                    "description": r.description,
                    "reference": r.reference,
                    "computed": r.computed,
                    "unit": r.unit,
                    "flag": r.flag,
                    "detail": r.detail,
                }
                for r in self.rows
            ]
        }

    def render_text(self) -> str:
        head = ("key", "reference", "computed", "unit", "flag", "detail")
        table = [head]
        for r in self.rows:
            table.append(
                (
                    r.key,
                    _fmt_cell(r.reference),
                    _fmt_cell(r.computed),
                    r.unit,
                    r.flag,
                    r.detail,
                )
            )
        widths = [max(len(row[i]) for row in table) for i in range(len(head))]
        lines = []
        for n, row in enumerate(table):
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
            if n == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def _fmt_cell(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, str):
        return value
    return format(value, ".6g")


def _rel_row(key, description, reference, computed, unit, rtol, detail="") -> ClaimRow:
    rel = abs(computed - reference) / abs(reference)
    flag = FLAG_MATCH if rel <= rtol else FLAG_MISMATCH
    note = f"rel dev {rel:.2%} (tol {rtol:.0%})"
    return ClaimRow(
        key=key,
        description=description,
        reference=reference,
        computed=computed,
        unit=unit,
        flag=flag,
        detail=f"{note}; {detail}" if detail else note,
    )


def _range_row(key, description, bounds, computed, unit, detail="") -> ClaimRow:
    lo, hi = bounds
    flag = FLAG_MATCH if lo <= computed <= hi else FLAG_MISMATCH
    return ClaimRow(
        key=key,
        description=description,
        reference=f"{lo:.3g}..{hi:.3g}",
        computed=computed,
        unit=unit,
        flag=flag,
        detail=detail,
    )


def _conditional_rows() -> list:
    rows = []
    for scheme, (f_ref, f_tol), (p_ref, p_tol) in (
        ("detuned", REF_DETUNED_F, REF_DETUNED_P),
        ("resonant", REF_RESONANT_F, REF_RESONANT_P),
    ):
        delta = OP_DELTA if scheme == "detuned" else None
        t = transfer_time(scheme, OP_G, delta=delta, kappa=OP_KAPPA)
        state = scheme_amplitudes(scheme, t, OP_G, delta=delta, kappa=OP_KAPPA)
        f, p = fidelity_and_probability(state)
        rows.append(
            ClaimRow(
                key=f"{scheme}_fidelity",
                description=f"{scheme}-scheme fidelity at the operating point",
                reference=f_ref,
                computed=float(f),
                unit="",
                flag=FLAG_MATCH if abs(f - f_ref) <= f_tol else FLAG_MISMATCH,
                detail=f"abs tol {f_tol}",
            )
        )
        rows.append(
            ClaimRow(
                key=f"{scheme}_probability",
                description=f"{scheme}-scheme success probability",
                reference=p_ref,
                computed=float(p),
                unit="",
                flag=FLAG_MATCH if abs(p - p_ref) <= p_tol else FLAG_MISMATCH,
                detail=f"abs tol {p_tol}",
            )
        )
        rows.append(
            ClaimRow(
                key=f"{scheme}_transfer_time",
                description=f"{scheme}-scheme closed-form transfer time",
                reference=None,
                computed=t,
                unit="s",
                flag=FLAG_NOT_ASSERTABLE,
                detail="informational; no independent reference value",
            )
        )
        t_num, f_num = numeric_fidelity_maximum(scheme, OP_G, delta=delta, kappa=OP_KAPPA)
        rel_f = abs(f_num - f) / f_num
        rows.append(
            ClaimRow(
                key=f"{scheme}_time_audit",
                description="fidelity delivered by the closed-form time vs the located maximum",
                reference=float(f_num),
                computed=float(f),
                unit="",
                flag=FLAG_MATCH if rel_f <= TIME_AUDIT_RTOL else FLAG_MISMATCH,
                detail=(
                    f"fidelity gap {rel_f:.3%} (tol {TIME_AUDIT_RTOL:.0%}); "
                    f"maximum located at t = {t_num:.6g} s vs formula {t:.6g} s"
                ),
            )
        )
    return rows


def claims_report(setup: PhysicalSetup, drives: tuple) -> ClaimsReport:
    """Tabulate every reference target against the derived value."""
    tone1, tone2 = drives
    inertia = physics.mass_and_inertia(setup.particle)
    suscept = physics.susceptibility(setup.particle)
    kappa = physics.cavity_linewidth(setup.cavity)
    g_ab = physics.coupling_g_ab(setup, inertia, suscept)
    g_ac = physics.coupling_g_ac(setup, inertia, suscept)
    alpha1 = physics.steady_amplitude(tone1, kappa)
    alpha2 = physics.steady_amplitude(tone2, kappa)
    _, _, g3 = physics.effective_couplings(
        g_ab, g_ac, alpha1, alpha2, (tone1.detuning, tone2.detuning), setup.freqs
    )
    fluct = physics.photon_fluctuation_report(alpha1, alpha2)

    rows = [
        _rel_row(
            "kappa_cyclic",
            "cavity linewidth kappa / 2 pi",
            REF_KAPPA_HZ,
            from_angular(kappa),
            "Hz",
            0.01,
        ),
        _rel_row(
            "g_ab_cyclic",
            "translational single-photon coupling / 2 pi",
            REF_G_AB_HZ,
            from_angular(g_ab),
            "Hz",
            0.10,
            "depends on the documented susceptibility and unit convention",
        ),
        _rel_row(
            "g_ac_cyclic",
            "librational single-photon coupling / 2 pi",
            REF_G_AC_HZ,
            from_angular(g_ac),
            "Hz",
            0.10,
            "depends on the documented susceptibility and unit convention",
        ),
        _range_row(
            "alpha1_magnitude",
            "steady amplitude of tone 1",
            REF_ALPHA_RANGE,
            abs(alpha1),
            "",
            "order-of-magnitude target",
        ),
        _range_row(
            "alpha2_magnitude",
            "steady amplitude of tone 2",
            REF_ALPHA_RANGE,
            abs(alpha2),
            "",
            "order-of-magnitude target",
        ),
        _range_row(
            "fluctuation_tone1",
            "photon number fluctuation scale sqrt(|alpha1|)",
            REF_FLUCTUATION_RANGE,
            fluct[0].fluctuation,
            "",
            "order-of-magnitude target",
        ),
        _range_row(
            "fluctuation_tone2",
            "photon number fluctuation scale sqrt(|alpha2|)",
            REF_FLUCTUATION_RANGE,
            fluct[1].fluctuation,
            "",
            "order-of-magnitude target",
        ),
        ClaimRow(
            key="g3_cyclic",
            description="drive-enhanced exchange coupling / 2 pi",
            reference=REF_G3_HZ,
            computed=from_angular(g3),
            unit="Hz",
            flag=FLAG_NOT_ASSERTABLE,
            detail=(
                "the second-order expression evaluated with these couplings and "
                "drives gives a value orders of magnitude below the target; "
                "both numbers shown, neither asserted"
            ),
        ),
    ]
    try:
        t_bs = transfer_time("beamsplitter", g3)
    except LeviError:
        t_bs = None
    rows.append(
        ClaimRow(
            key="beamsplitter_transfer_time",
            description="full-exchange time pi / (2 |g3|)",
            reference=REF_T_BEAMSPLITTER_S,
            computed=t_bs,
            unit="s",
            flag=FLAG_NOT_ASSERTABLE,
            detail=(
                "reference time follows from a dimensionally inconsistent "
                "expression; computed value uses pi / (2 |g3|)"
            ),
        )
    )
    rows.extend(_conditional_rows())
    return ClaimsReport(rows=tuple(rows))
