"""Command line interface.

Subcommands
-----------
derive  <config> [--json] [--balance]   rate report from a configuration
evolve  --scheme ... --g-khz ...        closed-form amplitudes as CSV
sweep   <config> --out grid.csv         two-axis fidelity sweep as CSV
oracle  [--random N] [--seed S]         closed-form vs propagator check
claims  <config> [--json]               benchmark report

Exit codes: 0 success, 1 configuration or validation error, 2 numerical
failure.  Frequencies on the command line are cyclic kHz; the library
works in rad/s internally.  LEVI_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .claims import claims_report
from .config import load_config
from .dynamics import (
    beamsplitter_amplitudes,
    fidelity_and_probability,
    scheme_amplitudes,
    transfer_time,
)
from .errors import LeviError, ParseError, SpecError, ValidationError
from .integrator import run_oracle
from .model import from_angular, to_angular
from .physics import (
    balance_second_drive,
    beamsplitter_balance_residual,
    derive_rates,
)
from .sweep import run_sweep, sweep_to_csv

_CSV_FMT = ".12g"

_SCHEME_FLAG = {
    "ideal": "ideal-resonant",
    "detuned": "detuned",
    "resonant": "resonant",
    "beamsplitter": "beamsplitter",
}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ParseError (exit code 1)."""

    def error(self, message):
        raise ParseError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_derive = sub.add_parser("derive", help="derive all system rates from a config")
    p_derive.add_argument("config")
    p_derive.add_argument("--json", action="store_true", dest="as_json")
    p_derive.add_argument(
        "--balance",
        action="store_true",
        help="bisect the second drive strength until the mode shifts balance",
    )

    p_evolve = sub.add_parser("evolve", help="closed-form evolution as CSV")
    p_evolve.add_argument(
        "--scheme", required=True, choices=sorted(_SCHEME_FLAG)
    )
    p_evolve.add_argument("--g-khz", required=True, type=float)
    p_evolve.add_argument("--delta-khz", type=float, default=None)
    p_evolve.add_argument("--kappa-khz", type=float, default=0.0)
    p_evolve.add_argument(
        "--g1-khz", type=float, default=0.0, help="mode shift of the beamsplitter scheme"
    )
    p_evolve.add_argument("--t-end", type=float, default=None, help="end time (s)")
    p_evolve.add_argument("--steps", type=int, default=200)
    p_evolve.add_argument("--out", default=None, help="CSV path (default stdout)")

    p_sweep = sub.add_parser("sweep", help="run the configured parameter sweep")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--out", required=True)

    p_oracle = sub.add_parser(
        "oracle", help="compare closed forms against the numerical propagator"
    )
    p_oracle.add_argument("--random", type=int, default=100)
    p_oracle.add_argument("--seed", type=int, default=None)

    p_claims = sub.add_parser("claims", help="benchmark report for a config")
    p_claims.add_argument("config")
    p_claims.add_argument("--json", action="store_true", dest="as_json")
    return parser


def _rate_lines(rates) -> list:
    both = lambda v: (v, from_angular(v))
    rows = [
        ("g_ab", *both(rates.g_ab), "single-photon translational coupling"),
        ("g_ac", *both(rates.g_ac), "single-photon librational coupling"),
        ("kappa", *both(rates.kappa), "cavity linewidth"),
        ("g1", *both(rates.g1), "effective translational shift"),
        ("g2", *both(rates.g2), "effective librational shift"),
        ("g3", *both(rates.g3), "effective exchange coupling"),
    ]
    lines = [f"{'rate':<8}{'rad/s':>18}{'Hz':>18}  description"]
    for name, ang, cyc, desc in rows:
        lines.append(f"{name:<8}{ang:>18.8g}{cyc:>18.8g}  {desc}")
    lines.append("")
    lines.append(f"alpha1 = {rates.alpha1:.8g} (|alpha1| = {abs(rates.alpha1):.6g})")
    lines.append(f"alpha2 = {rates.alpha2:.8g} (|alpha2| = {abs(rates.alpha2):.6g})")
    lines.append(f"beta   = {rates.beta:.8g} (steady translational displacement)")
    lines.append(f"gamma  = {rates.gamma:.8g} (steady librational displacement)")
    try:
        residual = beamsplitter_balance_residual(rates)
        lines.append(f"balance residual |g1-g2|/max = {residual:.6g}")
    except LeviError:
        lines.append("balance residual undefined (g1 = g2 = 0)")
    return lines


def _rates_json(rates) -> dict:
    def pair(v):
        return {"rad_per_s": v, "hz": from_angular(v)}

    return {
        "g_ab": pair(rates.g_ab),
        "g_ac": pair(rates.g_ac),
        "kappa": pair(rates.kappa),
        "g1": pair(rates.g1),
        "g2": pair(rates.g2),
        "g3": pair(rates.g3),
        "alpha1": {"re": rates.alpha1.real, "im": rates.alpha1.imag},
        "alpha2": {"re": rates.alpha2.real, "im": rates.alpha2.imag},
        "beta": rates.beta,
        "gamma": rates.gamma,
    }


def _cmd_derive(args) -> int:
    cfg = load_config(args.config)
    if cfg.drives is None:
        raise ParseError("derive requires a 'drives' block in the config")
    tone1, tone2 = cfg.drives
    if args.balance:
        tone2 = balance_second_drive(cfg.setup, tone1, tone2)
        print(
            "balanced second drive: rabi = "
            f"{tone2.rabi:.10g} rad/s ({from_angular(tone2.rabi):.10g} Hz)"
        )
    rates = derive_rates(cfg.setup, (tone1, tone2))
    if args.as_json:
        print(json.dumps(_rates_json(rates), indent=2, sort_keys=True))
    else:
        print("\n".join(_rate_lines(rates)))
    return 0


def _evolve_rows(args):
    scheme = _SCHEME_FLAG[args.scheme]
    g = to_angular(args.g_khz * 1e3)
    kappa = to_angular(args.kappa_khz * 1e3)
    delta = None if args.delta_khz is None else to_angular(args.delta_khz * 1e3)
    g1 = to_angular(args.g1_khz * 1e3)
    if scheme == "detuned" and delta is None:
        raise ParseError("the detuned scheme requires --delta-khz")
    if args.steps < 2:
        raise ParseError("--steps must be at least 2")
    t_end = args.t_end
    if t_end is None:
        t_end = 2.0 * transfer_time(scheme, g, delta=delta, kappa=kappa)
    times = np.linspace(0.0, t_end, args.steps)

    if scheme == "beamsplitter":
        c01, c10 = beamsplitter_amplitudes(times, g1, g)
        p = np.abs(c01) ** 2 + np.abs(c10) ** 2
        f = np.abs(c10) / np.sqrt(p)
        header = "t,re_c01,im_c01,re_c10,im_c10,P,F"
        columns = [times, c01.real, c01.imag, c10.real, c10.imag, p, f]
    else:
        state = scheme_amplitudes(scheme, times, g, delta=delta, kappa=kappa)
        f, p = fidelity_and_probability(state)
        header = "t,re_c001,im_c001,re_c010,im_c010,re_c100,im_c100,P,F"
        columns = [
            times,
            np.real(state.c001),
            np.imag(state.c001),
            np.real(state.c010),
            np.imag(state.c010),
            np.real(state.c100),
            np.imag(state.c100),
            p,
            f,
        ]
    lines = [header]
    for row in zip(*columns):
        lines.append(",".join(format(float(x), _CSV_FMT) for x in row))
    return "\n".join(lines) + "\n"


def _cmd_evolve(args) -> int:
    text = _evolve_rows(args)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if cfg.sweep is None:
        raise ParseError("config has no 'sweep' block")
    result = run_sweep(cfg.sweep)
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        handle.write(sweep_to_csv(result))
    print(f"wrote {cfg.sweep.axis1.count * cfg.sweep.axis2.count} cells to {args.out}")
    return 0


def _cmd_oracle(args) -> int:
    kwargs = {"n_random": args.random}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    report = run_oracle(**kwargs)
    print(
        f"{report.n_cases} cases; max amplitude deviation = "
        f"{report.max_deviation:.3e} (tolerance {report.tolerance:.1e})"
    )
    if report.passed:
        print("PASS")
        return 0
    print(f"FAIL (worst case: {report.worst_case})")
    return 1


def _cmd_claims(args) -> int:
    cfg = load_config(args.config)
    if cfg.drives is None:
        raise ParseError("claims requires a 'drives' block in the config")
    report = claims_report(cfg.setup, cfg.drives)
    if args.as_json:
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(report.render_text(), end="")
    return 0


_COMMANDS = {
    "derive": _cmd_derive,
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
    "claims": _cmd_claims,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (ParseError, ValidationError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LeviError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
