"""Closed-form time evolution, fidelity, success probability and transfer
times for the single-excitation transfer schemes.

Schemes
-------
ideal-resonant : three-mode exchange with no decay, equal couplings G
resonant       : same with cavity decay kappa on the no-decay branch
detuned        : exchange via a cavity detuned by delta, decay kappa
beamsplitter   : direct two-mode exchange after cavity elimination

The decaying schemes follow the no-photon-loss branch of a quantum
trajectory unraveling: amplitudes evolve under a non-Hermitian generator,
the squared branch norm P is the success probability, and the fidelity is
the overlap with the target state of the renormalized branch.

Every function accepts scalar or ndarray times and broadcasts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateSpectrum, NoTransfer, VanishedBranch
from .model import ModeFrequencies, SubspaceState

SQRT2 = math.sqrt(2.0)

#: Branch norms below this are treated as fully decayed.
BRANCH_UNDERFLOW = 1e-300

SCHEMES = ("ideal-resonant", "resonant", "detuned", "beamsplitter")


def _unwrap(value):
    """Collapse 0-d arrays to plain scalars; pass arrays through."""
    return value[()] if isinstance(value, np.ndarray) and value.ndim == 0 else value


def _state(c001, c010, c100) -> SubspaceState:
    return SubspaceState(c001=_unwrap(c001), c010=_unwrap(c010), c100=_unwrap(c100))


@dataclass(frozen=True)
class ConditionalSpectrum:
    """Spectral data of the detuned conditional generator: the square-root
    discriminant chi and the two decaying symmetric-sector energies."""

    chi: complex
    e2: complex
    e3: complex


@dataclass(frozen=True)
class TransferReport:
    """Transfer time (s), fidelity and success probability for a scheme."""

    time: float
    fidelity: float
    probability: float
    scheme: str


def resonant_three_mode_amplitudes(t, g: float) -> SubspaceState:
    """Decay-free three-mode exchange starting from |001> with equal
    couplings g.

    c001 = (1 + cos(sqrt2 g t)) / 2
    c010 = -(1 - cos(sqrt2 g t)) / 2
    c100 = -(i sqrt2 / 2) sin(sqrt2 g t)

    Unit norm for all t; full transfer to -|010> at t = pi / (sqrt2 g).
    """
    t = np.asarray(t, dtype=float)
    theta = SQRT2 * g * t
    c001 = 0.5 * (1.0 + np.cos(theta)) + 0j
    c010 = -0.5 * (1.0 - np.cos(theta)) + 0j
    c100 = -1j * (SQRT2 / 2.0) * np.sin(theta)
    return _state(c001, c010, c100)


def beamsplitter_amplitudes(
    t,
    g1: float,
    g3: float,
    frame: str = "rotating",
    freqs: ModeFrequencies | None = None,
) -> tuple:
    """Two-mode exchange amplitudes (c01, c10) from |0>|1> under the
    eliminated-cavity Hamiltonian with balanced mode shifts g1 and
    exchange coupling g3.

    Rotating frame:
        c01 = (exp(-i (g1+g3) t) + exp(-i (g1-g3) t)) / 2
        c10 = (exp(-i (g1+g3) t) - exp(-i (g1-g3) t)) / 2

    The lab frame multiplies c01 by exp(-i omega_phi t) and c10 by
    exp(-i omega_m t); neither frame changes any population.
    """
    t = np.asarray(t, dtype=float)
    ep = np.exp(-1j * (g1 + g3) * t)
    em = np.exp(-1j * (g1 - g3) * t)
    c01 = 0.5 * (ep + em)
    c10 = 0.5 * (ep - em)
    if frame == "lab":
        if freqs is None:
            raise ValueError("lab frame requires mode frequencies")
        c01 = c01 * np.exp(-1j * freqs.omega_phi * t)
        c10 = c10 * np.exp(-1j * freqs.omega_m * t)
    elif frame != "rotating":
        raise ValueError(f"unknown frame {frame!r}")
    return _unwrap(c01), _unwrap(c10)


def conditional_spectrum(g: float, delta: float, kappa: float) -> ConditionalSpectrum:
    """Spectrum of the detuned conditional generator.

    chi = sqrt(4 delta^2 + 32 g^2 + 4 i delta kappa - kappa^2) on the
    principal branch, e2 = (-2 delta - i kappa - chi)/4 and
    e3 = (-2 delta - i kappa + chi)/4, so e2 + e3 = -(2 delta + i kappa)/2.
    """
    chi = complex(
        np.sqrt(
            complex(4.0 * delta * delta + 32.0 * g * g - kappa * kappa, 4.0 * delta * kappa)
        )
    )
    e2 = (-2.0 * delta - 1j * kappa - chi) / 4.0
    e3 = (-2.0 * delta - 1j * kappa + chi) / 4.0
    return ConditionalSpectrum(chi=chi, e2=e2, e3=e3)


def _spectrum_scale(*rates) -> float:
    return max(*(abs(r) for r in rates), 1.0)


def detuned_conditional_amplitudes(
    t, g: float, delta: float, kappa: float
) -> SubspaceState:
    """No-decay-branch amplitudes of the detuned scheme from |001>.

    c001 = 1/2 + (2d+ik+chi)/(4chi) e^{-i e3 t} - (2d+ik-chi)/(4chi) e^{-i e2 t}
    c010 = -1/2 + the same two exponential terms
    c100 = e^{-i d t} (2g/chi) (e^{-i e3 t} - e^{-i e2 t})

    The c100 prefactor is the cancellation-free form of
    -(2d+ik+chi)(2d+ik-chi)/(16 g chi), using (2d+ik)^2 - chi^2 = -32 g^2;
    the two agree identically for g != 0 and the reduced form stays finite
    as g -> 0.  Raises DegenerateSpectrum at the exceptional point
    chi = 0, where the closed form breaks down and the numerical
    propagator must be used instead.
    """
    spec = conditional_spectrum(g, delta, kappa)
    if abs(spec.chi) <= 1e-9 * _spectrum_scale(g, delta, kappa):
        raise DegenerateSpectrum(
            f"chi = {spec.chi!r} is at an exceptional point; use the propagator"
        )
    t = np.asarray(t, dtype=float)
    zk = complex(2.0 * delta, kappa)
    plus = (zk + spec.chi) / (4.0 * spec.chi)
    minus = (zk - spec.chi) / (4.0 * spec.chi)
    e3t = np.exp(-1j * spec.e3 * t)
    e2t = np.exp(-1j * spec.e2 * t)
    wave = plus * e3t - minus * e2t
    c001 = 0.5 + wave
    c010 = -0.5 + wave
    c100 = np.exp(-1j * delta * t) * (2.0 * g / spec.chi) * (e3t - e2t)
    return _state(c001, c010, c100)


def resonant_conditional_amplitudes(t, g: float, kappa: float) -> SubspaceState:
    """No-decay-branch amplitudes of the resonant scheme from |001>.

    With W = sqrt(32 g^2 - kappa^2) (analytically continued through the
    overdamped region 32 g^2 < kappa^2):

    c001 = 1/2 + e^{-kappa t/4} [cos(W t/4)/2 + (kappa/2W) sin(W t/4)]
    c010 = -1/2 + the same decaying oscillation
    c100 = -i (4g/W) e^{-kappa t/4} sin(W t/4)

    The sine coefficient kappa/(2W) is fixed by the t = 0 derivative of
    the underlying equation of motion and by the delta -> 0 limit of the
    detuned amplitudes; at kappa = 0 the expressions reduce exactly to
    the decay-free exchange.  Raises DegenerateSpectrum at 32 g^2 =
    kappa^2 (critical damping).
    """
    w = complex(np.sqrt(complex(32.0 * g * g - kappa * kappa, 0.0)))
    if abs(w) <= 1e-9 * _spectrum_scale(g, kappa):
        raise DegenerateSpectrum(
            f"32 g^2 - kappa^2 = {32.0 * g * g - kappa * kappa!r} is critically damped"
        )
    t = np.asarray(t, dtype=float)
    theta = w * t / 4.0
    decay = np.exp(-kappa * t / 4.0)
    osc = decay * (0.5 * np.cos(theta) + (kappa / (2.0 * w)) * np.sin(theta))
    c001 = 0.5 + osc
    c010 = -0.5 + osc
    c100 = -1j * (4.0 * g / w) * decay * np.sin(theta)
    return _state(c001, c010, c100)


def fidelity_and_probability(state: SubspaceState) -> tuple:
    """Success probability P = |c001|^2 + |c010|^2 + |c100|^2 of the branch
    and transfer fidelity F = |c010| / sqrt(P) of the renormalized state
    against the target |010>."""
    p = state.branch_norm()
    if np.any(np.asarray(p) <= BRANCH_UNDERFLOW):
        raise VanishedBranch("branch norm underflowed; fidelity undefined")
    f = np.abs(state.c010) / np.sqrt(p)
    return _unwrap(f), _unwrap(p)


def transfer_time(
    scheme: str, g: float, delta: float | None = None, kappa: float = 0.0
) -> float:
    """Closed-form transfer time of a scheme (s).

    ideal-resonant : pi / (sqrt2 g)
    resonant       : 4 pi / sqrt(32 g^2 - kappa^2)
    detuned        : pi delta / (2 g^2 - kappa^2 / 16)
    beamsplitter   : pi / (2 |g3|), the first full-exchange time of the
                     eliminated-cavity dynamics (g is read as g3)

    Raises NoTransfer when the formula has no positive result (overdamped
    resonant case, nonpositive detuned denominator or detuning, zero
    coupling).
    """
    if scheme == "ideal-resonant":
        if g == 0.0:
            raise NoTransfer("zero coupling never transfers")
        return math.pi / (SQRT2 * abs(g))
    if scheme == "resonant":
        disc = 32.0 * g * g - kappa * kappa
        if disc <= 0.0:
            raise NoTransfer("overdamped: 32 g^2 <= kappa^2")
        return 4.0 * math.pi / math.sqrt(disc)
    if scheme == "detuned":
        if delta is None:
            raise ValueError("detuned scheme requires delta")
        denom = 2.0 * g * g - kappa * kappa / 16.0
        if denom <= 0.0:
            raise NoTransfer("overdamped: 2 g^2 <= kappa^2 / 16")
        t = math.pi * delta / denom
        if t <= 0.0:
            raise NoTransfer("nonpositive transfer time (delta <= 0)")
        return t
    if scheme == "beamsplitter":
        if g == 0.0:
            raise NoTransfer("zero exchange coupling never transfers")
        return math.pi / (2.0 * abs(g))
    raise ValueError(f"unknown scheme {scheme!r}")


def scheme_amplitudes(
    scheme: str, t, g: float, delta: float | None = None, kappa: float = 0.0
) -> SubspaceState:
    """Dispatch to the closed-form amplitudes of a three-mode scheme."""
    if scheme == "ideal-resonant":
        return resonant_three_mode_amplitudes(t, g)
    if scheme == "resonant":
        return resonant_conditional_amplitudes(t, g, kappa)
    if scheme == "detuned":
        if delta is None:
            raise ValueError("detuned scheme requires delta")
        return detuned_conditional_amplitudes(t, g, delta, kappa)
    raise ValueError(f"no closed-form subspace amplitudes for scheme {scheme!r}")


def transfer_report(
    scheme: str, g: float, delta: float | None = None, kappa: float = 0.0
) -> TransferReport:
    """Evaluate the closed forms at the scheme's transfer time."""
    t = transfer_time(scheme, g, delta=delta, kappa=kappa)
    state = scheme_amplitudes(scheme, t, g, delta=delta, kappa=kappa)
    f, p = fidelity_and_probability(state)
    return TransferReport(time=t, fidelity=float(f), probability=float(p), scheme=scheme)


def numeric_fidelity_maximum(
    scheme: str,
    g: float,
    delta: float | None = None,
    kappa: float = 0.0,
    window: tuple = (0.5, 1.5),
    samples: int = 1001,
) -> tuple:
    """Locate the fidelity maximum near the closed-form transfer time.

    Scans `samples` points across window * t_formula, then refines with a
    bounded scalar minimization.  Returns (t_max, f_max).  Used to audit
    the printed transfer-time formulas and by the numeric-max sweep mode.
    """
    t_ref = transfer_time(scheme, g, delta=delta, kappa=kappa)
    lo, hi = window[0] * t_ref, window[1] * t_ref
    ts = np.linspace(lo, hi, samples)
    f, _ = fidelity_and_probability(scheme_amplitudes(scheme, ts, g, delta, kappa))
    i = int(np.argmax(f))
    blo = ts[max(i - 1, 0)]
    bhi = ts[min(i + 1, samples - 1)]

    def negf(t: float) -> float:
        ff, _ = fidelity_and_probability(scheme_amplitudes(scheme, t, g, delta, kappa))
        return -float(ff)

    res = minimize_scalar(
        negf, bounds=(blo, bhi), method="bounded", options={"xatol": t_ref * 1e-12}
    )
    return float(res.x), float(-res.fun)
