"""Closed-form state transfer in the three schemes.

Evaluates the single-excitation amplitudes at and around the transfer
time for the decay-free exchange, the resonant conditional scheme and the
detuned conditional scheme, and prints fidelity and success probability.
Scheme coordinates are the standard operating point: G = 50 kHz,
delta = 200 kHz, kappa = 75.2 kHz (cyclic).

Run:  python3 demos/02_state_transfer.py
"""

import numpy as np

from levi import (
    fidelity_and_probability,
    scheme_amplitudes,
    to_angular,
    transfer_time,
)

G = to_angular(50e3)
DELTA = to_angular(200e3)
KAPPA = to_angular(75.2e3)

for scheme, delta, kappa in (
    ("ideal-resonant", None, 0.0),
    ("resonant", None, KAPPA),
    ("detuned", DELTA, KAPPA),
):
    t_star = transfer_time(scheme, G, delta=delta, kappa=kappa)
    state = scheme_amplitudes(scheme, t_star, G, delta=delta, kappa=kappa)
    fid, prob = fidelity_and_probability(state)
    print(f"== {scheme} ==")
    print(f"transfer time  t* = {t_star:.6e} s")
    print(f"fidelity       F  = {float(fid):.4f}")
    print(f"probability    P  = {float(prob):.4f}")

    times = np.linspace(0.0, 2.0 * t_star, 9)
    state = scheme_amplitudes(scheme, times, G, delta=delta, kappa=kappa)
    fids, probs = fidelity_and_probability(state)
    print("      t/t*   |c001|^2   |c010|^2   |c100|^2      P      F")
    for k in range(times.size):
        print(
            f"    {times[k] / t_star:6.3f} {abs(state.c001[k])**2:10.4f} "
            f"{abs(state.c010[k])**2:10.4f} {abs(state.c100[k])**2:10.4f} "
            f"{probs[k]:8.4f} {fids[k]:6.4f}"
        )
    print()
