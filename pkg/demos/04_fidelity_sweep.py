"""Two-axis fidelity sweep and the monotone trend lines.

Runs the sweep configured in paper_params.json (fidelity and success
probability over a delta x G grid at fixed kappa), writes the CSV next to
this script, and prints the trend of fidelity with delta at G = 50 kHz
plus a coarse ASCII view of the fidelity surface.

Run:  python3 demos/04_fidelity_sweep.py
"""

from pathlib import Path

import numpy as np

from levi import AxisSpec, SweepSpec, from_angular, load_config, run_sweep, sweep_to_csv, to_angular

here = Path(__file__).resolve().parent
cfg = load_config(here.parent / "paper_params.json")

result = run_sweep(cfg.sweep)
out = here / "fidelity_grid.csv"
out.write_text(sweep_to_csv(result), newline="")
ok = sum(row.count("ok") for row in result.statuses)
print(f"wrote {out.name}: {result.fidelities.size} cells ({ok} ok, rest no-transfer)")

print("\ncoarse fidelity surface (rows delta, cols G; '.' = no transfer):")
glyphs = " .:-=+*#%@"
for i in range(0, cfg.sweep.axis1.count, 8):
    row = []
    for j in range(0, cfg.sweep.axis2.count, 4):
        f = result.fidelities[i, j]
        row.append("." if np.isnan(f) else glyphs[min(int(f * 10), 9)])
    delta_khz = from_angular(result.axis1_values[i]) / 1e3
    print(f"  delta = {delta_khz:6.1f} kHz  " + "".join(row))

print("\nfidelity vs delta at G = 50 kHz, kappa = 75.2 kHz:")
line = run_sweep(
    SweepSpec(
        scheme="detuned",
        axis1=AxisSpec("G", to_angular(50e3), to_angular(51e3), 2),
        axis2=AxisSpec("delta", to_angular(100e3), to_angular(400e3), 7),
        fixed={"kappa": to_angular(75.2e3)},
    )
)
for j, delta in enumerate(line.axis2_values):
    print(
        f"  delta = {from_angular(delta) / 1e3:5.0f} kHz:  F = {line.fidelities[0, j]:.4f}"
        f"  P = {line.probabilities[0, j]:.4f}"
    )
