"""Absorption and dispersion of the probe, from plain EIT to interacting dark resonances.

Writes CSV and SVG files into ``demos/output``.
"""

# %%
from pathlib import Path

import numpy as np

from darkfloquet import FIG2, FIG3, FIG4, find_features, sweep
from darkfloquet.output import plot_svg, read_csv, write_csv

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# %% Three-level limit: only probe and drive are on.
# The strong drive (omega_c = 4) splits the absorption line into an
# Autler-Townes doublet near +-4 with a transparency window between.
eit = sweep(FIG2)
report = find_features(eit)
print("no perturbing fields:", report.summary())
centre = eit.chi[np.argmin(np.abs(eit.delta_p))]
print(f"  chi''(0) = {centre.imag:.3e}, peak = {max(e.chi_im for e in report.maxima):.3e}")

# %% Switch on both perturbing fields on the 4-3 transition.
# Two narrow dark-resonance spikes appear inside the window at +-0.2.
# Dispersion is steep and negative on the spikes (superluminal) and positive
# between them (subluminal).
spikes = sweep(FIG3)
report = find_features(spikes)
print("two perturbing fields:", report.summary())
for e in report.inner_pair:
    print(f"  feature at {e.delta_p:+.3f}: chi'' = {e.chi_im:.3e}, dchi'/ddelta_p = {e.dispersion_slope:+.3e}")

# %% Add an incoherent pump r = 0.03 between |1> and |2>.
# The spikes become gain lines (chi'' < 0) and the slope between them turns negative.
gain = sweep(FIG4)
report = find_features(gain)
print("with incoherent pump:", report.summary())

# %% Save and plot, zoomed on the transparency window for the spike cases.
for name, result, xlim in (("eit", eit, None), ("spikes", spikes, (-1, 1)), ("gain", gain, (-1, 1))):
    csv_path = out / f"{name}.csv"
    write_csv(result, csv_path)
    plot_svg([("", read_csv(csv_path))], out / f"{name}.svg", xlim=xlim, title=name)
    print("wrote", csv_path, "and", csv_path.with_suffix(".svg"))
