"""How the incoherent pump turns the inner absorption spikes into gain.

Writes one absorption and one dispersion plot into ``demos/output``.
"""

# %%
from pathlib import Path

import numpy as np

from darkfloquet import FIG3, SweepSpec, sweep
from darkfloquet.output import plot_svg, read_csv, write_csv

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# %% Scan the pump rate, keeping everything else at the two-field values.
spec = SweepSpec(-1.0, 1.0, 801)
series = []
for r in (0.0, 0.009, 0.03):
    result = sweep(FIG3.replace(r=r), spec)
    spike = result.chi[np.argmin(np.abs(result.delta_p - 0.2))]
    print(f"r = {r:<6}  chi''(0.2) = {spike.imag:+.3e}")
    path = out / f"pump_r{r}.csv"
    write_csv(result, path)
    series.append((f"r={r}", read_csv(path)))

# %% The spike height drops monotonically and changes sign.
plot_svg(series, out / "pump_absorption.svg", parts=("chi_im",), title="absorption versus pump rate")
plot_svg(series, out / "pump_dispersion.svg", parts=("chi_re",), title="dispersion versus pump rate")
print("wrote", out / "pump_absorption.svg", "and", out / "pump_dispersion.svg")
