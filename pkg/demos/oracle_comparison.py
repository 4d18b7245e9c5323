"""Truncated Floquet hierarchy against brute-force time integration.

The oracle integrates the full time-dependent master equation until it is
periodic, then averages rho_21 over whole beat periods. Its disagreement with
the fifth-order hierarchy should fall by about 2**6 when omega_s2 halves.
"""

# %%
from darkfloquet import FIG3, SolverConfig, oracle_susceptibility, susceptibility

# %% Compare at a few detunings for two strengths of the second field.
for s2 in (0.2, 0.1):
    print(f"omega_s2 = {s2}")
    for x in (-0.2, 0.0, 0.2, 1.0, 4.0):
        p = FIG3.replace(omega_s2=s2, delta_p=x)
        floquet = susceptibility(p)
        oracle = oracle_susceptibility(p)
        print(f"  delta_p = {x:+.1f}  floquet {floquet:.6e}  oracle {oracle:.6e}  |diff| {abs(floquet - oracle):.2e}")

# %% Lower truncation orders do visibly worse at the spike.
p = FIG3.replace(delta_p=-0.2)
oracle = oracle_susceptibility(p)
for order in (1, 3, 5):
    chi = susceptibility(p, SolverConfig(max_order=order))
    print(f"max_order = {order}: |diff| = {abs(chi - oracle):.2e}")
