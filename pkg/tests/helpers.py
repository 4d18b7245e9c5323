"""Shared test oracles."""

import numpy as np


def random_density_matrix(rng, n=4):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def printed_rhs(rho, p, t):
    """Equations of motion transcribed term by term, returned as a 4x4 array.

    Independent of the package's row builder: rho_33 is kept explicit and the
    six unprinted coherences follow from rho_ji = conj(rho_ij).
    """
    r = lambda i, j: rho[i - 1, j - 1]  # noqa: E731
    th = p.delta_beat * t + p.phi
    s_dn = p.omega_s1 + p.omega_s2 * np.exp(-1j * th)
    s_up = p.omega_s1 + p.omega_s2 * np.exp(1j * th)
    op, oc = p.omega_p, p.omega_c
    g21, g32, g34, g41, rr = p.gamma_21, p.gamma_32, p.gamma_34, p.gamma_41, p.r
    dp, dc, ds1 = p.delta_p, p.delta_c, p.delta_s1
    d = np.zeros((4, 4), dtype=complex)
    d[0, 0] = g21 * r(2, 2) + rr * (r(2, 2) - r(1, 1)) + 1j * op * r(2, 1) - 1j * op * r(1, 2) + g41 * r(4, 4)
    d[1, 1] = (g32 * r(3, 3) - g21 * r(2, 2) + rr * (r(1, 1) - r(2, 2)) + 1j * op * r(1, 2)
               + 1j * oc * r(3, 2) - 1j * oc * r(2, 3) - 1j * op * r(2, 1))
    d[3, 3] = g34 * r(3, 3) + 1j * s_up * r(3, 4) - 1j * s_dn * r(4, 3) - g41 * r(4, 4)
    d[1, 0] = 1j * dp * r(2, 1) + 1j * op * (r(1, 1) - r(2, 2)) + 1j * oc * r(3, 1) - 0.5 * (g21 + 2 * rr) * r(2, 1)
    d[2, 0] = (1j * (dp + dc) * r(3, 1) + 1j * s_dn * r(4, 1) + 1j * oc * r(2, 1) - 1j * op * r(3, 2)
               - 0.5 * (g34 + g32 + rr) * r(3, 1))
    d[2, 1] = (1j * dc * r(3, 2) + 1j * oc * (r(2, 2) - r(3, 3)) + 1j * s_dn * r(4, 2) - 1j * op * r(3, 1)
               - 0.5 * (g34 + g32 + g21 + rr) * r(3, 2))
    d[2, 3] = (1j * ds1 * r(3, 4) + 1j * oc * r(2, 4) + 1j * s_dn * (r(4, 4) - r(3, 3))
               - 0.5 * (g34 + g32 + g41) * r(3, 4))
    d[3, 0] = 1j * (dp + dc - ds1) * r(4, 1) + 1j * s_up * r(3, 1) - 1j * op * r(4, 2) - 0.5 * (g41 + rr) * r(4, 1)
    d[3, 1] = (1j * (dc - ds1) * r(4, 2) + 1j * s_up * r(3, 2) - 1j * oc * r(4, 3) - 1j * op * r(4, 1)
               - 0.5 * (g21 + g41 + rr) * r(4, 2))
    for i, j in [(1, 0), (2, 0), (2, 1), (2, 3), (3, 0), (3, 1)]:
        d[j, i] = np.conj(d[i, j])
    d[2, 2] = -(d[0, 0] + d[1, 1] + d[3, 3])
    return d


ACCEPTANCE_LINES: list[str] = []


def report(criterion: int, title: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion} ({title}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
