"""Parameters and affine Liouvillian of the four-level interacting-dark-resonance scheme.

Level layout: the probe couples |1> and |2>, the drive couples |2> and |3>,
and two perturbing fields of Rabi frequencies ``omega_s1`` and ``omega_s2``
couple |4> and |3>. In the frame rotating with the first perturbing field the
only residual time dependence is ``omega_s2 * exp(+-i(delta_beat*t + phi))``.

The 15 unknowns are the density-matrix elements with rho_33 removed by the
trace condition. They are ordered as in :data:`ELEMENTS` and obey

    dR/dt + Sigma(t) = M(t) R

with ``M(t) = M0 + omega_s2 * (M1 e^{-i(Dt+phi)} + M_{-1} e^{+i(Dt+phi)})``
and the same split for ``Sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

ELEMENTS: tuple[tuple[int, int], ...] = (
    (1, 1), (1, 2), (1, 3), (1, 4),
    (2, 1), (2, 2), (2, 3), (2, 4),
    (3, 1), (3, 2), (3, 4),
    (4, 1), (4, 2), (4, 3), (4, 4),
)
INDEX: dict[tuple[int, int], int] = {el: k for k, el in enumerate(ELEMENTS)}
DIM = len(ELEMENTS)

# zero-based position of rho_21 in R (the probe coherence)
PROBE_INDEX = INDEX[(2, 1)]
POPULATION_INDICES = (INDEX[(1, 1)], INDEX[(2, 2)], INDEX[(4, 4)])

# harmonic labels: 0 static, +1 multiplies omega_s2*e^{-i(Dt+phi)}, -1 multiplies omega_s2*e^{+i(Dt+phi)}
HARMONICS = (0, 1, -1)

_NONNEGATIVE = (
    "omega_p", "omega_c", "omega_s1", "omega_s2",
    "gamma_21", "gamma_32", "gamma_34", "gamma_41", "r",
)


class ParameterError(ValueError):
    """Raised when a :class:`SystemParams` field violates its invariant."""


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless parameters, all in units of a reference decay rate.

    Rabi frequencies are real; the relative phase of the two perturbing
    fields is carried by ``phi``.
    """

    omega_p: float = 0.0
    omega_c: float = 0.0
    omega_s1: float = 0.0
    omega_s2: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0
    delta_s1: float = 0.0
    delta_s2: float = 0.0
    gamma_21: float = 0.0
    gamma_32: float = 0.0
    gamma_34: float = 0.0
    gamma_41: float = 0.0
    r: float = 0.0
    phi: float = 0.0

    @property
    def delta_beat(self) -> float:
        """Beat frequency of the two perturbing fields, ``delta_s2 - delta_s1``."""
        return self.delta_s2 - self.delta_s1

    def replace(self, **changes: float) -> "SystemParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        unknown = set(changes) - set(values)
        if unknown:
            raise ParameterError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        values.update(changes)
        return SystemParams(**values)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


def validate(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged, or raise :class:`ParameterError` on the first bad field."""
    for name in SystemParams.field_names():
        value = getattr(params, name)
        if not math.isfinite(value):
            raise ParameterError(f"{name}: non-finite value {value!r}")
        if name in _NONNEGATIVE and value < 0:
            kind = "negative Rabi frequency" if name.startswith("omega") else "negative rate"
            raise ParameterError(f"{name}: {kind} {value!r}")
    return params


@dataclass(frozen=True, eq=False)
class LiouvillianParts:
    """Harmonic pieces of the affine generator.

    ``m_plus``/``sigma_plus`` multiply ``omega_s2 * e^{-i(Dt+phi)}`` and
    ``m_minus``/``sigma_minus`` multiply ``omega_s2 * e^{+i(Dt+phi)}``; neither
    carries the field amplitude or the phase itself.
    """

    m0: np.ndarray
    m_plus: np.ndarray
    m_minus: np.ndarray
    sigma0: np.ndarray
    sigma_plus: np.ndarray
    sigma_minus: np.ndarray
    delta_beat: float

    def __post_init__(self):
        for name in ("m0", "m_plus", "m_minus", "sigma0", "sigma_plus", "sigma_minus"):
            getattr(self, name).setflags(write=False)

    def matrix(self, harmonic: int) -> np.ndarray:
        return {0: self.m0, 1: self.m_plus, -1: self.m_minus}[harmonic]

    def source(self, harmonic: int) -> np.ndarray:
        return {0: self.sigma0, 1: self.sigma_plus, -1: self.sigma_minus}[harmonic]


class _RowBuilder:
    """Accumulates right-hand-side terms of one equation, eliminating rho_33."""

    def __init__(self, m: dict[int, np.ndarray], s: dict[int, np.ndarray], row: int):
        self.m, self.s, self.row = m, s, row

    def add(self, element: tuple[int, int], coeff: complex, harmonic: int = 0) -> None:
        if element == (3, 3):
            # rho_33 = 1 - rho_11 - rho_22 - rho_44; the constant goes to -Sigma
            self.s[harmonic][self.row] -= coeff
            for k in POPULATION_INDICES:
                self.m[harmonic][self.row, k] -= coeff
        else:
            self.m[harmonic][self.row, INDEX[element]] += coeff


def _printed_rows(p: SystemParams) -> dict[tuple[int, int], list[tuple[tuple[int, int], complex, int]]]:
    """Right-hand sides of the nine explicitly written equations.

    Each entry is ``(element, coefficient, harmonic)``. A perturbing coupling
    ``Omega_s1 + Omega_s2 e^{-+i(Dt+phi)}`` contributes a static term and a
    harmonic +-1 term whose coefficient excludes ``Omega_s2``.
    """
    op, oc, s1 = p.omega_p, p.omega_c, p.omega_s1
    # (Omega_s1 + Omega_s2 e^{-i..}) -> harmonic +1 ; (.. e^{+i..}) -> harmonic -1
    def s_minus_phase(coeff, element):
        return [(element, coeff * s1, 0), (element, coeff, 1)]

    def s_plus_phase(coeff, element):
        return [(element, coeff * s1, 0), (element, coeff, -1)]

    g21, g32, g34, g41, r = p.gamma_21, p.gamma_32, p.gamma_34, p.gamma_41, p.r
    dp, dc, ds1 = p.delta_p, p.delta_c, p.delta_s1
    rows = {
        (1, 1): [
            ((2, 2), g21, 0), ((2, 2), r, 0), ((1, 1), -r, 0),
            ((2, 1), 1j * op, 0), ((1, 2), -1j * op, 0), ((4, 4), g41, 0),
        ],
        (2, 2): [
            ((3, 3), g32, 0), ((2, 2), -g21, 0), ((1, 1), r, 0), ((2, 2), -r, 0),
            ((1, 2), 1j * op, 0), ((3, 2), 1j * oc, 0), ((2, 3), -1j * oc, 0),
            ((2, 1), -1j * op, 0),
        ],
        (4, 4): [
            ((3, 3), g34, 0),
            *s_plus_phase(1j, (3, 4)),
            *s_minus_phase(-1j, (4, 3)),
            ((4, 4), -g41, 0),
        ],
        (2, 1): [
            ((2, 1), 1j * dp, 0), ((1, 1), 1j * op, 0), ((2, 2), -1j * op, 0),
            ((3, 1), 1j * oc, 0), ((2, 1), -0.5 * (g21 + 2 * r), 0),
        ],
        (3, 1): [
            ((3, 1), 1j * (dp + dc), 0),
            *s_minus_phase(1j, (4, 1)),
            ((2, 1), 1j * oc, 0), ((3, 2), -1j * op, 0),
            ((3, 1), -0.5 * (g34 + g32 + r), 0),
        ],
        (3, 2): [
            ((3, 2), 1j * dc, 0), ((2, 2), 1j * oc, 0), ((3, 3), -1j * oc, 0),
            *s_minus_phase(1j, (4, 2)),
            ((3, 1), -1j * op, 0),
            ((3, 2), -0.5 * (g34 + g32 + g21 + r), 0),
        ],
        (3, 4): [
            ((3, 4), 1j * ds1, 0), ((2, 4), 1j * oc, 0),
            *s_minus_phase(1j, (4, 4)),
            *s_minus_phase(-1j, (3, 3)),
            ((3, 4), -0.5 * (g34 + g32 + g41), 0),
        ],
        (4, 1): [
            ((4, 1), 1j * (dp + dc - ds1), 0),
            *s_plus_phase(1j, (3, 1)),
            ((4, 2), -1j * op, 0),
            ((4, 1), -0.5 * (g41 + r), 0),
        ],
        (4, 2): [
            ((4, 2), 1j * (dc - ds1), 0),
            *s_plus_phase(1j, (3, 2)),
            ((4, 3), -1j * oc, 0), ((4, 1), -1j * op, 0),
            ((4, 2), -0.5 * (g21 + g41 + r), 0),
        ],
    }
    return rows


def _conjugate_terms(terms):
    """Row of rho_ji from the row of rho_ij: conjugate coefficients, transpose elements, flip harmonics."""
    return [((b, a), np.conj(c), -h) for (a, b), c, h in terms]


def build_liouvillian(params: SystemParams, reverse_beat: bool = False) -> LiouvillianParts:
    """Assemble ``M0, M1, M-1`` and ``Sigma0, Sigma1, Sigma-1`` from the equations of motion.

    Parameters
    ----------
    params : SystemParams
        Validated parameters. ``omega_s2`` and ``phi`` are not baked in.
    reverse_beat : bool
        Use ``delta_s1 - delta_s2`` as the beat frequency instead of the
        physical ``delta_s2 - delta_s1``. Only useful for sign-sensitivity
        experiments.
    """
    validate(params)
    m = {h: np.zeros((DIM, DIM), dtype=complex) for h in HARMONICS}
    s = {h: np.zeros(DIM, dtype=complex) for h in HARMONICS}

    rows = _printed_rows(params)
    for (i, j) in [(2, 1), (3, 1), (3, 2), (3, 4), (4, 1), (4, 2)]:
        rows[(j, i)] = _conjugate_terms(rows[(i, j)])

    for element, terms in rows.items():
        builder = _RowBuilder(m, s, INDEX[element])
        for target, coeff, harmonic in terms:
            builder.add(target, coeff, harmonic)

    beat = -params.delta_beat if reverse_beat else params.delta_beat
    return LiouvillianParts(
        m0=m[0], m_plus=m[1], m_minus=m[-1],
        sigma0=s[0], sigma_plus=s[1], sigma_minus=s[-1],
        delta_beat=beat,
    )


def reassemble_generator(parts: LiouvillianParts, omega_s2: float, phi: float, t: float):
    """Return ``(M(t), Sigma(t))`` for the given field amplitude and phase."""
    theta = parts.delta_beat * t + phi
    down = omega_s2 * np.exp(-1j * theta)
    up = omega_s2 * np.exp(1j * theta)
    matrix = parts.m0 + down * parts.m_plus + up * parts.m_minus
    source = parts.sigma0 + down * parts.sigma_plus + up * parts.sigma_minus
    return matrix, source


def reconstruct_rho33(R) -> complex:
    """Population of |3> from the trace condition."""
    R = np.asarray(R)
    return 1.0 - R[INDEX[(1, 1)]] - R[INDEX[(2, 2)]] - R[INDEX[(4, 4)]]


def to_matrix(R) -> np.ndarray:
    """Full 4x4 density matrix from a 15-component vector."""
    R = np.asarray(R)
    rho = np.empty((4, 4), dtype=complex)
    for (i, j), k in INDEX.items():
        rho[i - 1, j - 1] = R[k]
    rho[2, 2] = reconstruct_rho33(R)
    return rho


def from_matrix(rho) -> np.ndarray:
    """15-component vector from a 4x4 density matrix (rho_33 dropped)."""
    rho = np.asarray(rho)
    return np.array([rho[i - 1, j - 1] for (i, j) in ELEMENTS], dtype=complex)


def transpose_permutation() -> np.ndarray:
    """Index map sending the position of rho_ij to that of rho_ji."""
    return np.array([INDEX[(j, i)] for (i, j) in ELEMENTS])
