"""Perturbative Floquet hierarchy in the second perturbing field.

The quasi-steady state is expanded as

    R(t) = sum_n sum_m R_n^(m) omega_s2^n e^{-i m (D t + phi)},

and matching powers and harmonics gives, for each ``(n, m)``,

    (M0 + i m D) R_n^(m) = delta_{n,|m|<=1} Sigma_m - M1 R_{n-1}^(m-1) - M_{-1} R_{n-1}^(m+1).

Only ``m = -n, -n+2, ..., n`` survive; the hierarchy is closed at fifth order.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np
from scipy.linalg import lapack

from .model import LiouvillianParts, reassemble_generator

MAX_ORDER = 5


class SingularResolventError(np.linalg.LinAlgError):
    """A resolvent ``M0 + i m D`` is numerically singular.

    For ``m = 0`` the unperturbed steady state is not unique; otherwise
    ``m * D`` sits on an eigenvalue of ``i M0`` (a Floquet resonance).
    """

    def __init__(self, harmonic: int, delta_beat: float, rcond: float):
        self.harmonic = harmonic
        self.delta_beat = delta_beat
        self.rcond = rcond
        super().__init__(
            f"resolvent for harmonic m={harmonic} (beat {delta_beat!r}) is singular: "
            f"reciprocal condition estimate {rcond:.3e}"
        )


@dataclass(frozen=True)
class SolverConfig:
    max_order: int = MAX_ORDER
    singularity_threshold: float = 1e-12

    def __post_init__(self):
        if not isinstance(self.max_order, (int, np.integer)) or not 0 <= self.max_order <= MAX_ORDER:
            raise ValueError(f"max_order must be an integer in 0..{MAX_ORDER}, got {self.max_order!r}")
        if not self.singularity_threshold > 0:
            raise ValueError("singularity_threshold must be positive")


def harmonics_of_order(n: int) -> range:
    return range(-n, n + 1, 2)


class _Resolvent:
    """LU factorisation of ``M0 + i m D`` with a condition check."""

    def __init__(self, m0: np.ndarray, harmonic: int, delta_beat: float, threshold: float):
        a = m0 + 1j * harmonic * delta_beat * np.eye(m0.shape[0])
        getrf, getrs, gecon = lapack.get_lapack_funcs(("getrf", "getrs", "gecon"), (a,))
        lu, piv, info = getrf(a)
        anorm = np.abs(a).sum(axis=0).max()
        if info > 0 or anorm == 0:
            rcond = 0.0
        else:
            rcond, _ = gecon(lu, anorm, norm="1")
        if not rcond >= threshold:
            raise SingularResolventError(harmonic, delta_beat, float(rcond))
        self._lu, self._piv, self._getrs = lu, piv, getrs
        self.rcond = float(rcond)

    def solve(self, b: np.ndarray) -> np.ndarray:
        x, info = self._getrs(self._lu, self._piv, b)
        return x


@dataclass(frozen=True, eq=False)
class FloquetSolution:
    """Coefficient vectors ``R_n^(m)`` keyed by ``(n, m)``."""

    coefficients: Mapping[tuple[int, int], np.ndarray]
    delta_beat: float
    max_order: int

    def __getitem__(self, key: tuple[int, int]) -> np.ndarray:
        n, m = key
        if n > self.max_order or (n, m) not in self.coefficients:
            # entries outside the hierarchy vanish identically
            return np.zeros_like(self.coefficients[(0, 0)])
        return self.coefficients[key]

    def zero_harmonics(self) -> list[np.ndarray]:
        return [self.coefficients[(n, 0)] for n in range(0, self.max_order + 1, 2)]


def solve_zeroth(parts: LiouvillianParts, config: SolverConfig = SolverConfig()) -> np.ndarray:
    """Unperturbed steady state ``R_0^(0)`` solving ``M0 R = Sigma0``."""
    return _Resolvent(parts.m0, 0, parts.delta_beat, config.singularity_threshold).solve(parts.sigma0)


def solve_hierarchy(parts: LiouvillianParts, config: SolverConfig = SolverConfig()) -> FloquetSolution:
    """Fill every ``R_n^(m)`` up to ``config.max_order``, one order at a time."""
    resolvents: dict[int, _Resolvent] = {}

    def resolvent(m: int) -> _Resolvent:
        if m not in resolvents:
            resolvents[m] = _Resolvent(parts.m0, m, parts.delta_beat, config.singularity_threshold)
        return resolvents[m]

    coeffs: dict[tuple[int, int], np.ndarray] = {(0, 0): resolvent(0).solve(parts.sigma0)}
    zero = np.zeros_like(parts.sigma0)
    for n in range(1, config.max_order + 1):
        for m in harmonics_of_order(n):
            rhs = parts.source(m).copy() if n == 1 else zero.copy()
            below_minus = coeffs.get((n - 1, m - 1))
            below_plus = coeffs.get((n - 1, m + 1))
            if below_minus is not None:
                rhs -= parts.m_plus @ below_minus
            if below_plus is not None:
                rhs -= parts.m_minus @ below_plus
            coeffs[(n, m)] = resolvent(m).solve(rhs)

    for v in coeffs.values():
        v.setflags(write=False)
    return FloquetSolution(MappingProxyType(coeffs), parts.delta_beat, config.max_order)


def reconstruct(solution: FloquetSolution, omega_s2: float, phi: float, t: float) -> np.ndarray:
    """Evaluate the truncated series at time ``t``."""
    theta = solution.delta_beat * t + phi
    total = np.zeros_like(solution.coefficients[(0, 0)])
    for (n, m), vec in solution.coefficients.items():
        total = total + vec * (omega_s2**n * np.exp(-1j * m * theta))
    return total


def _time_derivative(solution: FloquetSolution, omega_s2: float, phi: float, t: float) -> np.ndarray:
    theta = solution.delta_beat * t + phi
    total = np.zeros_like(solution.coefficients[(0, 0)])
    for (n, m), vec in solution.coefficients.items():
        total = total + vec * (-1j * m * solution.delta_beat * omega_s2**n * np.exp(-1j * m * theta))
    return total


def residual_check(
    solution: FloquetSolution,
    parts: LiouvillianParts,
    omega_s2: float,
    phi: float,
    sample_times: Iterable[float],
) -> float:
    """Largest ``|dR/dt + Sigma(t) - M(t) R(t)|_inf`` over ``sample_times``."""
    worst = 0.0
    for t in sample_times:
        matrix, source = reassemble_generator(parts, omega_s2, phi, t)
        R = reconstruct(solution, omega_s2, phi, t)
        dR = _time_derivative(solution, omega_s2, phi, t)
        worst = max(worst, float(np.max(np.abs(dR + source - matrix @ R))))
    return worst


def residual_bound(solution: FloquetSolution, parts: LiouvillianParts, omega_s2: float) -> float:
    """Leading truncation term of the residual.

    Only the top-order coefficients leave uncancelled terms, namely
    ``omega_s2^(N+1) * (M1 R_N^(m) + M-1 R_N^(m))`` summed over harmonics.
    """
    top = solution.max_order
    norm = 0.0
    for m in harmonics_of_order(top):
        vec = solution.coefficients[(top, m)]
        norm += np.max(np.abs(parts.m_plus @ vec)) + np.max(np.abs(parts.m_minus @ vec))
    return float(norm * omega_s2 ** (top + 1))
