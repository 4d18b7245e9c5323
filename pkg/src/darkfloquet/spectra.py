"""Probe susceptibility, detuning sweeps, group index and spectral features."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .floquet import SolverConfig, solve_hierarchy
from .model import PROBE_INDEX, SystemParams, build_liouvillian, validate

DEFAULT_CARRIER = 1000.0
# probe Rabi frequency at which the medium prefactor 2 N d_12 / (eps0 E_p) is quoted
PROBE_REFERENCE = 0.01


def probe_prefactor(omega_p: float, prefactor: float = 1.0, probe_reference: float = PROBE_REFERENCE) -> float:
    """Medium prefactor ``2 N d_12 / (eps0 E_p)`` at probe strength ``omega_p``.

    It scales as ``1 / E_p``; ``prefactor`` is its value when
    ``omega_p == probe_reference``. Returns 0 without a probe, where
    rho_21 vanishes identically.
    """
    if omega_p == 0:
        return 0.0
    if omega_p == probe_reference:
        return prefactor
    return prefactor * probe_reference / omega_p


@dataclass(frozen=True)
class SusceptibilitySample:
    delta_p: float
    chi_re: float
    chi_im: float
    n_g: float | None = None
    valid: bool = True
    error: str | None = None


@dataclass(frozen=True)
class SweepSpec:
    delta_p_min: float = -6.0
    delta_p_max: float = 6.0
    num_points: int = 2401
    omega_p_carrier: float = DEFAULT_CARRIER

    def __post_init__(self):
        if not self.delta_p_min < self.delta_p_max:
            raise ValueError("delta_p_min must be smaller than delta_p_max")
        if self.num_points < 3:
            raise ValueError("num_points must be at least 3")
        if not self.omega_p_carrier > 0:
            raise ValueError("omega_p_carrier must be positive")

    @property
    def step(self) -> float:
        return (self.delta_p_max - self.delta_p_min) / (self.num_points - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(self.delta_p_min, self.delta_p_max, self.num_points)


@dataclass(frozen=True)
class SweepResult:
    samples: tuple[SusceptibilitySample, ...]
    params: SystemParams
    spec: SweepSpec | None = None

    @property
    def delta_p(self) -> np.ndarray:
        return np.array([s.delta_p for s in self.samples])

    @property
    def chi(self) -> np.ndarray:
        return np.array([complex(s.chi_re, s.chi_im) for s in self.samples])

    @property
    def n_g(self) -> np.ndarray:
        return np.array([np.nan if s.n_g is None else s.n_g for s in self.samples])

    @property
    def invalid_fraction(self) -> float:
        return sum(not s.valid for s in self.samples) / len(self.samples)


def susceptibility(
    params: SystemParams,
    config: SolverConfig = SolverConfig(),
    prefactor: float = 1.0,
    probe_reference: float = PROBE_REFERENCE,
    reverse_beat: bool = False,
) -> complex:
    """Probe susceptibility from the zero harmonics of rho_21.

    Every even order kept by ``config.max_order`` contributes; at the
    default fifth order these are the orders 0, 2 and 4. See
    :func:`probe_prefactor` for the normalisation.
    """
    validate(params)
    solution = solve_hierarchy(build_liouvillian(params, reverse_beat=reverse_beat), config)
    total = 0j
    for n, vec in zip(range(0, config.max_order + 1, 2), solution.zero_harmonics()):
        total += vec[PROBE_INDEX] * params.omega_s2**n
    return probe_prefactor(params.omega_p, prefactor, probe_reference) * complex(total)


def group_index(delta_p, chi_re, omega_p_carrier: float = DEFAULT_CARRIER) -> np.ndarray:
    """Group index on a uniform detuning grid.

    ``n_g = 1 + 2 pi chi' + 2 pi omega_p d chi'/d delta_p`` with a 3-point
    central difference; the endpoints are NaN.
    """
    delta_p = np.asarray(delta_p, dtype=float)
    chi_re = np.asarray(chi_re, dtype=float)
    if delta_p.size < 3 or delta_p.shape != chi_re.shape:
        raise ValueError("need at least 3 matching (delta_p, chi') samples")
    steps = np.diff(delta_p)
    h = steps.mean()
    if not np.all(steps > 0) or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise ValueError("group_index needs a uniform, increasing grid")
    slope = np.full_like(chi_re, np.nan)
    slope[1:-1] = (chi_re[2:] - chi_re[:-2]) / (delta_p[2:] - delta_p[:-2])
    return 1.0 + 2 * math.pi * chi_re + 2 * math.pi * omega_p_carrier * slope


def group_velocity(n_g):
    """``V_g = c / n_g`` with ``c = 1``."""
    return 1.0 / np.asarray(n_g, dtype=float)


def _point(params: SystemParams, delta_p: float, config: SolverConfig, options: dict):
    try:
        chi = susceptibility(params.replace(delta_p=float(delta_p)), config, **options)
    except np.linalg.LinAlgError as exc:
        return SusceptibilitySample(float(delta_p), math.nan, math.nan, None, False, str(exc))
    return SusceptibilitySample(float(delta_p), chi.real, chi.imag)


def sweep(
    params: SystemParams,
    spec: SweepSpec = SweepSpec(),
    config: SolverConfig = SolverConfig(),
    workers: int | None = None,
    **options,
) -> SweepResult:
    """Susceptibility over the uniform probe-detuning grid of ``spec``.

    Points whose resolvents are singular are kept but flagged invalid.
    ``workers > 1`` evaluates points in a thread pool; ordering is preserved.
    Remaining keyword options are passed to :func:`susceptibility`.
    """
    validate(params)
    grid = spec.grid()
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            raw = list(pool.map(lambda d: _point(params, d, config, options), grid))
    else:
        raw = [_point(params, d, config, options) for d in grid]

    chi_re = np.array([s.chi_re for s in raw])
    n_g = group_index(grid, chi_re, spec.omega_p_carrier)
    samples = tuple(
        SusceptibilitySample(
            s.delta_p, s.chi_re, s.chi_im,
            None if not np.isfinite(g) else float(g),
            s.valid, s.error,
        )
        for s, g in zip(raw, n_g)
    )
    return SweepResult(samples, params, spec)


@dataclass(frozen=True)
class Extremum:
    delta_p: float
    chi_im: float
    index: int
    dispersion_slope: float | None = None

    @property
    def slope_sign(self) -> int:
        if self.dispersion_slope is None or self.dispersion_slope == 0:
            return 0
        return 1 if self.dispersion_slope > 0 else -1


@dataclass(frozen=True)
class FeatureReport:
    maxima: tuple[Extremum, ...] = ()
    minima: tuple[Extremum, ...] = ()
    central_slope: float | None = None
    inner_pair: tuple[Extremum, Extremum] | None = None

    def dominant_maxima(self, count: int = 2) -> list[Extremum]:
        return sorted(self.maxima, key=lambda e: e.chi_im, reverse=True)[:count]

    def summary(self) -> str:
        if not self.maxima and not self.minima:
            return "no spectral features"
        parts = [f"{len(self.maxima)} absorption maxima, {len(self.minima)} minima"]
        top = sorted(self.dominant_maxima(), key=lambda e: e.delta_p)
        parts.append("dominant maxima at " + ", ".join(f"{e.delta_p:+.4g}" for e in top))
        if self.inner_pair is not None:
            a, b = self.inner_pair
            parts.append(f"inner features at {a.delta_p:+.4g}/{b.delta_p:+.4g}")
        if self.central_slope is not None:
            sign = "positive" if self.central_slope > 0 else "negative"
            parts.append(f"dispersion slope between inner features {sign}")
        return "; ".join(parts)


def _local_extrema(y: np.ndarray, sense: int) -> list[int]:
    """Strict local extrema; a flat run counts once at its leftmost point."""
    found = []
    n = y.size
    i = 1
    while i < n - 1:
        j = i
        while j + 1 < n - 1 and y[j + 1] == y[i]:
            j += 1
        left, right = y[i - 1], y[j + 1]
        if sense * (y[i] - left) > 0 and sense * (y[i] - right) > 0:
            found.append(i)
        i = j + 1
    return found


def _slope_at(x: np.ndarray, y: np.ndarray, k: int) -> float | None:
    if 0 < k < x.size - 1:
        return float((y[k + 1] - y[k - 1]) / (x[k + 1] - x[k - 1]))
    return None


def find_features(result: SweepResult) -> FeatureReport:
    """Locate extrema of chi'' and the dispersion slope at and between them.

    The inner pair is the extremum of chi'' (maximum or minimum) closest to
    zero detuning on each side, excluding zero itself; ``central_slope`` is d chi'/d delta_p
    at the grid point nearest the midpoint of that pair.
    """
    ok = [s for s in result.samples if s.valid]
    if len(ok) < 3:
        return FeatureReport()
    x = np.array([s.delta_p for s in ok])
    im = np.array([s.chi_im for s in ok])
    re = np.array([s.chi_re for s in ok])

    def build(indices):
        return tuple(Extremum(float(x[k]), float(im[k]), int(k), _slope_at(x, re, k)) for k in indices)

    maxima = build(_local_extrema(im, +1))
    minima = build(_local_extrema(im, -1))
    if not maxima and not minima:
        return FeatureReport()

    inner = None
    left = [e for e in maxima + minima if e.delta_p < 0]
    right = [e for e in maxima + minima if e.delta_p > 0]
    if left and right:
        inner = (max(left, key=lambda e: e.delta_p), min(right, key=lambda e: e.delta_p))
    central = None
    if inner is not None:
        mid = 0.5 * (inner[0].delta_p + inner[1].delta_p)
        central = _slope_at(x, re, int(np.argmin(np.abs(x - mid))))
    return FeatureReport(maxima, minima, central, inner)
