"""Time-domain reference solution.

The master equation is integrated directly on the full 4x4 density matrix,
built from the rotating-frame Hamiltonian and the decay/pump jump operators,
with a classical fixed-step Runge-Kutta scheme. Nothing here uses the
15-component Liouvillian or the Floquet coefficients, so agreement with
:mod:`darkfloquet.floquet` is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemParams, from_matrix, to_matrix, validate
from .spectra import PROBE_REFERENCE, probe_prefactor

_N = 4


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegrationConfig:
    """Step size and averaging windows for the reference integration.

    ``transient_time=None`` picks ``max(2000, 40 / slowest relaxation rate)``.
    The step is shrunk slightly so that one beat period holds an integer
    number of steps.
    """

    dt: float = 1e-3
    transient_time: float | None = None
    extraction_periods: int = 4
    max_phase_per_step: float = 0.05

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.transient_time is not None and not self.transient_time > 0:
            raise ValueError("transient_time must be positive")
        if self.extraction_periods < 1:
            raise ValueError("extraction_periods must be >= 1")


def _ket_bra(i: int, j: int) -> np.ndarray:
    op = np.zeros((_N, _N), dtype=complex)
    op[i - 1, j - 1] = 1.0
    return op


def _superop_commutator(h: np.ndarray) -> np.ndarray:
    """Row-major vec: vec(A X B) = kron(A, B.T) vec(X)."""
    eye = np.eye(_N)
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T))


def _superop_dissipator(jump: np.ndarray) -> np.ndarray:
    eye = np.eye(_N)
    jdj = jump.conj().T @ jump
    return (
        np.kron(jump, jump.conj())
        - 0.5 * np.kron(jdj, eye)
        - 0.5 * np.kron(eye, jdj.T)
    )


def lindblad_parts(params: SystemParams) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Superoperators ``(L0, L_up, L_down, beat)`` on row-major vec(rho).

    ``d vec(rho)/dt = (L0 + omega_s2 e^{+i theta} L_up + omega_s2 e^{-i theta} L_down) vec(rho)``
    with ``theta = beat * t + phi``.
    """
    p = validate(params)
    h0 = np.diag([0.0, -p.delta_p, -p.delta_p - p.delta_c, -p.delta_p - p.delta_c + p.delta_s1]).astype(complex)
    couplings = [
        (-p.omega_p, _ket_bra(1, 2)),
        (-p.omega_c, _ket_bra(2, 3)),
        (-p.omega_s1, _ket_bra(4, 3)),
    ]
    for amp, op in couplings:
        h0 = h0 + amp * op + np.conj(amp) * op.conj().T

    jumps = [
        (p.gamma_21, _ket_bra(1, 2)),
        (p.gamma_32, _ket_bra(2, 3)),
        (p.gamma_34, _ket_bra(4, 3)),
        (p.gamma_41, _ket_bra(1, 4)),
        (p.r, _ket_bra(2, 1)),
        (p.r, _ket_bra(1, 2)),
    ]
    l0 = _superop_commutator(h0)
    for rate, op in jumps:
        if rate:
            l0 = l0 + _superop_dissipator(math.sqrt(rate) * op)

    # second perturbing field: -Omega_s2 e^{i theta}|4><3| + h.c.
    l_up = _superop_commutator(-_ket_bra(4, 3))
    l_down = _superop_commutator(-_ket_bra(3, 4))
    beat = p.delta_s2 - p.delta_s1
    return l0, l_up, l_down, beat


def _rk4_step_map(generator, t: float, h: float, state: np.ndarray) -> np.ndarray:
    """One classical RK4 step for the linear system ``x' = L(t) x``.

    ``state`` may be a vector or a matrix whose columns are propagated together.
    """
    l_a, l_m, l_b = generator(t), generator(t + 0.5 * h), generator(t + h)
    k1 = l_a @ state
    k2 = l_m @ (state + 0.5 * h * k1)
    k3 = l_m @ (state + 0.5 * h * k2)
    k4 = l_b @ (state + h * k3)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class _Problem:
    def __init__(self, params: SystemParams, config: IntegrationConfig):
        self.params = validate(params)
        self.config = config
        self.l0, self.l_up, self.l_down, self.beat = lindblad_parts(params)
        self.omega_s2 = params.omega_s2
        self.phi = params.phi
        self.driven = self.omega_s2 != 0 and self.beat != 0

    def generator(self, t: float) -> np.ndarray:
        if self.omega_s2 == 0:
            return self.l0
        theta = self.beat * t + self.phi
        return (
            self.l0
            + self.omega_s2 * np.exp(1j * theta) * self.l_up
            + self.omega_s2 * np.exp(-1j * theta) * self.l_down
        )

    def fastest_rate(self) -> float:
        p = self.params
        return max(abs(p.delta_p) + p.omega_c, abs(self.beat))

    def step_size(self) -> tuple[float, int | None]:
        """Step and steps-per-beat-period (``None`` when undriven)."""
        dt = self.config.dt
        if self.driven:
            period = 2 * math.pi / abs(self.beat)
            steps = math.ceil(period / dt - 1e-9)
            dt = period / steps
        else:
            steps = None
        if dt * self.fastest_rate() > self.config.max_phase_per_step:
            raise IntegrationError(
                f"step {dt:.3e} too coarse: dt*max(|delta_p|+omega_c, |beat|) = "
                f"{dt * self.fastest_rate():.3f} > {self.config.max_phase_per_step}"
            )
        return dt, steps

    def transient_time(self, rates=None) -> float:
        """Default: 40 e-folds of the slowest decaying mode, at least 2000."""
        if self.config.transient_time is not None:
            return self.config.transient_time
        if rates is None:
            rates = -np.linalg.eigvals(self.l0).real
        decaying = rates[rates > 1e-9]
        slowest = decaying.min() if decaying.size else 1.0
        return max(2000.0, 40.0 / slowest)


def _initial_vec(initial) -> np.ndarray:
    initial = np.asarray(initial, dtype=complex)
    rho = to_matrix(initial) if initial.shape == (15,) else initial.reshape(_N, _N)
    return rho.reshape(-1).copy()


def integrate(params: SystemParams, config: IntegrationConfig, initial, sample_times, as_matrix: bool = False) -> np.ndarray:
    """Integrate from ``t = 0`` and return R(t) (15 components) at ``sample_times``.

    Plain step-by-step RK4; the last step onto each sample time is shortened
    as needed. With ``as_matrix`` the full 4x4 density matrices are returned
    instead. Use :func:`oracle_susceptibility` for long quasi-steady runs.
    """
    prob = _Problem(params, config)
    h, _ = prob.step_size()
    times = np.asarray(sample_times, dtype=float)
    if np.any(np.diff(times) < 0) or (times.size and times[0] < 0):
        raise ValueError("sample_times must be non-negative and sorted")
    state = _initial_vec(initial)
    t = 0.0
    out = np.empty((times.size, _N, _N) if as_matrix else (times.size, 15), dtype=complex)
    for k, target in enumerate(times):
        while t < target - 1e-12:
            step = min(h, target - t)
            state = _rk4_step_map(prob.generator, t, step, state)
            t += step
            if not np.all(np.isfinite(state)):
                raise IntegrationError(f"state diverged at t={t:.6g}")
        rho = state.reshape(_N, _N)
        out[k] = rho if as_matrix else from_matrix(rho)
    return out


def extract_harmonic(samples, times, m: int, delta_beat: float, phi: float) -> complex:
    """Fourier projection ``(1/T) int x(t) e^{+i m (D t + phi)} dt`` by the trapezoid rule.

    ``times`` must be uniform and span a whole number of beat periods
    (any span is accepted when ``delta_beat == 0`` and ``m == 0``).
    """
    samples = np.asarray(samples)
    times = np.asarray(times, dtype=float)
    span = times[-1] - times[0]
    if span <= 0:
        raise ValueError("extraction window must have positive length")
    if delta_beat != 0:
        periods = span * abs(delta_beat) / (2 * math.pi)
        if abs(periods - round(periods)) > 1e-6 or round(periods) < 1:
            raise ValueError(f"window spans {periods:.6f} beat periods, not an integer number")
    elif m != 0:
        raise ValueError("only the m = 0 component is defined without a beat frequency")
    weights = np.exp(1j * m * (delta_beat * times + phi))
    return complex(np.trapezoid(samples * weights, times) / span)


@dataclass(frozen=True)
class OracleResult:
    chi: complex
    window_times: np.ndarray
    window_rho21: np.ndarray
    dt: float
    transient_time: float


def quasi_steady_run(params: SystemParams, config: IntegrationConfig = IntegrationConfig(), initial=None) -> OracleResult:
    """Integrate through the transient and record rho_21 over the extraction window.

    For a driven system the RK4 map over one beat period is assembled once
    (columns of the identity propagated together) and then raised to the
    number of transient periods; this is the same affine recursion as
    stepping the state, only batched.
    """
    prob = _Problem(params, config)
    h, steps = prob.step_size()
    if initial is None:
        initial = np.zeros(15, dtype=complex)
        initial[0] = 1.0
    state = _initial_vec(initial)

    if steps is None:
        # no beat: constant generator, plain long-time average over 100 time units
        window = 100.0
        transient = prob.transient_time()
        nsteps_transient = math.ceil(transient / h)
        step_map = _rk4_step_map(prob.generator, 0.0, h, np.eye(_N * _N, dtype=complex))
        state = np.linalg.matrix_power(step_map, nsteps_transient) @ state
        nwin = math.ceil(window / h)
        h = window / nwin
        step_map = _rk4_step_map(prob.generator, 0.0, h, np.eye(_N * _N, dtype=complex))
        rows = [state]
        for _ in range(nwin):
            state = step_map @ state
            rows.append(state)
        times = transient + h * np.arange(nwin + 1)
        traj = np.array(rows)[:, 4]  # rho_21 is (1, 0) -> row-major index 4
        chi = extract_harmonic(traj, times, 0, 0.0, prob.phi)
        return OracleResult(chi, times, traj, h, transient)

    # period map: propagate identity through one beat period
    prop = np.eye(_N * _N, dtype=complex)
    for k in range(steps):
        prop = _rk4_step_map(prob.generator, k * h, h, prop)
    period = steps * h
    multipliers = np.abs(np.linalg.eigvals(prop))
    with np.errstate(divide="ignore"):
        transient = prob.transient_time(-np.log(multipliers) / period)
    n_periods = math.ceil(transient / period)
    state = np.linalg.matrix_power(prop, n_periods) @ state
    if not np.all(np.isfinite(state)):
        raise IntegrationError("state diverged during transient")
    t0 = n_periods * period

    nwin = steps * config.extraction_periods
    rows = np.empty(nwin + 1, dtype=complex)
    rows[0] = state[4]
    for k in range(nwin):
        # generator is periodic, so local time k*h reproduces t0 + k*h
        state = _rk4_step_map(prob.generator, k * h, h, state)
        rows[k + 1] = state[4]
    times = t0 + h * np.arange(nwin + 1)
    chi = extract_harmonic(rows, times, 0, prob.beat, prob.phi)
    return OracleResult(chi, times, rows, h, transient)


def oracle_susceptibility(
    params: SystemParams,
    config: IntegrationConfig = IntegrationConfig(),
    initial=None,
    prefactor: float = 1.0,
    probe_reference: float = PROBE_REFERENCE,
) -> complex:
    """Susceptibility from the zero harmonic of the integrated rho_21 (all orders in ``omega_s2``)."""
    scale = probe_prefactor(params.omega_p, prefactor, probe_reference)
    return scale * quasi_steady_run(params, config, initial).chi
