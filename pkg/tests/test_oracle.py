import math

import numpy as np
import pytest

from darkfloquet import (
    FIG3,
    FIG4,
    INDEX,
    IntegrationConfig,
    IntegrationError,
    SystemParams,
    build_liouvillian,
    extract_harmonic,
    integrate,
    oracle_susceptibility,
    quasi_steady_run,
    solve_zeroth,
    susceptibility,
)
from darkfloquet.model import PROBE_INDEX

# Fig. 3 parameters, omega_s2 = 0.2. Frozen after a convergence study: halving dt and
# doubling the transient each changed every value by < 4e-12 relative.
GOLDEN_FIG3 = {
    -0.2: 5.0449877907262204e-05 + 0.005098529680906627j,
    0.0: 3.2490882826286023e-18 + 0.0005630077856047946j,
    0.2: -5.0449877907280154e-05 + 0.005098529680906572j,
    1.0: 0.0005650462315969579 + 0.00062637961745412j,
    4.0: -0.0019020259492465313 + 0.010204072181670293j,
}


@pytest.fixture(scope="module")
def fig3_runs():
    return {x: quasi_steady_run(FIG3.replace(delta_p=x)) for x in (0.2,)}


# -- integrate ----------------------------------------------------------------

def test_single_exponential_decay():
    p = SystemParams(gamma_21=0.37, gamma_32=0.2, gamma_34=0.1, gamma_41=0.05)
    initial = np.zeros(15, dtype=complex)
    initial[INDEX[(2, 2)]] = 1.0
    (R,) = integrate(p, IntegrationConfig(dt=1e-3), initial, [1.0])
    assert abs(R[INDEX[(2, 2)]] - math.exp(-0.37)) <= 1e-8


def test_relaxes_to_static_steady_state():
    p = FIG3.replace(omega_s2=0.0, delta_p=0.5, gamma_41=0.2)
    initial = np.zeros(15, dtype=complex)
    initial[INDEX[(4, 4)]] = 1.0
    (R,) = integrate(p, IntegrationConfig(dt=0.01), initial, [400.0])
    np.testing.assert_allclose(R, solve_zeroth(build_liouvillian(p)), atol=1e-8)


def test_trace_conserved_along_trajectory():
    initial = np.zeros(15, dtype=complex)
    initial[0] = 1.0
    times = np.linspace(0, 20, 41)
    rhos = integrate(FIG3.replace(delta_p=0.2), IntegrationConfig(), initial, times, as_matrix=True)
    traces = np.trace(rhos, axis1=1, axis2=2)
    assert np.max(np.abs(traces - 1)) <= 1e-8
    assert np.max(np.abs(rhos - rhos.conj().transpose(0, 2, 1))) <= 1e-12


def test_coarse_step_rejected():
    with pytest.raises(IntegrationError, match="too coarse"):
        integrate(FIG3.replace(delta_p=4.0), IntegrationConfig(dt=0.1), np.eye(4) / 4, [1.0])


def test_config_validation():
    with pytest.raises(ValueError):
        IntegrationConfig(dt=0)
    with pytest.raises(ValueError):
        IntegrationConfig(extraction_periods=0)


# -- extract_harmonic --------------------------------------------------------

def test_constant_trajectory_zero_harmonic():
    beat = 0.4
    t = np.linspace(0, 2 * 2 * np.pi / beat, 801)
    c = 0.3 - 0.7j
    assert extract_harmonic(np.full(t.size, c), t, 0, beat, 0.5) == pytest.approx(c, abs=1e-15)


@pytest.mark.parametrize("m", [1, -1])
def test_constant_trajectory_side_harmonics_vanish(m):
    beat = -0.4
    t = np.linspace(0, 3 * 2 * np.pi / abs(beat), 1201)
    assert abs(extract_harmonic(np.full(t.size, 1.0 + 0j), t, m, beat, 0.2)) <= 1e-10


def test_projection_recovers_harmonic():
    beat, phi = 0.4, 0.3
    t = np.linspace(0, 2 * np.pi / beat, 2001)
    x = 0.5 + (0.2 - 0.1j) * np.exp(-1j * (beat * t + phi)) + 0.05 * np.exp(2j * (beat * t + phi))
    assert extract_harmonic(x, t, 1, beat, phi) == pytest.approx(0.2 - 0.1j, abs=1e-12)
    assert extract_harmonic(x, t, -2, beat, phi) == pytest.approx(0.05, abs=1e-12)


def test_window_must_span_whole_periods():
    t = np.linspace(0, 10.0, 101)
    with pytest.raises(ValueError, match="beat periods"):
        extract_harmonic(np.ones(101), t, 0, 0.4, 0.0)


# -- oracle_susceptibility --------------------------------------------------

def test_no_second_field_matches_static_solution():
    p = FIG3.replace(omega_s2=0.0, delta_p=0.2)
    chi = oracle_susceptibility(p, IntegrationConfig(dt=0.01))
    assert abs(chi - solve_zeroth(build_liouvillian(p))[PROBE_INDEX]) <= 1e-7


def test_degenerate_sidebands_fall_back_to_averaging():
    p = FIG3.replace(delta_s2=FIG3.delta_s1, delta_p=0.1)
    res = quasi_steady_run(p, IntegrationConfig(dt=0.01, transient_time=3000.0))
    assert res.window_times[-1] - res.window_times[0] == pytest.approx(100.0)
    assert np.isfinite(res.chi)


def test_gain_with_pump():
    assert oracle_susceptibility(FIG4.replace(delta_p=0.2)).imag < 0


@pytest.mark.slow
@pytest.mark.parametrize("delta_p", sorted(GOLDEN_FIG3))
def test_golden_values(delta_p):
    chi = oracle_susceptibility(FIG3.replace(delta_p=delta_p))
    assert abs(chi - GOLDEN_FIG3[delta_p]) <= 1e-9 * abs(GOLDEN_FIG3[delta_p])


def test_golden_values_agree_with_floquet():
    for x, chi in GOLDEN_FIG3.items():
        assert abs(susceptibility(FIG3.replace(delta_p=x)) - chi) <= 5e-4


@pytest.mark.slow
def test_self_convergence_in_step(fig3_runs):
    base = fig3_runs[0.2].chi
    fine = oracle_susceptibility(FIG3.replace(delta_p=0.2), IntegrationConfig(dt=5e-4))
    assert abs(fine - base) <= 1e-6 * abs(base)


@pytest.mark.slow
def test_initial_state_independence(fig3_runs):
    initial = np.zeros(15, dtype=complex)
    initial[INDEX[(2, 2)]] = 0.5
    initial[INDEX[(4, 4)]] = 0.5
    other = oracle_susceptibility(FIG3.replace(delta_p=0.2), initial=initial)
    base = fig3_runs[0.2].chi
    assert abs(other - base) <= 1e-6 * abs(base)


@pytest.mark.slow
def test_phase_invariance_of_zero_harmonic(fig3_runs):
    base = fig3_runs[0.2].chi
    for phi in (1.0, 2.5):
        assert abs(oracle_susceptibility(FIG3.replace(delta_p=0.2, phi=phi)) - base) <= 1e-7


@pytest.mark.slow
def test_mirror_symmetry_of_exact_spectrum():
    """Reflecting the probe detuning swaps the roles of the two perturbing fields."""
    for x in (0.2, 1.0):
        a = oracle_susceptibility(FIG3.replace(delta_p=x))
        b = oracle_susceptibility(FIG3.replace(delta_p=-x))
        assert abs(a.imag - b.imag) <= 1e-8
        assert abs(a.real + b.real) <= 1e-8
