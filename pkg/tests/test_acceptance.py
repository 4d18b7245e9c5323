"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are repeated
in an "acceptance criteria" section at the end of the pytest output.
"""

import numpy as np
import pytest

from darkfloquet import (
    FIG2,
    FIG3,
    FIG4,
    SolverConfig,
    build_liouvillian,
    find_features,
    oracle_susceptibility,
    reconstruct,
    residual_bound,
    residual_check,
    solve_hierarchy,
    solve_zeroth,
    susceptibility,
    sweep,
)
from darkfloquet.cli import bundled_configs, main
from darkfloquet.model import to_matrix, transpose_permutation

from helpers import report

FEATURE_POINTS = (-0.2, 0.0, 0.2, 1.0, 4.0)


def _slope_at(result, x0):
    x = result.delta_p
    chi_re = result.chi.real
    k = int(np.argmin(np.abs(x - x0)))
    return (chi_re[k + 1] - chi_re[k - 1]) / (x[k + 1] - x[k - 1])


def _value_at(result, x0):
    return result.chi[int(np.argmin(np.abs(result.delta_p - x0)))]


def _flags(checks):
    return "; ".join(f"{name} {'ok' if ok else 'FAILED'}" for name, ok in checks)


def test_criterion_1_fig2():
    res = sweep(FIG2)
    feats = find_features(res)
    top = sorted(e.delta_p for e in feats.dominant_maxima(2))
    peak = max(e.chi_im for e in feats.dominant_maxima(2))
    dip = _value_at(res, 0.0).imag
    slope = _slope_at(res, 0.0)
    checks = [
        ("two maxima at +-4", len(feats.maxima) == 2 and abs(top[0] + 4) <= 0.5 and abs(top[1] - 4) <= 0.5),
        ("dip <= 0.05*peak", dip <= 0.05 * peak),
        ("slope(0) > 0", slope > 0),
    ]
    ok = all(c for _, c in checks)
    detail = (f"maxima at {top[0]:+.3f}, {top[1]:+.3f}; chi''(0)/peak = {dip / peak:.4f} (limit 0.05); "
              f"slope(0) = {slope:+.3e}; {_flags(checks)}")
    assert report(1, "Fig. 2 reproduction", ok, detail)


def test_criterion_2_fig3():
    res = sweep(FIG3)
    inner = sorted(e.delta_p for e in find_features(res).maxima if abs(e.delta_p) < 1)
    spikes = [_slope_at(res, x) for x in (-0.2, 0.2)]
    centre = _slope_at(res, 0.0)
    checks = [
        ("maxima at +-0.2", len(inner) == 2 and abs(inner[0] + 0.2) <= 0.05 and abs(inner[1] - 0.2) <= 0.05),
        ("spike slopes < 0", all(s < 0 for s in spikes)),
        ("slope(0) > 0", centre > 0),
    ]
    ok = all(c for _, c in checks)
    detail = (f"inner maxima {inner}; spike slopes {spikes[0]:+.3e}, {spikes[1]:+.3e}; "
              f"slope(0) = {centre:+.3e}; {_flags(checks)}")
    assert report(2, "Fig. 3 reproduction", ok, detail)


def test_criterion_3_fig4():
    res = sweep(FIG4)
    gains = [_value_at(res, x).imag for x in (-0.2, 0.2)]
    centre = _slope_at(res, 0.0)
    ok = all(g < 0 for g in gains) and centre < 0
    detail = f"chi''(-0.2) = {gains[0]:+.3e}, chi''(0.2) = {gains[1]:+.3e}; slope(0) = {centre:+.3e}"
    assert report(3, "Fig. 4 reproduction", ok, detail)


def test_criterion_4_fig5_trend():
    heights = {x: [] for x in (-0.2, 0.2)}
    for r in (0.0, 0.009, 0.03):
        res = sweep(FIG3.replace(r=r))
        for x in heights:
            heights[x].append(_value_at(res, x).imag)
    ok = all(h[0] > h[1] > h[2] and h[0] > 0 and h[2] < 0 for h in heights.values())
    detail = "; ".join(
        f"chi''({x:+.1f}) over r=0,0.009,0.03: " + ", ".join(f"{v:+.3e}" for v in h) for x, h in heights.items()
    )
    assert report(4, "Fig. 5 trend", ok, detail)


@pytest.mark.slow
def test_criterion_5_oracle_equivalence():
    diffs = {}
    for s2 in (0.2, 0.1):
        for x in FEATURE_POINTS:
            p = FIG3.replace(omega_s2=s2, delta_p=x)
            diffs[s2, x] = abs(susceptibility(p) - oracle_susceptibility(p))
    worst = {s2: max(diffs[s2, x] for x in FEATURE_POINTS) for s2 in (0.2, 0.1)}
    ratios = {x: diffs[0.2, x] / diffs[0.1, x] for x in FEATURE_POINTS}
    checks = [
        ("<= 5e-4 at 0.2", worst[0.2] <= 5e-4),
        ("<= 1e-5 at 0.1", worst[0.1] <= 1e-5),
        ("ratio in [32, 128] at every point", all(32 <= r <= 128 for r in ratios.values())),
    ]
    ok = all(c for _, c in checks)
    per_point = ", ".join(
        f"{x:g}: {diffs[0.2, x]:.2e}/{diffs[0.1, x]:.2e} (ratio {ratios[x]:.1f})" for x in FEATURE_POINTS
    )
    detail = (f"max |diff| {worst[0.2]:.3e} (s2=0.2), {worst[0.1]:.3e} (s2=0.1); "
              f"per point {per_point}; {_flags(checks)}")
    assert report(5, "oracle equivalence", ok, detail)


def test_criterion_6_linear_algebra_contracts():
    zeroth, within, trace_err = 0.0, True, 0.0
    rng = np.random.default_rng(6)
    for x in FEATURE_POINTS:
        parts = build_liouvillian(FIG3.replace(delta_p=x))
        zeroth = max(zeroth, float(np.max(np.abs(parts.m0 @ solve_zeroth(parts) - parts.sigma0))))
        sol = solve_hierarchy(parts)
        times = np.linspace(0, 2 * np.pi / abs(parts.delta_beat), 33)
        res = residual_check(sol, parts, FIG3.omega_s2, FIG3.phi, times)
        within &= res <= residual_bound(sol, parts, FIG3.omega_s2) * (1 + 1e-9) + 1e-12
        for t in rng.uniform(0, 500, size=20):
            rho = to_matrix(reconstruct(sol, FIG3.omega_s2, FIG3.phi, t))
            trace_err = max(trace_err, abs(np.trace(rho) - 1))
    ok = zeroth <= 1e-10 and within and trace_err <= 1e-9
    detail = (f"max zeroth-order residual {zeroth:.2e} (<= 1e-10); hierarchy residual within budget: {within}; "
              f"max |trace - 1| {trace_err:.2e} (<= 1e-9)")
    assert report(6, "linear-algebra contracts", ok, detail)


@pytest.mark.slow
def test_criterion_7_property_suites():
    perm = transpose_permutation()
    pairing = phase = orders = True
    weak = 0.0
    for x in FEATURE_POINTS:
        p = FIG3.replace(delta_p=x)
        parts = build_liouvillian(p)
        sol = solve_hierarchy(parts)
        pairing &= all(
            np.max(np.abs(vec[perm] - np.conj(sol[(n, -m)]))) <= 1e-13 for (n, m), vec in sol.coefficients.items()
        )
        chi = susceptibility(p)
        phase &= all(susceptibility(p.replace(phi=phi)) == chi for phi in (1.0, 2.5))
        low = solve_hierarchy(parts, SolverConfig(max_order=3))
        orders &= all(np.array_equal(vec, sol[key]) for key, vec in low.coefficients.items())
        half = susceptibility(p.replace(omega_p=0.005))
        weak = max(weak, abs(chi.real - half.real) / abs(chi), abs(chi.imag - half.imag) / abs(chi))

    base = oracle_susceptibility(FIG3.replace(delta_p=0.2))
    oracle_phase = abs(oracle_susceptibility(FIG3.replace(delta_p=0.2, phi=1.0)) - base)

    res = sweep(FIG3)
    mirror_im = np.max(np.abs(res.chi.imag - res.chi.imag[::-1]))
    mirror_re = np.max(np.abs(res.chi.real + res.chi.real[::-1]))
    mirror = max(mirror_im, mirror_re)
    # the exact (integrated) spectrum, for comparison with the truncated one
    oracle_mirror = abs(base + np.conj(oracle_susceptibility(FIG3.replace(delta_p=-0.2))))

    checks = [
        ("Hermitian pairing", pairing),
        ("phi bit-exact", phase),
        ("oracle phi <= 1e-7", oracle_phase <= 1e-7),
        ("mirror <= 1e-8", mirror <= 1e-8),
        ("weak probe <= 1e-3", weak <= 1e-3),
        ("order consistency", orders),
    ]
    ok = all(c for _, c in checks)
    detail = (f"{_flags(checks)}; mirror asymmetry {mirror:.2e} (oracle at 0.2: {oracle_mirror:.1e}); "
              f"weak-probe relative change {weak:.2e}; oracle phi change {oracle_phase:.1e}")
    assert report(7, "property suites", ok, detail)


def test_criterion_8_determinism(tmp_path):
    identical = []
    for name in bundled_configs():
        outputs = []
        for run in ("a", "b"):
            folder = tmp_path / run
            folder.mkdir(exist_ok=True)
            assert main(["sweep", "--config", name, "--out", str(folder / f"{name[:-4]}.csv")]) == 0
        for path in sorted((tmp_path / "a").glob(f"{name[:-4]}*.csv")):
            outputs.append(path.read_bytes() == (tmp_path / "b" / path.name).read_bytes())
        identical.append((name, bool(outputs) and all(outputs)))
    ok = all(same for _, same in identical)
    detail = ", ".join(f"{name} {'identical' if same else 'DIFFERS'}" for name, same in identical)
    assert report(8, "determinism", ok, detail)
