import cmath
import math
import random

import pytest

from hexcircle import painleve
from hexcircle.painleve import (PainleveState, SectorTag, dpii_step,
                                run_trajectory, sector_of, shoot, x0_closed)


def test_x0_closed():
    assert x0_closed(1.0, 1.1) == pytest.approx(cmath.exp(1j * 0.55))
    assert x0_closed(1.5, math.pi / 3) == pytest.approx(cmath.exp(1j * math.pi / 4))
    for c in (0.1, 0.7, 1.3, 1.9):
        beta = cmath.phase(x0_closed(c, 1.0))
        assert 0 < beta < 1.0


def test_sector_of():
    alpha = math.pi / 3
    assert sector_of(cmath.exp(1j * alpha / 2), alpha) is SectorTag.A_I
    assert sector_of(cmath.exp(1j * (alpha + 0.1)), alpha) is SectorTag.A_II
    assert sector_of(cmath.exp(-0.1j), alpha) is SectorTag.A_IV
    assert sector_of(cmath.exp(1j * (alpha - math.pi - 0.2)), alpha) is SectorTag.A_III
    assert sector_of(1.0, alpha) is SectorTag.BOUNDARY_LOW


def test_fixed_point_c1_per_step_residual():
    alpha = 2 * math.pi / 5
    u = cmath.exp(1j * alpha / 2)
    eps = cmath.exp(1j * alpha)
    for n in range(0, 30):
        out = dpii_step(PainleveState(n=n, x_prev=u, x_cur=u, c=1.0, epsilon=eps))
        assert abs(out - u) <= 1e-13


def test_boundary_continuity_values():
    alpha = math.pi / 3
    eps = cmath.exp(1j * alpha)
    rng = random.Random(2)
    for n in (1, 3, 7):
        u = cmath.exp(1j * rng.uniform(0.05, alpha - 0.05))
        hi = dpii_step(PainleveState(n=n, x_prev=u, x_cur=eps, c=1.3, epsilon=eps))
        assert abs(hi - (-1)) <= 1e-12
        lo = dpii_step(PainleveState(n=n, x_prev=u, x_cur=1.0, c=1.3, epsilon=eps))
        assert abs(lo - (-eps)) <= 1e-12


def test_one_step_reachability_never_a_iii():
    rng = random.Random(13)
    for _ in range(300):
        alpha = rng.uniform(0.3, 2.6)
        c = rng.uniform(0.1, 1.9)
        n = rng.randint(1, 12)
        eps = cmath.exp(1j * alpha)
        u = cmath.exp(1j * rng.uniform(1e-6, alpha - 1e-6))
        v = cmath.exp(1j * rng.uniform(1e-6, alpha - 1e-6))
        try:
            out = dpii_step(PainleveState(n=n, x_prev=u, x_cur=v, c=c, epsilon=eps))
        except painleve.StepSingularError:
            continue
        assert sector_of(out, alpha) is not SectorTag.A_III


def test_separatrix_stays_at_double_for_measured_horizon():
    # alpha = 3*pi/5 keeps the per-step amplification low enough for 25+
    # double-precision steps (smaller angles drift out earlier)
    c, alpha = 1.5, 3 * math.pi / 5
    traj = run_trajectory(c, alpha, c * alpha / 2, 30)
    assert traj.steps_in_sector() >= 25
    assert traj.max_unitarity_drift <= 1e-12


def test_separatrix_extended_horizon():
    c, alpha = 1.5, 3 * math.pi / 5
    traj = run_trajectory(c, alpha, c * alpha / 2, 60, dps=60)
    assert traj.steps_in_sector() >= 60


def test_perturbed_start_exits_both_sides():
    c, alpha = 1.5, math.pi / 3
    up = run_trajectory(c, alpha, c * alpha / 2 + 1e-3, 60)
    dn = run_trajectory(c, alpha, c * alpha / 2 - 1e-3, 60)
    assert not up.stayed and not dn.stayed
    assert up.exit_sector is SectorTag.A_II
    assert dn.exit_sector is SectorTag.A_IV


def test_trajectory_against_pattern_boundary_ratio():
    # x_n^2 equals the ratio of boundary edge vectors of the evolved map
    import hexcircle as hc
    c, alpha = 1.4, math.pi / 3
    params = hc.PatternParams(alphas=((math.pi - alpha) / 2,) * 2 + (alpha,), c=c)
    zf = hc.generate_z(params, 9)
    traj = run_trajectory(c, alpha, c * alpha / 2, 4)
    for n in range(4):
        num = complex(zf[(n, 0, -n - 1)] - zf[(n, 0, -n)])
        den = complex(zf[(n + 1, 0, -n)] - zf[(n, 0, -n)])
        x = cmath.sqrt(num / den)
        assert abs(x - cmath.exp(1j * traj.betas[n])) <= 1e-10


def test_shoot_bracket_contains_closed_form_angle():
    for c in (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75):
        for alpha in (math.pi / 6, math.pi / 4, math.pi / 3, 2 * math.pi / 5):
            lo, hi = shoot(c, alpha, 8, 1e-5)
            target = c * alpha / 2
            assert lo <= target <= hi
            assert hi - lo <= 1e-5 + 1e-12


def test_shoot_c1_collapses_on_alpha_half():
    lo, hi = shoot(1.0, math.pi / 3, 10, 1e-6)
    assert lo <= math.pi / 6 <= hi
    assert hi - lo <= 1e-6 + 1e-12


def test_shoot_width_shrinks_with_stay_requirement():
    # with a loose width target the bracket size is driven by the nested
    # stay requirement alone and must shrink as the stay count grows
    c, alpha = 1.5, math.pi / 3
    widths = []
    for n_stay in (4, 8, 13):
        lo, hi = shoot(c, alpha, n_stay, tol=1.0)
        widths.append(hi - lo)
    assert widths[0] > widths[1] > widths[2] > 0


def test_run_trajectory_rejects_bad_start():
    with pytest.raises(ValueError):
        run_trajectory(1.3, math.pi / 3, -0.5, 10)
