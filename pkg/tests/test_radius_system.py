import math
import random

import pytest

from hexcircle import lattice
from hexcircle.pattern_core import PatternParams, generate_z, isotropic_params
from hexcircle.radius_system import (PositivityViolation, border_residual,
                                     border_solve, compare_routes, dual,
                                     extract_radii, generate_radii,
                                     hex_residual, hex_solve,
                                     max_equation_residual, seeds_from_pattern,
                                     tri_residual, tri_solve, tri_solve_slot2,
                                     z2_initial)

ISO = (math.pi / 3,) * 3
DISTINCT = (0.7, 1.1, math.pi - 1.8)


@pytest.fixture(scope="module")
def oracle_field():
    params = PatternParams(alphas=DISTINCT, c=1.37)
    zf = generate_z(params, 12)
    return params, extract_radii(zf)


def test_border_solve_constant_solution():
    params = PatternParams(alphas=ISO, c=1.2)
    for rho in (0.5, 1.0, 2.5):
        for idx in (2, 3):
            assert border_solve(rho, rho, rho, idx, params) == pytest.approx(rho)


def test_border_solve_matches_oracle(oracle_field):
    params, rr = oracle_field
    for n in range(1, 5):
        got = border_solve(rr[(n, 0, -n)], rr[(n, 1, -n)], rr[(n - 1, 0, -n + 1)],
                           3, params)
        assert got == pytest.approx(rr[(n + 1, 0, -n - 1)], abs=1e-9)
        got = border_solve(rr[(0, n, -n)], rr[(1, n, -n)], rr[(0, n - 1, -n + 1)],
                           2, params)
        assert got == pytest.approx(rr[(0, n + 1, -n - 1)], abs=1e-9)


def test_border_solve_self_consistency_random():
    params = PatternParams(alphas=DISTINCT, c=0.9)
    rng = random.Random(23)
    t3 = math.cos(DISTINCT[2])
    checked = 0
    for _ in range(200):
        r, r2, r3 = (rng.uniform(0.2, 3.0) for _ in range(3))
        r1 = border_solve(r, r2, r3, 3, params)
        if r1 > 0:
            checked += 1
            assert abs(border_residual(r, r1, r2, r3, t3)) <= 1e-12 * max(r, r1, r2, r3) ** 3
    assert checked > 50


def test_hex_solve_constant_at_c1():
    for rho in (0.3, 1.0, 4.0):
        out = hex_solve(2, 1, -3, r1=rho, r3=rho, r4=rho, r5=rho, r6=rho, c=1.0)
        assert out == pytest.approx(rho)


def test_hex_solve_diagonal_recurrence():
    # label (K,K,-K-1) couples only the unknown pair: r2 = r5 (2K+c)/(2K+2-c)
    for c in (0.5, 1.5):
        for K in range(0, 4):
            out = hex_solve(K, K, -K - 1, r5=1.7, c=c)
            assert out == pytest.approx(1.7 * (2 * K + c) / (2 * K + 2 - c))
    assert hex_solve(0, 0, -1, r5=1.0, c=1.5) == pytest.approx(3.0)


def test_hex_solve_border_reduction_formula():
    # label (K,L,-K-1): r2 = r5 ((2L+c) r1 + (2K+c) r4)/((2K+2-c) r1 + (2L+2-c) r4)
    rng = random.Random(4)
    for _ in range(40):
        K, L = rng.randint(0, 5), rng.randint(0, 5)
        c = rng.uniform(0.2, 1.8)
        r1, r4, r5 = (rng.uniform(0.2, 3.0) for _ in range(3))
        got = hex_solve(K, L, -K - 1, r1=r1, r4=r4, r5=r5, c=c)
        want = r5 * ((2 * L + c) * r1 + (2 * K + c) * r4) / (
            (2 * K + 2 - c) * r1 + (2 * L + 2 - c) * r4)
        assert got == pytest.approx(want, rel=1e-12)


def test_hex_residual_on_oracle(oracle_field):
    params, rr = oracle_field
    count = 0
    for site in rr:
        label = (site[0] - 1, site[1] - 1, site[2])
        res = hex_residual(label, rr, params.c)
        if res is not None:
            count += 1
            assert abs(res) <= 1e-9
    assert count > 50


def test_tri_solve_values():
    params = PatternParams(alphas=ISO, c=1.0)
    assert tri_solve(2.0, 2.0, 2.0, params) == pytest.approx(2.0)
    assert tri_solve(1.0, 2.0, 3.0, params) == pytest.approx(11 / 6)


def test_tri_solve_positive_for_positive_inputs():
    params = PatternParams(alphas=DISTINCT, c=1.1)
    rng = random.Random(31)
    for _ in range(300):
        r1, r2, r3 = (rng.uniform(1e-3, 10.0) for _ in range(3))
        assert tri_solve(r1, r2, r3, params) > 0


def test_tri_relations_on_oracle(oracle_field):
    params, rr = oracle_field
    hits = 0
    for (K, L, M) in rr:
        minus = [(K, L - 1, M), (K, L, M - 1), (K - 1, L, M)]
        if all(s in rr for s in minus):
            hits += 1
            r1, r2, r3 = (rr[s] for s in minus)
            assert abs(tri_residual(rr[(K, L, M)], r1, r2, r3, params)) <= 1e-8
            # slot-2 rearrangement used by the fill
            assert tri_solve_slot2(rr[(K, L, M)], r1, r3, params) == pytest.approx(
                r2, abs=1e-8)
    assert hits > 30


def test_generate_radii_c1_unit():
    rf = generate_radii(isotropic_params(1.0), 8)
    for v in rf.values.values():
        assert v == pytest.approx(1.0, abs=1e-12)


def test_generate_radii_positive_and_tagged():
    rf = generate_radii(isotropic_params(1.5), 10)
    assert all(v > 0 for v in rf.values.values())
    assert rf.generation == 10


def test_generate_radii_matches_oracle_shallow_double():
    worst, count = compare_routes(isotropic_params(1.2), 4)
    assert count > 20
    assert worst <= 1e-10


def test_generate_radii_matches_oracle_deep():
    worst, count = compare_routes(isotropic_params(1.5), 8)
    assert count > 60
    assert worst <= 1e-8


def test_diagonal_recurrence_on_field(oracle_field):
    # the (K,K,-K) diagonal corresponds to the third coordinate axis of the
    # vertex lattice, so it is visible through the evolved-map radii
    params, rr = oracle_field
    c = params.c
    for K in range(0, 5):
        ratio = rr[(K + 1, K + 1, -K - 1)] / rr[(K, K, -K)]
        assert ratio == pytest.approx((2 * K + c) / (2 * K + 2 - c), abs=1e-10)
    rf = generate_radii(isotropic_params(1.5), 8)
    assert rf.values[(1, 1, -1)] / rf.values[(0, 0, 0)] == pytest.approx(
        1.5 / 0.5, rel=1e-12)


def test_perturbed_seed_breaks_positivity():
    params = isotropic_params(1.5)
    seeds = seeds_from_pattern(params)
    for fac in (1 + 1e-3, 1 - 1e-3):
        bad = dict(seeds)
        bad[(1, 0, -1)] = seeds[(1, 0, -1)] * fac
        with pytest.raises(PositivityViolation) as err:
            generate_radii(params, 16, seeds=bad)
        assert err.value.site is not None


def test_seed_ratio_matches_closed_form():
    from hexcircle.riccati import RiccatiParams, p0_closed
    params = PatternParams(alphas=DISTINCT, c=1.37)
    seeds = seeds_from_pattern(params)
    assert seeds[(1, 0, -1)] / seeds[(0, 0, 0)] == pytest.approx(
        p0_closed(RiccatiParams(c=1.37, alpha=DISTINCT[2])), abs=1e-12)
    assert seeds[(0, 1, -1)] / seeds[(0, 0, 0)] == pytest.approx(
        p0_closed(RiccatiParams(c=1.37, alpha=DISTINCT[1])), abs=1e-12)


def test_z2_initial_values():
    params = PatternParams(alphas=ISO, c=2.0)
    seeds = z2_initial(params)
    assert seeds[(0, 0, 0)] == 0
    assert seeds[(1, 0, -1)] == pytest.approx(math.sin(math.pi / 3) / (math.pi / 3))
    assert seeds[(1, 0, -1)] == pytest.approx(0.8269933431326881)
    assert seeds[(1, 1, -1)] == 1.0
    aniso = PatternParams(alphas=(math.pi / 2, math.pi / 4, math.pi / 4), c=2.0)
    s2 = z2_initial(aniso)
    assert s2[(1, 0, -1)] == pytest.approx(s2[(0, 1, -1)])


def test_z2_field_positive_and_equations():
    params = PatternParams(alphas=ISO, c=2.0)
    rf = generate_radii(params, 10)
    assert all(v >= 0 for v in rf.values.values())
    zero_sites = [s for s, v in rf.values.items() if v == 0]
    assert zero_sites == [(0, 0, 0)]
    assert max_equation_residual(rf) <= 1e-9


def test_dual_involution_and_log():
    params = PatternParams(alphas=ISO, c=2.0)
    rf = generate_radii(params, 8)
    lg = dual(rf)
    assert lg.params.c == 0.0
    assert lg.pole_sites == ((0, 0, 0),)
    assert all(v > 0 for s, v in lg.values.items() if s != (0, 0, 0))
    assert max_equation_residual(lg) <= 1e-9
    back = dual(lg)
    assert back.params.c == 2.0
    for s, v in rf.values.items():
        if math.isinf(v):
            assert math.isinf(back.values[s])
        else:
            assert back.values[s] == pytest.approx(v, rel=1e-14, abs=1e-300)


def test_dual_maps_c_system_to_complement():
    rf = generate_radii(isotropic_params(0.75), 7)
    dl = dual(rf)
    assert dl.params.c == pytest.approx(1.25)
    assert max_equation_residual(dl) <= 1e-9


def test_equation_residuals_small_on_generated_field():
    rf = generate_radii(PatternParams(alphas=DISTINCT, c=1.37), 8)
    assert max_equation_residual(rf) <= 1e-10


def test_stencil_types_and_arities():
    from hexcircle.lattice import fill_order, TAG_SEED
    from hexcircle.radius_system import StencilType, stencil_type_for
    assert StencilType.TYPE_III.arity == 6
    for t in (StencilType.TYPE_I, StencilType.TYPE_II, StencilType.TYPE_IV):
        assert t.arity == 3
    for entry in fill_order(5):
        if entry.tag == TAG_SEED:
            continue
        st = stencil_type_for(entry.tag, entry.site)
        assert isinstance(st, StencilType)
        if entry.tag == "border":
            assert st in (StencilType.TYPE_I, StencilType.TYPE_II)
