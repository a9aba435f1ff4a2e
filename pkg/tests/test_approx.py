import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsselect import (
    Infeasible,
    NonPositiveEpsilon,
    Status,
    error_bound,
    exhaustive_search,
    harness,
    make_instance,
    scale_costs,
    solve_dp,
    solve_dpaa,
    to_linear_form,
)
from gsselect.approx import is_exact_regime

from conftest import brute_force, instances, random_instance


def paper_costs():
    return [math.ceil(k / 5) for k in range(1, 26)]


def test_scale_costs_paper_setup():
    inst = make_instance(paper_costs(), [0.5] * 25, 1e-4)
    sc = scale_costs(inst, 0.1)
    assert sc.theta == pytest.approx(0.02)
    assert list(sc.scaled) == [50 * c for c in paper_costs()]


def test_scale_costs_maximal_compression():
    inst = make_instance(paper_costs(), [0.5] * 25, 1e-4)
    assert set(scale_costs(inst, 25).scaled) == {1}


def test_scale_costs_small_example():
    sc = scale_costs(make_instance([1, 2, 3], [0.5] * 3, 0.3), 3)
    assert sc.theta == 3.0 and sc.scaled == (1, 1, 1) and sc.bound == 6


@pytest.mark.parametrize("eps", [0, -1, float("nan"), float("inf")])
def test_non_positive_epsilon(eps):
    inst = make_instance([1], [0.5], 0.5)
    with pytest.raises(NonPositiveEpsilon):
        scale_costs(inst, eps)
    with pytest.raises(NonPositiveEpsilon):
        solve_dpaa(inst, eps)
    with pytest.raises(NonPositiveEpsilon):
        error_bound(inst, eps)


def test_error_bound_examples():
    paper = make_instance(paper_costs(), [0.5] * 25, 1e-4)
    assert paper.total_cost == 75 and paper.c_max == 5
    assert error_bound(paper, 10) == 50
    assert error_bound(paper, 15) == 75
    assert error_bound(paper, 0.19) == 0
    small = make_instance([2, 2, 2, 1], [0.5] * 4, 0.3)
    assert small.total_cost == 7 and error_bound(small, 100) == 7


def test_exact_regime_boundary():
    inst = make_instance([1, 5], [0.5, 0.5], 0.3)
    assert is_exact_regime(inst, 0.19)
    assert not is_exact_regime(inst, 0.2)


def test_dpaa_paper_instances_optimal_at_small_epsilon():
    cfg = harness.paper_config(num_instances=100)
    for inst in harness.generate_instances(cfg, threshold=1e-4):
        rep = solve_dpaa(inst, 0.1)
        assert rep.status is Status.OPTIMAL and rep.bound == 0
        assert rep.objective == solve_dp(inst).objective


def test_dpaa_reports_original_cost():
    inst = make_instance([1, 2, 3], [0.5, 0.5, 0.1], 0.3)
    rep = solve_dpaa(inst, 3)
    assert rep.status is Status.APPROXIMATE and rep.bound == 6 and rep.epsilon == 3
    assert rep.objective == rep.selection.cost
    assert rep.objective == sum(s.cost for s, z in zip(inst.sites, rep.selection.chosen) if z)


def test_dpaa_infeasible():
    with pytest.raises(Infeasible):
        solve_dpaa(make_instance([1, 1], [0.5, 0.5], 0.2), 1.0)


def test_dpaa_bound_random(rng):
    for _ in range(150):
        inst = random_instance(rng, k_max=12)
        opt, _ = brute_force(list(inst.costs), list(inst.probs), inst.threshold)
        for eps in (0.5, 1, 5):
            rep = solve_dpaa(inst, eps)
            assert 0 <= rep.objective - opt <= error_bound(inst, eps)


@settings(max_examples=150, deadline=None)
@given(instances(k_max=12), st.sampled_from([0.1, 0.5, 1, 2, 5, 10, 15]))
def test_guarantee_and_feasibility(inst, eps):
    opt = exhaustive_search(inst).objective
    rep = solve_dpaa(inst, eps)
    assert 0 <= rep.objective - opt <= error_bound(inst, eps)
    assert rep.selection.meets(to_linear_form(inst).b)


@settings(max_examples=500, deadline=None)
@given(instances(k_max=12), st.floats(0.01, 0.99))
def test_exact_regime_matches_dp(inst, frac):
    eps = frac / inst.c_max
    rep = solve_dpaa(inst, eps)
    assert rep.status is Status.OPTIMAL
    assert rep.objective == solve_dp(inst).objective


@settings(max_examples=300, deadline=None)
@given(instances(k_max=15), st.floats(0.01, 50))
def test_ceiling_bracketing_and_table_size(inst, eps):
    sc = scale_costs(inst, eps)
    for s, cs in zip(inst.sites, sc.scaled):
        assert cs >= 1
        assert s.cost <= sc.theta * cs * (1 + 1e-12)
        assert sc.theta * cs < s.cost + sc.theta
    assert list(sc.scaled) == sorted(sc.scaled)
    assert max(sc.scaled) <= math.ceil(inst.K / eps - 1e-12)
    rep = solve_dpaa(inst, eps)
    assert rep.table_cells <= (inst.K + 1) * (sum(sc.scaled) + 1)
