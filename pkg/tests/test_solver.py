import random

import pytest

from conftest import random_problem
from reconf import house
from reconf.costing import SCENARIO_A, SCENARIO_B, CostModel, config_cost
from reconf.facts import serialize
from reconf.loaders import solution_facts
from reconf.model import Configuration, Instance, LegacyConfiguration, derive_actions, derive_bounds, make_problem
from reconf.oracle import brute_force_reconfiguration
from reconf.solver import Search, SearchBudget, Status, solve_configuration, solve_reconfiguration
from reconf.validator import check_configuration, check_reconfiguration

CREATION = CostModel({"cabinetCost": 1, "roomCost": 5, "personTOroomCost": 1})
ZERO = CostModel({})


def one_person(n, **kw):
    owner = {t: 1 for t in range(2, 2 + n)}
    return derive_bounds(Instance(persons=frozenset({1}), things=frozenset(owner), owner=owner, **kw))


def test_initial_instance(house_instance):
    res = solve_configuration(house_instance, CREATION)
    assert res.status == Status.OPTIMAL
    config = res.best.config
    assert len(config.cabinets) == 2 and len(config.rooms) == 2
    assert sorted(len(config.things_in(c)) for c in config.cabinets) == [1, 5]
    assert check_configuration(house_instance, config).valid


def test_single_thing():
    inst = one_person(1)
    res = solve_configuration(inst, CREATION)
    assert res.status == Status.OPTIMAL
    assert res.best.cost.total == 1 + 5 + 1
    assert res.best.config.cabinet_things == {(3, 2)}


def test_six_things_need_two_cabinets():
    res = solve_configuration(one_person(6), CREATION)
    assert len(res.best.config.cabinets) == 2
    assert len(res.best.config.rooms) == 1


def test_scenario_a(house_problem):
    res = solve_reconfiguration(house_problem, SCENARIO_A)
    assert res.status == Status.OPTIMAL
    config = res.best.config
    assert res.best.cost.total == 11
    assert config.high >= {9, 10}
    assert (9, 21) in config.cabinet_things
    new = config.cabinets - {9, 10}
    assert len(new) == 1 and new <= config.small
    assert check_reconfiguration(house_problem, config, res.best.actions).valid


def test_scenario_b(house_problem):
    res = solve_reconfiguration(house_problem, SCENARIO_B)
    assert res.status == Status.OPTIMAL
    config = res.best.config
    assert res.best.cost.total == 4
    new = config.cabinets - {9, 10}
    assert len(new) == 2 and new <= config.high
    assert {9, 10} <= config.cabinets
    assert not any(a.predicate == "cabinet" for a in res.best.actions.delete)


def test_all_optima_match_the_oracle(house_problem):
    for model in (SCENARIO_A, SCENARIO_B):
        res = solve_reconfiguration(house_problem, model, all_optimal=10_000)
        oracle = brute_force_reconfiguration(house_problem, model)
        assert {s.config for s in res.optima} == oracle.optima


def test_all_optimal_cap(house_problem):
    res = solve_reconfiguration(house_problem, SCENARIO_A, all_optimal=5)
    assert res.status == Status.OPTIMAL
    assert len(res.optima) == 5
    assert all(s.cost.total == 11 for s in res.optima)


def test_empty_legacy_equals_configuration(house_instance):
    a = solve_configuration(house_instance, CREATION)
    b = solve_reconfiguration(make_problem(house_instance, LegacyConfiguration()), CREATION)
    assert a.best == b.best
    assert b.best.cost.total == config_cost(b.best.config, CREATION).total


def test_no_things():
    inst = derive_bounds(Instance(persons=frozenset({1})))
    res = solve_configuration(inst, CREATION)
    assert res.status == Status.OPTIMAL
    assert res.best.cost.total == 0
    assert Search(make_problem(inst), CREATION).lower_bound() == 0


def test_infeasible():
    inst = one_person(2, long=frozenset({2, 3}))
    tight = derive_bounds(inst, keep={"cabinet": {"lower": 4, "upper": 4}, "room": {"upper": 1}})
    res = solve_configuration(tight, CREATION)
    assert res.status == Status.INFEASIBLE
    assert res.best is None


def test_root_bound_is_admissible(house_problem):
    assert Search(house_problem, SCENARIO_B).lower_bound() <= 4
    assert Search(house_problem, SCENARIO_A).lower_bound() <= 11
    assert Search(house_problem, ZERO).lower_bound() == 0


def test_bound_along_an_optimal_placement(house_problem):
    search = Search(house_problem, SCENARIO_A)
    target = house.configuration(house.SOLUTION_1)
    last = search.lower_bound()
    for c, t in sorted(target.cabinet_things, key=lambda x: (x[0], x[1])):
        search.place(t, c)
        lb = search.lower_bound()
        assert last <= lb <= 11
        last = lb


def test_propagate_drops_full_cabinets(house_problem):
    search = Search(house_problem, ZERO)
    for t in (3, 4, 5, 6, 7):
        search.place(t, 9)
    domains = search.propagate()
    assert all(9 not in d for d in domains.values())
    assert 9 not in search.admissible(21)


def test_propagate_keeps_owners_apart(house_problem):
    search = Search(house_problem, ZERO)
    search.place(3, 9)
    domains = search.propagate()
    assert 9 not in domains[8]
    assert 9 in domains[21]
    search.unplace(3)
    assert 9 in search.propagate()[8]


def test_propagate_conflict_without_high_cabinets():
    inst = one_person(2, long=frozenset({3}), short=frozenset({2}))
    legacy = LegacyConfiguration(
        config=Configuration(
            cabinets=frozenset({4}), rooms=frozenset({5}),
            cabinet_things=frozenset({(4, 2)}), room_cabinets=frozenset({(5, 4)}),
            person_rooms=frozenset({(1, 5)}), small=frozenset({4}),
        ),
        persons=frozenset({1}), things=frozenset({2}), ownership=frozenset({(1, 2)}),
    )
    # the legacy cabinet stays small and no second cabinet is allowed
    problem = make_problem(inst, legacy, allow_height_change=False, keep={"cabinet": {"upper": 1}})
    search = Search(problem, ZERO)
    assert search.propagate() is not None
    search.place(2, 4)
    assert search.propagate() is None


def test_place_requires_lowest_fresh_cabinet(house_problem):
    search = Search(house_problem, ZERO)
    with pytest.raises(ValueError):
        search.place(21, 24)
    search.place(21, 22)


def test_incumbents_strictly_improve():
    rng = random.Random(7)
    events = []
    for _ in range(20):
        problem, model = random_problem(rng)
        events.clear()
        res = solve_reconfiguration(problem, model, on_incumbent=events.append)
        costs = [e["cost"] for e in events]
        assert costs == sorted(set(costs), reverse=True)
        assert len(costs) == res.incumbents
        if res.best is not None:
            assert costs[-1] == res.best.cost.total


def test_node_budget():
    from reconf import scenarios

    problem = scenarios.gen_long(30)
    res = solve_reconfiguration(problem, scenarios.cost_model(), SearchBudget(node_limit=1))
    assert res.status == Status.UNKNOWN
    res = solve_reconfiguration(problem, scenarios.cost_model(), SearchBudget(node_limit=2000))
    assert res.status in (Status.FEASIBLE, Status.OPTIMAL)
    assert res.best is not None
    assert check_reconfiguration(problem, res.best.config, res.best.actions).valid


def test_time_budget_is_respected():
    from reconf import scenarios

    problem = scenarios.gen_long(450)
    res = solve_reconfiguration(problem, scenarios.cost_model(), SearchBudget(time_limit=0.05))
    assert res.status == Status.UNKNOWN
    assert res.elapsed < 0.05 + 0.1


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(time_limit=0)
    with pytest.raises(ValueError):
        SearchBudget(node_limit=0)


def test_single_worker_is_deterministic(house_problem):
    outs = set()
    for _ in range(3):
        res = solve_reconfiguration(house_problem, SCENARIO_B)
        outs.add(serialize(solution_facts(res.best.config, res.best.actions, res.best.cost.total)))
    assert len(outs) == 1


def test_workers_agree_on_cost(house_problem):
    res = solve_reconfiguration(house_problem, SCENARIO_A, workers=2)
    assert res.status == Status.OPTIMAL
    assert res.best.cost.total == 11
    assert check_reconfiguration(house_problem, res.best.config, res.best.actions).valid


@pytest.mark.parametrize("seed", range(25))
def test_matches_oracle_on_random_problems(seed):
    problem, model = random_problem(random.Random(1000 + seed))
    oracle = brute_force_reconfiguration(problem, model, optima=False)
    res = solve_reconfiguration(problem, model)
    if oracle.cost is None:
        assert res.status == Status.INFEASIBLE
        return
    assert res.status == Status.OPTIMAL
    assert res.best.cost.total == oracle.cost
    assert res.best.actions == derive_actions(problem, res.best.config)
    assert check_reconfiguration(problem, res.best.config, res.best.actions).valid
