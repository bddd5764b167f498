from dataclasses import replace

import pytest

from reconf import house
from reconf.facts import atom
from reconf.model import (
    ActionSet,
    Configuration,
    Instance,
    LegacyConfiguration,
    canonicalize,
    derive_actions,
    derive_bounds,
    make_problem,
)
from reconf.validator import PreconditionError, check_configuration, check_reconfiguration


def toggle(config: Configuration, *changes: str) -> Configuration:
    """Add (``+atom``) or drop (``-atom``) single atoms."""
    atoms = set(config.atoms())
    for change in changes:
        sign, text = change[0], change[1:]
        name, args = text.rstrip(")").split("(")
        a = atom(name, *map(int, args.split(",")))
        if sign == "+":
            atoms.add(a)
        else:
            assert a in atoms, text
            atoms.remove(a)
    return Configuration.from_atoms(atoms)


def move(actions: ActionSet, text: str, to: str) -> ActionSet:
    """Shift one legacy atom between the reuse and delete sets."""
    name, args = text.rstrip(")").split("(")
    a = atom(name, *map(int, args.split(",")))
    reuse, delete = set(actions.reuse) - {a}, set(actions.delete) - {a}
    (reuse if to == "reuse" else delete).add(a)
    return ActionSet(reuse=frozenset(reuse), delete=frozenset(delete), create=actions.create)


@pytest.fixture
def fig1():
    return house.initial_configuration()


@pytest.fixture
def solution_1():
    return house.configuration(house.SOLUTION_1)


def reconf_report(problem, config, actions=None):
    return check_reconfiguration(problem, config, actions or derive_actions(problem, config))


def test_initial_configuration_is_valid(house_instance, fig1):
    report = check_configuration(house_instance, fig1)
    assert report.valid, report.to_text()


def test_both_reconfiguration_solutions_are_valid(house_problem):
    for text in (house.SOLUTION_1, house.SOLUTION_2):
        config = house.configuration(text)
        assert reconf_report(house_problem, config).valid


def test_changed_requirements_break_the_old_layout(house_problem):
    report = check_configuration(house_problem.instance, house.configuration(house.INITIAL_STATE))
    assert {"C1", "C9"} <= report.checks()
    unplaced = [v for v in report.violations if v.check == "C1"]
    assert [str(a) for a in unplaced[0].atoms] == ["thing(21)"]
    too_small = {str(v.atoms[0]) for v in report.violations if v.check == "C9"}
    assert too_small == {"thingLong(3)", "thingLong(8)"}


def test_six_things_in_one_cabinet():
    owner = {t: 1 for t in range(2, 8)}
    inst = derive_bounds(Instance(persons=frozenset({1}), things=frozenset(owner), owner=owner))
    config = Configuration(
        cabinets=frozenset({8, 9}),
        rooms=frozenset({14}),
        cabinet_things=frozenset((8, t) for t in owner),
        room_cabinets=frozenset({(14, 8), (14, 9)}),
        person_rooms=frozenset({(1, 14)}),
    )
    assert check_configuration(inst, config).checks() == {"C2"}


def test_two_high_and_one_small_overflow_a_room():
    owner = {2: 1, 3: 1, 4: 1}
    inst = derive_bounds(Instance(
        persons=frozenset({1}), things=frozenset(owner), owner=owner,
        long=frozenset({2, 3}), short=frozenset({4}),
    ))
    config = Configuration(
        cabinets=frozenset({5, 6, 7}),
        rooms=frozenset({8}),
        cabinet_things=frozenset({(5, 2), (6, 3), (7, 4)}),
        room_cabinets=frozenset({(8, 5), (8, 6), (8, 7)}),
        person_rooms=frozenset({(1, 8)}),
        high=frozenset({5, 6}),
        small=frozenset({7}),
    )
    assert check_configuration(inst, config).checks() == {"C10"}


def test_empty_legacy_reduces_to_configuration_check(house_instance, fig1):
    problem = make_problem(house_instance, LegacyConfiguration())
    acts = ActionSet(create=frozenset(fig1.atoms()))
    assert check_reconfiguration(problem, fig1, acts).valid
    bad = toggle(fig1, "-cabinetTOthing(9,3)")
    lhs = check_reconfiguration(problem, bad, ActionSet(create=frozenset(bad.atoms())))
    assert lhs.checks() == check_configuration(problem.instance, bad).checks() == {"C1"}


def test_actions_must_cover_the_legacy_atoms(house_problem, solution_1):
    acts = derive_actions(house_problem, solution_1)
    short = replace(acts, reuse=acts.reuse - {atom("cabinet", 9)})
    with pytest.raises(PreconditionError, match="cabinet\\(9\\)"):
        check_reconfiguration(house_problem, solution_1, short)


def test_validity_survives_canonicalize(house_problem):
    config = house.configuration(house.SOLUTION_2)
    renamed = Configuration.from_atoms(
        atom(a.predicate, *({22: 27, 23: 25}.get(x, x) for x in a.args)) for a in config.atoms()
    )
    assert reconf_report(house_problem, renamed).valid
    canon = canonicalize(renamed, house_problem.instance, house_problem.legacy)
    assert reconf_report(house_problem, canon).valid


def test_report_renderings(house_problem):
    report = check_configuration(house_problem.instance, house.configuration(house.INITIAL_STATE))
    lines = report.to_text().splitlines()
    assert len(lines) == len(report.violations)
    assert any(line.startswith("C1") and "thing(21)" in line for line in lines)
    data = report.to_json()
    assert data["valid"] is False
    assert {v["check"] for v in data["violations"]} == report.checks()


# One mutant per requirement: a single atom of a valid solution toggled.
CONFIG_MUTANTS = {
    "C1": ("fig1", ["-cabinetTOthing(9,3)"]),
    "C2": ("sol1", ["+cabinetTOthing(9,7)"]),
    "C3": ("fig1", ["-roomTOcabinet(16,10)"]),
    "C6": ("fig1", ["-personTOroom(2,16)"]),
    "C7": ("fig1", ["+cabinetTOthing(10,7)"]),
    "C8": ("sol1", ["-cabinetSmall(22)"]),
    "C9": ("sol1", ["+cabinetTOthing(22,3)"]),
    "C10": ("sol1", ["+roomTOcabinet(15,10)"]),
}


@pytest.mark.parametrize("check", sorted(CONFIG_MUTANTS))
def test_configuration_mutant(check, house_instance, house_problem, fig1, solution_1):
    base, changes = CONFIG_MUTANTS[check]
    if base == "fig1":
        report = check_configuration(house_instance, toggle(fig1, *changes))
    else:
        report = reconf_report(house_problem, toggle(solution_1, *changes))
    assert not report.valid
    assert check in report.checks(), report.to_text()


def test_room_cabinet_count_mutant():
    # without thing lengths a room takes at most four cabinets
    owner = {t: 1 for t in range(2, 7)}
    inst = derive_bounds(Instance(persons=frozenset({1}), things=frozenset(owner), owner=owner))
    cabs = list(range(7, 12))
    base = Configuration(
        cabinets=frozenset(cabs),
        rooms=frozenset({12, 13}),
        cabinet_things=frozenset(zip(cabs, owner)),
        room_cabinets=frozenset({(12, c) for c in cabs[:4]} | {(13, 11)}),
        person_rooms=frozenset({(1, 12), (1, 13)}),
    )
    assert check_configuration(inst, base).valid
    report = check_configuration(inst, toggle(base, "+roomTOcabinet(12,11)"))
    assert "C4" in report.checks()


def test_high_legacy_cabinet_mutant(house_problem, solution_1):
    legacy = house_problem.legacy
    high = replace(legacy, config=replace(legacy.config, high=frozenset({9})))
    problem = replace(house_problem, legacy=high)
    report = reconf_report(problem, solution_1)
    assert report.checks() == {"C11"}


ACTION_MUTANTS = {
    "T2": ("cabinetTOthing(9,7)", "reuse"),
    "T3": ("roomTOcabinet(15,9)", "delete"),
    "T4": ("personTOthing(1,3)", "delete"),
    "T5": ("cabinet(9)", "delete"),
}


@pytest.mark.parametrize("check", sorted(ACTION_MUTANTS))
def test_action_mutant(check, house_problem, solution_1):
    text, to = ACTION_MUTANTS[check]
    acts = move(derive_actions(house_problem, solution_1), text, to)
    report = check_reconfiguration(house_problem, solution_1, acts)
    assert check in report.checks(), report.to_text()


def test_reuse_and_delete_overlap_mutant(house_problem, solution_1):
    acts = derive_actions(house_problem, solution_1)
    both = replace(acts, delete=acts.delete | {atom("cabinet", 10)})
    assert "T1" in check_reconfiguration(house_problem, solution_1, both).checks()


def test_created_atom_must_be_new(house_problem, solution_1):
    acts = derive_actions(house_problem, solution_1)
    again = replace(acts, create=acts.create | {atom("cabinet", 9)})
    assert "T1" in check_reconfiguration(house_problem, solution_1, again).checks()


def test_frozen_heights(house_problem, solution_1):
    frozen = replace(house_problem, transformation=replace(house_problem.transformation, allow_height_change=False))
    assert "T2" in reconf_report(frozen, solution_1).checks()
    assert reconf_report(frozen, house.configuration(house.SOLUTION_2)).valid


def test_endpoint_example_names_both_atoms(house_problem, solution_1):
    acts = move(derive_actions(house_problem, solution_1), "cabinet(9)", "delete")
    report = check_reconfiguration(house_problem, solution_1, acts)
    t5 = [v for v in report.violations if v.check == "T5"]
    assert any(str(v.atoms[1]) == "delete(cabinet(9))" and "cabinetTOthing(9,3)" in str(v.atoms[0]) for v in t5)
