import pytest

from reconf import runner, scenarios
from reconf.facts import parse
from reconf.model import make_problem
from reconf.solver import Status, solve_reconfiguration
from reconf.validator import check_configuration


def counts(problem):
    cfg = problem.legacy.config
    return (
        len(problem.instance.persons),
        len(problem.instance.things),
        len(cfg.cabinets),
        len(cfg.rooms),
        len(problem.instance.long),
    )


@pytest.mark.parametrize(
    "family, n, expected",
    [
        ("empty", 10, (2, 10, 0, 0, 0)),
        ("empty", 5, (1, 5, 0, 0, 0)),
        ("long", 15, (1, 15, 3, 1, 5)),
        ("long", 30, (2, 30, 6, 2, 10)),
        ("newroom", 12, (1, 12, 3, 1, 6)),
        ("newroom", 24, (2, 24, 6, 2, 12)),
        ("swap", None, (1, 35, 7, 2, 1)),
    ],
)
def test_sizes(family, n, expected):
    assert counts(scenarios.generate(family, n)) == expected


@pytest.mark.parametrize("family, n", [("empty", 7), ("long", 16), ("newroom", 13), ("empty", 0), ("swap", 30)])
def test_bad_sizes(family, n):
    with pytest.raises(scenarios.ScenarioError):
        scenarios.generate(family, n)


def test_unknown_family():
    with pytest.raises(scenarios.ScenarioError, match="unknown family"):
        scenarios.generate("attic")


def test_empty_has_only_short_things():
    problem = scenarios.gen_empty(10)
    assert problem.legacy.is_empty()
    assert problem.instance.short == problem.instance.things


def test_legacy_cabinets_are_full_and_small():
    problem = scenarios.gen_long(15)
    cfg = problem.legacy.config
    assert all(len(cfg.things_in(c)) == 5 for c in cfg.cabinets)
    assert scenarios.legacy_state(problem).small == cfg.cabinets


def test_swap_long_thing_sits_in_the_bigger_room():
    problem = scenarios.gen_swap()
    cfg = problem.legacy.config
    (long,) = problem.instance.long
    (cab,) = [c for c, t in cfg.cabinet_things if t == long]
    (room,) = [r for r, c in cfg.room_cabinets if c == cab]
    assert len(cfg.cabinets_in(room)) == 4


def test_ids_come_in_blocks():
    problem = scenarios.gen_newroom(24)
    cfg = problem.legacy.config
    blocks = [problem.instance.persons, problem.instance.things, cfg.cabinets, cfg.rooms]
    for lo, hi in zip(blocks, blocks[1:]):
        assert max(lo) + 1 == min(hi)
    assert min(problem.instance.cabinet.new_ids()) > max(cfg.rooms)


@pytest.mark.parametrize("family", ["long", "newroom", "swap"])
def test_legacy_fits_old_requirements_but_not_new(family):
    problem = scenarios.generate(family)
    legacy = problem.legacy
    old = make_problem(scenarios.original_instance(problem), legacy).instance
    assert check_configuration(old, legacy.config).valid
    report = check_configuration(problem.instance, scenarios.legacy_state(problem))
    assert "C9" in report.checks()


def test_newroom_needs_another_room():
    problem = scenarios.gen_newroom(12)
    res = solve_reconfiguration(problem, scenarios.cost_model())
    assert res.status == Status.OPTIMAL
    assert res.best.config.rooms - problem.legacy.config.rooms
    assert res.best.cost.total == 5


def test_generators_are_deterministic():
    for family in scenarios.FAMILIES:
        assert runner.generate(family) == runner.generate(family)


def test_generated_files_parse():
    files = runner.generate("swap")
    assert set(files) == {"instance.facts", "costs.facts", "legacy.facts", "original.facts", "legacy-solution.facts"}
    for text in files.values():
        parse(text)
    assert set(runner.generate("empty")) == {"instance.facts", "costs.facts"}


def test_generated_legacy_validates_against_original_files():
    files = runner.generate("long", 30)
    report = runner.validate(parse(files["original.facts"]), parse(files["legacy-solution.facts"]))
    assert report.valid, report.to_text()


def test_benchmark_costs():
    model = scenarios.cost_model()
    assert (model.create("cabinetHigh"), model.create("cabinetSmall"), model.create("room")) == (10, 5, 5)
    assert model.delete("cabinet") == model.reuse("cabinet") == 0
