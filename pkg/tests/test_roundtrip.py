import random

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_problem
from reconf import runner, scenarios
from reconf.facts import CONTROL, SCHEMA, FactFile, atom, parse, serialize
from reconf.loaders import (
    instance_facts,
    legacy_facts,
    load_problem,
    read_actions,
    read_configuration,
    solution_facts,
)
from reconf.model import derive_actions
from reconf.solver import SearchBudget, solve_reconfiguration
from reconf.validator import check_reconfiguration

ids = st.integers(min_value=0, max_value=10**6)


@st.composite
def plain_atoms(draw):
    pred, arity = draw(st.sampled_from(sorted({**SCHEMA, **CONTROL}.items())))
    return atom(pred, *draw(st.lists(ids, min_size=arity, max_size=arity)))


@st.composite
def any_atoms(draw):
    inner = draw(plain_atoms())
    if inner.predicate in SCHEMA and draw(st.booleans()):
        return atom(draw(st.sampled_from(["legacyConfig", "reuse", "delete", "create"])), inner)
    return inner


@settings(max_examples=200, deadline=None)
@given(st.lists(any_atoms(), unique=True, max_size=30))
def test_parse_inverts_serialize(atoms):
    text = serialize(atoms)
    assert list(parse(text)) == atoms
    assert serialize(parse(text)) == text


def problem_files(problem):
    inst = list(instance_facts(problem.instance))
    if not problem.transformation.allow_height_change:
        inst.append(atom("noCabinetAlteration"))
    return FactFile(inst), legacy_facts(problem.legacy)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_solver_output_survives_the_file_format(seed):
    rng = random.Random(seed)
    problem, model = random_problem(rng)
    # the problem itself goes through fact files first
    inst_ff, legacy_ff = problem_files(problem)
    reread = load_problem(parse(serialize(inst_ff)), parse(serialize(legacy_ff)))
    assert reread == problem

    res = solve_reconfiguration(reread, model, SearchBudget(time_limit=10))
    if res.best is None:
        return
    text = serialize(solution_facts(res.best.config, res.best.actions, res.best.cost.total))
    ff = parse(text)
    config, actions = read_configuration(ff), read_actions(ff)
    assert config == res.best.config
    assert actions == res.best.actions
    assert ff.of("totalCost")[0].args == (res.best.cost.total,)

    # drop one decision atom and compare verdicts in memory and through files
    atoms = config.atoms()
    if atoms:
        dropped = rng.choice(atoms)
        mutant = solution_facts(read_configuration(FactFile([a for a in atoms if a != dropped])))
        mutant = read_configuration(parse(serialize(mutant)))
        direct = check_reconfiguration(problem, mutant, derive_actions(problem, mutant))
        via_files = runner.validate(
            inst_ff, parse(serialize(solution_facts(mutant))), legacy_ff
        )
        if problem.legacy.is_empty():
            assert via_files.valid == direct.valid
        else:
            assert via_files.checks() == direct.checks()


def test_generated_scenarios_round_trip():
    for family, n in [("empty", 25), ("long", 15), ("long", 30), ("newroom", 36), ("swap", None)]:
        problem = scenarios.generate(family, n)
        files = runner.generate(family, n)
        for text in files.values():
            assert serialize(parse(text)) == text
        legacy = parse(files["legacy.facts"]) if "legacy.facts" in files else None
        reread = load_problem(parse(files["instance.facts"]), legacy)
        assert reread.instance == problem.instance
        assert reread.legacy == problem.legacy
