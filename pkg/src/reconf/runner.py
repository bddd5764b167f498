"""Operations shared by the command line and the HTTP service.

Each takes parsed fact files and returns plain results; rendering to facts
or JSON lives here too so both front ends print the same thing.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import scenarios
from .costing import CostBreakdown, CostModel, problem_cost, reconfig_cost
from .facts import FactFile, FactsError, atom, parse, serialize
from .loaders import (
    instance_facts,
    legacy_facts,
    load_problem,
    read_actions,
    read_configuration,
    solution_facts,
)
from .model import ActionSet, Configuration, ReconfigProblem, derive_actions
from .oracle import brute_force_reconfiguration
from .solver import SearchBudget, SolveResult, Status, solve_reconfiguration
from .validator import ValidationReport, check_configuration, check_reconfiguration

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3
EXIT_USAGE = 4

STATUS_EXIT = {
    Status.OPTIMAL: EXIT_OK,
    Status.FEASIBLE: EXIT_OK,
    Status.INFEASIBLE: EXIT_INFEASIBLE,
    Status.UNKNOWN: EXIT_BUDGET,
}


@dataclass
class Outcome:
    """A solve, oracle or costing result ready for rendering."""

    status: str
    problem: ReconfigProblem
    config: Configuration | None = None
    actions: ActionSet | None = None
    cost: CostBreakdown | None = None
    nodes: int = 0
    elapsed: float = 0.0
    incumbents: int = 0
    optima: tuple = ()
    exit_code: int = EXIT_OK

    @property
    def reconfiguration(self) -> bool:
        return not self.problem.legacy.is_empty()

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "cost": _cost_json(self.cost),
            "configuration": _config_json(self.config),
            "actions": _actions_json(self.actions if self.reconfiguration else None),
            "stats": {
                "nodes": self.nodes,
                "elapsedMs": round(self.elapsed * 1000, 3),
                "incumbents": self.incumbents,
            },
        }
        if self.optima:
            out["optima"] = [_config_json(c) for c in self.optima]
        return out

    def to_facts(self) -> str:
        if self.config is None:
            return f"% {self.status}\n"
        total = self.cost.total if self.cost is not None else None
        actions = self.actions if self.reconfiguration else None
        text = f"% {self.status}\n" + serialize(solution_facts(self.config, actions, total))
        for i, config in enumerate(self.optima[1:], start=2):
            text += f"% optimum {i}\n" + serialize(solution_facts(config))
        return text


def _cost_json(cost: CostBreakdown | None) -> dict | None:
    if cost is None:
        return None
    return {"total": cost.total, "items": [{"atom": str(a), "cost": w} for a, w in cost.items]}


def _config_json(config: Configuration | None) -> dict | None:
    if config is None:
        return None
    return {
        "cabinets": sorted(config.cabinets),
        "rooms": sorted(config.rooms),
        "cabinetHigh": sorted(config.high),
        "cabinetSmall": sorted(config.small),
        "cabinetTOthing": [list(x) for x in sorted(config.cabinet_things)],
        "roomTOcabinet": [list(x) for x in sorted(config.room_cabinets)],
        "personTOroom": [list(x) for x in sorted(config.person_rooms)],
    }


def _actions_json(actions: ActionSet | None) -> dict | None:
    if actions is None:
        return None
    return {k: sorted(str(a) for a in getattr(actions, k)) for k in ("reuse", "delete", "create")}


def solve(
    instance: FactFile,
    costs: FactFile,
    legacy: FactFile | None = None,
    *,
    time_limit: float = 60.0,
    all_optimal: int = 0,
    workers: int = 1,
    on_incumbent=None,
) -> Outcome:
    problem = load_problem(instance, legacy)
    model = CostModel.from_facts(costs)
    res = solve_reconfiguration(
        problem,
        model,
        SearchBudget(time_limit=time_limit),
        all_optimal=all_optimal,
        workers=workers,
        on_incumbent=on_incumbent,
    )
    return _from_result(problem, res)


def _from_result(problem: ReconfigProblem, res: SolveResult) -> Outcome:
    out = Outcome(
        status=res.status.value,
        problem=problem,
        nodes=res.nodes,
        elapsed=res.elapsed,
        incumbents=res.incumbents,
        exit_code=STATUS_EXIT[res.status],
    )
    if res.best is not None:
        out.config, out.actions, out.cost = res.best.config, res.best.actions, res.best.cost
    if res.optima:
        out.optima = tuple(s.config for s in res.optima)
    return out


def oracle(instance: FactFile, costs: FactFile, legacy: FactFile | None = None, *, all_optimal: int = 0) -> Outcome:
    problem = load_problem(instance, legacy)
    model = CostModel.from_facts(costs)
    res = brute_force_reconfiguration(problem, model)
    if res.cost is None:
        return Outcome(status=Status.INFEASIBLE.value, problem=problem, exit_code=EXIT_INFEASIBLE)
    optima = sorted(res.optima, key=lambda c: sorted(str(a) for a in c.atoms()))
    best = optima[0]
    return Outcome(
        status=Status.OPTIMAL.value,
        problem=problem,
        config=best,
        actions=derive_actions(problem, best),
        cost=problem_cost(problem, best, model),
        optima=tuple(optima[:all_optimal]) if all_optimal else (),
    )


def _solution_parts(problem: ReconfigProblem, solution: FactFile, actions: FactFile | None):
    config = read_configuration(solution)
    if actions is not None:
        acts = read_actions(actions)
    elif any(a.predicate in ("reuse", "delete", "create") for a in solution):
        acts = read_actions(solution)
    else:
        acts = derive_actions(problem, config)
    return config, acts


def validate(
    instance: FactFile,
    solution: FactFile,
    legacy: FactFile | None = None,
    actions: FactFile | None = None,
) -> ValidationReport:
    """Check a configuration, or a reconfiguration when a legacy file is given.

    Without an explicit action file, actions come from wrapper facts in the
    solution file, or are derived from the configuration.
    """
    problem = load_problem(instance, legacy)
    if legacy is None:
        return check_configuration(problem.instance, read_configuration(solution))
    config, acts = _solution_parts(problem, solution, actions)
    return check_reconfiguration(problem, config, acts)


def price(
    instance: FactFile,
    solution: FactFile,
    costs: FactFile,
    legacy: FactFile | None = None,
    actions: FactFile | None = None,
) -> Outcome:
    """Price an existing solution; the status says whether it is valid."""
    problem = load_problem(instance, legacy)
    model = CostModel.from_facts(costs)
    config, acts = _solution_parts(problem, solution, actions)
    report = check_reconfiguration(problem, config, acts)
    return Outcome(
        status="valid" if report.valid else "invalid",
        problem=problem,
        config=config,
        actions=acts,
        cost=reconfig_cost(problem.legacy, config, acts, model),
        exit_code=EXIT_OK if report.valid else EXIT_INVALID,
    )


def generate(family: str, n_things: int | None = None) -> dict[str, str]:
    """Fact files for one benchmark problem, keyed by file name.

    ``original.facts`` is the instance before things got lengths, with its
    id domains pinned to the legacy ids, and ``legacy-solution.facts`` holds
    the legacy layout as a plain solution, so the legacy state can be
    checked against the old requirements.
    """
    problem = scenarios.generate(family, n_things)
    files = {
        "instance.facts": serialize(instance_facts(problem.instance)),
        "costs.facts": serialize(scenarios.cost_model().to_facts()),
    }
    if not problem.legacy.is_empty():
        cfg = problem.legacy.config
        files["legacy.facts"] = serialize(legacy_facts(problem.legacy))
        original = scenarios.original_instance(problem)
        domains = list(instance_facts(original))
        for kind, ids in (("cabinet", cfg.cabinets), ("room", cfg.rooms)):
            domains += [atom(f"{kind}Domain", i) for i in range(min(ids), max(ids) + 1)]
        files["original.facts"] = serialize(FactFile(domains))
        files["legacy-solution.facts"] = serialize(solution_facts(cfg))
    return files


def load_text(text: str, what: str) -> FactFile:
    try:
        return parse(text)
    except FactsError as e:
        raise FactsError(f"{what}: {e}") from None
