"""Conversion between fact files and model objects."""
from __future__ import annotations

from .facts import CONTROL, SCHEMA, WRAPPERS, Atom, FactFile, FactsError, atom
from .model import (
    ActionSet,
    Configuration,
    Instance,
    LegacyConfiguration,
    ReconfigProblem,
    make_problem,
)

_INSTANCE_PREDICATES = {"person", "thing", "personTOthing", "thingLong", "thingShort"}
_DECISIONS = {"cabinet", "room", "cabinetTOthing", "roomTOcabinet", "personTOroom", "cabinetHigh", "cabinetSmall"}


def _ids(ff: FactFile, pred: str) -> list[int]:
    return [a.args[0] for a in ff.of(pred)]


def _contiguous(ids: list[int], what: str) -> tuple[int, int]:
    ids = sorted(ids)
    if ids != list(range(ids[0], ids[0] + len(ids))):
        raise FactsError(f"{what} must be one contiguous interval")
    return ids[0] - 1, len(ids)


def read_instance(ff: FactFile) -> tuple[Instance, dict, bool]:
    """Return the raw instance, explicit bound overrides and the alteration flag."""
    for a in ff:
        if a.predicate not in _INSTANCE_PREDICATES and a.predicate not in CONTROL:
            raise FactsError(f"unexpected fact {a} in instance file")
    owner = {}
    for a in ff.of("personTOthing"):
        p, t = a.args
        if t in owner and owner[t] != p:
            raise FactsError(f"thing {t} has two owners")
        owner[t] = p
    inst = Instance(
        persons=frozenset(_ids(ff, "person")),
        things=frozenset(_ids(ff, "thing")),
        owner=owner,
        long=frozenset(_ids(ff, "thingLong")),
        short=frozenset(_ids(ff, "thingShort")),
    )
    keep: dict[str, dict] = {}
    for kind in ("cabinet", "room"):
        o = {}
        dom = _ids(ff, f"{kind}Domain")
        if dom:
            o["offset"], o["upper"] = _contiguous(dom, f"{kind}Domain")
        new = _ids(ff, f"{kind}DomainNew")
        if new:
            o["new_offset"], n = _contiguous(new, f"{kind}DomainNew")
            o.setdefault("upper", n)
        for bound in ("Lower", "Upper"):
            vals = _ids(ff, f"{kind}{bound}")
            if len(vals) > 1:
                raise FactsError(f"several {kind}{bound} facts")
            if vals:
                o[bound.lower()] = vals[0]
        if o:
            keep[kind] = o
    return inst, keep, not ff.of("noCabinetAlteration")


def load_problem(instance_ff: FactFile, legacy_ff: FactFile | None = None) -> ReconfigProblem:
    inst, keep, alter = read_instance(instance_ff)
    legacy = read_legacy(legacy_ff) if legacy_ff is not None else LegacyConfiguration()
    problem = make_problem(inst, legacy, allow_height_change=alter, keep=keep)
    problem.instance.check()
    return problem


def load_instance(ff: FactFile) -> Instance:
    return load_problem(ff).instance


def instance_facts(instance: Instance) -> FactFile:
    out = [atom("person", p) for p in sorted(instance.persons)]
    out += [atom("thing", t) for t in sorted(instance.things)]
    out += [atom("personTOthing", instance.owner[t], t) for t in sorted(instance.things)]
    out += [atom("thingLong", t) for t in sorted(instance.long)]
    out += [atom("thingShort", t) for t in sorted(instance.short)]
    return FactFile(out)


def read_legacy(ff: FactFile) -> LegacyConfiguration:
    inner = []
    for a in ff:
        if a.predicate != "legacyConfig":
            raise FactsError(f"legacy files hold legacyConfig(...) facts only, got {a}")
        wrapped = a.args[0]
        if wrapped.predicate not in SCHEMA or wrapped.predicate in ("thingLong", "thingShort"):
            raise FactsError(f"unexpected legacy atom {wrapped}")
        inner.append(wrapped)
    return LegacyConfiguration.from_atoms(inner)


def legacy_facts(legacy: LegacyConfiguration) -> FactFile:
    return FactFile([atom("legacyConfig", a) for a in legacy.atoms()])


def read_configuration(ff: FactFile) -> Configuration:
    """Read decision atoms; customer facts, action wrappers and totals are skipped."""
    for a in ff:
        if a.predicate in _DECISIONS or a.predicate in _INSTANCE_PREDICATES:
            continue
        if a.predicate in WRAPPERS and a.predicate != "legacyConfig" or a.predicate == "totalCost":
            continue
        raise FactsError(f"unexpected fact {a} in solution file")
    return Configuration.from_atoms(a for a in ff if a.predicate in _DECISIONS)


def read_actions(ff: FactFile) -> ActionSet:
    return ActionSet.from_atoms(a for a in ff if a.predicate in ("reuse", "delete", "create"))


def solution_facts(config: Configuration, actions: ActionSet | None = None, total: int | None = None) -> FactFile:
    out: list[Atom] = list(config.atoms())
    if actions is not None:
        out += actions.atoms()
    if total is not None:
        out.append(atom("totalCost", total))
    return FactFile(out)
