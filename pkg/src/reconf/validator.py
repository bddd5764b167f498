"""Requirement checks for configurations and reconfigurations.

Check ids follow the numbered house requirements (C1..C11) and the
transformation constraints (T1..T5). ``STRUCT`` flags atoms that refer to
unknown individuals and ``BOUNDS`` flags bounded-type violations.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .facts import Atom, atom
from .model import (
    HIGH,
    ActionSet,
    Configuration,
    Instance,
    ReconfigProblem,
)


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    check: str
    atoms: tuple
    message: str

    def to_json(self) -> dict:
        return {"check": self.check, "atoms": [str(a) for a in self.atoms], "message": self.message}

    def __str__(self) -> str:
        return f"{self.check}\t{' '.join(str(a) for a in self.atoms)}\t{self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def checks(self) -> set[str]:
        return {v.check for v in self.violations}

    def add(self, check: str, atoms, message: str) -> None:
        self.violations.append(Violation(check, tuple(atoms), message))

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_json() for v in self.violations]}

    def to_text(self) -> str:
        return "".join(f"{v}\n" for v in self.violations)


def check_configuration(instance: Instance, config: Configuration) -> ValidationReport:
    rep = ValidationReport()
    _structure(instance, config, rep)
    _bounds(instance, config, rep)

    placed = defaultdict(list)
    contents = defaultdict(list)
    for c, t in sorted(config.cabinet_things):
        placed[t].append(c)
        contents[c].append(t)
    for t in sorted(instance.things):
        cs = placed.get(t, [])
        if len(cs) != 1:
            what = "not stored in any cabinet" if not cs else f"stored in {len(cs)} cabinets"
            rep.add("C1", [atom("thing", t)] + [atom("cabinetTOthing", c, t) for c in cs], f"thing {t} {what}")

    cap = instance.cabinet_capacity
    for c in sorted(contents):
        if len(contents[c]) > cap:
            rep.add("C2", [atom("cabinetTOthing", c, t) for t in contents[c]], f"cabinet {c} holds {len(contents[c])} things (max {cap})")

    rooms_of = defaultdict(list)
    in_room = defaultdict(list)
    for r, c in sorted(config.room_cabinets):
        rooms_of[c].append(r)
        in_room[r].append(c)
    for c in sorted(config.cabinets):
        rs = rooms_of.get(c, [])
        if len(rs) != 1:
            what = "not placed in any room" if not rs else f"placed in {len(rs)} rooms"
            rep.add("C3", [atom("cabinet", c)] + [atom("roomTOcabinet", r, c) for r in rs], f"cabinet {c} {what}")

    for r in sorted(in_room):
        cabs = in_room[r]
        rel = [atom("roomTOcabinet", r, c) for c in cabs]
        if instance.heights:
            used = sum(instance.high_slots if config.height(c) == HIGH else instance.small_slots for c in cabs)
            if used > instance.room_slots:
                rep.add("C10", rel, f"room {r} needs {used} slots (max {instance.room_slots})")
        elif len(cabs) > instance.room_slots:
            rep.add("C4", rel, f"room {r} holds {len(cabs)} cabinets (max {instance.room_slots})")

    owners = defaultdict(list)
    for p, r in sorted(config.person_rooms):
        owners[r].append(p)
    for r in sorted(config.rooms):
        ps = owners.get(r, [])
        if len(ps) != 1:
            what = "has no owner" if not ps else f"has {len(ps)} owners"
            rep.add("C6", [atom("room", r)] + [atom("personTOroom", p, r) for p in ps], f"room {r} {what}")

    for c in sorted(contents):
        who = {instance.owner.get(t) for t in contents[c]}
        if len(who) > 1:
            rep.add("C7", [atom("cabinetTOthing", c, t) for t in contents[c]], f"cabinet {c} mixes things of persons {sorted(who, key=str)}")
    for r in sorted(in_room):
        ps = owners.get(r, [])
        if not ps:
            continue
        for c in in_room[r]:
            bad = [t for t in contents.get(c, []) if instance.owner.get(t) not in ps]
            if bad:
                rep.add(
                    "C7",
                    [atom("personTOroom", p, r) for p in ps] + [atom("cabinetTOthing", c, t) for t in bad],
                    f"room {r} of person {ps[0]} holds things {bad} of another person",
                )

    if instance.heights:
        for c in sorted(config.cabinets):
            n = (c in config.high) + (c in config.small)
            if n != 1:
                what = "has no height" if not n else "is both small and high"
                rep.add("C8", [atom("cabinet", c)], f"cabinet {c} {what}")
        for t in sorted(instance.long):
            for c in placed.get(t, []):
                if c not in config.high:
                    rep.add("C9", [atom("thingLong", t), atom("cabinetTOthing", c, t)], f"long thing {t} in cabinet {c} which is not high")
    elif config.high or config.small:
        hs = [atom("cabinetHigh", c) for c in sorted(config.high)] + [atom("cabinetSmall", c) for c in sorted(config.small)]
        rep.add("C8", hs, "cabinet heights given but no thing lengths")
    return rep


def _structure(instance: Instance, config: Configuration, rep: ValidationReport) -> None:
    for c, t in sorted(config.cabinet_things):
        if c not in config.cabinets or t not in instance.things:
            rep.add("STRUCT", [atom("cabinetTOthing", c, t)], "relation refers to an unknown cabinet or thing")
    for r, c in sorted(config.room_cabinets):
        if r not in config.rooms or c not in config.cabinets:
            rep.add("STRUCT", [atom("roomTOcabinet", r, c)], "relation refers to an unknown room or cabinet")
    for p, r in sorted(config.person_rooms):
        if p not in instance.persons or r not in config.rooms:
            rep.add("STRUCT", [atom("personTOroom", p, r)], "relation refers to an unknown person or room")
    for c in sorted((config.high | config.small) - config.cabinets):
        rep.add("STRUCT", [atom("cabinet", c)], f"height given for unknown cabinet {c}")


def _bounds(instance: Instance, config: Configuration, rep: ValidationReport) -> None:
    for kind, ids, b in (("cabinet", config.cabinets, instance.cabinet), ("room", config.rooms, instance.room)):
        outside = sorted(ids - b.domain())
        if outside:
            rep.add("BOUNDS", [atom(kind, i) for i in outside], f"{kind} ids outside their domain")
        if not b.lower <= len(ids) <= b.upper:
            rep.add("BOUNDS", [], f"{len(ids)} {kind}s, expected {b.lower}..{b.upper}")


_ENDPOINTS = {
    "cabinetTOthing": ("cabinet", "thing"),
    "roomTOcabinet": ("room", "cabinet"),
    "personTOroom": ("person", "room"),
    "personTOthing": ("person", "thing"),
}


def check_reconfiguration(problem: ReconfigProblem, config: Configuration, actions: ActionSet) -> ValidationReport:
    legacy = problem.legacy.action_atoms()
    covered = actions.reuse | actions.delete
    if covered != legacy:
        missing = sorted(legacy - covered)
        extra = sorted(covered - legacy)
        raise PreconditionError(
            f"actions must cover exactly the legacy atoms (missing {[str(a) for a in missing[:5]]}, "
            f"not legacy {[str(a) for a in extra[:5]]})"
        )
    rep = ValidationReport()
    present = config.action_atoms() | problem.instance.customer_atoms()
    decided = set(config.atoms())

    for a in sorted(actions.reuse & actions.delete):
        rep.add("T1", [atom("reuse", a), atom("delete", a)], f"{a} both reused and deleted")
    for a in sorted(actions.create & legacy):
        rep.add("T1", [atom("create", a)], f"legacy atom {a} cannot be created")
    for a in sorted(actions.create - decided):
        rep.add("T1", [atom("create", a)], f"created atom {a} is not in the configuration")
    legacy_cabs = {a.args[0] for a in legacy if a.predicate == "cabinet"}
    for a in sorted(decided - actions.reuse - actions.create):
        if a.predicate in ("cabinetHigh", "cabinetSmall") and a.args[0] in legacy_cabs:
            continue
        rep.add("T1", [a], f"{a} is neither reused nor created")

    for a in sorted(actions.reuse):
        if a not in present:
            rep.add("T2", [atom("reuse", a)], f"reused atom {a} missing from the configuration")
        elif (
            a.predicate == "cabinet"
            and not problem.transformation.allow_height_change
            and config.height(a.args[0]) == HIGH
        ):
            rep.add("T2", [atom("reuse", a), atom("cabinetHigh", a.args[0])], f"legacy cabinet {a.args[0]} may not be altered")
    for a in sorted(actions.delete):
        if a in present:
            rep.add("T3", [atom("delete", a)], f"deleted atom {a} still in the configuration")
    for a in sorted(problem.transformation.forced_reuse - actions.reuse):
        rep.add("T4", [atom("delete", a)], f"{a} is a customer requirement and must be reused")
    for a in sorted(actions.reuse):
        if a.predicate not in _ENDPOINTS:
            continue
        for kind, ident in zip(_ENDPOINTS[a.predicate], a.args):
            end = atom(kind, ident)
            if end in actions.delete:
                rep.add("T5", [atom("reuse", a), atom("delete", end)], f"{a} reused but its {kind} {ident} deleted")

    if problem.legacy.config.high:
        rep.add("C11", [atom("legacyConfig", atom("cabinetHigh", c)) for c in sorted(problem.legacy.config.high)], "legacy cabinets must be small")

    rep.violations.extend(check_configuration(problem.instance, config).violations)
    return rep
