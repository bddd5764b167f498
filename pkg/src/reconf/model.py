"""Problem instances, configurations, legacy configurations and action sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .facts import Atom, atom

CABINET_CAPACITY = 5
ROOM_SLOTS = 4
HIGH_SLOTS = 2
SMALL_SLOTS = 1

HIGH = "high"
SMALL = "small"

# Atoms that take part in the reuse/delete partition. Height atoms of legacy
# cabinets are attributes of the cabinet atom and are priced with it.
ACTION_PREDICATES = (
    "person",
    "thing",
    "personTOthing",
    "cabinet",
    "room",
    "cabinetTOthing",
    "roomTOcabinet",
    "personTOroom",
)
CUSTOMER_PREDICATES = ("person", "thing", "personTOthing")
RELATIONS = ("personTOthing", "cabinetTOthing", "roomTOcabinet", "personTOroom")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    """Cardinality bounds and identifier domain of a bounded type.

    Configuration problems draw ids from ``offset+1 .. offset+upper``.
    Reconfiguration problems draw them from the legacy ids plus the fresh
    range ``new_offset+1 .. new_offset+upper``.
    """

    lower: int = 0
    upper: int = 0
    offset: int = 0
    new_offset: int | None = None
    legacy: frozenset = frozenset()

    def __post_init__(self):
        if self.lower > self.upper:
            raise ModelError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def new_ids(self) -> range:
        base = self.offset if self.new_offset is None else self.new_offset
        return range(base + 1, base + self.upper + 1)

    def domain(self) -> frozenset:
        return self.legacy | frozenset(self.new_ids())


@dataclass(frozen=True)
class Instance:
    persons: frozenset = frozenset()
    things: frozenset = frozenset()
    owner: Mapping[int, int] = field(default_factory=dict)
    long: frozenset = frozenset()
    short: frozenset = frozenset()
    cabinet: Bounds = Bounds()
    room: Bounds = Bounds()
    cabinet_capacity: int = CABINET_CAPACITY
    room_slots: int = ROOM_SLOTS
    high_slots: int = HIGH_SLOTS
    small_slots: int = SMALL_SLOTS

    @property
    def heights(self) -> bool:
        """True when thing lengths, and hence cabinet heights, are in play."""
        return bool(self.long or self.short)

    def things_of(self, person: int) -> list[int]:
        return sorted(t for t in self.things if self.owner.get(t) == person)

    def customer_atoms(self) -> set[Atom]:
        out = {atom("person", p) for p in self.persons}
        out |= {atom("thing", t) for t in self.things}
        out |= {atom("personTOthing", p, t) for t, p in self.owner.items()}
        return out

    def check(self) -> None:
        """Raise ModelError if ownership or identifier namespaces are broken."""
        for t in self.things:
            if t not in self.owner:
                raise ModelError(f"thing {t} has no owner")
            if self.owner[t] not in self.persons:
                raise ModelError(f"thing {t} owned by unknown person {self.owner[t]}")
        if set(self.owner) - set(self.things):
            raise ModelError(f"ownership of unknown things {sorted(set(self.owner) - set(self.things))}")
        if self.long & self.short:
            raise ModelError(f"things both long and short: {sorted(self.long & self.short)}")
        if self.heights and (self.long | self.short) != self.things:
            raise ModelError("every thing needs a length once lengths are given")
        spaces = {
            "person": set(self.persons),
            "thing": set(self.things),
            "cabinet": set(self.cabinet.domain()),
            "room": set(self.room.domain()),
        }
        names = list(spaces)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                clash = spaces[a] & spaces[b]
                if clash:
                    raise ModelError(f"{a} and {b} ids overlap: {sorted(clash)[:5]}")


@dataclass(frozen=True)
class Configuration:
    """A configuration as plain atom sets over the solution schema."""

    cabinets: frozenset = frozenset()
    rooms: frozenset = frozenset()
    cabinet_things: frozenset = frozenset()  # (cabinet, thing)
    room_cabinets: frozenset = frozenset()  # (room, cabinet)
    person_rooms: frozenset = frozenset()  # (person, room)
    high: frozenset = frozenset()
    small: frozenset = frozenset()

    def height(self, cabinet: int) -> str | None:
        if cabinet in self.high:
            return HIGH
        if cabinet in self.small:
            return SMALL
        return None

    def things_in(self, cabinet: int) -> list[int]:
        return sorted(t for c, t in self.cabinet_things if c == cabinet)

    def cabinets_in(self, room: int) -> list[int]:
        return sorted(c for r, c in self.room_cabinets if r == room)

    def owners_of(self, room: int) -> list[int]:
        return sorted(p for p, r in self.person_rooms if r == room)

    def atoms(self) -> list[Atom]:
        out = [atom("cabinet", c) for c in sorted(self.cabinets)]
        out += [atom("cabinetSmall", c) for c in sorted(self.small)]
        out += [atom("cabinetHigh", c) for c in sorted(self.high)]
        out += [atom("room", r) for r in sorted(self.rooms)]
        out += [atom("cabinetTOthing", c, t) for c, t in sorted(self.cabinet_things)]
        out += [atom("roomTOcabinet", r, c) for r, c in sorted(self.room_cabinets)]
        out += [atom("personTOroom", p, r) for p, r in sorted(self.person_rooms)]
        return out

    def action_atoms(self) -> set[Atom]:
        return {a for a in self.atoms() if a.predicate in ACTION_PREDICATES}

    @classmethod
    def from_atoms(cls, atoms: Iterable[Atom]) -> "Configuration":
        sets: dict[str, set] = {k: set() for k in ("cabinet", "room", "cabinetTOthing", "roomTOcabinet", "personTOroom", "cabinetHigh", "cabinetSmall")}
        for a in atoms:
            if a.predicate in sets:
                sets[a.predicate].add(a.args[0] if len(a.args) == 1 else tuple(a.args))
        return cls(
            cabinets=frozenset(sets["cabinet"]),
            rooms=frozenset(sets["room"]),
            cabinet_things=frozenset(sets["cabinetTOthing"]),
            room_cabinets=frozenset(sets["roomTOcabinet"]),
            person_rooms=frozenset(sets["personTOroom"]),
            high=frozenset(sets["cabinetHigh"]),
            small=frozenset(sets["cabinetSmall"]),
        )


EMPTY = Configuration()


@dataclass(frozen=True)
class LegacyConfiguration:
    """The pre-change configuration, including its customer atoms."""

    config: Configuration = EMPTY
    persons: frozenset = frozenset()
    things: frozenset = frozenset()
    ownership: frozenset = frozenset()  # (person, thing)

    def atoms(self) -> list[Atom]:
        out = [atom("person", p) for p in sorted(self.persons)]
        out += [atom("thing", t) for t in sorted(self.things)]
        out += [atom("personTOthing", p, t) for p, t in sorted(self.ownership)]
        return out + self.config.atoms()

    def action_atoms(self) -> set[Atom]:
        return {a for a in self.atoms() if a.predicate in ACTION_PREDICATES}

    def is_empty(self) -> bool:
        return not self.atoms()

    @classmethod
    def from_atoms(cls, atoms: Iterable[Atom]) -> "LegacyConfiguration":
        atoms = list(atoms)
        return cls(
            config=Configuration.from_atoms(atoms),
            persons=frozenset(a.args[0] for a in atoms if a.predicate == "person"),
            things=frozenset(a.args[0] for a in atoms if a.predicate == "thing"),
            ownership=frozenset(tuple(a.args) for a in atoms if a.predicate == "personTOthing"),
        )


@dataclass(frozen=True)
class TransformPolicy:
    forced_reuse: frozenset = frozenset()
    allow_height_change: bool = True


@dataclass(frozen=True)
class ReconfigProblem:
    instance: Instance
    legacy: LegacyConfiguration = LegacyConfiguration()
    transformation: TransformPolicy = TransformPolicy()


@dataclass(frozen=True)
class ActionSet:
    reuse: frozenset = frozenset()
    delete: frozenset = frozenset()
    create: frozenset = frozenset()

    def atoms(self) -> list[Atom]:
        out = [atom("reuse", a) for a in sorted(self.reuse)]
        out += [atom("delete", a) for a in sorted(self.delete)]
        return out + [atom("create", a) for a in sorted(self.create)]

    @classmethod
    def from_atoms(cls, atoms: Iterable[Atom]) -> "ActionSet":
        atoms = list(atoms)
        pick = lambda kind: frozenset(a.args[0] for a in atoms if a.predicate == kind)
        return cls(reuse=pick("reuse"), delete=pick("delete"), create=pick("create"))


def derive_bounds(instance: Instance, legacy: LegacyConfiguration | None = None, *, keep: Mapping[str, dict] | None = None) -> Instance:
    """Fill cabinet and room bounds from the persons and things.

    ``keep`` holds explicit per-type overrides (``lower``, ``upper``,
    ``offset``, ``new_offset``) that win over the derived values.
    """
    keep = keep or {}
    cap = instance.cabinet_capacity
    n_things = len(instance.things)
    per_person = [len(instance.things_of(p)) for p in instance.persons]
    cab_lower = sum(math.ceil(n / cap) for n in per_person)
    room_lower = sum(1 for n in per_person if n)
    base = max(instance.persons | instance.things, default=0)
    if legacy is not None and not legacy.is_empty():
        lc = legacy.config
        legacy_ids = (
            legacy.persons
            | legacy.things
            | lc.cabinets
            | lc.rooms
            | {c for c, _ in lc.cabinet_things}
            | {t for _, t in lc.cabinet_things}
            | {r for r, _ in lc.room_cabinets}
            | {c for _, c in lc.room_cabinets}
            | {p for p, _ in lc.person_rooms}
            | {r for _, r in lc.person_rooms}
        )
        top = max(legacy_ids | instance.persons | instance.things, default=0)
        leg_cab = lc.cabinets | {c for c, _ in lc.cabinet_things} | {c for _, c in lc.room_cabinets}
        leg_room = lc.rooms | {r for r, _ in lc.room_cabinets} | {r for _, r in lc.person_rooms}
    else:
        top = None
        leg_cab = leg_room = frozenset()

    def make(kind: str, lower: int, upper: int, offset: int, new_offset, legacy_ids) -> Bounds:
        o = keep.get(kind, {})
        return Bounds(
            lower=o.get("lower", lower),
            upper=o.get("upper", upper),
            offset=o.get("offset", offset),
            new_offset=o.get("new_offset", new_offset),
            legacy=frozenset(legacy_ids),
        )

    cabinet = make("cabinet", cab_lower, n_things, base, top, leg_cab)
    room_off = cabinet.offset + cabinet.upper
    room_new = None if cabinet.new_offset is None else cabinet.new_offset + cabinet.upper
    room = make("room", room_lower, cabinet.upper, room_off, room_new, leg_room)
    return replace(instance, cabinet=cabinet, room=room)


def derive_actions(problem: ReconfigProblem, config: Configuration) -> ActionSet:
    """The unique action set that turns the legacy configuration into ``config``."""
    legacy = problem.legacy.action_atoms()
    present = config.action_atoms() | problem.instance.customer_atoms()
    reuse = frozenset(a for a in legacy if a in present)
    delete = frozenset(legacy - present)
    legacy_cabs = {a.args[0] for a in legacy if a.predicate == "cabinet"}
    new = {a for a in config.atoms() if a not in legacy}
    new = {
        a for a in new
        if not (a.predicate in ("cabinetHigh", "cabinetSmall") and a.args[0] in legacy_cabs)
    }
    return ActionSet(reuse=reuse, delete=delete, create=frozenset(new))


_INF = float("inf")


def _free_ids(ids: range, taken, need: int) -> list[int]:
    out = [i for i in ids if i not in taken]
    nxt = max(ids.stop, max(taken, default=0) + 1)
    while len(out) < need:
        if nxt not in taken:
            out.append(nxt)
        nxt += 1
    return out


def canonicalize(config: Configuration, instance: Instance, legacy: LegacyConfiguration | None = None) -> Configuration:
    """Rename freshly created cabinets and rooms to the lowest free ids.

    Legacy ids are left alone. New rooms are ordered by their smallest
    contained thing, then smallest legacy cabinet, owner and the heights of
    their new cabinets; new cabinets by smallest thing, then room and height.
    Isomorphic configurations map to the same result.
    """
    leg_cab = instance.cabinet.legacy
    leg_room = instance.room.legacy
    if legacy is not None:
        leg_cab = leg_cab | legacy.config.cabinets
        leg_room = leg_room | legacy.config.rooms

    min_thing: dict[int, float] = {}
    for c, t in config.cabinet_things:
        min_thing[c] = min(min_thing.get(c, _INF), t)
    room_of: dict[int, list[int]] = {}
    for r, c in config.room_cabinets:
        room_of.setdefault(c, []).append(r)

    def hrank(c):
        h = config.height(c)
        return 0 if h is None else (1 if h == SMALL else 2)

    new_rooms = sorted(r for r in config.rooms if r not in leg_room)
    room_key = {}
    for r in new_rooms:
        cabs = config.cabinets_in(r)
        room_key[r] = (
            min((min_thing.get(c, _INF) for c in cabs), default=_INF),
            min((c for c in cabs if c in leg_cab), default=_INF),
            tuple(config.owners_of(r)),
            tuple(sorted(hrank(c) for c in cabs if c not in leg_cab)),
            len(cabs),
            r,
        )
    # ids of rooms that only hold new empty cabinets depend on nothing else,
    # so equal keys minus the trailing id are interchangeable.
    free_rooms = _free_ids(instance.room.new_ids(), leg_room, len(new_rooms))
    room_map = {r: free_rooms[i] for i, r in enumerate(sorted(new_rooms, key=lambda r: room_key[r]))}

    def mapped_room(c):
        rs = room_of.get(c, [])
        return tuple(sorted(room_map.get(r, r) for r in rs))

    new_cabs = sorted(c for c in config.cabinets if c not in leg_cab)
    cab_key = {c: (min_thing.get(c, _INF), mapped_room(c), hrank(c), c) for c in new_cabs}
    free_cabs = _free_ids(instance.cabinet.new_ids(), leg_cab, len(new_cabs))
    cab_map = {c: free_cabs[i] for i, c in enumerate(sorted(new_cabs, key=lambda c: cab_key[c]))}

    cm = lambda c: cab_map.get(c, c)
    rm = lambda r: room_map.get(r, r)
    return Configuration(
        cabinets=frozenset(cm(c) for c in config.cabinets),
        rooms=frozenset(rm(r) for r in config.rooms),
        cabinet_things=frozenset((cm(c), t) for c, t in config.cabinet_things),
        room_cabinets=frozenset((rm(r), cm(c)) for r, c in config.room_cabinets),
        person_rooms=frozenset((p, rm(r)) for p, r in config.person_rooms),
        high=frozenset(cm(c) for c in config.high),
        small=frozenset(cm(c) for c in config.small),
    )


def make_problem(
    instance: Instance,
    legacy: LegacyConfiguration | None = None,
    *,
    allow_height_change: bool = True,
    keep: Mapping[str, dict] | None = None,
) -> ReconfigProblem:
    """Bundle a new instance with its legacy configuration, deriving bounds."""
    legacy = legacy or LegacyConfiguration()
    instance = derive_bounds(instance, legacy, keep=keep)
    forced = frozenset(
        a for a in legacy.action_atoms()
        if a.predicate in CUSTOMER_PREDICATES and a in instance.customer_atoms()
    )
    policy = TransformPolicy(forced_reuse=forced, allow_height_change=allow_height_change)
    return ReconfigProblem(instance=instance, legacy=legacy, transformation=policy)
