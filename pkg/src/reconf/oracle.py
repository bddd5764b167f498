"""Exhaustive enumeration of small (re)configuration problems.

This is the ground truth for the solver tests and shares no code with the
search. Candidates are built in four stages (thing placement, cabinet set
and heights, cabinet-to-room layout, room owners); each complete candidate
is judged by the validator and priced by the costing module.

Two reductions keep the enumeration tractable, both exact:

* things with the same owner, length and legacy cabinet are interchangeable,
  so their cabinets are enumerated as multisets; optimal solutions are
  expanded back over all permutations at the end;
* all weights are non-negative and every stage fixes the price of its atoms
  for good, so a branch whose fixed part already exceeds the best cost seen
  is dropped.
"""
from __future__ import annotations

import functools
import itertools
from collections import defaultdict
from dataclasses import dataclass

from .costing import CostModel, problem_cost
from .facts import atom
from .model import (
    HIGH,
    SMALL,
    Configuration,
    Instance,
    ReconfigProblem,
    canonicalize,
    derive_actions,
)
from .validator import check_reconfiguration

MAX_THINGS = 7
MAX_LEGACY = 20


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    cost: int | None  # None when no configuration exists
    optima: frozenset  # canonical optimal configurations


def brute_force_configuration(instance: Instance, model: CostModel, *, optima: bool = True) -> OracleResult:
    """Like the reconfiguration oracle with nothing to reuse; bounds are taken as given."""
    return brute_force_reconfiguration(ReconfigProblem(instance=instance), model, optima=optima)


def _subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def _growth(fixed, fresh, n, ok, nondecreasing=()):
    """Yield label tuples for n items, opening fresh labels in order.

    ``ok(partial, label)`` rejects extensions that are already invalid;
    items i-1, i listed in ``nondecreasing`` get labels in ascending rank.
    """
    rank = {lab: i for i, lab in enumerate(list(fixed) + list(fresh))}
    partial: list = []

    def rec(opened):
        if len(partial) == n:
            yield tuple(partial)
            return
        i = len(partial)
        choices = list(fixed) + list(fresh[: opened + 1])
        for lab in choices:
            if i in nondecreasing and rank[lab] < rank[partial[-1]]:
                continue
            if not ok(partial, lab):
                continue
            partial.append(lab)
            yield from rec(opened + (opened < len(fresh) and lab == fresh[opened]))
            partial.pop()

    yield from rec(0)


class _Pricer:
    """Stage-wise prices of atom groups, mirroring g(S, R) term by term."""

    def __init__(self, problem: ReconfigProblem, model: CostModel):
        self.model = model
        self.legacy = problem.legacy.action_atoms()
        self.by_pred = defaultdict(set)
        for a in self.legacy:
            self.by_pred[a.predicate].add(a)
        present = problem.instance.customer_atoms()
        self.customer = sum(
            model.reuse(a.predicate) if a in present else model.delete(a.predicate)
            for a in self.legacy
            if a.predicate in ("person", "thing", "personTOthing")
        )

    def relation(self, pred: str, present: set) -> int:
        m = self.model
        cost = sum(m.reuse(pred) if a in self.legacy else m.create(pred) for a in present)
        return cost + sum(m.delete(pred) for a in self.by_pred[pred] - present)

    def cabinets(self, cabs, heights) -> int:
        m = self.model
        cost = 0
        for c in cabs:
            h = heights.get(c)
            if atom("cabinet", c) in self.legacy:
                cost += m.reuse("cabinet", h)
            else:
                cost += m.create("cabinet")
                if h is not None:
                    cost += m.create("cabinetHigh" if h == HIGH else "cabinetSmall")
        kept = {atom("cabinet", c) for c in cabs}
        return cost + sum(m.delete("cabinet") for a in self.by_pred["cabinet"] - kept)

    def rooms(self, rooms) -> int:
        m = self.model
        cost = sum(m.reuse("room") if atom("room", r) in self.legacy else m.create("room") for r in rooms)
        kept = {atom("room", r) for r in rooms}
        return cost + sum(m.delete("room") for a in self.by_pred["room"] - kept)


def brute_force_reconfiguration(problem: ReconfigProblem, model: CostModel, *, optima: bool = True) -> OracleResult:
    """Optimal cost and all canonical optima of a small problem.

    With ``optima`` off only the cost is computed: candidates tying the best
    cost are dropped early and the returned optima set is empty.
    """
    inst = problem.instance
    n_legacy = len(problem.legacy.action_atoms() - inst.customer_atoms())
    if len(inst.things) > MAX_THINGS or n_legacy > MAX_LEGACY:
        raise OracleSizeError(f"oracle limited to {MAX_THINGS} things and {MAX_LEGACY} legacy atoms")
    if inst.cabinet.upper > MAX_THINGS or inst.room.upper > MAX_THINGS:
        raise OracleSizeError(f"oracle limited to {MAX_THINGS} cabinets and rooms")

    legacy_cab_of = defaultdict(set)
    for c, t in problem.legacy.config.cabinet_things:
        legacy_cab_of[t].add(c)

    def cls(t):
        return (inst.owner[t], t in inst.long, frozenset(legacy_cab_of[t]))

    things = sorted(inst.things, key=lambda t: (repr(cls(t)), t))
    nondecreasing = {i for i in range(1, len(things)) if cls(things[i]) == cls(things[i - 1])}
    leg_cabs = sorted(inst.cabinet.legacy)
    new_cabs = [c for c in inst.cabinet.new_ids() if c not in inst.cabinet.legacy]
    leg_rooms = sorted(inst.room.legacy)
    new_rooms = [r for r in inst.room.new_ids() if r not in inst.room.legacy]
    persons = sorted(inst.persons)
    pricer = _Pricer(problem, model)
    frozen = frozenset() if problem.transformation.allow_height_change else frozenset(leg_cabs)

    def cab_ok(partial, c):
        inside = [things[i] for i, x in enumerate(partial) if x == c]
        if len(inside) >= inst.cabinet_capacity:
            return False
        t = things[len(partial)]
        return all(inst.owner[u] == inst.owner[t] for u in inside)

    best = None
    reps: set = set()

    memo: dict = {}

    tie = 0 if optima else 1

    def over(cost):
        return best is not None and cost > best - tie

    def consider(cost, cabs, heights, ct, rooms, owners) -> bool:
        nonlocal best, reps
        if over(cost):
            return False
        config = Configuration(
            cabinets=frozenset(cabs),
            rooms=frozenset(rooms),
            cabinet_things=frozenset(ct),
            room_cabinets=frozenset((r, c) for r, cs in rooms.items() for c in cs),
            person_rooms=frozenset((p, r) for r, p in owners.items()),
            high=frozenset(c for c in cabs if heights.get(c) == HIGH),
            small=frozenset(c for c in cabs if heights.get(c) == SMALL),
        )
        actions = derive_actions(problem, config)
        if not check_reconfiguration(problem, config, actions).valid:
            return False
        priced = problem_cost(problem, config, model).total
        if priced != cost:
            raise AssertionError(f"staged cost {cost} disagrees with costing {priced}")
        if best is None or cost < best:
            best, reps = cost, set()
        reps.add(config)
        return True

    for placement in _growth(leg_cabs, new_cabs, len(things), cab_ok, nondecreasing):
        ct = {(c, t) for t, c in zip(things, placement)}
        cost1 = pricer.customer + pricer.relation("cabinetTOthing", {atom("cabinetTOthing", c, t) for c, t in ct})
        if over(cost1):
            continue
        full = sorted(set(placement))
        holder = {c: [t for t, x in zip(things, placement) if x == c] for c in full}
        used_new = sum(1 for c in full if c not in inst.cabinet.legacy)
        for kept in _subsets(c for c in leg_cabs if c not in full):
            base = full + list(kept)
            for extra in range(max(0, inst.cabinet.lower - len(base)) + 1):
                if used_new + extra > len(new_cabs):
                    break
                cabs = base + new_cabs[used_new : used_new + extra]
                if len(cabs) > inst.cabinet.upper:
                    continue
                for c in cabs:
                    holder.setdefault(c, [])
                for heights in _heights(inst, cabs, holder, frozen):
                    cost2 = cost1 + pricer.cabinets(cabs, heights)
                    if over(cost2):
                        continue
                    owner_key = tuple(inst.owner[holder[c][0]] if holder[c] else None for c in cabs)
                    key = (tuple(cabs), tuple(heights.get(c) for c in cabs), owner_key)
                    bound = None if best is None else best - tie - cost2
                    hit = memo.get(key)
                    # a miss, or an earlier search that gave up at a tighter bound
                    if hit is None or (hit[0] is None and hit[2] is not None and (bound is None or bound > hit[2])):
                        hit = memo[key] = _cheapest_rooms(
                            inst, cabs, heights, holder, leg_rooms, new_rooms, persons, pricer, model, tie, bound
                        )
                    stage, layouts, _ = hit
                    if stage is None or over(cost2 + stage):
                        continue
                    found = False
                    for rooms, owners in layouts:
                        found |= consider(cost2 + stage, cabs, heights, ct, rooms, owners)
                    if found:
                        continue
                    # no cheapest layout is valid here: fall back to all layouts under the current bound
                    def slack(cost2=cost2):
                        return None if best is None else best - tie - cost2

                    for c3, rooms, owners in _room_candidates(
                        inst, cabs, heights, holder, leg_rooms, new_rooms, persons, pricer, model, slack
                    ):
                        consider(cost2 + c3, cabs, heights, ct, rooms, owners)
    found = set()
    groups = defaultdict(list)
    for t in things:
        groups[cls(t)].append(t)
    for config in reps if optima else ():
        for renamed in _permute_classes(config, list(groups.values())):
            found.add(canonicalize(renamed, inst, problem.legacy))
    return OracleResult(best, frozenset(found))


def _room_candidates(inst, cabs, heights, holder, leg_rooms, new_rooms, persons, pricer, model, slack):
    """Yield (cost, rooms, owners) for every room layout and owner choice within ``slack()``."""
    @functools.lru_cache(maxsize=None)
    def rc_price(r, c):
        a = atom("roomTOcabinet", r, c)
        return model.reuse(a.predicate) if a in pricer.legacy else model.create(a.predicate)

    @functools.lru_cache(maxsize=None)
    def room_price(r):
        return model.reuse("room") if atom("room", r) in pricer.legacy else model.create("room")

    for rooms in _room_layouts(inst, cabs, heights, holder, leg_rooms, new_rooms, rc_price, room_price, slack):
        rc = {atom("roomTOcabinet", r, c) for r, cs in rooms.items() for c in cs}
        cost3 = pricer.rooms(rooms) + pricer.relation("roomTOcabinet", rc)
        limit = slack()
        if limit is not None and cost3 > limit:
            continue
        for owners in _owners(inst, rooms, holder, persons):
            pr = {atom("personTOroom", p, r) for r, p in owners.items()}
            cost = cost3 + pricer.relation("personTOroom", pr)
            limit = slack()
            if limit is None or cost <= limit:
                yield cost, rooms, owners


def _cheapest_rooms(inst, cabs, heights, holder, leg_rooms, new_rooms, persons, pricer, model, tie, bound):
    """Minimum room-stage cost up to ``bound``, the layouts reaching it, and ``bound``.

    The room stage is priced by the cabinets, their heights and owners
    alone, so results are shared between placements with the same key.
    A cost of None means no layout costs at most ``bound``.
    """
    best, layouts = None, []

    def slack():
        return bound if best is None else best - tie

    gen = _room_candidates(inst, cabs, heights, holder, leg_rooms, new_rooms, persons, pricer, model, slack)
    for cost, rooms, owners in gen:
        if best is None or cost < best:
            best, layouts = cost, []
        if cost == best:
            layouts.append((rooms, owners))
    return best, layouts, bound


def _permute_classes(config: Configuration, groups):
    perms = [list(itertools.permutations(g)) for g in groups]
    for choice in itertools.product(*perms):
        rename = {}
        for g, p in zip(groups, choice):
            rename.update(zip(g, p))
        yield Configuration(
            cabinets=config.cabinets,
            rooms=config.rooms,
            cabinet_things=frozenset((c, rename[t]) for c, t in config.cabinet_things),
            room_cabinets=config.room_cabinets,
            person_rooms=config.person_rooms,
            high=config.high,
            small=config.small,
        )


def _heights(inst: Instance, cabs, holder, frozen=frozenset()):
    """Height maps for ``cabs``; cabinets in ``frozen`` have to stay small."""
    if not inst.heights:
        yield {}
        return
    options = []
    for c in cabs:
        allowed = (SMALL,) if c in frozen else (SMALL, HIGH)
        if any(t in inst.long for t in holder[c]):
            allowed = tuple(h for h in allowed if h == HIGH)
        options.append(allowed)
    for combo in itertools.product(*options):
        yield dict(zip(cabs, combo))


def _room_layouts(inst: Instance, cabs, heights, holder, leg_rooms, new_rooms, price, room_price, slack):
    """Yield room -> cabinets maps, including kept empty legacy rooms and padding rooms.

    Layouts whose rooms and placement atoms alone cost more than ``slack()``
    are skipped.
    """
    all_rooms = list(leg_rooms) + list(new_rooms)
    rest = [0] * (len(cabs) + 1)
    for i in range(len(cabs) - 1, -1, -1):
        rest[i] = rest[i + 1] + min((price(r, cabs[i]) for r in all_rooms), default=0)

    def slots(c):
        if not inst.heights:
            return 1
        return inst.high_slots if heights[c] == HIGH else inst.small_slots

    def owner_of(c):
        ts = holder[c]
        return inst.owner[ts[0]] if ts else None

    def ok(partial, r):
        c = cabs[len(partial)]
        inside = [cabs[i] for i, x in enumerate(partial) if x == r]
        if sum(slots(x) for x in inside) + slots(c) > inst.room_slots:
            return False
        limit = slack()
        if limit is not None:
            labels = list(partial) + [r]
            spent = sum(price(x, y) for x, y in zip(labels, cabs)) + sum(room_price(x) for x in set(labels))
            if spent + rest[len(labels)] > limit:
                return False
        return len({owner_of(x) for x in inside + [c]} - {None}) <= 1

    for assign in _growth(leg_rooms, new_rooms, len(cabs), ok):
        layout: dict[int, list[int]] = {}
        for c, r in zip(cabs, assign):
            layout.setdefault(r, []).append(c)
        used_new = sum(1 for r in layout if r not in inst.room.legacy)
        for kept in _subsets(r for r in leg_rooms if r not in layout):
            base = dict(layout)
            for r in kept:
                base[r] = []
            for extra in range(max(0, inst.room.lower - len(base)) + 1):
                if used_new + extra > len(new_rooms):
                    break
                rooms = dict(base)
                for r in new_rooms[used_new : used_new + extra]:
                    rooms[r] = []
                if len(rooms) <= inst.room.upper:
                    yield rooms


def _owners(inst: Instance, rooms, holder, persons):
    order = sorted(rooms)
    options = []
    for r in order:
        who = sorted({inst.owner[t] for c in rooms[r] for t in holder[c]})
        options.append(tuple(who) if who else tuple(persons))
    for combo in itertools.product(*options):
        yield dict(zip(order, combo))
