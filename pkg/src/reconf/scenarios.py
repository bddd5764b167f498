"""Benchmark families: empty, long, newroom and swap.

Ids are laid out in contiguous blocks: persons, things, legacy cabinets,
legacy rooms. Fresh ids for the solver come after all of them.
"""
from __future__ import annotations

from dataclasses import replace

from .costing import BENCHMARK, CostModel
from .model import (
    Configuration,
    Instance,
    LegacyConfiguration,
    ReconfigProblem,
    make_problem,
)

FAMILIES = ("empty", "long", "newroom", "swap")
SWAP_THINGS = 35


class ScenarioError(ValueError):
    pass


def _divisible(n: int, by: int, family: str) -> int:
    if n <= 0 or n % by:
        raise ScenarioError(f"{family} needs a positive multiple of {by} things, got {n}")
    return n // by


def _build(per_person: list[list[list[int]]], rooms_of: list[list[list[int]]], long_idx, n_persons: int) -> ReconfigProblem:
    """Assemble a problem from per-person cabinet fillings (as thing offsets) and room groupings.

    ``per_person[p]`` lists cabinets as lists of the person's thing indices,
    ``rooms_of[p]`` groups that person's cabinet indices into rooms.
    """
    persons = list(range(1, n_persons + 1))
    counts = [sum(len(c) for c in cabs) for cabs in per_person]
    first_thing = n_persons + 1
    thing_base = []
    t = first_thing
    for n in counts:
        thing_base.append(t)
        t += n
    things = list(range(first_thing, t))
    owner = {}
    long = set()
    for p, base, n in zip(persons, thing_base, counts):
        for i in range(n):
            owner[base + i] = p
            if i in long_idx(p):
                long.add(base + i)
    instance = Instance(
        persons=frozenset(persons),
        things=frozenset(things),
        owner=owner,
        long=frozenset(long),
        short=frozenset(things) - frozenset(long),
    )
    cab = t
    ct, cabinets, cab_ids = set(), [], []
    for p, base, cabs in zip(persons, thing_base, per_person):
        ids = []
        for content in cabs:
            cabinets.append(cab)
            ids.append(cab)
            ct.update((cab, base + i) for i in content)
            cab += 1
        cab_ids.append(ids)
    room = cab
    rc, pr, rooms = set(), set(), []
    for p, ids, groups in zip(persons, cab_ids, rooms_of):
        for group in groups:
            rooms.append(room)
            pr.add((p, room))
            rc.update((room, ids[i]) for i in group)
            room += 1
    legacy = LegacyConfiguration(
        config=Configuration(
            cabinets=frozenset(cabinets),
            rooms=frozenset(rooms),
            cabinet_things=frozenset(ct),
            room_cabinets=frozenset(rc),
            person_rooms=frozenset(pr),
        ),
        persons=frozenset(persons),
        things=frozenset(things),
        ownership=frozenset((owner[x], x) for x in things),
    )
    return make_problem(instance, legacy)


def gen_empty(n_things: int) -> ReconfigProblem:
    """Persons owning 5 short things each and nothing to reuse."""
    k = _divisible(n_things, 5, "empty")
    persons = list(range(1, k + 1))
    things = list(range(k + 1, k + 1 + 5 * k))
    owner = {t: persons[(t - k - 1) // 5] for t in things}
    instance = Instance(
        persons=frozenset(persons),
        things=frozenset(things),
        owner=owner,
        short=frozenset(things),
    )
    return make_problem(instance)


def gen_long(n_things: int) -> ReconfigProblem:
    """Per person 15 things in three full cabinets of one room; 5 become long."""
    k = _divisible(n_things, 15, "long")
    cabs = [list(range(0, 5)), list(range(5, 10)), list(range(10, 15))]
    return _build([cabs] * k, [[[0, 1, 2]]] * k, lambda p: {0, 1, 5, 6, 10}, k)


def gen_newroom(n_things: int) -> ReconfigProblem:
    """Per person 12 things in three cabinets of one room; 6 become long."""
    k = _divisible(n_things, 12, "newroom")
    cabs = [list(range(0, 4)), list(range(4, 8)), list(range(8, 12))]
    return _build([cabs] * k, [[[0, 1, 2]]] * k, lambda p: {0, 1, 4, 5, 8, 9}, k)


def gen_swap() -> ReconfigProblem:
    """One person, 35 things in 7 cabinets over rooms of 3 and 4; one thing in the second room becomes long."""
    cabs = [list(range(5 * i, 5 * i + 5)) for i in range(7)]
    # first thing of the first cabinet in the second room
    return _build([cabs], [[[0, 1, 2], [3, 4, 5, 6]]], lambda p: {15}, 1)


def generate(family: str, n_things: int | None = None) -> ReconfigProblem:
    if family == "empty":
        return gen_empty(n_things if n_things is not None else 10)
    if family == "long":
        return gen_long(n_things if n_things is not None else 15)
    if family == "newroom":
        return gen_newroom(n_things if n_things is not None else 12)
    if family == "swap":
        if n_things not in (None, SWAP_THINGS):
            raise ScenarioError(f"swap has a fixed size of {SWAP_THINGS} things")
        return gen_swap()
    raise ScenarioError(f"unknown family {family!r}, expected one of {', '.join(FAMILIES)}")


def cost_model() -> CostModel:
    """Creation costs for cabinets and rooms only."""
    return BENCHMARK


def original_instance(problem: ReconfigProblem) -> Instance:
    """The instance as it was before things got lengths."""
    return replace(problem.instance, long=frozenset(), short=frozenset())


def legacy_state(problem: ReconfigProblem) -> Configuration:
    """The legacy layout read under the new requirements: every cabinet small."""
    config = problem.legacy.config
    return replace(config, small=config.cabinets, high=frozenset())


__all__ = [
    "FAMILIES",
    "ScenarioError",
    "cost_model",
    "gen_empty",
    "gen_long",
    "gen_newroom",
    "gen_swap",
    "generate",
    "legacy_state",
    "original_instance",
]
