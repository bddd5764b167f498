import random

import pytest

from reconf import house
from reconf.costing import CostModel
from reconf.facts import COST_PREDICATES
from reconf.model import Configuration, Instance, LegacyConfiguration, make_problem


@pytest.fixture
def house_instance():
    return house.instance()


@pytest.fixture
def house_problem():
    return house.problem()


def random_problem(rng: random.Random, *, max_things=6, max_persons=2, max_legacy_cabinets=3):
    """A small random reconfiguration problem with random weights in 0..10.

    Legacy layouts are built to respect capacities and ownership so they look
    like something a previous solve could have produced; an ownerless empty
    cabinet shows up now and then.
    """
    n_persons = rng.randint(1, max_persons)
    n_things = rng.randint(0, max_things)
    persons = list(range(1, n_persons + 1))
    things = list(range(n_persons + 1, n_persons + n_things + 1))
    owner = {t: rng.choice(persons) for t in things}
    lengths = rng.random() < 0.7
    long = frozenset(t for t in things if lengths and rng.random() < 0.4)
    short = frozenset(t for t in things if lengths and t not in long)
    instance = Instance(
        persons=frozenset(persons), things=frozenset(things), owner=owner, long=long, short=short
    )

    legacy = LegacyConfiguration()
    if rng.random() < 0.7:
        placed = [t for t in things if rng.random() < 0.8]
        next_id = n_persons + n_things + 1
        cabs: dict[int, tuple] = {}
        for t in placed:
            p = owner[t]
            open_cabs = [c for c, (q, ts) in cabs.items() if q == p and len(ts) < 5]
            full = len(cabs) >= max_legacy_cabinets
            if open_cabs and (full or rng.random() < 0.6):
                c = rng.choice(open_cabs)
            elif full:
                continue
            else:
                c = next_id + len(cabs)
                cabs[c] = (p, [])
            cabs[c][1].append(t)
        if len(cabs) < max_legacy_cabinets and rng.random() < 0.3:
            cabs[next_id + len(cabs)] = (None, [])
        room_base = next_id + len(cabs)
        rooms: dict[int, tuple] = {}
        rc = set()
        for c, (p, _) in cabs.items():
            fits = [r for r, (q, cs) in rooms.items() if (q == p or p is None) and len(cs) < 4]
            if fits and rng.random() < 0.5:
                r = rng.choice(fits)
            else:
                r = room_base + len(rooms)
                rooms[r] = (p if p is not None else persons[0], [])
            rooms[r][1].append(c)
            rc.add((r, c))
        config = Configuration(
            cabinets=frozenset(cabs),
            rooms=frozenset(rooms),
            cabinet_things=frozenset((c, t) for c, (_, ts) in cabs.items() for t in ts),
            room_cabinets=frozenset(rc),
            person_rooms=frozenset((q, r) for r, (q, _) in rooms.items()),
            small=frozenset(cabs) if lengths and rng.random() < 0.5 else frozenset(),
        )
        legacy = LegacyConfiguration(
            config=config,
            persons=frozenset(persons),
            things=frozenset(placed),
            ownership=frozenset((owner[t], t) for t in placed),
        )
    model = CostModel({pred: rng.randint(0, 10) for pred in sorted(COST_PREDICATES)})
    problem = make_problem(instance, legacy, allow_height_change=rng.random() < 0.8)
    return problem, model
