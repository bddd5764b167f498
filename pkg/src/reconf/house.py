"""The small house example: two persons, things 3..8, and its reconfiguration."""
from __future__ import annotations

from .facts import parse
from .loaders import load_instance, load_problem, read_configuration

INSTANCE = """\
person(1..2).
thing(3..8).
personTOthing(1,3). personTOthing(1,4). personTOthing(1,5).
personTOthing(1,6). personTOthing(1,7).
personTOthing(2,8).
"""

INITIAL = """\
cabinet(9). cabinet(10).
room(15). room(16).
cabinetTOthing(9,3..7). cabinetTOthing(10,8).
roomTOcabinet(15,9). roomTOcabinet(16,10).
personTOroom(1,15). personTOroom(2,16).
"""

NEW_INSTANCE = INSTANCE + """\
thing(21). personTOthing(1,21).
thingLong(3). thingShort(4..7). thingLong(8). thingLong(21).
"""

LEGACY = "".join(
    f"legacyConfig({a}).\n"
    for a in parse(INSTANCE + INITIAL)
)

# Legacy layout under the new requirements: everything small, thing 21 unplaced.
INITIAL_STATE = INITIAL + "cabinetSmall(9). cabinetSmall(10).\n"

SOLUTION_1 = """\
cabinet(9). cabinet(10). cabinet(22).
cabinetHigh(9). cabinetHigh(10). cabinetSmall(22).
room(15). room(16).
cabinetTOthing(9,3..6). cabinetTOthing(9,21). cabinetTOthing(22,7). cabinetTOthing(10,8).
roomTOcabinet(15,9). roomTOcabinet(15,22). roomTOcabinet(16,10).
personTOroom(1,15). personTOroom(2,16).
"""

SOLUTION_2 = """\
cabinet(9). cabinet(10). cabinet(22). cabinet(23).
cabinetSmall(9). cabinetSmall(10). cabinetHigh(22). cabinetHigh(23).
room(15). room(16).
cabinetTOthing(9,4..7). cabinetTOthing(22,3). cabinetTOthing(22,21). cabinetTOthing(23,8).
roomTOcabinet(15,9). roomTOcabinet(15,22). roomTOcabinet(16,10). roomTOcabinet(16,23).
personTOroom(1,15). personTOroom(2,16).
"""


def instance():
    return load_instance(parse(INSTANCE))


def initial_configuration():
    return read_configuration(parse(INITIAL))


def problem():
    return load_problem(parse(NEW_INSTANCE), parse(LEGACY))


def configuration(text: str):
    return read_configuration(parse(text))
