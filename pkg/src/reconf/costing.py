"""Objective functions as itemized per-atom create/reuse/delete weights."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .facts import COST_PREDICATES, Atom, FactFile, FactsError, atom
from .model import HIGH, SMALL, ActionSet, Configuration, LegacyConfiguration, derive_actions

log = logging.getLogger(__name__)

INDIVIDUALS = ("cabinet", "room", "person", "thing")

_CREATE_KEY = {
    "cabinet": "cabinetCost",
    "cabinetSmall": "cabinetSmallCost",
    "cabinetHigh": "cabinetHighCost",
    "room": "roomCost",
    "cabinetTOthing": "cabinetTOthingCost",
    "roomTOcabinet": "roomTOcabinetCost",
    "personTOroom": "personTOroomCost",
}


def _cap(pred: str) -> str:
    return pred[0].upper() + pred[1:]


class CostError(ValueError):
    pass


@dataclass(frozen=True)
class CostModel:
    """Per-predicate weights, keyed by cost predicate name.

    With ``strict`` set, looking up a weight that was never given raises
    CostError. Otherwise it falls back to the defaults: ``reuseDefaultCost``
    and ``deleteDefaultCost`` for individuals, 0 for everything else.
    """

    weights: Mapping[str, int] = field(default_factory=dict)
    strict: bool = False

    def __post_init__(self):
        for k, w in self.weights.items():
            if k not in COST_PREDICATES:
                raise CostError(f"unknown cost predicate {k!r}")
            if not isinstance(w, int) or w < 0:
                raise CostError(f"{k} must be a non-negative integer, got {w!r}")

    def _get(self, key: str, *fallbacks: str) -> int:
        for k in (key, *fallbacks):
            if k in self.weights:
                return self.weights[k]
        if self.strict:
            raise CostError(f"no weight for {key}")
        return 0

    def create(self, predicate: str) -> int:
        if predicate not in _CREATE_KEY:
            raise CostError(f"no creation weight for predicate {predicate!r}")
        return self._get(_CREATE_KEY[predicate])

    def reuse(self, predicate: str, height: str | None = None) -> int:
        if predicate == "cabinet" and height is not None:
            key = "reuseCabinetAsHighCost" if height == HIGH else "reuseCabinetAsSmallCost"
            return self._get(key, "reuseCabinetCost", "reuseDefaultCost")
        fallback = ("reuseDefaultCost",) if predicate in INDIVIDUALS else ()
        return self._get(f"reuse{_cap(predicate)}Cost", *fallback)

    def delete(self, predicate: str) -> int:
        fallback = ("deleteDefaultCost",) if predicate in INDIVIDUALS else ()
        return self._get(f"delete{_cap(predicate)}Cost", *fallback)

    def to_facts(self) -> FactFile:
        return FactFile([atom(k, w) for k, w in sorted(self.weights.items())])

    @classmethod
    def from_facts(cls, facts: FactFile | Iterable[Atom]) -> "CostModel":
        weights = {}
        for a in facts:
            if a.predicate not in COST_PREDICATES:
                raise FactsError(f"unexpected fact {a} in cost file")
            if a.predicate in weights and weights[a.predicate] != a.args[0]:
                raise FactsError(f"conflicting weights for {a.predicate}")
            weights[a.predicate] = a.args[0]
        missing = sorted(COST_PREDICATES - set(weights) - {"reuseDefaultCost", "deleteDefaultCost"})
        if missing:
            log.warning("unspecified cost weights default: %s", ", ".join(missing))
        try:
            return cls(weights)
        except CostError as e:
            raise FactsError(str(e)) from None


@dataclass(frozen=True)
class CostBreakdown:
    items: tuple = ()  # (action atom, weight)

    @property
    def total(self) -> int:
        return sum(w for _, w in self.items)

    def by_kind(self) -> dict[str, int]:
        out = {"create": 0, "reuse": 0, "delete": 0}
        for a, w in self.items:
            out[a.predicate] += w
        return out


def config_cost(config: Configuration, model: CostModel) -> CostBreakdown:
    """f(S): one create item per decision atom of the configuration."""
    items = [(atom("create", a), model.create(a.predicate)) for a in config.atoms()]
    return CostBreakdown(tuple(items))


def reconfig_cost(
    legacy: LegacyConfiguration,
    config: Configuration,
    actions: ActionSet,
    model: CostModel,
) -> CostBreakdown:
    """g(S, R): creation of new atoms plus reuse and deletion of legacy ones.

    A reused cabinet is priced by its height in ``config``; its height atom
    is not priced separately.
    """
    items = []
    for a in sorted(actions.create):
        items.append((atom("create", a), model.create(a.predicate)))
    for a in sorted(actions.reuse):
        h = config.height(a.args[0]) if a.predicate == "cabinet" else None
        items.append((atom("reuse", a), model.reuse(a.predicate, h)))
    for a in sorted(actions.delete):
        items.append((atom("delete", a), model.delete(a.predicate)))
    return CostBreakdown(tuple(items))


def problem_cost(problem, config: Configuration, model: CostModel) -> CostBreakdown:
    """Price ``config`` as a reconfiguration of ``problem`` with derived actions."""
    return reconfig_cost(problem.legacy, config, derive_actions(problem, config), model)


SCENARIO_A = CostModel(
    {
        "deleteDefaultCost": 2,
        "reuseCabinetAsHighCost": 3,
        "cabinetHighCost": 10,
        "cabinetSmallCost": 5,
        "roomCost": 5,
    }
)

SCENARIO_B = CostModel(
    {
        "deleteDefaultCost": 2,
        "deleteCabinetCost": 10,
        "reuseCabinetAsHighCost": 10,
        "cabinetHighCost": 2,
        "cabinetSmallCost": 1,
        "roomCost": 5,
    }
)

BENCHMARK = CostModel({"cabinetHighCost": 10, "cabinetSmallCost": 5, "roomCost": 5})
