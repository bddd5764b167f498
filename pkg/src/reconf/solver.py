"""Anytime branch-and-bound search for optimal configurations and reconfigurations.

The search runs in three phases:

1. things are placed into cabinets, one class of interchangeable things at a
   time (same owner, length and legacy cabinet), members of a class taking
   cabinets in ascending order and fresh cabinets opened lowest id first;
2. every cabinet gets a height and a room, empty legacy cabinets may be
   deleted, fresh rooms are opened lowest id first;
3. remaining legacy rooms are kept or deleted and owners are picked for rooms
   holding no things; this last step is solved greedily, which is exact
   because its choices are independent apart from the room count bounds.

Every node is bounded by the committed cost plus a relaxation of what is
left: cheapest placement per thing, cheapest outcome per cabinet and legacy
room, and counting bounds on the extra cabinets and rooms each person
needs. A run stops early once an incumbent meets the root bound.
"""
from __future__ import annotations

import enum
import itertools
import logging
import math
import random
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

from .costing import CostBreakdown, CostModel, problem_cost
from .facts import atom
from .model import (
    HIGH,
    SMALL,
    ActionSet,
    Configuration,
    Instance,
    ReconfigProblem,
    canonicalize,
    derive_actions,
)

log = logging.getLogger(__name__)

INF = math.inf


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible_suboptimal"
    INFEASIBLE = "infeasible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchBudget:
    time_limit: float = 60.0
    node_limit: int | None = None

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node limit must be positive")


@dataclass(frozen=True)
class Solution:
    config: Configuration
    actions: ActionSet
    cost: CostBreakdown


@dataclass
class SolveResult:
    status: Status
    best: Solution | None = None
    incumbents: int = 0
    nodes: int = 0
    elapsed: float = 0.0
    lower_bound: float = 0
    optima: list = field(default_factory=list)


class _Stop(Exception):
    pass


class Search:
    """Search state for one problem; also exposes the partial-assignment API.

    ``place``/``unplace`` build a partial thing placement by hand, and
    ``propagate`` and ``lower_bound`` inspect it.
    """

    def __init__(self, problem: ReconfigProblem, model: CostModel, *, seed: int | None = None):
        self.problem = problem
        self.model = model
        self.rng = random.Random(seed) if seed is not None else None
        inst = self.inst = problem.instance
        m = model
        self.H = inst.heights
        self.cap = inst.cabinet_capacity
        self.S = inst.room_slots
        lc = problem.legacy.config
        legacy_atoms = problem.legacy.action_atoms()

        leg = sorted(inst.cabinet.legacy)
        new = [c for c in inst.cabinet.new_ids() if c not in inst.cabinet.legacy]
        self.cab_ids = leg + new
        self.L, self.M = len(leg), len(new)
        self.n_cab = len(self.cab_ids)
        leg_ct = set(lc.cabinet_things)
        leg_rc = set(lc.room_cabinets)
        leg_pr = set(lc.person_rooms)

        # cabinets
        self.leg_atom = [atom("cabinet", c) in legacy_atoms for c in self.cab_ids]
        self.heights = []
        for k, c in enumerate(self.cab_ids):
            if not self.H:
                self.heights.append((None,))
            elif self.leg_atom[k] and not problem.transformation.allow_height_change:
                self.heights.append((SMALL,))
            else:
                self.heights.append((SMALL, HIGH))
        self.can_high = [HIGH in hs for hs in self.heights]
        self.indiv = []
        for k in range(self.n_cab):
            row = {}
            for h in self.heights[k]:
                if self.leg_atom[k]:
                    row[h] = m.reuse("cabinet", h)
                else:
                    row[h] = m.create("cabinet") + (0 if h is None else m.create("cabinetHigh" if h == HIGH else "cabinetSmall"))
            self.indiv.append(row)

        rooms_leg = sorted(inst.room.legacy)
        rooms_new = [r for r in inst.room.new_ids() if r not in inst.room.legacy]
        self.room_ids = rooms_leg + rooms_new
        self.RL, self.RM = len(rooms_leg), len(rooms_new)
        self.n_room = len(self.room_ids)
        room_index = {r: i for i, r in enumerate(self.room_ids)}

        rc_legacy = defaultdict(set)  # cabinet index -> legacy room indices
        for r, c in leg_rc:
            if c in inst.cabinet.legacy and r in room_index:
                rc_legacy[self.cab_ids.index(c)].add(room_index[r])
        w_rc_reuse, w_rc_new, w_rc_del = m.reuse("roomTOcabinet"), m.create("roomTOcabinet"), m.delete("roomTOcabinet")
        self.rc_cost = []
        self.rc_del = []
        for k in range(self.n_cab):
            legs = rc_legacy.get(k, set())
            dall = w_rc_del * len(legs)
            self.rc_del.append(dall)
            self.rc_cost.append(
                [(w_rc_reuse + dall - w_rc_del) if ri in legs else (w_rc_new + dall) for ri in range(self.n_room)]
            )
        self.rc_min = [min(row, default=INF) for row in self.rc_cost]
        w_cab_del = m.delete("cabinet")
        self.cab_del = [(w_cab_del if self.leg_atom[k] else 0) + self.rc_del[k] for k in range(self.n_cab)]

        # rooms
        self.room_leg_atom = [atom("room", r) in legacy_atoms for r in self.room_ids]
        self.room_indiv = [m.reuse("room") if self.room_leg_atom[i] else m.create("room") for i in range(self.n_room)]
        persons = sorted(inst.persons)
        self.persons = persons
        pr_legacy = defaultdict(set)
        for p, r in leg_pr:
            if r in room_index:
                pr_legacy[room_index[r]].add(p)
        w_pr_reuse, w_pr_new, w_pr_del = m.reuse("personTOroom"), m.create("personTOroom"), m.delete("personTOroom")
        self.ptr = []
        self.room_del = []
        for i in range(self.n_room):
            legs = pr_legacy.get(i, set())
            dall = w_pr_del * len(legs)
            self.room_del.append((m.delete("room") if self.room_leg_atom[i] else 0) + dall)
            self.ptr.append({p: (w_pr_reuse + dall - w_pr_del) if p in legs else (w_pr_new + dall) for p in persons})
        self.ptr_min = [min(row.values(), default=INF) for row in self.ptr]
        self.new_room_cost = m.create("room") + w_pr_new
        self.leg_room_min = sum(
            min(self.room_del[i], self.room_indiv[i] + self.ptr_min[i]) for i in range(self.RL)
        )

        # things
        self.things = sorted(inst.things)
        leg_of = defaultdict(set)
        for c, t in leg_ct:
            leg_of[t].add(c)
        w_ct_reuse, w_ct_new, w_ct_del = m.reuse("cabinetTOthing"), m.create("cabinetTOthing"), m.delete("cabinetTOthing")
        self.ct_cost = {}
        self.tmin = {}
        self.home = {}
        for t in self.things:
            legs = leg_of[t]
            dall = w_ct_del * len(legs)
            row = [(w_ct_reuse + dall - w_ct_del) if c in legs else (w_ct_new + dall) for c in self.cab_ids]
            self.ct_cost[t] = row
            self.tmin[t] = min(row, default=INF)
            self.home[t] = {self.cab_ids.index(c) for c in legs if c in inst.cabinet.legacy}
        groups = defaultdict(list)
        for t in self.things:
            groups[(inst.owner[t], t in inst.long, frozenset(leg_of[t]))].append(t)
        self.classes = sorted(groups.values())
        self.class_of = {t: ci for ci, ts in enumerate(self.classes) for t in ts}
        self.long = inst.long

        # constant part: customer atoms and relations of vanished things
        present = inst.customer_atoms()
        self.const = sum(
            m.reuse(a.predicate) if a in present else m.delete(a.predicate)
            for a in legacy_atoms
            if a.predicate in ("person", "thing", "personTOthing")
        )
        self.const += w_ct_del * sum(1 for c, t in leg_ct if t not in inst.things)

        if self.H:
            pick = min(m.create("cabinetSmall"), m.create("cabinetHigh"))
            self.new_cab_min = (m.create("cabinet") + pick + w_rc_new, m.create("cabinet") + m.create("cabinetHigh") + w_rc_new)
        else:
            self.new_cab_min = (m.create("cabinet") + w_rc_new,) * 2
        self.used_min = []
        for k in range(self.n_cab):
            lo = min(self.indiv[k].values()) + self.rc_min[k]
            hi = (self.indiv[k][HIGH] + self.rc_min[k]) if HIGH in self.indiv[k] else INF
            self.used_min.append((lo, hi if self.H else lo))
        self.any_min = [min(self.cab_del[k], self.used_min[k][0]) for k in range(self.n_cab)]

        self.static_rooms = {}
        for p in persons:
            self.static_rooms[p] = self._rooms_needed(len(inst.things_of(p)), len(set(inst.things_of(p)) & inst.long))

        self._reset()

    # ------------------------------------------------------------------ state
    def _reset(self):
        n = self.n_cab
        self.cnt = [0] * n
        self.own = [None] * n
        self.nlong = [0] * n
        self.placed: dict[int, int] = {}
        self.opened = 0
        self.used_legacy = 0
        self.cost = self.const
        self.rest_tmin = sum(self.tmin.values())
        self.rem = defaultdict(int)
        for t in self.things:
            self.rem[self.inst.owner[t]] += 1
        self.next_in_class = [0] * len(self.classes)
        self.last_rank = [-1] * len(self.classes)
        # phase B
        self.decided = [False] * n
        self.height = [None] * n
        self.room_of = [None] * n
        self.deleted = [False] * n
        self.slots = [0] * self.n_room
        self.room_owner = [None] * self.n_room
        self.room_used = [0] * self.n_room
        self.rooms_open = 0
        self.rooms_used = 0
        self.extra_cabs = 0
        self.n_cabs_used = 0

    def _rooms_needed(self, n: int, n_long: int) -> int:
        if n == 0:
            return 0
        if self.H:
            h = math.ceil(n_long / self.cap)
            rest = max(0, n - self.cap * h)
            slots = self.inst.high_slots * h + self.inst.small_slots * math.ceil(rest / self.cap)
        else:
            slots = self.inst.small_slots * math.ceil(n / self.cap)
        return math.ceil(slots / self.S)

    def _slot(self, h) -> int:
        return self.inst.high_slots if h == HIGH else self.inst.small_slots

    # ---------------------------------------------------------- phase A API
    def _admissible(self, t: int, rank_floor: int = -1) -> list[int]:
        owner = self.inst.owner[t]
        is_long = t in self.long
        used = self.opened + self.used_legacy
        out = []
        upper = self.inst.cabinet.upper
        for k in range(self.L + min(self.opened + 1, self.M)):
            if k < rank_floor:
                continue
            if self.cnt[k] >= self.cap:
                continue
            if self.own[k] is not None and self.own[k] != owner:
                continue
            if is_long and not self.can_high[k]:
                continue
            if self.cnt[k] == 0 and used >= upper:
                continue
            out.append(k)
        return out

    def admissible(self, thing: int) -> list[int]:
        """Cabinet ids the thing may still go to, class order aside."""
        return [self.cab_ids[k] for k in self._admissible(thing)]

    def place(self, thing: int, cabinet: int) -> None:
        k = self.cab_ids.index(cabinet)
        if k >= self.L and k != self.L + self.opened and self.cnt[k] == 0:
            raise ValueError("fresh cabinets must be opened lowest id first")
        self._place(thing, k)

    def unplace(self, thing: int) -> None:
        self._unplace(thing)

    def _place(self, t: int, k: int) -> None:
        if self.cnt[k] == 0:
            if k >= self.L:
                self.opened += 1
            else:
                self.used_legacy += 1
        self.cnt[k] += 1
        self.own[k] = self.inst.owner[t]
        if t in self.long:
            self.nlong[k] += 1
        self.placed[t] = k
        self.cost += self.ct_cost[t][k]
        self.rest_tmin -= self.tmin[t]
        self.rem[self.inst.owner[t]] -= 1

    def _unplace(self, t: int) -> None:
        k = self.placed.pop(t)
        self.cnt[k] -= 1
        if t in self.long:
            self.nlong[k] -= 1
        if self.cnt[k] == 0:
            self.own[k] = None
            if k >= self.L:
                self.opened -= 1
            else:
                self.used_legacy -= 1
        self.cost -= self.ct_cost[t][k]
        self.rest_tmin += self.tmin[t]
        self.rem[self.inst.owner[t]] += 1

    def propagate(self) -> dict | None:
        """Admissible cabinets per unplaced thing, or None on a conflict."""
        out = {}
        for t in self.things:
            if t in self.placed:
                continue
            dom = self._admissible(t)
            if not dom:
                return None
            out[t] = [self.cab_ids[k] for k in dom]
        return out

    # ------------------------------------------------------------ bounding
    def lower_bound(self) -> float:
        """Admissible bound on any completion of the current partial state."""
        lb = self.cost + self.rest_tmin
        cap, S = self.cap, self.S
        res = defaultdict(int)
        slots = defaultdict(int)
        owned_rooms = defaultdict(int)
        empty_legacy = 0
        for k in range(self.n_cab):
            if self.decided[k]:
                if self.own[k] is not None and not self.deleted[k]:
                    res[self.own[k]] += cap - self.cnt[k]
                continue
            if self.cnt[k]:
                need_high = self.nlong[k] > 0
                lb += self.used_min[k][1 if need_high else 0]
                res[self.own[k]] += cap - self.cnt[k]
                slots[self.own[k]] += self._slot(HIGH) if (need_high and self.H) else self.inst.small_slots
            elif k < self.L:
                lb += self.any_min[k]
                empty_legacy += 1
        extra = 0
        for p, n in self.rem.items():
            if n > res[p]:
                extra += math.ceil((n - res[p]) / cap)
        if extra > empty_legacy:
            lb += (extra - empty_legacy) * self.new_cab_min[0]

        # rooms
        free_rooms = 0
        for i in range(self.n_room):
            if self.room_used[i]:
                o = self.room_owner[i]
                if o is None:
                    lb += self.ptr_min[i]
                    free_rooms += 1
                else:
                    owned_rooms[o] += 1
                    slots[o] += self.slots[i]
            elif i < self.RL:
                lb += min(self.room_del[i], self.room_indiv[i] + self.ptr_min[i])
                free_rooms += 1
        need = 0
        for p in self.persons:
            r = max(self.static_rooms[p], math.ceil(slots[p] / S))
            need += max(0, r - owned_rooms[p])
        if need > free_rooms:
            lb += (need - free_rooms) * self.new_room_cost
        return lb

    # -------------------------------------------------------------- search
    def run(
        self,
        budget: SearchBudget,
        *,
        all_optimal: int = 0,
        on_incumbent: Callable[[dict], None] | None = None,
    ) -> SolveResult:
        self._reset()
        self.budget = budget
        self.all_optimal = all_optimal
        self.on_incumbent = on_incumbent
        self.best_cost = INF
        self.best = None
        self.best_key = None
        self.full = False
        self.optima: dict = {}
        self.incumbents = 0
        self.nodes = 0
        self.start = time.monotonic()
        self.exhausted = True
        self.root_lb = self.lower_bound()
        try:
            self._phase_a(None)
        except _Stop as e:
            self.exhausted = e.args[0] == "done"
        elapsed = time.monotonic() - self.start
        proved = self.exhausted or (self.best is not None and self.best_cost <= self.root_lb)
        if self.best is None:
            status = Status.INFEASIBLE if self.exhausted else Status.UNKNOWN
        else:
            status = Status.OPTIMAL if proved else Status.FEASIBLE
        optima = [self.optima[k] for k in sorted(self.optima)] if all_optimal else []
        return SolveResult(
            status=status,
            best=self.best,
            incumbents=self.incumbents,
            nodes=self.nodes,
            elapsed=elapsed,
            lower_bound=self.root_lb,
            optima=optima,
        )

    def _tick(self) -> bool:
        """Count a node; return False when it can be pruned."""
        self.nodes += 1
        b = self.budget
        if b.node_limit is not None and self.nodes > b.node_limit:
            raise _Stop("budget")
        if time.monotonic() - self.start > b.time_limit:
            raise _Stop("budget")
        lb = self.lower_bound()
        if self.all_optimal and not self.full:
            return lb <= self.best_cost
        return lb < self.best_cost

    def _order(self, keyed: list) -> list:
        if self.rng is not None:
            keyed = [(k[0], self.rng.random(), *k[1:]) for k in keyed]
        keyed.sort(key=lambda x: x[:-1])
        return [x[-1] for x in keyed]

    def _phase_a(self, focus: int | None) -> None:
        if not self._tick():
            return
        if focus is None or self.next_in_class[focus] >= len(self.classes[focus]):
            best_ci, best_n = None, None
            for ci, ts in enumerate(self.classes):
                j = self.next_in_class[ci]
                if j >= len(ts):
                    continue
                n = len(self._admissible(ts[j], self.last_rank[ci]))
                if n == 0:
                    return
                if best_n is None or n < best_n:
                    best_ci, best_n = ci, n
            if best_ci is None:
                self._phase_b_start()
                return
            focus = best_ci
        ci = focus
        j = self.next_in_class[ci]
        t = self.classes[ci][j]
        cands = self._admissible(t, self.last_rank[ci])
        keyed = []
        for k in cands:
            delta = self.ct_cost[t][k]
            if self.cnt[k] == 0:
                if k >= self.L:
                    delta += self.new_cab_min[1 if t in self.long else 0]
                else:
                    delta += max(0, self.used_min[k][1 if t in self.long else 0] - self.any_min[k])
            keyed.append((delta, k not in self.home[t], k >= self.L, k, k))
        saved = self.last_rank[ci]
        for k in self._order(keyed):
            self._place(t, k)
            self.next_in_class[ci] += 1
            self.last_rank[ci] = k
            self._phase_a(ci)
            self.last_rank[ci] = saved
            self.next_in_class[ci] -= 1
            self._unplace(t)

    # ------------------------------------------------------------ phase B
    def _phase_b_start(self) -> None:
        used = [k for k in range(self.n_cab) if self.cnt[k]]
        used.sort(key=lambda k: (self.own[k], -self.nlong[k], k))
        empty = [k for k in range(self.L) if not self.cnt[k]]
        self.items = used + empty
        self.n_cabs_used = len(used)
        self.extra_cabs = 0
        self._phase_b(0)

    def _phase_b(self, i: int) -> None:
        if not self._tick():
            return
        if i == len(self.items):
            if self.n_cabs_used < self.inst.cabinet.lower:
                k = self.L + self.opened + self.extra_cabs
                if k >= self.n_cab:
                    return
                self.items.append(k)
                self.extra_cabs += 1
                self._phase_b(i)
                self.extra_cabs -= 1
                self.items.pop()
                return
            self._finish()
            return
        k = self.items[i]
        owner = self.own[k]
        options = []
        if k < self.L and not self.cnt[k]:
            options.append((self.cab_del[k], 1, 0, ("del", None, None)))
        can_use = self.cnt[k] > 0 or self.n_cabs_used < self.inst.cabinet.upper
        if can_use:
            hs = (HIGH,) if self.nlong[k] else self.heights[k]
            limit = self.RL + min(self.rooms_open + 1, self.RM)
            for h in hs:
                if h not in self.indiv[k]:
                    continue
                need = self._slot(h) if self.H else self.inst.small_slots
                for ri in range(limit):
                    if ri >= self.RL + self.rooms_open and self.rooms_used >= self.inst.room.upper:
                        continue
                    if self.slots[ri] + need > self.S:
                        continue
                    ro = self.room_owner[ri]
                    if owner is not None and ro is not None and ro != owner:
                        continue
                    c = self.indiv[k][h] + self.rc_cost[k][ri]
                    if not self.room_used[ri]:
                        c += self.room_indiv[ri]
                    if owner is not None and ro is None:
                        c += self.ptr[ri][owner]
                    options.append((c, 0 if ri < self.RL else 1, ri, ("use", h, ri)))
        keyed = [(c, a, b, opt) for c, a, b, opt in options]
        for kind, h, ri in self._order(keyed):
            if kind == "del":
                self.decided[k] = True
                self.deleted[k] = True
                self.cost += self.cab_del[k]
                self._phase_b(i + 1)
                self.cost -= self.cab_del[k]
                self.deleted[k] = False
                self.decided[k] = False
                continue
            c = self.indiv[k][h] + self.rc_cost[k][ri]
            opened_room = not self.room_used[ri]
            if opened_room:
                c += self.room_indiv[ri]
                self.rooms_used += 1
                if ri >= self.RL:
                    self.rooms_open += 1
            set_owner = owner is not None and self.room_owner[ri] is None
            if set_owner:
                c += self.ptr[ri][owner]
                self.room_owner[ri] = owner
            fresh_cab = not self.cnt[k]
            if fresh_cab:
                self.n_cabs_used += 1
            self.room_used[ri] += 1
            self.slots[ri] += self._slot(h) if self.H else self.inst.small_slots
            self.decided[k], self.height[k], self.room_of[k] = True, h, ri
            self.cost += c
            self._phase_b(i + 1)
            self.cost -= c
            self.decided[k], self.height[k], self.room_of[k] = False, None, None
            self.slots[ri] -= self._slot(h) if self.H else self.inst.small_slots
            self.room_used[ri] -= 1
            if fresh_cab:
                self.n_cabs_used -= 1
            if set_owner:
                self.room_owner[ri] = None
            if opened_room:
                self.rooms_used -= 1
                if ri >= self.RL:
                    self.rooms_open -= 1

    # ------------------------------------------------------------ phase C
    def _phase_c_units(self) -> list | None:
        """Independent choices left once cabinets are settled, each a list of (cost, rooms, choice)."""
        units = []
        for i in range(self.n_room):
            if self.room_used[i] and self.room_owner[i] is None:
                if not self.persons:
                    return None
                units.append([(self.ptr[i][p], 0, ("own", i, p)) for p in self.persons])
        for i in range(self.RL):
            if not self.room_used[i]:
                opts = [(self.room_del[i], 0, ("del", i, None))]
                opts += [(self.room_indiv[i] + self.ptr[i][p], 1, ("keep", i, p)) for p in self.persons]
                units.append(opts)
        pad = min(self.RM - self.rooms_open, max(0, self.inst.room.lower - self.rooms_used))
        if self.persons:
            for j in range(pad):
                i = self.RL + self.rooms_open + j
                units.append([(0, 0, ("none", i, None))] + [(self.new_room_cost, 1, ("new", i, p)) for p in self.persons])
        for u in units:
            u.sort(key=lambda o: (o[0], o[1]))
        return units

    def _phase_c_min(self, units) -> float:
        """Cheapest completion cost; per-unit minima adjusted greedily to meet the room bounds."""
        lo = self.inst.room.lower - self.rooms_used
        hi = self.inst.room.upper - self.rooms_used
        base, count, ups, downs = 0, 0, [], []
        for u in units:
            best = u[0]
            base += best[0]
            count += best[1]
            alt = [o for o in u if o[1] != best[1]]
            if alt:
                d = min(o[0] for o in alt) - best[0]
                (ups if best[1] == 0 else downs).append(d)
        if count < lo:
            need = lo - count
            if len(ups) < need:
                return INF
            base += sum(sorted(ups)[:need])
        elif count > hi:
            need = count - hi
            if len(downs) < need:
                return INF
            base += sum(sorted(downs)[:need])
        return base

    def _phase_c_choices(self, units, target):
        """Yield every choice vector of cost exactly ``target`` within the room bounds."""
        lo = self.inst.room.lower - self.rooms_used
        hi = self.inst.room.upper - self.rooms_used
        n = len(units)
        smin = [0] * (n + 1)
        smax = [0] * (n + 1)
        cmin = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            smin[j] = smin[j + 1] + units[j][0][0]
            smax[j] = smax[j + 1] + max(o[1] for o in units[j])
            cmin[j] = cmin[j + 1] + min(o[1] for o in units[j])
        picked = []

        def rec(j, cost, count, last_new):
            if cost + smin[j] > target or count + cmin[j] > hi or count + smax[j] < lo:
                return
            if j == n:
                padded = any(c[0] == "new" for c in picked)
                if cost == target and not (padded and count > lo):
                    yield list(picked)
                return
            for c, k, choice in units[j]:
                if choice[0] == "new" and not last_new:
                    continue
                picked.append(choice)
                now_new = choice[0] == "new" if choice[0] in ("new", "none") else last_new
                yield from rec(j + 1, cost + c, count + k, now_new)
                picked.pop()

        yield from rec(0, 0, 0, True)

    def _finish(self) -> None:
        units = self._phase_c_units()
        if units is None:
            return
        total = self.cost + self._phase_c_min(units)
        if total > self.best_cost or (total == self.best_cost and (not self.all_optimal or self.full)):
            return
        for choices in self._phase_c_choices(units, total - self.cost):
            self._record(total, choices)
            if not self.all_optimal:
                return

    def _record(self, total, choices) -> None:
        cabs, high, small, ct, rc = set(), set(), set(), set(), set()
        for t, k in self.placed.items():
            ct.add((self.cab_ids[k], t))
        for k in self.items:
            if self.deleted[k]:
                continue
            c = self.cab_ids[k]
            cabs.add(c)
            if self.height[k] == HIGH:
                high.add(c)
            elif self.height[k] == SMALL:
                small.add(c)
            rc.add((self.room_ids[self.room_of[k]], c))
        rooms, pr = set(), set()
        for i in range(self.n_room):
            if self.room_used[i]:
                rooms.add(self.room_ids[i])
                if self.room_owner[i] is not None:
                    pr.add((self.room_owner[i], self.room_ids[i]))
        for kind, i, p in choices:
            if kind in ("own", "keep", "new"):
                rooms.add(self.room_ids[i])
                pr.add((p, self.room_ids[i]))
        config = Configuration(
            cabinets=frozenset(cabs),
            rooms=frozenset(rooms),
            cabinet_things=frozenset(ct),
            room_cabinets=frozenset(rc),
            person_rooms=frozenset(pr),
            high=frozenset(high),
            small=frozenset(small),
        )
        if total < self.best_cost:
            self.best_cost = total
            self.best = None
            self.incumbents += 1
            self.optima = {}
            self.full = False
            if self.on_incumbent is not None:
                self.on_incumbent({"cost": total, "elapsed": time.monotonic() - self.start, "nodes": self.nodes})
            log.info("incumbent %s after %d nodes", total, self.nodes)
        variants = self._permutations(config) if self.all_optimal else [config]
        for variant in variants:
            variant = canonicalize(variant, self.inst, self.problem.legacy)
            key = tuple(sorted(str(a) for a in variant.atoms()))
            if key in self.optima:
                continue
            breakdown = problem_cost(self.problem, variant, self.model)
            if breakdown.total != total:
                raise AssertionError(f"search cost {total} disagrees with costing {breakdown.total}")
            sol = Solution(variant, derive_actions(self.problem, variant), breakdown)
            self.optima[key] = sol
            if self.best is None or key < self.best_key:
                self.best, self.best_key = sol, key
            if self.all_optimal and len(self.optima) >= self.all_optimal:
                self.full = True
                return
        if not self.all_optimal and total <= self.root_lb:
            raise _Stop("done")

    def _permutations(self, config: Configuration):
        """Configurations obtained by swapping interchangeable things."""
        groups = [g for g in self.classes if len(g) > 1]
        perms = [itertools.permutations(g) for g in groups]
        for choice in itertools.product(*perms):
            rename = {}
            for g, p in zip(groups, choice):
                rename.update(zip(g, p))
            yield replace(config, cabinet_things=frozenset((c, rename.get(t, t)) for c, t in config.cabinet_things))


def _run(args):
    problem, model, budget, seed, all_optimal = args
    return Search(problem, model, seed=seed).run(budget, all_optimal=all_optimal)


def solve_reconfiguration(
    problem: ReconfigProblem,
    model: CostModel,
    budget: SearchBudget = SearchBudget(),
    *,
    all_optimal: int = 0,
    workers: int = 1,
    on_incumbent: Callable[[dict], None] | None = None,
) -> SolveResult:
    """Find a minimum-cost reconfiguration together with its action set.

    With ``workers`` above one, differently seeded searches run in parallel
    and the best result wins; the optimal cost is the same but the returned
    optimum may differ from the single-worker one.
    """
    if workers <= 1:
        return Search(problem, model).run(budget, all_optimal=all_optimal, on_incumbent=on_incumbent)
    jobs = [(problem, model, budget, None if w == 0 else w, all_optimal) for w in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run, jobs))
    return _merge(results)


def _merge(results: list[SolveResult]) -> SolveResult:
    found = [r for r in results if r.best is not None]
    nodes = sum(r.nodes for r in results)
    elapsed = max(r.elapsed for r in results)
    lb = max(r.lower_bound for r in results)
    if not found:
        status = Status.INFEASIBLE if any(r.status == Status.INFEASIBLE for r in results) else Status.UNKNOWN
        return SolveResult(status, None, 0, nodes, elapsed, lb)
    win = min(found, key=lambda r: (r.best.cost.total, r.status != Status.OPTIMAL))
    proved = any(r.status == Status.OPTIMAL for r in results)
    return replace(
        win,
        status=Status.OPTIMAL if proved else Status.FEASIBLE,
        nodes=nodes,
        elapsed=elapsed,
        incumbents=sum(r.incumbents for r in results),
    )


def solve_configuration(
    instance: Instance,
    model: CostModel,
    budget: SearchBudget = SearchBudget(),
    **kwargs,
) -> SolveResult:
    """Find a minimum-cost configuration; a reconfiguration with nothing to reuse."""
    return solve_reconfiguration(ReconfigProblem(instance=instance), model, budget, **kwargs)
