"""Test-support generation: conforming logs from a model, and single typed
violation injections into a conforming log.

Generation is obligation-driven: creating an object registers the event-count
and relation-count obligations its eventual cardinalities impose, and the
scheduler discharges every obligation before finishing, while never emitting
an event that breaks an always-cardinality.  The strategy is budget-bounded
and covers a documented model family (see `_analyze`); models outside it
raise `GenerationError` rather than producing a silently wrong log.

Injection mutates a conforming log and verifies with the checker that a
violation of the requested kind appears at the mutation site; extra cascaded
violations of other kinds are possible and expected for some kinds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .cardinality import Cardinality
from .conformance import check_violations, resolve_targets
from .eventlog import Event, EventLog, LogError, ObjectDelta, ObjectModel, Relation
from .model import OcbcModel, RelationshipType
from .violations import Violation


class GenerationError(RuntimeError):
    """The model is outside the supported family or the budget was exceeded."""


class InjectionError(RuntimeError):
    """No mutation of the requested kind could be verified on this log."""


# -- model analysis ----------------------------------------------------------


def _partner_cards(rt: RelationshipType, my_side: str) -> tuple[Cardinality, Cardinality]:
    """Cards bounding the number of partners per object sitting on `my_side`."""
    other = "tar" if my_side == "src" else "src"
    return rt.card(other, "always"), rt.card(other, "eventually")


def _stepwise_target(always: Cardinality, eventually: Cardinality, start: int, what: str) -> int:
    """Smallest admissible final count >= start reachable one event at a time."""
    feasible = eventually.restrict_min(start)
    if feasible is None:
        raise GenerationError(f"{what}: count {start} exceeds every eventual value in {eventually}")
    target = feasible.minimum()
    for value in range(start, target + 1):
        if value not in always:
            raise GenerationError(
                f"{what}: reaching eventual count {target} passes through {value}, "
                f"which the always-cardinality {always} forbids"
            )
    return target


@dataclass(frozen=True)
class _RelNeed:
    rt: RelationshipType
    my_side: str  # side of the rt the owning object occupies
    partner_cls: str
    count: int

    def relation(self, owner: str, partner: str) -> Relation:
        if self.my_side == "src":
            return (self.rt.id, owner, partner)
        return (self.rt.id, partner, owner)


@dataclass
class _ClassPlan:
    cls: str
    creator_activity: str | None = None
    is_child: bool = False  # co-created inside a parent's creation delta
    flush_rt: str | None = None  # created by absorbing pending partner demand
    ambient: list[_RelNeed] = field(default_factory=list)  # pool partners at creation
    children: list[_RelNeed] = field(default_factory=list)  # co-created partners
    eventual: list[_RelNeed] = field(default_factory=list)  # later flush partners
    acts: list[tuple[str, int]] = field(default_factory=list)  # (activity, count)

    @property
    def poolable(self) -> bool:
        return (
            self.creator_activity is None
            and not self.is_child
            and not self.acts
            and not self.ambient
            and not self.children
            and not self.eventual
        )


def _analyze(model: OcbcModel) -> dict[str, _ClassPlan]:
    plans = {cls: _ClassPlan(cls=cls) for cls in model.clam.classes}

    for link in model.links:
        if 0 in link.card_events_always:
            continue
        plan = plans[link.cls]
        if plan.creator_activity is not None:
            raise GenerationError(
                f"class {link.cls!r} has two activities that must coincide with creation"
            )
        if 1 not in link.card_events_always or 1 not in link.card_events_eventually:
            raise GenerationError(
                f"link ({link.activity}, {link.cls}): cardinalities do not admit exactly "
                f"one creating event"
            )
        plan.creator_activity = link.activity

    for c in model.bcm.constraints:
        for atom in (c.ctype.before, c.ctype.after, c.ctype.total):
            if atom is not None and atom.maximum() == 0:
                raise GenerationError(f"constraint {c.id}: forbidding constraint types are unsupported")

    for cls, plan in plans.items():
        for link in model.links:
            if link.cls != cls or link.activity == plan.creator_activity:
                continue
            target = _stepwise_target(
                link.card_events_always,
                link.card_events_eventually,
                start=0,
                what=f"link ({link.activity}, {cls})",
            )
            if target > 0:
                plan.acts.append((link.activity, target))
        plan.acts = _order_acts(model, cls, plan.acts)

    # Raw relation needs: (owner class, rt, owner side) -> (eventual count, needed at creation).
    raw: dict[str, list[tuple[RelationshipType, str, str, int, bool]]] = {
        cls: [] for cls in model.clam.classes
    }
    for rt in model.clam.rel_types:
        sides = [("src", rt.target)] if rt.source == rt.target else [("src", rt.target), ("tar", rt.source)]
        for my_side, partner_cls in sides:
            cls = rt.source if my_side == "src" else rt.target
            always, eventually = _partner_cards(rt, my_side)
            count = eventually.minimum()
            at_creation = 0 not in always
            if count > 0 or at_creation:
                raw[cls].append((rt, my_side, partner_cls, max(count, 1 if at_creation else 0), at_creation))

    def needs_at_creation(cls: str, rt: RelationshipType) -> bool:
        return any(r[0] is rt and r[4] for r in raw[cls])

    def needs_eventually(cls: str, rt: RelationshipType) -> bool:
        return any(r[0] is rt and not r[4] for r in raw[cls])

    for cls, plan in plans.items():
        for rt, my_side, partner_cls, count, at_creation in raw[cls]:
            need = _RelNeed(rt, my_side, partner_cls, count)
            partner = plans[partner_cls]
            if at_creation:
                if needs_eventually(partner_cls, rt):
                    # The partners exist already and are waiting for this
                    # object: creation happens by absorbing their demand.
                    if plan.flush_rt is not None and plan.flush_rt != rt.id:
                        raise GenerationError(
                            f"class {cls!r} would need demand-driven creation on two relationships"
                        )
                    plan.flush_rt = rt.id
                elif partner.creator_activity is not None and needs_at_creation(partner_cls, rt):
                    # Mutual at-creation need: the creator side owns the group.
                    if plan.creator_activity is not None:
                        raise GenerationError(
                            f"classes {cls!r} and {partner_cls!r} both require creation events "
                            f"but must be created together"
                        )
                    if count != 1:
                        raise GenerationError(
                            f"class {cls!r} needs {count} {partner_cls!r} partners at creation; "
                            f"only one co-creating parent is supported"
                        )
                    plan.is_child = True
                elif partner.creator_activity is not None:
                    raise GenerationError(
                        f"class {cls!r} needs a {partner_cls!r} partner at creation but "
                        f"{partner_cls!r} is created independently"
                    )
                elif partner.acts:
                    # The partner has obligations of its own, so it enters the
                    # log together with this object rather than from a pool.
                    plan.children.append(need)
                else:
                    plan.ambient.append(need)
            else:
                if partner.creator_activity is not None:
                    always, eventually = _partner_cards(rt, my_side)
                    steps = _stepwise_target(
                        always, eventually, 0, what=f"class {cls!r} via {rt.id}"
                    )
                    plan.eventual.append(replace(need, count=steps))
                else:
                    plan.ambient.append(need)

    # Co-creation nests one level (parent -> children) only.
    for cls, plan in plans.items():
        for need in plan.children:
            if plans[need.partner_cls].children:
                raise GenerationError(
                    f"class {need.partner_cls!r} is co-created by {cls!r} but has "
                    f"co-created dependents of its own"
                )

    # Demand-driven creation absorbs pending relation needs at creation time;
    # the admissible batch size is judged against one relationship, so all
    # demand reaching a class must arrive on the same one.
    for cls, plan in plans.items():
        for need in plan.eventual:
            partner = plans[need.partner_cls]
            if partner.flush_rt is None:
                partner.flush_rt = need.rt.id
            elif partner.flush_rt != need.rt.id:
                raise GenerationError(
                    f"class {need.partner_cls!r} receives demand-driven creation "
                    f"requests on both {partner.flush_rt!r} and {need.rt.id!r}"
                )

    _verify_reference_cards(model, plans)
    return plans


def _verify_reference_cards(model: OcbcModel, plans: dict[str, _ClassPlan]) -> None:
    """Every emitted event references exactly one object of its subject class;
    all other links of the same activity must tolerate zero references."""
    used: set[tuple[str, str]] = set()
    for cls, plan in plans.items():
        if plan.creator_activity is not None:
            used.add((plan.creator_activity, cls))
        for activity, _count in plan.acts:
            used.add((activity, cls))
    for activity, cls in sorted(used):
        for link in model.links_of_activity(activity):
            required = 1 if link.cls == cls else 0
            if required not in link.card_objects:
                raise GenerationError(
                    f"link ({link.activity}, {link.cls}): object cardinality "
                    f"{link.card_objects} does not admit {required} reference(s) "
                    f"on {activity!r} events"
                )


def _order_acts(model: OcbcModel, cls: str, acts: list[tuple[str, int]]) -> list[tuple[str, int]]:
    """Topologically order one object's activity obligations using the
    behavioral constraints whose activities both occur in the list."""
    names = [a for a, _ in acts]
    edges: set[tuple[str, str]] = set()
    for c in model.bcm.constraints:
        if c.ref_activity not in names or c.target_activity not in names:
            continue
        if c.ctype.before is not None and 0 not in c.ctype.before:
            edges.add((c.target_activity, c.ref_activity))
        if c.ctype.after is not None and 0 not in c.ctype.after:
            edges.add((c.ref_activity, c.target_activity))
    ordered: list[str] = []
    remaining = list(names)
    while remaining:
        ready = [a for a in remaining if not any(p in remaining for p, q in edges if q == a)]
        if not ready:
            raise GenerationError(f"class {cls!r}: cyclic ordering between activities {remaining}")
        ordered.append(ready[0])
        remaining.remove(ready[0])
    counts = dict(acts)
    return [(a, counts[a]) for a in ordered]


def _pick_count(rng: random.Random, card: Cardinality, at_most: int | None = None) -> int:
    """A small member of the cardinality, >= 1, at most `at_most`."""
    feasible = card.restrict_min(1)
    if feasible is None:
        raise GenerationError(f"cardinality {card} admits no positive count")
    low = feasible.minimum()
    options = [v for v in range(low, low + 3) if v in feasible and (at_most is None or v <= at_most)]
    if not options:
        raise GenerationError(f"cardinality {card} admits no count <= {at_most}")
    return rng.choice(options)


# -- generation --------------------------------------------------------------


@dataclass
class _LiveObject:
    oid: str
    plan: _ClassPlan
    next_act: int = 0
    emitted: int = 0

    @property
    def acts_done(self) -> bool:
        return self.next_act >= len(self.plan.acts)


class _Generator:
    def __init__(self, model: OcbcModel, target_events: int, seed: int):
        self.model = model
        self.target = target_events
        self.rng = random.Random(seed)
        self.plans = _analyze(model)
        self.events: list[Event] = []
        self.init_class: dict[str, str] = {}
        self.counter = 0
        self.pool: dict[str, list[str]] = {}
        self.active: list[_LiveObject] = []
        # Outstanding relation demand, keyed by the class whose creation absorbs it.
        self.pending: dict[str, list[list]] = {}  # [live, need, remaining]

    def _fresh(self, cls: str) -> str:
        self.counter += 1
        return f"{cls[:2]}{self.counter}"

    def _ambient(self, cls: str, k: int) -> list[str]:
        """k distinct partners from the shared pool of a plain class."""
        if cls not in self.pool:
            if not self.plans[cls].poolable:
                raise GenerationError(
                    f"class {cls!r} is needed as an ambient partner but has obligations of its own"
                )
            self.pool[cls] = [self._fresh(cls) for _ in range(self.rng.randint(2, 4))]
            for oid in self.pool[cls]:
                self.init_class[oid] = cls
        while len(self.pool[cls]) < k:
            oid = self._fresh(cls)
            self.pool[cls].append(oid)
            self.init_class[oid] = cls
        return self.rng.sample(self.pool[cls], k)

    def _emit(self, activity: str, objects: set[str], delta: ObjectDelta = ObjectDelta()) -> None:
        seq = len(self.events) + 1
        self.events.append(
            Event(id=f"e{seq}", seq=seq, activity=activity, objects=frozenset(objects), delta=delta)
        )

    def _register(self, cls: str) -> _LiveObject:
        live = _LiveObject(oid=self._fresh(cls), plan=self.plans[cls])
        self.active.append(live)
        for need in live.plan.eventual:
            self.pending.setdefault(need.partner_cls, []).append([live, need, need.count])
        return live

    def _materialize(self, live: _LiveObject) -> tuple[list, list]:
        """New objects/relations for creating `live`: itself, its co-created
        children (recursively), and its ambient relations."""
        new_objects: list[tuple[str, str]] = [(live.oid, live.plan.cls)]
        new_relations: list[Relation] = []
        for need in live.plan.ambient:
            # Pool partners accumulate relations without bound, so their own
            # side of the relationship must be unconstrained.
            partner_side = "tar" if need.my_side == "src" else "src"
            p_always, p_eventually = _partner_cards(need.rt, partner_side)
            if not (p_always.is_universal and p_eventually.is_universal):
                raise GenerationError(
                    f"ambient class {need.partner_cls!r} has a bounded cardinality "
                    f"on its side of {need.rt.id}"
                )
            for partner in self._ambient(need.partner_cls, need.count):
                new_relations.append(need.relation(live.oid, partner))
        for need in live.plan.children:
            always, eventually = _partner_cards(need.rt, need.my_side)
            n = _pick_count(self.rng, eventually if eventually.minimum() > 0 else always)
            for _ in range(n):
                child = self._register(need.partner_cls)
                new_relations.append(need.relation(live.oid, child.oid))
                child_objects, child_relations = self._materialize(child)
                new_objects += child_objects
                new_relations += child_relations
        return new_objects, new_relations

    def _start_cluster(self, cls: str) -> None:
        plan = self.plans[cls]
        root = self._register(cls)
        new_objects, new_relations = self._materialize(root)
        delta = ObjectDelta(new_objects=tuple(new_objects), new_relations=tuple(new_relations))
        if plan.creator_activity is not None:
            self._emit(plan.creator_activity, {root.oid}, delta)
        elif plan.acts:
            # No creating activity: the object enters with its first obligation event.
            activity, count = plan.acts[0]
            self._emit(activity, {root.oid}, delta)
            root.emitted = 1
            if root.emitted >= count:
                root.next_act, root.emitted = 1, 0
        else:
            self.init_class[root.oid] = cls

    def _discharge_act(self, live: _LiveObject) -> None:
        activity, count = live.plan.acts[live.next_act]
        self._emit(activity, {live.oid})
        live.emitted += 1
        if live.emitted >= count:
            live.next_act += 1
            live.emitted = 0

    def _flushable(self, cls: str) -> list[list]:
        return [entry for entry in self.pending.get(cls, []) if entry[0].acts_done]

    def _flush(self, cls: str, drain: bool) -> bool:
        """Create one `cls` object, absorbing pending demand for it."""
        ready = self._flushable(cls)
        if not ready:
            return False
        plan = self.plans[cls]
        if plan.creator_activity is None or plan.flush_rt is None:
            raise GenerationError(f"class {cls!r} has pending demand but no absorbing creation")
        rt = self.model.clam.rel_type(plan.flush_rt)
        my_side = "src" if rt.source == cls else "tar"
        always, eventually = _partner_cards(rt, my_side)
        admissible = always.intersect(eventually)
        if admissible is None or admissible.restrict_min(1) is None:
            raise GenerationError(f"class {cls!r}: no admissible partner count at creation")
        smallest = admissible.restrict_min(1).minimum()
        if len(ready) < smallest:
            if drain:
                raise GenerationError(
                    f"cannot create a {cls!r}: needs {smallest} pending partner(s), "
                    f"only {len(ready)} are ready"
                )
            return False
        m = _pick_count(self.rng, admissible, at_most=len(ready)) if not drain else smallest
        chosen = self.rng.sample(ready, m) if not drain else ready[:m]
        partner = self._register(cls)
        new_objects, new_relations = self._materialize(partner)
        for entry in chosen:
            live, need, remaining = entry
            new_relations.append(need.relation(live.oid, partner.oid))
            if remaining > 1:
                entry[2] = remaining - 1
            else:
                self.pending[cls].remove(entry)
        self._emit(
            plan.creator_activity,
            {partner.oid},
            ObjectDelta(new_objects=tuple(new_objects), new_relations=tuple(new_relations)),
        )
        return True

    def run(self) -> EventLog:
        children = {need.partner_cls for plan in self.plans.values() for need in plan.children}
        roots = [
            cls
            for cls, plan in sorted(self.plans.items())
            if (plan.creator_activity is not None or plan.acts)
            and cls not in children
            and not plan.is_child
            and plan.flush_rt is None
        ]
        if self.target > 0 and not roots:
            raise GenerationError("model has no startable cluster to generate events from")
        budget = max(self.target * 3 + 64, 256)
        while len(self.events) < self.target:
            if len(self.events) >= budget:
                raise GenerationError(f"generation budget ({budget} events) exceeded")
            choices: list[str] = ["start"]
            dischargeable = [o for o in self.active if not o.acts_done]
            if dischargeable:
                choices += ["act", "act"]
            flushables = [cls for cls in self.pending if self._flushable(cls)]
            if flushables:
                choices.append("flush")
            action = self.rng.choice(choices)
            if action == "start":
                self._start_cluster(self.rng.choice(roots))
            elif action == "act":
                self._discharge_act(self.rng.choice(dischargeable))
            else:
                self._flush(self.rng.choice(flushables), drain=False)
        while True:
            if len(self.events) > budget + self.target:
                raise GenerationError("generation budget exceeded while draining obligations")
            dischargeable = [o for o in self.active if not o.acts_done]
            if dischargeable:
                self._discharge_act(dischargeable[0])
                continue
            flushables = [cls for cls in sorted(self.pending) if self._flushable(cls)]
            if flushables:
                self._flush(flushables[0], drain=True)
                continue
            if any(self.pending.values()):
                stuck = {cls: len(v) for cls, v in self.pending.items() if v}
                raise GenerationError(f"undischargeable relation obligations remain: {stuck}")
            break
        init = ObjectModel(class_of=self.init_class, relations=frozenset())
        return EventLog(init=init, events=tuple(self.events))


def generate_conforming(model: OcbcModel, events: int, seed: int = 0) -> EventLog:
    """Generate a log that passes every conformance check, with at least
    `events` events (obligations opened near the end are still discharged,
    so the log may run slightly longer)."""
    return _Generator(model, events, seed).run()


# -- violation injection -----------------------------------------------------


@dataclass(frozen=True)
class InjectionOutcome:
    """What the mutation did and where the checker confirmed the violation."""

    kind: str
    description: str
    event: str = ""
    obj: str = ""
    constraint: str = ""

    def matches(self, v: Violation) -> bool:
        return (
            v.kind == self.kind
            and (not self.event or v.event == self.event)
            and (not self.obj or v.obj == self.obj)
            and (not self.constraint or v.constraint == self.constraint)
        )


def _rebuild(init: ObjectModel, events: list[Event]) -> EventLog:
    renumbered = [replace(e, seq=i + 1) for i, e in enumerate(events)]
    return EventLog(init=init, events=tuple(renumbered))


def _without_object(om: ObjectModel, obj: str) -> ObjectModel:
    class_of = {o: c for o, c in om.class_of.items() if o != obj}
    relations = frozenset(r for r in om.relations if obj not in (r[1], r[2]))
    return ObjectModel(class_of=class_of, relations=relations)


def _delete_event(log: EventLog, index: int) -> EventLog | None:
    """Delete one event; its delta (if any) moves to the previous event or
    the initial model so that later events still replay."""
    events = list(log.events)
    victim = events.pop(index)
    init = log.init
    delta = victim.delta
    if not delta.is_empty:
        if delta.assert_snapshot is not None:
            return None
        if index == 0:
            if delta.removed_relations:
                return None
            class_of = dict(init.class_of)
            class_of.update(dict(delta.new_objects))
            init = ObjectModel(class_of=class_of, relations=init.relations | set(delta.new_relations))
        else:
            host = events[index - 1]
            if host.delta.assert_snapshot is not None:
                return None
            events[index - 1] = replace(
                host,
                delta=ObjectDelta(
                    new_objects=host.delta.new_objects + delta.new_objects,
                    new_relations=host.delta.new_relations + delta.new_relations,
                    removed_relations=host.delta.removed_relations + delta.removed_relations,
                ),
            )
    return _rebuild(init, events)


def _candidates(model: OcbcModel, log: EventLog, kind: str, rng: random.Random):
    """Yield (mutated log, site hints, description) candidates for one kind."""
    events = list(log.events)
    if not events:
        return
    final = log.final_snapshot()
    last = events[-1]
    order = list(range(len(events)))
    rng.shuffle(order)

    if kind == "I":
        # A relation with a wrongly-classed endpoint breaks snapshot validity.
        rts = sorted(model.clam.rel_types, key=lambda r: r.id)
        rng.shuffle(rts)
        objects = sorted(final.class_of)
        for rt in rts:
            wrong = [o for o in objects if final.class_of[o] != rt.source]
            partners = [o for o in objects if final.class_of[o] == rt.target]
            rng.shuffle(wrong)
            rng.shuffle(partners)
            for bad in wrong[:4]:
                for partner in partners[:4]:
                    delta = replace(
                        last.delta, new_relations=last.delta.new_relations + ((rt.id, bad, partner),)
                    )
                    mutated = events[:-1] + [replace(last, delta=delta)]
                    yield (
                        _rebuild(log.init, mutated),
                        {"event": last.id, "obj": bad},
                        f"added mistyped relation ({rt.id},{bad},{partner}) in the delta of {last.id}",
                    )

    elif kind == "II":
        for i in order:
            for rel in events[i].delta.new_relations:
                delta = replace(
                    events[i].delta,
                    new_relations=tuple(r for r in events[i].delta.new_relations if r != rel),
                )
                mutated = list(events)
                mutated[i] = replace(events[i], delta=delta)
                yield (
                    _rebuild(log.init, mutated),
                    {},
                    f"dropped relation {rel} from the delta of {events[i].id}",
                )

    elif kind == "III":
        candidates = sorted(final.class_of)
        rng.shuffle(candidates)
        for obj in candidates[:12]:
            if obj in last.objects:
                continue
            snapshot = _without_object(log.snapshot_after(last.id), obj)
            delta = replace(last.delta, assert_snapshot=snapshot)
            mutated = events[:-1] + [replace(last, delta=delta)]
            yield (
                _rebuild(log.init, mutated),
                {"event": last.id, "obj": obj},
                f"asserted a final snapshot from which {obj} disappeared",
            )

    elif kind == "IV":
        for i in order:
            mutated = list(events)
            mutated[i] = replace(events[i], activity=events[i].activity + "-undeclared")
            yield (
                _rebuild(log.init, mutated),
                {"event": events[i].id},
                f"renamed the activity of {events[i].id} to an undeclared name",
            )

    elif kind == "V":
        for i in order:
            mutated = list(events)
            mutated[i] = replace(events[i], objects=events[i].objects | {"ghost"})
            yield (
                _rebuild(log.init, mutated),
                {"event": events[i].id, "obj": "ghost"},
                f"made {events[i].id} reference an object that never exists",
            )

    elif kind == "VI":
        for i in order:
            event = events[i]
            snapshot = log.snapshot_after(event.id)
            unrelated = [
                o
                for o, cls in sorted(snapshot.class_of.items())
                if not model.has_link(event.activity, cls) and o not in event.objects
            ]
            rng.shuffle(unrelated)
            for obj in unrelated[:3]:
                mutated = list(events)
                mutated[i] = replace(event, objects=event.objects | {obj})
                yield (
                    _rebuild(log.init, mutated),
                    {"event": event.id, "obj": obj},
                    f"made {event.id} reference {obj}, whose class is not linked to "
                    f"activity {event.activity!r}",
                )

    elif kind == "VII":
        for i in order:
            event = events[i]
            if event.objects and event.delta.is_empty:
                dup = replace(event, id=f"{event.id}-again")
                mutated = events[: i + 1] + [dup] + events[i + 1 :]
                yield (
                    _rebuild(log.init, mutated),
                    {"event": dup.id},
                    f"repeated event {event.id} with the same object references",
                )
        for i in order:
            mutated_log = _delete_event(log, i)
            if mutated_log is not None:
                yield (mutated_log, {}, f"deleted event {events[i].id}")

    elif kind == "VIII":
        for i in order:
            event = events[i]
            for link in model.links_of_activity(event.activity):
                cleared = frozenset(o for o in event.objects if final.class_of.get(o) != link.cls)
                if cleared != event.objects:
                    mutated = list(events)
                    mutated[i] = replace(event, objects=cleared)
                    yield (
                        _rebuild(log.init, mutated),
                        {"event": event.id},
                        f"removed every {link.cls!r} reference from {event.id}",
                    )

    elif kind == "IX":
        constraints = list(model.bcm.constraints)
        rng.shuffle(constraints)
        for c in constraints:
            ref_ids = log.events_of_activity(c.ref_activity)
            rng.shuffle(ref_ids)
            for ref_id in ref_ids:
                targets = sorted(resolve_targets(model, log, c.id, ref_id))
                ref_index = log.index_of(ref_id)
                for target_id in targets:
                    moved_index = log.index_of(target_id)
                    if moved_index == ref_index:
                        continue
                    mutated = list(events)
                    moved = mutated.pop(moved_index)
                    if not moved.delta.is_empty:
                        continue
                    mutated.insert(ref_index, moved)  # lands on the other side of the reference
                    yield (
                        _rebuild(log.init, mutated),
                        {"event": ref_id, "constraint": c.id},
                        f"moved target event {target_id} across reference event {ref_id} "
                        f"of constraint {c.id}",
                    )
                for target_id in targets:
                    mutated_log = _delete_event(log, log.index_of(target_id))
                    if mutated_log is not None:
                        yield (
                            mutated_log,
                            {"constraint": c.id},
                            f"deleted target event {target_id} of constraint {c.id}",
                        )


def inject_violation(
    model: OcbcModel, log: EventLog, kind: str, seed: int = 0
) -> tuple[EventLog, InjectionOutcome]:
    """Mutate a conforming log so the checker reports the requested kind.

    The returned outcome names the confirmed violation site.  Cascaded
    violations of other kinds may accompany the injected one (for example,
    dropping a relation for a fulfilment breach also starves behavioral
    constraints scoped through that relationship).
    """
    rng = random.Random(seed)
    for mutated, hints, description in _candidates(model, log, kind, rng):
        if mutated is None:
            continue
        try:
            found = check_violations(model, mutated, kinds=(kind,))
        except LogError:
            continue
        for violation in found:
            if all(getattr(violation, key) == value for key, value in hints.items()):
                return mutated, InjectionOutcome(
                    kind=kind,
                    description=description,
                    event=violation.event,
                    obj=violation.obj,
                    constraint=violation.constraint,
                )
    raise InjectionError(f"no verified mutation of kind {kind} for this model/log")
