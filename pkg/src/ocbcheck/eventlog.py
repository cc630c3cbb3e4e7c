"""Object-centric event logs: ordered events with object references and
object-model deltas, plus snapshot reconstruction.

The object model attached to an event is the state *after* the event took
place.  Deltas can add objects and add/remove relations; objects are never
removed, so delta-built logs are monotone by construction.  An event may
instead carry an asserted full snapshot, which replaces the folded state
(the only way a log can exhibit monotonicity violations).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

Relation = tuple[str, str, str]  # (relationship type, source object, target object)

# seq values must fit a 64-bit signed integer.
MAX_SEQ = 2**63 - 1


class LogError(ValueError):
    """Raised when a log cannot be built; carries the offending event index (or -1)."""

    def __init__(self, message: str, event_index: int = -1, event_id: str | None = None):
        where = f" (event {event_id!r}, index {event_index})" if event_index >= 0 else ""
        super().__init__(message + where)
        self.event_index = event_index
        self.event_id = event_id


@dataclass(frozen=True)
class ObjectModel:
    """Objects with their classes, and typed relations between them."""

    class_of: Mapping[str, str]
    relations: frozenset[Relation]

    def __post_init__(self) -> None:
        object.__setattr__(self, "class_of", MappingProxyType(dict(self.class_of)))
        object.__setattr__(self, "relations", frozenset(self.relations))
        for rel in self.relations:
            for endpoint in rel[1:]:
                if endpoint not in self.class_of:
                    raise LogError(f"relation {rel} references unknown object {endpoint!r}")

    @property
    def objects(self) -> frozenset[str]:
        return frozenset(self.class_of)

    def objects_of_class(self, cls: str) -> set[str]:
        return {o for o, c in self.class_of.items() if c == cls}


EMPTY_OBJECT_MODEL = ObjectModel(class_of={}, relations=frozenset())


@dataclass(frozen=True)
class ObjectDelta:
    """Changes applied to the object model by one event.

    Ordering within each list carries no meaning (objects are created before
    relations are touched), so the lists are kept sorted for canonical form.
    """

    new_objects: tuple[tuple[str, str], ...] = ()
    new_relations: tuple[Relation, ...] = ()
    removed_relations: tuple[Relation, ...] = ()
    assert_snapshot: ObjectModel | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "new_objects", tuple(sorted(self.new_objects)))
        object.__setattr__(self, "new_relations", tuple(sorted(self.new_relations)))
        object.__setattr__(self, "removed_relations", tuple(sorted(self.removed_relations)))

    @property
    def is_empty(self) -> bool:
        return (
            not self.new_objects
            and not self.new_relations
            and not self.removed_relations
            and self.assert_snapshot is None
        )


@dataclass(frozen=True)
class Event:
    id: str
    seq: int
    activity: str
    objects: frozenset[str] = frozenset()
    attrs: Mapping[str, str] = field(default_factory=dict)
    delta: ObjectDelta = ObjectDelta()

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", frozenset(self.objects))
        object.__setattr__(self, "attrs", MappingProxyType(dict(self.attrs)))
        if not 1 <= self.seq <= MAX_SEQ:
            raise LogError(f"seq {self.seq} outside the 64-bit positive range", event_id=self.id)


class _ReplayState:
    """Mutable working state while folding deltas; internal to this module."""

    __slots__ = ("class_of", "relations")

    def __init__(self, init: ObjectModel):
        self.class_of: dict[str, str] = dict(init.class_of)
        self.relations: set[Relation] = set(init.relations)

    def apply(self, event: Event, index: int) -> None:
        delta = event.delta
        for obj, cls in delta.new_objects:
            if obj in self.class_of:
                raise LogError(f"object {obj!r} already exists", index, event.id)
            self.class_of[obj] = cls
        for rel in delta.new_relations:
            for endpoint in rel[1:]:
                if endpoint not in self.class_of:
                    raise LogError(
                        f"relation {rel} references unknown object {endpoint!r}", index, event.id
                    )
            # Re-adding a present relation is idempotent (relations form a set).
            self.relations.add(rel)
        for rel in delta.removed_relations:
            if rel not in self.relations:
                raise LogError(f"cannot remove absent relation {rel}", index, event.id)
            self.relations.discard(rel)
        if delta.assert_snapshot is not None:
            self.class_of = dict(delta.assert_snapshot.class_of)
            self.relations = set(delta.assert_snapshot.relations)

    def snapshot(self) -> ObjectModel:
        return ObjectModel(class_of=dict(self.class_of), relations=frozenset(self.relations))


@dataclass(frozen=True)
class EventLog:
    """Totally ordered events over an evolving object model.

    Construction replays all deltas once: it sorts events by seq, rejects
    duplicate seqs/ids and failing deltas, and records a warning for every
    event reference to an object that does not exist in the snapshot after
    the event (re-reported by conformance checking as an object-existence
    problem).
    """

    init: ObjectModel = EMPTY_OBJECT_MODEL
    events: tuple[Event, ...] = ()
    warnings: tuple[str, ...] = field(init=False, default=())
    _index_of: Mapping[str, int] = field(
        init=False, repr=False, compare=False, default=None  # type: ignore[assignment]
    )

    def __post_init__(self) -> None:
        events = tuple(sorted(self.events, key=lambda e: e.seq))
        object.__setattr__(self, "events", events)
        seen_seq: set[int] = set()
        index_of: dict[str, int] = {}
        for i, event in enumerate(events):
            if event.seq in seen_seq:
                raise LogError(f"duplicate seq {event.seq}", i, event.id)
            seen_seq.add(event.seq)
            if event.id in index_of:
                raise LogError(f"duplicate event id {event.id!r}", i, event.id)
            index_of[event.id] = i
        object.__setattr__(self, "_index_of", MappingProxyType(index_of))

        warnings: list[str] = []
        state = _ReplayState(self.init)
        for i, event in enumerate(events):
            state.apply(event, i)
            for obj in sorted(event.objects - state.class_of.keys()):
                warnings.append(
                    f"event {event.id!r} (seq {event.seq}) references object {obj!r} "
                    f"that does not exist in its snapshot"
                )
        object.__setattr__(self, "warnings", tuple(warnings))

    def __len__(self) -> int:
        return len(self.events)

    def index_of(self, event_id: str) -> int:
        try:
            return self._index_of[event_id]
        except KeyError:
            raise LogError(f"unknown event id {event_id!r}") from None

    def event(self, event_id: str) -> Event:
        return self.events[self.index_of(event_id)]

    def snapshot_after(self, event_id: str) -> ObjectModel:
        """Object model directly after the given event (fold of all deltas up to it)."""
        position = self.index_of(event_id)
        state = _ReplayState(self.init)
        for event in self.events[: position + 1]:
            state.apply(event, self.index_of(event.id))
        return state.snapshot()

    def final_snapshot(self) -> ObjectModel:
        """Object model after the last event; the initial model for an empty log."""
        if not self.events:
            return self.init
        return self.snapshot_after(self.events[-1].id)

    def replay(self) -> Iterator[tuple[Event, Mapping[str, str], frozenset[Relation]]]:
        """Yield (event, class_of, relations) snapshots after each event.

        The mappings are fresh copies; callers may retain them.
        """
        state = _ReplayState(self.init)
        for i, event in enumerate(self.events):
            state.apply(event, i)
            yield event, dict(state.class_of), frozenset(state.relations)

    def events_of_activity(self, activity: str) -> list[str]:
        return [e.id for e in self.events if e.activity == activity]

    def before(self, event_id: str, within: Iterable[str]) -> set[str]:
        """Events of `within` strictly before the given event."""
        position = self.index_of(event_id)
        return {e for e in within if self.index_of(e) < position}

    def after(self, event_id: str, within: Iterable[str]) -> set[str]:
        """Events of `within` strictly after the given event."""
        position = self.index_of(event_id)
        return {e for e in within if self.index_of(e) > position}

    def before_including(self, event_id: str, within: Iterable[str]) -> set[str]:
        position = self.index_of(event_id)
        return {e for e in within if self.index_of(e) <= position}

    def after_including(self, event_id: str, within: Iterable[str]) -> set[str]:
        position = self.index_of(event_id)
        return {e for e in within if self.index_of(e) >= position}


def objects_of_class(om: ObjectModel, cls: str) -> set[str]:
    return om.objects_of_class(cls)
