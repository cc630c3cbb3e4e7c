from __future__ import annotations

import pytest

from ocbcheck import EventLog, LogError, ObjectModel, objects_of_class
from scenarios import event, order_object_model, order_process_log, precedence_log


def test_snapshot_after_single_delta():
    log = EventLog(events=(event("e1", 1, "make", new_objects=[("o1", "thing")]),))
    snapshot = log.snapshot_after("e1")
    assert snapshot.objects == {"o1"}
    assert snapshot.class_of["o1"] == "thing"


def test_snapshot_add_then_remove_relation():
    log = EventLog(
        events=(
            event("e1", 1, "make", new_objects=[("o1", "a"), ("ol1", "b")]),
            event("e2", 2, "link", new_relations=[("r1", "o1", "ol1")]),
            event("e3", 3, "unlink", removed_relations=[("r1", "o1", "ol1")]),
        )
    )
    assert ("r1", "o1", "ol1") in log.snapshot_after("e2").relations
    assert ("r1", "o1", "ol1") not in log.snapshot_after("e3").relations


def test_replaying_deltas_reaches_the_population_snapshot():
    om, log = order_object_model()
    replayed = log.snapshot_after("e1")
    assert len(replayed.objects) == 21
    assert replayed.class_of == om.class_of
    assert replayed.relations == om.relations


def test_events_of_activity_in_order():
    log = precedence_log()
    assert log.events_of_activity("a1") == ["e1", "e4"]
    assert log.events_of_activity("a2") == ["e2", "e3", "e5", "e6", "e7"]
    assert log.events_of_activity("unused") == []


def test_before_and_after():
    log = precedence_log()
    a1_events = log.events_of_activity("a1")
    assert log.before("e3", a1_events) == {"e1"}
    assert log.before("e1", log.events_of_activity("a2")) == set()
    assert log.before("e7", a1_events) == {"e1", "e4"}
    assert log.after("e3", a1_events) == {"e4"}
    assert log.before_including("e4", a1_events) == {"e1", "e4"}
    assert log.after_including("e4", a1_events) == {"e4"}


def test_before_after_partition():
    log = order_process_log()
    ids = [e.id for e in log.events]
    for pivot in ("e1", "e8", "e20"):
        others = set(ids) - {pivot}
        before, after = log.before(pivot, others), log.after(pivot, others)
        assert before | after == others
        assert not before & after


def test_objects_of_class():
    om, _ = order_object_model()
    assert objects_of_class(om, "order") == {"o1", "o2", "o3"}
    assert objects_of_class(om, "delivery") == {"d1", "d2"}
    assert objects_of_class(ObjectModel({}, frozenset()), "order") == set()


def test_replay_determinism():
    log = order_process_log()
    first = [log.snapshot_after(e.id) for e in log.events]
    second = [log.snapshot_after(e.id) for e in log.events]
    assert first == second


def test_replay_iterator_matches_per_event_snapshots():
    log = order_process_log()
    for event, class_of, relations in log.replay():
        snapshot = log.snapshot_after(event.id)
        assert class_of == dict(snapshot.class_of)
        assert relations == snapshot.relations


def test_monotone_growth_for_delta_logs():
    log = order_process_log()
    previous: set[str] = set()
    for e in log.events:
        current = set(log.snapshot_after(e.id).objects)
        assert previous <= current
        previous = current


def test_events_sorted_by_seq():
    log = EventLog(
        events=(event("late", 5, "a"), event("early", 2, "a"))
    )
    assert [e.id for e in log.events] == ["early", "late"]


def test_duplicate_seq_rejected():
    with pytest.raises(LogError, match="duplicate seq"):
        EventLog(events=(event("e1", 3, "a"), event("e2", 3, "a")))


def test_duplicate_event_id_rejected():
    with pytest.raises(LogError, match="duplicate event id"):
        EventLog(events=(event("e1", 1, "a"), event("e1", 2, "a")))


def test_duplicate_object_rejected():
    with pytest.raises(LogError, match="already exists"):
        EventLog(
            events=(
                event("e1", 1, "a", new_objects=[("o1", "k")]),
                event("e2", 2, "a", new_objects=[("o1", "k")]),
            )
        )


def test_dangling_relation_endpoint_rejected():
    with pytest.raises(LogError, match="unknown object"):
        EventLog(events=(event("e1", 1, "a", new_relations=[("r", "o1", "o2")]),))


def test_removing_absent_relation_rejected():
    with pytest.raises(LogError, match="absent relation"):
        EventLog(
            events=(
                event("e1", 1, "a", new_objects=[("o1", "k"), ("o2", "k")]),
                event("e2", 2, "a", removed_relations=[("r", "o1", "o2")]),
            )
        )


def test_re_adding_relation_is_idempotent():
    log = EventLog(
        events=(
            event("e1", 1, "a", new_objects=[("o1", "k"), ("o2", "k")], new_relations=[("r", "o1", "o2")]),
            event("e2", 2, "a", new_relations=[("r", "o1", "o2")]),
            event("e3", 3, "a", removed_relations=[("r", "o1", "o2")]),
        )
    )
    assert log.snapshot_after("e3").relations == frozenset()


def test_dangling_reference_warns_but_loads():
    log = EventLog(events=(event("e1", 1, "a", objects={"nobody"}),))
    assert len(log.warnings) == 1
    assert "nobody" in log.warnings[0]


def test_reference_to_object_created_by_same_event_is_fine():
    log = EventLog(events=(event("e1", 1, "a", objects={"o1"}, new_objects=[("o1", "k")]),))
    assert log.warnings == ()


def test_assert_snapshot_replaces_state():
    asserted = ObjectModel(class_of={"o2": "k"}, relations=frozenset())
    log = EventLog(
        events=(
            event("e1", 1, "a", new_objects=[("o1", "k")]),
            event("e2", 2, "a", assert_snapshot=asserted),
        )
    )
    assert log.snapshot_after("e1").objects == {"o1"}
    assert log.snapshot_after("e2").objects == {"o2"}


def test_unknown_event_id():
    log = EventLog(events=(event("e1", 1, "a"),))
    with pytest.raises(LogError, match="unknown event id"):
        log.snapshot_after("e9")


def test_init_model_precedes_first_event():
    init = ObjectModel(class_of={"o0": "k"}, relations=frozenset())
    log = EventLog(init=init, events=(event("e1", 1, "a", new_objects=[("o1", "k")]),))
    assert log.snapshot_after("e1").objects == {"o0", "o1"}
    assert log.final_snapshot().objects == {"o0", "o1"}
    assert EventLog(init=init).final_snapshot() == init
