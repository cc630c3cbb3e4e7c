"""Acceptance suite: one test per exit criterion, each printing a pass/fail
line in the terminal summary.  Tolerances are pinned here, not configurable."""

from __future__ import annotations

import gc
import json
import random
import time
import tracemalloc

import pytest

from conftest import record_acceptance
from ocbcheck import (
    FormatError,
    ModelDefectsError,
    builtin_constraint_type,
    check_all,
    check_type_i,
    check_type_ii,
    check_type_ix,
    check_violations,
    constraint_type_accepts,
    evaluate_bc,
    generate_conforming,
    inject_violation,
    load_log,
    load_model,
    load_report,
    save_log,
    save_model,
    save_report,
)
from ocbcheck.violations import KINDS, sort_violations
from oracle import naive_check
from scenarios import (
    hiring_log,
    hiring_model,
    order_object_model,
    order_class_snapshot_model,
    order_process_log,
    order_process_model,
    precedence_log,
    precedence_model,
    random_case_scenario,
    random_log,
    random_model,
    throughput_model,
    ticket_log,
    ticket_model,
)


def test_criterion_1_behavioral_violations_exact_set():
    """Unary-precedence over a shared relationship: violations exactly at the
    two reference events with no earlier correlated target."""
    started = time.perf_counter()
    violations = check_type_ix(precedence_model(), precedence_log())
    elapsed = time.perf_counter() - started
    assert [(v.event, v.before, v.after) for v in violations] == [("e3", 0, 1), ("e6", 0, 0)]
    assert {v.constraint for v in violations} == {"c"}
    assert elapsed < 1.0
    record_acceptance(1, "behavioral check flags exactly the two unmatched reference events")


def test_criterion_2_event_object_count_violations_exact_set():
    """Four payments over five tickets: one double payment, one missed
    payment, one ticketless payment, and nothing else."""
    report = check_all(ticket_model(), ticket_log())
    rows = [
        (v.kind, v.temporal, v.obj or v.event, v.observed, v.expected)
        for v in report.violations
    ]
    assert rows == [
        ("VII", "always", "t3", 2, "0..1"),
        ("VII", "eventually", "t5", 0, "1"),
        ("VIII", "", "p3", 0, "1..*"),
    ]
    record_acceptance(2, "double/missing payment and ticketless payment are the only findings")


def test_criterion_3_validity_and_fulfilment_triplet():
    model = order_class_snapshot_model()
    _, valid_log = order_object_model()
    assert check_type_i(model, valid_log) == []
    for mutant in (
        order_object_model(drop_relation=("r1", "o1", "ol1"))[1],
        order_object_model(add_relation=("r1", "o2", "ol1"))[1],
    ):
        violations = check_type_i(model, mutant)
        assert len(violations) == 1
        assert (violations[0].rel_type, violations[0].side, violations[0].expected) == ("r1", "src", "1")
    fulfilment = check_type_ii(model, valid_log)
    assert [(v.obj, v.rel_type, v.expected) for v in fulfilment] == [
        ("ol2", "r2", "1"),
        ("ol4", "r2", "1"),
    ]
    record_acceptance(3, "object-model validity and fulfilment triplet behaves exactly as specified")


def test_criterion_4_order_process_end_to_end():
    model, log = order_process_model(), order_process_log()
    assert 20 <= len(log.events) <= 40
    assert check_all(model, log).conforms
    for kind in KINDS:
        mutated, outcome = inject_violation(model, log, kind, seed=4)
        report = check_all(model, mutated)
        assert not report.conforms, kind
        assert any(outcome.matches(v) for v in report.violations), (kind, outcome)
    record_acceptance(4, "order process run conforms; all nine injected mutations flip the verdict")


def test_criterion_5_hiring_constraints():
    model = hiring_model()
    assert check_all(model, hiring_log()).conforms
    early = [v for v in check_violations(model, hiring_log("apply-before-open")) if v.kind == "IX"]
    assert [(v.constraint, v.before) for v in early] == [("c5", 0)]
    late = check_violations(model, hiring_log("apply-after-close"))
    assert [(v.kind, v.constraint, v.event, v.after) for v in late] == [("IX", "c6", "e6", 1)]
    record_acceptance(5, "hiring model: apply-before-open and apply-after-close mutants detected")


def test_criterion_6_oracle_equivalence_on_random_scenarios():
    """The optimized checker agrees with the definitional evaluator on 500
    random (model, log) pairs, violation for violation."""
    pairs = 0
    for seed in range(500):
        rng = random.Random(seed)
        model = random_model(rng)
        log = random_log(rng, model, max_events=15)
        assert len(log.events) <= 15
        assert len(log.final_snapshot().objects) <= 12
        assert len(model.bcm.constraints) <= 4
        fast = list(check_violations(model, log))
        slow = sort_violations(naive_check(model, log))
        assert fast == slow, f"divergence from the definitional evaluator at seed {seed}"
        pairs += 1
    assert pairs == 500
    record_acceptance(6, "optimized checker matches the definitional evaluator on 500 random pairs")


def test_criterion_7_trace_semantics_exhaustive_and_randomized():
    direct = {
        "response": lambda b, a: a >= 1,
        "unary-response": lambda b, a: a == 1,
        "non-response": lambda b, a: a == 0,
        "precedence": lambda b, a: b >= 1,
        "unary-precedence": lambda b, a: b == 1,
        "non-precedence": lambda b, a: b == 0,
        "co-existence": lambda b, a: b + a >= 1,
        "non-co-existence": lambda b, a: b + a == 0,
    }
    for name, predicate in direct.items():
        ctype = builtin_constraint_type(name)
        for before in range(11):
            for after in range(11):
                assert constraint_type_accepts(ctype, before, after) == predicate(before, after)

    from ocbcheck import BcModel
    from scenarios import constraint

    rng = random.Random(77)
    activities = ["a1", "a2", "a3"]
    for _ in range(200):
        model = BcModel(
            activities=frozenset(activities),
            constraints=tuple(
                constraint(f"c{i}", rng.choice(sorted(direct)), rng.choice(activities),
                           rng.choice(activities))
                for i in range(rng.randint(1, 4))
            ),
        )
        trace = [(f"e{i}", rng.choice(activities)) for i in range(rng.randint(0, 12))]
        fast = {
            (v.constraint, v.ref_event): (v.before_count, v.after_count, v.satisfied)
            for v in evaluate_bc(model, trace)
        }
        for c in model.constraints:
            for i, (eid, activity) in enumerate(trace):
                if activity != c.ref_activity:
                    continue
                before = sum(1 for j, (_, a) in enumerate(trace) if a == c.target_activity and j < i)
                after = sum(1 for j, (_, a) in enumerate(trace) if a == c.target_activity and j > i)
                assert fast[(c.id, eid)] == (before, after, c.ctype.accepts(before, after))
    record_acceptance(7, "trace semantics: exhaustive template grid and 200 randomized recounts agree")


def test_criterion_8_case_partitioning_mimics_trace_checking():
    """On single-class models where every event carries one case object,
    object-centric verdicts per case equal plain trace evaluation."""
    for seed in range(50):
        rng = random.Random(1000 + seed)
        model, log, by_case = random_case_scenario(rng)
        failing = {
            (v.constraint, v.event, v.before, v.after)
            for v in check_violations(model, log, kinds=("IX",))
        }
        expected = set()
        for case, event_ids in by_case.items():
            trace = [(eid, log.event(eid).activity) for eid in event_ids]
            for verdict in evaluate_bc(model.bcm, trace):
                if not verdict.satisfied:
                    expected.add(
                        (verdict.constraint, verdict.ref_event, verdict.before_count,
                         verdict.after_count)
                    )
        assert failing == expected, f"seed {seed}"
    record_acceptance(8, "per-case verdicts equal plain trace checking on 50 single-case scenarios")


def test_criterion_9_throughput_and_scaling():
    model = throughput_model()
    small = generate_conforming(model, events=10_000, seed=1)
    assert 10_000 <= len(small.events) <= 11_000
    assert len(small.final_snapshot().objects) * 2 == len(small.events)
    large = generate_conforming(model, events=2 * len(small.events), seed=1)

    def best_time(log):
        best = float("inf")
        for _ in range(3):
            gc.collect()
            started = time.perf_counter()
            report = check_all(model, log)
            best = min(best, time.perf_counter() - started)
            assert report.conforms
        return best

    t_small = best_time(small)
    t_large = best_time(large)
    assert t_small < 5.0, f"10k-event check took {t_small:.2f}s"
    ratio = t_large / max(t_small, 0.05)
    assert ratio <= 3.0, f"doubling the log scaled runtime by {ratio:.2f}x"

    def peak_memory(log):
        tracemalloc.start()
        check_all(model, log)
        _, peak = tracemalloc.get_traced_memory()
        tracemalloc.stop()
        return peak

    memory_ratio = peak_memory(large) / max(peak_memory(small), 1)
    assert memory_ratio <= 3.0, f"doubling the log scaled memory by {memory_ratio:.2f}x"
    record_acceptance(
        9, f"10k-event check in {t_small * 1000:.0f} ms; 2x log -> {ratio:.2f}x time, "
           f"{memory_ratio:.2f}x memory",
    )


BAD_MODEL_DOCS = [
    (b'{"activities": [', "invalid JSON"),
    (b'{"activities": []}', "missing required key 'classes'"),
    (b'{"activities": [], "classes": [], "color": 1}', "unknown key 'color'"),
    (b'{"activities": 3, "classes": []}', "expected array"),
    (b'{"activities": [], "classes": [], "aoc": [{"activity": "a"}]}', "missing required key 'class'"),
    (
        b'{"activities": ["a"], "classes": ["k"], "aoc": [{"activity": "a", "class": "k", '
        b'"card_obj": "oops"}]}',
        "bad cardinality 'oops'",
    ),
    (
        b'{"activities": ["a"], "classes": ["k"], "aoc": [{"activity": "a", "class": "k", '
        b'"card_obj": "5..2"}]}',
        "bad cardinality",
    ),
    (
        b'{"activities": ["a"], "classes": [], "constraints": [{"id": "c", "type": "zz", '
        b'"ref": "a", "target": "a", "via": "k"}]}',
        "unknown constraint template",
    ),
    (b"\xff\xfe", "not valid UTF-8"),
]

BAD_LOG_DOCS = [
    (b"{nope}", "invalid JSON"),
    (b'{"id": "e1", "activity": "a"}', "missing required key 'seq'"),
    (b'{"id": "e1", "seq": 1, "activity": "a", "x": 1}', "unknown key 'x'"),
    (b'{"id": "e1", "seq": 9223372036854775808, "activity": "a"}', "64-bit"),
    (
        b'{"id": "e1", "seq": 1, "activity": "a"}\n{"id": "e2", "seq": 1, "activity": "a"}',
        "duplicate seq",
    ),
    (
        b'{"id": "e1", "seq": 1, "activity": "a"}\n{"id": "e1", "seq": 2, "activity": "a"}',
        "duplicate event id",
    ),
    (
        b'{"id": "e1", "seq": 1, "activity": "a", "new_objects": [{"id": "o", "class": "k"}]}\n'
        b'{"id": "e2", "seq": 2, "activity": "a", "new_objects": [{"id": "o", "class": "k"}]}',
        "already exists",
    ),
    (b'{"id": "e1", "seq": 1, "activity": "a", "new_relations": [["r", "x", "y"]]}', "unknown object"),
    (
        b'{"id": "e1", "seq": 1, "activity": "a", "removed_relations": [["r", "x", "y"]]}',
        "cannot remove absent relation",
    ),
    (b'{"id": "e1", "seq": 1, "activity": "a"}\n{"init": {}}', "init model must be the first line"),
]


def test_criterion_10_format_robustness():
    for data, needle in BAD_MODEL_DOCS:
        with pytest.raises(FormatError, match=needle):
            load_model(data)
    with pytest.raises(ModelDefectsError, match="scope-not-linked"):
        load_model(
            json.dumps(
                {
                    "activities": ["a1", "a2"],
                    "classes": ["oca", "ocb"],
                    "relationships": [{"id": "r", "source": "oca", "target": "ocb"}],
                    "aoc": [{"activity": "a1", "class": "oca"}],
                    "constraints": [
                        {"id": "c", "type": "response", "ref": "a1", "target": "a2", "via": "r"}
                    ],
                }
            )
        )
    for data, needle in BAD_LOG_DOCS:
        with pytest.raises(FormatError, match=needle):
            load_log(data)

    for model in (order_process_model(), hiring_model(), precedence_model()):
        data = save_model(model)
        assert save_model(load_model(data)) == data
    for log in (order_process_log(), ticket_log(), precedence_log()):
        data = save_log(log)
        assert save_log(load_log(data)) == data
    report = check_all(ticket_model(), ticket_log())
    assert save_report(load_report(save_report(report))) == save_report(report)
    record_acceptance(10, "every schema error class has a failing fixture; round-trips byte-stable")
