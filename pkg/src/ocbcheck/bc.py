"""Evaluation of plain behavioral constraint models over an ordered event sequence.

No object correlation here: every event of the target activity counts.  This
is the arithmetic core reused by the behavioral-constraint conformance check,
and is directly usable for single-instance (case-based) traces.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cardinality import ConstraintType
from .model import BcModel, BehavioralConstraint


@dataclass(frozen=True)
class BcVerdict:
    constraint: str
    ref_event: str
    before_count: int
    after_count: int
    satisfied: bool


def evaluate_bc(bcm: BcModel, events: Iterable[tuple[str, str]]) -> list[BcVerdict]:
    """Evaluate every constraint at every reference event of an ordered trace.

    `events` is a sequence of (event id, activity) pairs in execution order.
    One verdict is produced per (constraint, reference event) pair; counts
    are strict (the reference event itself is in neither count, even when
    reference and target activities coincide).  Verdicts are ordered by
    (constraint id, position).
    """
    trace: Sequence[tuple[str, str]] = list(events)
    totals = Counter(activity for _, activity in trace)
    by_ref: dict[str, list[BehavioralConstraint]] = {}
    for c in bcm.constraints:
        by_ref.setdefault(c.ref_activity, []).append(c)

    verdicts: list[tuple[str, int, BcVerdict]] = []
    prefix: Counter[str] = Counter()
    for position, (event_id, activity) in enumerate(trace):
        for c in by_ref.get(activity, ()):
            target = c.target_activity
            before = prefix[target]
            after = totals[target] - before - (1 if activity == target else 0)
            verdicts.append(
                (
                    c.id,
                    position,
                    BcVerdict(
                        constraint=c.id,
                        ref_event=event_id,
                        before_count=before,
                        after_count=after,
                        satisfied=c.ctype.accepts(before, after),
                    ),
                )
            )
        prefix[activity] += 1
    verdicts.sort(key=lambda item: (item[0], item[1]))
    return [v for _, _, v in verdicts]


def bc_model_satisfied(bcm: BcModel, events: Iterable[tuple[str, str]]) -> bool:
    return all(v.satisfied for v in evaluate_bc(bcm, events))


@dataclass(frozen=True)
class PairConstraint:
    """An edge with reference events at both endpoints: shorthand for the
    conjunction of two directed constraints."""

    id: str
    left_activity: str
    right_activity: str
    left_to_right: ConstraintType
    right_to_left: ConstraintType


def expand_shorthand(pair: PairConstraint) -> tuple[BehavioralConstraint, BehavioralConstraint]:
    """Expand a two-dot edge into the two ordinary constraints it abbreviates."""
    forward = BehavioralConstraint(
        id=f"{pair.id}#1",
        ref_activity=pair.left_activity,
        target_activity=pair.right_activity,
        ctype=pair.left_to_right,
    )
    backward = BehavioralConstraint(
        id=f"{pair.id}#2",
        ref_activity=pair.right_activity,
        target_activity=pair.left_activity,
        ctype=pair.right_to_left,
    )
    return forward, backward
