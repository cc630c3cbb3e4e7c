"""Violation records shared by the conformance checkers and the report layer."""

from __future__ import annotations

from dataclasses import dataclass, replace

KINDS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX")
_KIND_ORDER = {kind: i for i, kind in enumerate(KINDS)}

KIND_TITLES = {
    "I": "object-model validity",
    "II": "fulfilment",
    "III": "monotonicity",
    "IV": "activity existence",
    "V": "object existence",
    "VI": "proper classes",
    "VII": "events per object",
    "VIII": "objects per event",
    "IX": "behavioral constraints",
}

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class Violation:
    """One detected conformance problem.

    Only the fields relevant for the kind are populated; the rest keep their
    defaults.  `event`/`seq` name the position where the problem was detected
    (for eventual checks, the final event).
    """

    kind: str
    event: str = ""
    seq: int = -1
    constraint: str = ""
    obj: str = ""
    activity: str = ""
    cls: str = ""
    rel_type: str = ""
    side: str = ""  # "src" or "tar"
    temporal: str = ""  # "always" or "eventually"
    observed: int | None = None
    expected: str = ""
    before: int | None = None
    after: int | None = None
    detail: str = ""
    severity: str = SEVERITY_ERROR

    def sort_key(self) -> tuple:
        return (
            _KIND_ORDER[self.kind],
            self.seq,
            self.constraint,
            self.rel_type,
            self.side,
            self.temporal,
            self.activity,
            self.cls,
            self.obj,
            -1 if self.observed is None else self.observed,
            self.detail,
        )

    def downgraded(self) -> Violation:
        return replace(self, severity=SEVERITY_WARNING)


def sort_violations(violations: list[Violation]) -> list[Violation]:
    return sorted(violations, key=Violation.sort_key)
