"""Cardinalities (non-empty sets of admissible counts) and count-pair constraint types.

A cardinality is stored as a normalized union of inclusive integer ranges,
possibly unbounded above.  The textual grammar accepted by :func:`parse_cardinality`
is ``N``, ``N..M``, ``N..*`` and ``*``, optionally comma-separated into a union.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Bounds in cardinality annotations must fit a 32-bit signed integer.
MAX_BOUND = 2**31 - 1

_TERM_RE = re.compile(r"\s*(?:(\*)|(\d+)(?:\.\.(\d+|\*))?)\s*")


class CardinalityError(ValueError):
    """Raised for malformed cardinality text; carries the failing position."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Cardinality:
    """A non-empty set of non-negative integers as disjoint inclusive ranges.

    ``ranges`` is sorted ascending, with gaps between consecutive ranges
    (overlapping or adjacent input ranges are merged on construction).
    ``None`` as an upper bound means unbounded.
    """

    ranges: tuple[tuple[int, int | None], ...]

    def __post_init__(self) -> None:
        if not self.ranges:
            raise CardinalityError("cardinality must be a non-empty set")
        cleaned: list[tuple[int, int | None]] = []
        for low, high in self.ranges:
            if low < 0:
                raise CardinalityError(f"negative bound {low}")
            if high is not None and high < low:
                raise CardinalityError(f"empty range {low}..{high}")
            cleaned.append((low, high))
        cleaned.sort(key=lambda r: (r[0], -1 if r[1] is None else r[1]))
        merged: list[tuple[int, int | None]] = [cleaned[0]]
        for low, high in cleaned[1:]:
            plow, phigh = merged[-1]
            if phigh is None or low <= phigh + 1:
                if phigh is not None:
                    merged[-1] = (plow, None if high is None else max(phigh, high))
            else:
                merged.append((low, high))
        object.__setattr__(self, "ranges", tuple(merged))

    @classmethod
    def exactly(cls, n: int) -> Cardinality:
        return cls(((n, n),))

    @classmethod
    def at_least(cls, n: int) -> Cardinality:
        return cls(((n, None),))

    @classmethod
    def between(cls, low: int, high: int) -> Cardinality:
        return cls(((low, high),))

    @classmethod
    def universal(cls) -> Cardinality:
        return cls(((0, None),))

    @property
    def is_universal(self) -> bool:
        return self.ranges == ((0, None),)

    def __contains__(self, n: int) -> bool:
        return any(low <= n and (high is None or n <= high) for low, high in self.ranges)

    def minimum(self) -> int:
        return self.ranges[0][0]

    def maximum(self) -> int | None:
        """Largest member, or None when unbounded."""
        return self.ranges[-1][1]

    def is_subset_of(self, other: Cardinality) -> bool:
        # Normalized ranges of `other` are separated by real gaps, so each of
        # our ranges must fit inside a single range of `other`.
        for low, high in self.ranges:
            if not any(
                olow <= low and (ohigh is None or (high is not None and high <= ohigh))
                for olow, ohigh in other.ranges
            ):
                return False
        return True

    def intersect(self, other: Cardinality) -> Cardinality | None:
        """Set intersection, or None when empty."""
        out: list[tuple[int, int | None]] = []
        for alow, ahigh in self.ranges:
            for blow, bhigh in other.ranges:
                low = max(alow, blow)
                if ahigh is None:
                    high = bhigh
                elif bhigh is None:
                    high = ahigh
                else:
                    high = min(ahigh, bhigh)
                if high is None or low <= high:
                    out.append((low, high))
        return Cardinality(tuple(out)) if out else None

    def restrict_min(self, n: int) -> Cardinality | None:
        """Members >= n, or None when empty."""
        return self.intersect(Cardinality.at_least(n))

    def shift_down(self, n: int) -> Cardinality | None:
        """{x - n | x in self, x >= n}, or None when empty."""
        out = [
            (max(low, n) - n, None if high is None else high - n)
            for low, high in self.ranges
            if high is None or high >= n
        ]
        return Cardinality(tuple(out)) if out else None

    def render(self) -> str:
        parts = []
        for low, high in self.ranges:
            if low == 0 and high is None:
                parts.append("*")
            elif high is None:
                parts.append(f"{low}..*")
            elif low == high:
                parts.append(str(low))
            else:
                parts.append(f"{low}..{high}")
        return ",".join(parts)

    def __str__(self) -> str:
        return self.render()


def parse_cardinality(text: str) -> Cardinality:
    """Parse the ``N | N..M | N..* | *`` grammar, with comma-separated unions."""
    ranges: list[tuple[int, int | None]] = []
    offset = 0
    terms = text.split(",")
    for i, term in enumerate(terms):
        match = _TERM_RE.fullmatch(term)
        if match is None or (match.group(1) is None and match.group(2) is None):
            raise CardinalityError(f"expected cardinality term, got {term.strip()!r}", offset)
        if match.group(1):
            ranges.append((0, None))
        else:
            low = int(match.group(2))
            if low > MAX_BOUND:
                raise CardinalityError(f"bound {low} exceeds 32-bit range", offset)
            upper = match.group(3)
            if upper is None:
                ranges.append((low, low))
            elif upper == "*":
                ranges.append((low, None))
            else:
                high = int(upper)
                if high > MAX_BOUND:
                    raise CardinalityError(f"bound {high} exceeds 32-bit range", offset)
                if high < low:
                    raise CardinalityError(f"range {low}..{high} is empty", offset)
                ranges.append((low, high))
        offset += len(term) + 1
    return Cardinality(tuple(ranges))


def render_cardinality(card: Cardinality) -> str:
    return card.render()


def cardinality_contains(card: Cardinality, n: int) -> bool:
    return n in card


ANY = Cardinality.universal()


@dataclass(frozen=True)
class ConstraintType:
    """Predicate over (before, after) target-event counts.

    Conjunction of up to three atoms: a bound on the count before the
    reference event, on the count after it, and on their sum.  At least one
    atom must be present.
    """

    before: Cardinality | None = None
    after: Cardinality | None = None
    total: Cardinality | None = None

    def __post_init__(self) -> None:
        if self.before is None and self.after is None and self.total is None:
            raise ValueError("constraint type needs at least one of before/after/sum")

    def accepts(self, before: int, after: int) -> bool:
        if self.before is not None and before not in self.before:
            return False
        if self.after is not None and after not in self.after:
            return False
        if self.total is not None and before + after not in self.total:
            return False
        return True

    def future_fixable(self, before: int, after: int) -> bool:
        """True if some after' >= after would be accepted with this before count.

        The before count of a reference event is frozen once the event has
        happened; only future target events (growing `after`) can still
        repair a violation.
        """
        if self.before is not None and before not in self.before:
            return False
        pool = self.after if self.after is not None else ANY
        feasible = pool.restrict_min(after)
        if feasible is None:
            return False
        if self.total is not None:
            sums = self.total.shift_down(before)
            if sums is None:
                return False
            feasible = feasible.intersect(sums)
        return feasible is not None

    def render(self) -> str:
        parts = []
        if self.before is not None:
            parts.append(f"before in {self.before.render()}")
        if self.after is not None:
            parts.append(f"after in {self.after.render()}")
        if self.total is not None:
            parts.append(f"before+after in {self.total.render()}")
        return " and ".join(parts)

    def __str__(self) -> str:
        return self.render()


_ONE = Cardinality.exactly(1)
_ZERO = Cardinality.exactly(0)
_SOME = Cardinality.at_least(1)

TEMPLATES: dict[str, ConstraintType] = {
    "response": ConstraintType(after=_SOME),
    "unary-response": ConstraintType(after=_ONE),
    "non-response": ConstraintType(after=_ZERO),
    "precedence": ConstraintType(before=_SOME),
    "unary-precedence": ConstraintType(before=_ONE),
    "non-precedence": ConstraintType(before=_ZERO),
    "co-existence": ConstraintType(total=_SOME),
    "non-co-existence": ConstraintType(total=_ZERO),
}


def builtin_constraint_type(name: str) -> ConstraintType:
    """Look up one of the eight named templates."""
    try:
        return TEMPLATES[name]
    except KeyError:
        raise ValueError(f"unknown constraint template {name!r}") from None


def constraint_type_accepts(ctype: ConstraintType, before: int, after: int) -> bool:
    return ctype.accepts(before, after)
