"""Model types: behavioral constraints, class models, and the combined OCBC model."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .cardinality import ANY, Cardinality, ConstraintType


@dataclass(frozen=True)
class BehavioralConstraint:
    """A directed constraint: counts of target-activity events around each
    reference-activity event must satisfy `ctype`."""

    id: str
    ref_activity: str
    target_activity: str
    ctype: ConstraintType


@dataclass(frozen=True)
class BcModel:
    """Activities plus behavioral constraints between them.

    Collections are kept in a canonical order so that structurally equal
    models compare equal regardless of declaration order.
    """

    activities: frozenset[str]
    constraints: tuple[BehavioralConstraint, ...]
    _by_id: Mapping[str, BehavioralConstraint] = field(
        init=False, repr=False, compare=False, default=None  # type: ignore[assignment]
    )

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "constraints", tuple(sorted(self.constraints, key=lambda c: c.id))
        )
        object.__setattr__(
            self, "_by_id", MappingProxyType({c.id: c for c in self.constraints})
        )

    def constraint(self, cid: str) -> BehavioralConstraint:
        return self._by_id[cid]

    def has_constraint(self, cid: str) -> bool:
        return cid in self._by_id


@dataclass(frozen=True)
class RelationshipType:
    """A binary relationship between two classes, with per-side cardinalities.

    `card_src_*` bounds the number of source objects per target object,
    `card_tar_*` the number of target objects per source object.  The
    `always` variant must hold at every snapshot, the `eventually` variant
    from some point onwards.
    """

    id: str
    source: str
    target: str
    card_src_always: Cardinality = ANY
    card_src_eventually: Cardinality = ANY
    card_tar_always: Cardinality = ANY
    card_tar_eventually: Cardinality = ANY

    def card(self, side: str, temporal: str) -> Cardinality:
        return getattr(self, f"card_{side}_{temporal}")


@dataclass(frozen=True)
class ClassModel:
    classes: frozenset[str]
    rel_types: tuple[RelationshipType, ...]
    _by_id: Mapping[str, RelationshipType] = field(
        init=False, repr=False, compare=False, default=None  # type: ignore[assignment]
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "rel_types", tuple(sorted(self.rel_types, key=lambda r: r.id)))
        object.__setattr__(
            self, "_by_id", MappingProxyType({r.id: r for r in self.rel_types})
        )

    def rel_type(self, rid: str) -> RelationshipType:
        return self._by_id[rid]

    def has_rel_type(self, rid: str) -> bool:
        return rid in self._by_id


@dataclass(frozen=True)
class ActivityClassLink:
    """An edge between an activity and a class it may reference.

    `card_events_always` / `card_events_eventually` bound how many events of
    the activity reference each object of the class (from the moment the
    object exists / at the end).  `card_objects` bounds how many objects of
    the class each event of the activity references.
    """

    activity: str
    cls: str
    card_events_always: Cardinality = ANY
    card_events_eventually: Cardinality = ANY
    card_objects: Cardinality = ANY


@dataclass(frozen=True)
class OcbcModel:
    """Behavioral model + class model + activity/class links + constraint scoping.

    `scope` maps each behavioral constraint to the class or relationship type
    through which its reference and target events are correlated.
    """

    bcm: BcModel
    clam: ClassModel
    links: tuple[ActivityClassLink, ...]
    scope: Mapping[str, str]
    _link_index: Mapping[tuple[str, str], ActivityClassLink] = field(
        init=False, repr=False, compare=False, default=None  # type: ignore[assignment]
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "links", tuple(sorted(self.links, key=lambda l: (l.activity, l.cls))))
        object.__setattr__(self, "scope", MappingProxyType(dict(sorted(self.scope.items()))))
        object.__setattr__(
            self,
            "_link_index",
            MappingProxyType({(l.activity, l.cls): l for l in self.links}),
        )

    def link(self, activity: str, cls: str) -> ActivityClassLink | None:
        return self._link_index.get((activity, cls))

    def has_link(self, activity: str, cls: str) -> bool:
        return (activity, cls) in self._link_index

    def links_of_activity(self, activity: str) -> list[ActivityClassLink]:
        return [l for l in self.links if l.activity == activity]


@dataclass(frozen=True)
class ModelDefect:
    """One well-formedness problem of a model. Defects are data, not errors."""

    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.subject}: {self.message}"


def _check_duplicates(items: list[str], universe: str, defects: list[ModelDefect]) -> None:
    seen: set[str] = set()
    for name in items:
        if name in seen:
            defects.append(
                ModelDefect("duplicate-id", name, f"{universe} id declared more than once")
            )
        seen.add(name)


def validate_model(model: OcbcModel) -> list[ModelDefect]:
    """Return every well-formedness defect of the model; empty means well-formed.

    Checked: duplicate ids, name clashes across the four universes, dangling
    activity/class references, eventually-cardinalities not contained in the
    always-cardinalities, and constraint scopes that do not connect the
    constraint's activities.
    """
    defects: list[ModelDefect] = []
    bcm, clam = model.bcm, model.clam

    _check_duplicates([c.id for c in bcm.constraints], "constraint", defects)
    _check_duplicates([r.id for r in clam.rel_types], "relationship", defects)

    universes = [
        ("activity", set(bcm.activities)),
        ("constraint", {c.id for c in bcm.constraints}),
        ("class", set(clam.classes)),
        ("relationship", {r.id for r in clam.rel_types}),
    ]
    for i, (kind_a, names_a) in enumerate(universes):
        for kind_b, names_b in universes[i + 1 :]:
            for name in sorted(names_a & names_b):
                defects.append(
                    ModelDefect(
                        "name-clash", name, f"used as both {kind_a} and {kind_b} id"
                    )
                )

    for c in bcm.constraints:
        for role, act in (("reference", c.ref_activity), ("target", c.target_activity)):
            if act not in bcm.activities:
                defects.append(
                    ModelDefect(
                        "dangling-activity",
                        c.id,
                        f"{role} activity {act!r} is not declared",
                    )
                )

    for r in clam.rel_types:
        for role, cls in (("source", r.source), ("target", r.target)):
            if cls not in clam.classes:
                defects.append(
                    ModelDefect("dangling-class", r.id, f"{role} class {cls!r} is not declared")
                )
        for side in ("src", "tar"):
            if not r.card(side, "eventually").is_subset_of(r.card(side, "always")):
                defects.append(
                    ModelDefect(
                        "eventually-not-subset",
                        r.id,
                        f"{side} eventually-cardinality {r.card(side, 'eventually')} "
                        f"is not a subset of always-cardinality {r.card(side, 'always')}",
                    )
                )

    seen_pairs: set[tuple[str, str]] = set()
    for link in model.links:
        pair = f"({link.activity}, {link.cls})"
        if (link.activity, link.cls) in seen_pairs:
            defects.append(ModelDefect("duplicate-id", pair, "activity/class link declared twice"))
        seen_pairs.add((link.activity, link.cls))
        if link.activity not in bcm.activities:
            defects.append(
                ModelDefect("dangling-activity", pair, f"activity {link.activity!r} is not declared")
            )
        if link.cls not in clam.classes:
            defects.append(
                ModelDefect("dangling-class", pair, f"class {link.cls!r} is not declared")
            )
        if not link.card_events_eventually.is_subset_of(link.card_events_always):
            defects.append(
                ModelDefect(
                    "eventually-not-subset",
                    pair,
                    f"eventually-cardinality {link.card_events_eventually} is not a "
                    f"subset of always-cardinality {link.card_events_always}",
                )
            )

    for cid in sorted(model.scope):
        if not bcm.has_constraint(cid):
            defects.append(
                ModelDefect("dangling-constraint", cid, "scope given for an undeclared constraint")
            )
    for c in bcm.constraints:
        via = model.scope.get(c.id)
        if via is None:
            defects.append(ModelDefect("missing-scope", c.id, "constraint has no class or relationship scope"))
            continue
        if via in clam.classes:
            for act in (c.ref_activity, c.target_activity):
                if not model.has_link(act, via):
                    defects.append(
                        ModelDefect(
                            "scope-not-linked",
                            c.id,
                            f"scope class {via!r} has no link to activity {act!r}",
                        )
                    )
        elif clam.has_rel_type(via):
            r = clam.rel_type(via)
            straight = model.has_link(c.ref_activity, r.source) and model.has_link(
                c.target_activity, r.target
            )
            flipped = model.has_link(c.ref_activity, r.target) and model.has_link(
                c.target_activity, r.source
            )
            if not (straight or flipped):
                defects.append(
                    ModelDefect(
                        "scope-not-linked",
                        c.id,
                        f"relationship {via!r} does not connect the classes linked to "
                        f"activities {c.ref_activity!r} and {c.target_activity!r}",
                    )
                )
        else:
            defects.append(
                ModelDefect("dangling-scope", c.id, f"scope {via!r} is neither a class nor a relationship")
            )

    return defects
