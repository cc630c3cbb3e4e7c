"""Parsers and serializers for the model, log, and report documents.

Models are JSON objects (``.ocbc.json``), logs are line-delimited JSON with an
optional leading init-model line (``.oclog.jsonl``), reports are JSON
(``.report.json``).  Parsing is strict: unknown keys, missing keys, and bad
value shapes are rejected with the offending location.  Serialization is
canonical (sorted keys, sorted collections), so load/save round-trips are
byte-stable.
"""

from __future__ import annotations

import json
from typing import Any

from .bc import PairConstraint, expand_shorthand
from .cardinality import (
    ANY,
    Cardinality,
    CardinalityError,
    ConstraintType,
    TEMPLATES,
    builtin_constraint_type,
    parse_cardinality,
)
from .eventlog import MAX_SEQ, Event, EventLog, LogError, ObjectDelta, ObjectModel
from .model import (
    ActivityClassLink,
    BcModel,
    BehavioralConstraint,
    ClassModel,
    ModelDefect,
    OcbcModel,
    RelationshipType,
    validate_model,
)
from .report import ConformanceReport, aggregate
from .violations import Violation


class FormatError(ValueError):
    """Malformed document; `where` locates the problem (JSON path or line)."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class ModelDefectsError(FormatError):
    """The document parsed but the model is not well-formed."""

    def __init__(self, defects: list[ModelDefect]):
        listing = "; ".join(str(d) for d in defects)
        super().__init__(f"model has {len(defects)} defect(s): {listing}")
        self.defects = defects


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"not valid UTF-8: {exc}") from None
    return data


def _expect(value: Any, kind: type, where: str) -> Any:
    names = {dict: "object", list: "array", str: "string", int: "integer", bool: "boolean"}
    if kind is int and isinstance(value, bool):
        raise FormatError("expected integer, got boolean", where)
    if not isinstance(value, kind):
        raise FormatError(f"expected {names[kind]}, got {type(value).__name__}", where)
    return value


def _take(obj: dict, key: str, kind: type, where: str, default: Any = ...) -> Any:
    if key not in obj:
        if default is ...:
            raise FormatError(f"missing required key {key!r}", where)
        return default
    return _expect(obj.pop(key), kind, f"{where}.{key}")


def _no_extras(obj: dict, where: str) -> None:
    if obj:
        name = sorted(obj)[0]
        raise FormatError(f"unknown key {name!r}", where)


def _card(obj: dict, key: str, where: str, default: Cardinality = ANY) -> Cardinality:
    text = _take(obj, key, str, where, default=None)
    if text is None:
        return default
    try:
        return parse_cardinality(text)
    except CardinalityError as exc:
        raise FormatError(f"bad cardinality {text!r}: {exc}", f"{where}.{key}") from None


def _string_list(value: Any, where: str) -> list[str]:
    _expect(value, list, where)
    return [_expect(item, str, f"{where}[{i}]") for i, item in enumerate(value)]


def _relation(value: Any, where: str) -> tuple[str, str, str]:
    _expect(value, list, where)
    if len(value) != 3:
        raise FormatError("expected [relType, source, target]", where)
    return tuple(_expect(part, str, f"{where}[{i}]") for i, part in enumerate(value))  # type: ignore[return-value]


def _parse_json(data: bytes | str, where: str = "document") -> Any:
    try:
        return json.loads(_decode(data))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", where) from None


# -- model documents ---------------------------------------------------------


def _constraint_type(value: Any, where: str) -> ConstraintType:
    if isinstance(value, str):
        if value not in TEMPLATES:
            raise FormatError(
                f"unknown constraint template {value!r} "
                f"(expected one of {', '.join(sorted(TEMPLATES))})",
                where,
            )
        return builtin_constraint_type(value)
    _expect(value, dict, where)
    fields = dict(value)
    atoms = {}
    for key in ("before", "after", "sum"):
        if key in fields:
            text = _expect(fields.pop(key), str, f"{where}.{key}")
            try:
                atoms[key] = parse_cardinality(text)
            except CardinalityError as exc:
                raise FormatError(f"bad cardinality {text!r}: {exc}", f"{where}.{key}") from None
    _no_extras(fields, where)
    if not atoms:
        raise FormatError("constraint type needs at least one of before/after/sum", where)
    return ConstraintType(
        before=atoms.get("before"), after=atoms.get("after"), total=atoms.get("sum")
    )


def load_model(data: bytes | str) -> OcbcModel:
    """Parse and validate a model document; well-formedness defects are fatal."""
    root = _expect(_parse_json(data), dict, "document")
    doc = dict(root)
    activities = _string_list(_take(doc, "activities", list, "document"), "activities")
    classes = _string_list(_take(doc, "classes", list, "document"), "classes")

    rel_types = []
    for i, item in enumerate(_take(doc, "relationships", list, "document", default=[])):
        where = f"relationships[{i}]"
        entry = dict(_expect(item, dict, where))
        rid = _take(entry, "id", str, where)
        source = _take(entry, "source", str, where)
        target = _take(entry, "target", str, where)
        src_always = _card(entry, "card_src_always", where)
        tar_always = _card(entry, "card_tar_always", where)
        rel_types.append(
            RelationshipType(
                id=rid,
                source=source,
                target=target,
                card_src_always=src_always,
                card_src_eventually=_card(entry, "card_src_eventually", where, default=src_always),
                card_tar_always=tar_always,
                card_tar_eventually=_card(entry, "card_tar_eventually", where, default=tar_always),
            )
        )
        _no_extras(entry, where)

    links = []
    for i, item in enumerate(_take(doc, "aoc", list, "document", default=[])):
        where = f"aoc[{i}]"
        entry = dict(_expect(item, dict, where))
        activity = _take(entry, "activity", str, where)
        cls = _take(entry, "class", str, where)
        always = _card(entry, "card_act_always", where)
        links.append(
            ActivityClassLink(
                activity=activity,
                cls=cls,
                card_events_always=always,
                card_events_eventually=_card(entry, "card_act_eventually", where, default=always),
                card_objects=_card(entry, "card_obj", where),
            )
        )
        _no_extras(entry, where)

    constraints: list[BehavioralConstraint] = []
    scope: dict[str, str] = {}
    for i, item in enumerate(_take(doc, "constraints", list, "document", default=[])):
        where = f"constraints[{i}]"
        entry = dict(_expect(item, dict, where))
        cid = _take(entry, "id", str, where)
        ctype = _constraint_type(_take(entry, "type", object, where), f"{where}.type")
        ref = _take(entry, "ref", str, where)
        target = _take(entry, "target", str, where)
        via = _take(entry, "via", str, where)
        pair_name = _take(entry, "pair", str, where, default=None)
        _no_extras(entry, where)
        if pair_name is None:
            constraints.append(
                BehavioralConstraint(id=cid, ref_activity=ref, target_activity=target, ctype=ctype)
            )
            scope[cid] = via
        else:
            backward = _constraint_type(pair_name, f"{where}.pair")
            forward_c, backward_c = expand_shorthand(
                PairConstraint(
                    id=cid,
                    left_activity=ref,
                    right_activity=target,
                    left_to_right=ctype,
                    right_to_left=backward,
                )
            )
            constraints.extend([forward_c, backward_c])
            scope[forward_c.id] = via
            scope[backward_c.id] = via
    _no_extras(doc, "document")

    model = OcbcModel(
        bcm=BcModel(activities=frozenset(activities), constraints=tuple(constraints)),
        clam=ClassModel(classes=frozenset(classes), rel_types=tuple(rel_types)),
        links=tuple(links),
        scope=scope,
    )
    defects = validate_model(model)
    if defects:
        raise ModelDefectsError(defects)
    return model


def _card_entry(out: dict, key: str, card: Cardinality, default: Cardinality) -> None:
    if card != default:
        out[key] = card.render()


def _ctype_dict(ctype: ConstraintType) -> dict | str:
    for name, template in TEMPLATES.items():
        if template == ctype:
            return name
    out: dict[str, str] = {}
    if ctype.before is not None:
        out["before"] = ctype.before.render()
    if ctype.after is not None:
        out["after"] = ctype.after.render()
    if ctype.total is not None:
        out["sum"] = ctype.total.render()
    return out


def save_model(model: OcbcModel) -> bytes:
    """Canonical serialization; pair shorthands are saved in expanded form."""
    relationships = []
    for rt in sorted(model.clam.rel_types, key=lambda r: r.id):
        entry: dict[str, Any] = {"id": rt.id, "source": rt.source, "target": rt.target}
        _card_entry(entry, "card_src_always", rt.card_src_always, ANY)
        _card_entry(entry, "card_src_eventually", rt.card_src_eventually, rt.card_src_always)
        _card_entry(entry, "card_tar_always", rt.card_tar_always, ANY)
        _card_entry(entry, "card_tar_eventually", rt.card_tar_eventually, rt.card_tar_always)
        relationships.append(entry)
    aoc = []
    for link in sorted(model.links, key=lambda l: (l.activity, l.cls)):
        entry = {"activity": link.activity, "class": link.cls}
        _card_entry(entry, "card_act_always", link.card_events_always, ANY)
        _card_entry(entry, "card_act_eventually", link.card_events_eventually, link.card_events_always)
        _card_entry(entry, "card_obj", link.card_objects, ANY)
        aoc.append(entry)
    constraints = []
    for c in sorted(model.bcm.constraints, key=lambda c: c.id):
        constraints.append(
            {
                "id": c.id,
                "type": _ctype_dict(c.ctype),
                "ref": c.ref_activity,
                "target": c.target_activity,
                "via": model.scope[c.id],
            }
        )
    doc = {
        "activities": sorted(model.bcm.activities),
        "classes": sorted(model.clam.classes),
        "relationships": relationships,
        "aoc": aoc,
        "constraints": constraints,
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


# -- log documents -----------------------------------------------------------


def _object_model(value: Any, where: str) -> ObjectModel:
    entry = dict(_expect(value, dict, where))
    class_of: dict[str, str] = {}
    for i, item in enumerate(_take(entry, "objects", list, where, default=[])):
        inner = f"{where}.objects[{i}]"
        obj = dict(_expect(item, dict, inner))
        oid = _take(obj, "id", str, inner)
        cls = _take(obj, "class", str, inner)
        _no_extras(obj, inner)
        if oid in class_of:
            raise FormatError(f"duplicate object id {oid!r}", inner)
        class_of[oid] = cls
    relations = []
    for i, item in enumerate(_take(entry, "relations", list, where, default=[])):
        relations.append(_relation(item, f"{where}.relations[{i}]"))
    _no_extras(entry, where)
    try:
        return ObjectModel(class_of=class_of, relations=frozenset(relations))
    except LogError as exc:
        raise FormatError(str(exc), where) from None


def _event(value: Any, where: str) -> Event:
    entry = dict(_expect(value, dict, where))
    eid = _take(entry, "id", str, where)
    seq = _take(entry, "seq", int, where)
    if not 1 <= seq <= MAX_SEQ:
        raise FormatError(f"seq {seq} outside the 64-bit positive range", f"{where}.seq")
    activity = _take(entry, "activity", str, where)
    attrs_raw = _take(entry, "attrs", dict, where, default={})
    attrs = {
        key: _expect(val, str, f"{where}.attrs.{key}") for key, val in sorted(attrs_raw.items())
    }
    objects = _string_list(_take(entry, "objects", list, where, default=[]), f"{where}.objects")
    new_objects = []
    for i, item in enumerate(_take(entry, "new_objects", list, where, default=[])):
        inner = f"{where}.new_objects[{i}]"
        obj = dict(_expect(item, dict, inner))
        new_objects.append((_take(obj, "id", str, inner), _take(obj, "class", str, inner)))
        _no_extras(obj, inner)
    new_relations = [
        _relation(item, f"{where}.new_relations[{i}]")
        for i, item in enumerate(_take(entry, "new_relations", list, where, default=[]))
    ]
    removed_relations = [
        _relation(item, f"{where}.removed_relations[{i}]")
        for i, item in enumerate(_take(entry, "removed_relations", list, where, default=[]))
    ]
    snapshot_raw = _take(entry, "assert_snapshot", dict, where, default=None)
    snapshot = (
        _object_model(snapshot_raw, f"{where}.assert_snapshot") if snapshot_raw is not None else None
    )
    _no_extras(entry, where)
    return Event(
        id=eid,
        seq=seq,
        activity=activity,
        objects=frozenset(objects),
        attrs=attrs,
        delta=ObjectDelta(
            new_objects=tuple(new_objects),
            new_relations=tuple(new_relations),
            removed_relations=tuple(removed_relations),
            assert_snapshot=snapshot,
        ),
    )


def load_log(data: bytes | str) -> EventLog:
    """Parse a line-delimited log; replay failures carry the offending line."""
    text = _decode(data)
    init = None
    events: list[Event] = []
    line_of: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        where = f"line {lineno}"
        value = _parse_json(line, where)
        _expect(value, dict, where)
        if "init" in value:
            if events or init is not None:
                raise FormatError("init model must be the first line", where)
            entry = dict(value)
            init = _object_model(entry.pop("init"), f"{where}.init")
            _no_extras(entry, where)
            continue
        event = _event(value, where)
        events.append(event)
        line_of[event.id] = lineno
    try:
        return EventLog(init=init if init is not None else ObjectModel({}, frozenset()), events=tuple(events))
    except LogError as exc:
        where = f"line {line_of[exc.event_id]}" if exc.event_id in line_of else "document"
        raise FormatError(str(exc), where) from None


def save_log(log: EventLog) -> bytes:
    """Canonical line-delimited serialization (init line first when non-empty)."""
    lines: list[str] = []

    def om_dict(om: ObjectModel) -> dict:
        return {
            "objects": [{"class": cls, "id": oid} for oid, cls in sorted(om.class_of.items())],
            "relations": sorted(list(rel) for rel in om.relations),
        }

    if log.init.class_of or log.init.relations:
        lines.append(json.dumps({"init": om_dict(log.init)}, sort_keys=True))
    for event in log.events:
        entry: dict[str, Any] = {"id": event.id, "seq": event.seq, "activity": event.activity}
        if event.attrs:
            entry["attrs"] = dict(sorted(event.attrs.items()))
        if event.objects:
            entry["objects"] = sorted(event.objects)
        delta = event.delta
        if delta.new_objects:
            entry["new_objects"] = [
                {"class": cls, "id": oid} for oid, cls in sorted(delta.new_objects)
            ]
        if delta.new_relations:
            entry["new_relations"] = sorted(list(rel) for rel in delta.new_relations)
        if delta.removed_relations:
            entry["removed_relations"] = sorted(list(rel) for rel in delta.removed_relations)
        if delta.assert_snapshot is not None:
            entry["assert_snapshot"] = om_dict(delta.assert_snapshot)
        lines.append(json.dumps(entry, sort_keys=True))
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


# -- report documents --------------------------------------------------------

_VIOLATION_DEFAULTS = Violation(kind="I").__dict__


def _violation_dict(v: Violation) -> dict:
    out = {"kind": v.kind}
    for key, default in _VIOLATION_DEFAULTS.items():
        if key == "kind":
            continue
        value = getattr(v, key)
        if value != default:
            out[key] = value
    return out


def save_report(report: ConformanceReport) -> bytes:
    """Canonical report serialization: sorted keys, pre-sorted violations."""
    doc = {
        "conforms": report.conforms,
        "prefix_mode": report.prefix_mode,
        "summary": report.summary,
        "violations": [_violation_dict(v) for v in report.violations],
        "per_constraint": report.per_constraint,
        "per_aoc_edge": [
            {"activity": activity, "class": cls, "always": always, "eventually": eventually}
            for (activity, cls), (always, eventually) in report.per_aoc_edge.items()
        ],
        "per_rel_type": report.per_rel_type,
        "unknown_activities": list(report.unknown_activities),
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def load_report(data: bytes | str) -> ConformanceReport:
    root = _expect(_parse_json(data), dict, "document")
    doc = dict(root)
    violations = []
    for i, item in enumerate(_take(doc, "violations", list, "document", default=[])):
        where = f"violations[{i}]"
        entry = dict(_expect(item, dict, where))
        kind = _take(entry, "kind", str, where)
        fields: dict[str, Any] = {}
        for key, default in _VIOLATION_DEFAULTS.items():
            if key != "kind" and key in entry:
                fields[key] = entry.pop(key)
        _no_extras(entry, where)
        violations.append(Violation(kind=kind, **fields))
    prefix = _take(doc, "prefix_mode", bool, "document", default=False)
    rebuilt = aggregate(violations, prefix=prefix)
    declared = _take(doc, "conforms", bool, "document")
    if declared != rebuilt.conforms:
        raise FormatError("conforms flag does not match the violation list", "document")
    # Aggregate tables are recomputed from the violations rather than trusted.
    for key in ("summary", "per_constraint", "per_aoc_edge", "per_rel_type", "unknown_activities"):
        doc.pop(key, None)
    _no_extras(doc, "document")
    return rebuilt
