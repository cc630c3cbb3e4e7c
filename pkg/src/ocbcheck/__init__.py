"""Conformance checking of object-centric event logs against object-centric
behavioral constraint (OCBC) models."""

from .bc import BcVerdict, PairConstraint, bc_model_satisfied, evaluate_bc, expand_shorthand
from .cardinality import (
    Cardinality,
    CardinalityError,
    ConstraintType,
    builtin_constraint_type,
    cardinality_contains,
    constraint_type_accepts,
    parse_cardinality,
    render_cardinality,
)
from .conformance import (
    check_all,
    check_type_i,
    check_type_ii,
    check_type_iii,
    check_type_iv,
    check_type_v,
    check_type_vi,
    check_type_vii,
    check_type_viii,
    check_type_ix,
    check_violations,
    resolve_targets,
)
from .eventlog import Event, EventLog, LogError, ObjectDelta, ObjectModel, objects_of_class
from .formats import (
    FormatError,
    ModelDefectsError,
    load_log,
    load_model,
    load_report,
    save_log,
    save_model,
    save_report,
)
from .generator import (
    GenerationError,
    InjectionError,
    InjectionOutcome,
    generate_conforming,
    inject_violation,
)
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
from .report import ConformanceReport, aggregate, render_text
from .violations import KINDS, Violation

__version__ = "0.1.0"

__all__ = [
    "ActivityClassLink",
    "BcModel",
    "BcVerdict",
    "BehavioralConstraint",
    "Cardinality",
    "CardinalityError",
    "ClassModel",
    "ConformanceReport",
    "ConstraintType",
    "Event",
    "EventLog",
    "FormatError",
    "GenerationError",
    "InjectionError",
    "InjectionOutcome",
    "KINDS",
    "LogError",
    "ModelDefect",
    "ModelDefectsError",
    "ObjectDelta",
    "ObjectModel",
    "OcbcModel",
    "PairConstraint",
    "RelationshipType",
    "Violation",
    "aggregate",
    "bc_model_satisfied",
    "builtin_constraint_type",
    "cardinality_contains",
    "check_all",
    "check_type_i",
    "check_type_ii",
    "check_type_iii",
    "check_type_iv",
    "check_type_v",
    "check_type_vi",
    "check_type_vii",
    "check_type_viii",
    "check_type_ix",
    "check_violations",
    "constraint_type_accepts",
    "evaluate_bc",
    "expand_shorthand",
    "generate_conforming",
    "inject_violation",
    "load_log",
    "load_model",
    "load_report",
    "objects_of_class",
    "parse_cardinality",
    "render_cardinality",
    "resolve_targets",
    "save_log",
    "save_model",
    "save_report",
    "validate_model",
]
