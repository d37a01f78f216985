"""Class-diagram design metrics, understandability estimation and rank validation."""

from ._core import (
    ClassDecl,
    ClassDiagram,
    DiagramError,
    DiagramSyntaxError,
    FormatError,
    LinearModel,
    ModelError,
    RankError,
    Relationship,
    RelationKind,
    ValidatedDiagram,
    ValidationError,
    compute_metrics,
    count_hierarchies,
    dit,
    fit,
    hagg,
    metric_names,
    parse,
    parse_json,
    published_model,
    ranks_with_ties,
    run_cli,
    serialize,
    significance,
    spearman,
    table2_pairs,
    to_json,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
