"""Granular information archive with categorical and episodic context graphs."""

from .archive import (
    Archive,
    ContextSubgraph,
    EpisodicEdge,
    InformationElement,
    ProfileReport,
    TaskInstance,
    open_archive,
)
from .errors import (
    ConflictError,
    InvalidInputError,
    JournalError,
    NotFoundError,
    ValidationReport,
    WarehouseError,
)
from .retrieval import (
    Hit,
    PostingsIndex,
    ScoringConfig,
    WorkContext,
    annotate_hits,
    build_index,
    contextual_search,
    search,
    tokenize,
)
from .schema import (
    CategoricalContext,
    TaskTypeSchema,
    categorical_context,
    expected_contents,
    parse_schema,
    serialize_schema,
    validate_schema,
)

__all__ = [
    "Archive",
    "CategoricalContext",
    "ConflictError",
    "ContextSubgraph",
    "EpisodicEdge",
    "Hit",
    "InformationElement",
    "InvalidInputError",
    "JournalError",
    "NotFoundError",
    "PostingsIndex",
    "ProfileReport",
    "ScoringConfig",
    "TaskInstance",
    "TaskTypeSchema",
    "ValidationReport",
    "WarehouseError",
    "WorkContext",
    "annotate_hits",
    "build_index",
    "categorical_context",
    "contextual_search",
    "expected_contents",
    "open_archive",
    "parse_schema",
    "search",
    "serialize_schema",
    "tokenize",
    "validate_schema",
]

__version__ = "0.1.0"
