"""Sentence-level evaluation harness for generated descriptions."""

from .annotations import (
    AnnotatedDescription,
    AnnotatedSentence,
    AnnotationStore,
    AnnotationTask,
    Consistency,
    Correctness,
    DescriptionAnnotation,
    ErrorType,
    InfoType,
    Mode,
    ObjectiveSubtype,
    Redundancy,
    Relevance,
    SentenceAnnotation,
    Verbosity,
    diff_stores,
)
from .report import EvalReport, Panel, aggregate
from .sampling import (
    DescriptionRecord,
    load_log_dir,
    records_from_exploration,
    records_from_log,
    records_from_preview,
    sample_tasks,
)
from .sentences import ABBREVIATIONS, split_sentences

__all__ = [
    "ABBREVIATIONS",
    "AnnotatedDescription",
    "AnnotatedSentence",
    "AnnotationStore",
    "AnnotationTask",
    "Consistency",
    "Correctness",
    "DescriptionAnnotation",
    "DescriptionRecord",
    "ErrorType",
    "EvalReport",
    "InfoType",
    "Mode",
    "ObjectiveSubtype",
    "Panel",
    "Redundancy",
    "Relevance",
    "SentenceAnnotation",
    "Verbosity",
    "aggregate",
    "diff_stores",
    "load_log_dir",
    "records_from_exploration",
    "records_from_log",
    "records_from_preview",
    "sample_tasks",
    "split_sentences",
]
