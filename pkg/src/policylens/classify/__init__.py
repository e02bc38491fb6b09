"""Hierarchical multi-label content classification of policy segments."""
from .annotations import (
    AnnotatedSegment,
    ConsolidatedSegment,
    consolidate,
    consolidate_all,
    convert_opp115,
    read_annotations,
    write_annotations,
)
from .backends import Backend, LinearBackend, make_backend
from .encoding import LabelCodec, decode_multilabel, encode_multilabel
from .evaluate import EvalReport, evaluate, fleiss_kappa, precision_filter
from .hierarchy import (
    ModelBundle,
    SegmentLabels,
    UntrainedBundleError,
    label_segment,
    label_segments,
    train_hierarchy,
)
from .postprocess import dedup_labels, first_mention
from .protocol import ProtocolResult, run_protocol
from .schema import Label, LabelSchema, SchemaError, attribute, category, load_schema
from .stratify import iterative_stratification, iterative_stratified_split

__all__ = [
    "AnnotatedSegment",
    "Backend",
    "ConsolidatedSegment",
    "EvalReport",
    "Label",
    "LabelCodec",
    "LabelSchema",
    "LinearBackend",
    "ModelBundle",
    "ProtocolResult",
    "SchemaError",
    "SegmentLabels",
    "UntrainedBundleError",
    "attribute",
    "category",
    "consolidate",
    "consolidate_all",
    "convert_opp115",
    "decode_multilabel",
    "dedup_labels",
    "encode_multilabel",
    "evaluate",
    "first_mention",
    "fleiss_kappa",
    "iterative_stratification",
    "iterative_stratified_split",
    "label_segment",
    "label_segments",
    "load_schema",
    "make_backend",
    "precision_filter",
    "read_annotations",
    "run_protocol",
    "train_hierarchy",
    "write_annotations",
]
