"""Detection fairness tools for skin-tone groups (LS / DS)."""

from detfair._detfair import (
    Error,
    IoError,
    NumericalError,
    ValidationError,
    aggregate_runs,
    alpha_sweep,
    confidence_width,
    consensus,
    decode_offsets,
    encode_offsets,
    evaluate,
    gap_resolvable,
    group_evaluate,
    iou,
    min_samples,
    run_cli,
)

__all__ = [
    "Error",
    "IoError",
    "NumericalError",
    "ValidationError",
    "aggregate_runs",
    "alpha_sweep",
    "confidence_width",
    "consensus",
    "decode_offsets",
    "encode_offsets",
    "evaluate",
    "gap_resolvable",
    "group_evaluate",
    "iou",
    "min_samples",
    "run_cli",
]
