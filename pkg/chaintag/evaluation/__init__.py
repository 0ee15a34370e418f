"""
Evaluation package: span extraction and corpus scores.
"""

from .scoring import ScoreReport, TypeScore, accuracy_report, f1_score, span_f1, token_accuracy
from .spans import Span, extract_spans, scan_spans, spans_to_bio2

METRICS = ("f1", "accuracy")

__all__ = [
    "METRICS",
    "Span",
    "scan_spans",
    "extract_spans",
    "spans_to_bio2",
    "TypeScore",
    "ScoreReport",
    "f1_score",
    "token_accuracy",
    "span_f1",
    "accuracy_report",
]
