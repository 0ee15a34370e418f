"""
Corpus-level scores: micro-averaged exact-match span P/R/F1 and token
accuracy.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..errors import EmptyCorpusError, ShapeError
from .spans import scan_spans

logger = logging.getLogger(__name__)

Labels = Sequence[Sequence[str]]


def _ratio(hits: int, total: int, other_total: int) -> float:
    # nothing to find and nothing found counts as perfect agreement
    if total == 0:
        return 1.0 if other_total == 0 else 0.0
    return hits / total


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass
class TypeScore:
    name: str
    gold: int = 0
    predicted: int = 0
    correct: int = 0

    @property
    def precision(self) -> float:
        return _ratio(self.correct, self.predicted, self.gold)

    @property
    def recall(self) -> float:
        return _ratio(self.correct, self.gold, self.predicted)

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)


@dataclass
class ScoreReport:
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    accuracy: Optional[float] = None
    gold_spans: int = 0
    predicted_spans: int = 0
    correct_spans: int = 0
    repaired: int = 0
    per_type: Dict[str, TypeScore] = field(default_factory=dict)
    has_spans: bool = True

    def lines(self) -> List[str]:
        out = []
        if self.has_spans:
            out.append(f"ALL P {self.precision:.4f} R {self.recall:.4f} F1 {self.f1:.4f}")
            for name in sorted(self.per_type):
                ts = self.per_type[name]
                out.append(
                    f"TYPE {name} P {ts.precision:.4f} R {ts.recall:.4f} F1 {ts.f1:.4f} "
                    f"GOLD {ts.gold} PRED {ts.predicted} CORRECT {ts.correct}"
                )
        if self.accuracy is not None:
            out.append(f"ACC {self.accuracy:.4f}")
        return out


def _check_shapes(gold: Labels, predicted: Labels) -> None:
    if len(gold) != len(predicted):
        raise ShapeError(f"{len(gold)} gold sentences but {len(predicted)} predicted")
    for i, (g, p) in enumerate(zip(gold, predicted)):
        if len(g) != len(p):
            raise ShapeError(f"sentence {i}: {len(g)} gold labels but {len(p)} predicted")


def token_accuracy(gold: Labels, predicted: Labels) -> float:
    _check_shapes(gold, predicted)
    total = sum(len(g) for g in gold)
    if total == 0:
        raise EmptyCorpusError("token accuracy over zero tokens")
    hits = sum(a == b for g, p in zip(gold, predicted) for a, b in zip(g, p))
    return hits / total


def span_f1(gold: Labels, predicted: Labels) -> ScoreReport:
    """Micro-averaged exact-match span scores with a per-type breakdown.

    When both the gold and the predicted span sets are empty, precision and
    recall are 1.0 (so F1 is 1.0); conlleval reports 0 in that case.
    """
    _check_shapes(gold, predicted)
    per_type: Dict[str, TypeScore] = defaultdict(lambda: TypeScore(""))
    report = ScoreReport()
    for g_labels, p_labels in zip(gold, predicted):
        g_spans, g_fixed = scan_spans(g_labels)
        p_spans, p_fixed = scan_spans(p_labels)
        report.repaired += g_fixed + p_fixed
        g_set, p_set = set(g_spans), set(p_spans)
        for span in g_set:
            per_type[span.type].gold += 1
        for span in p_set:
            per_type[span.type].predicted += 1
        for span in g_set & p_set:
            per_type[span.type].correct += 1
        report.gold_spans += len(g_set)
        report.predicted_spans += len(p_set)
        report.correct_spans += len(g_set & p_set)

    for name, ts in per_type.items():
        ts.name = name
    report.per_type = dict(per_type)
    report.precision = _ratio(report.correct_spans, report.predicted_spans, report.gold_spans)
    report.recall = _ratio(report.correct_spans, report.gold_spans, report.predicted_spans)
    report.f1 = f1_score(report.precision, report.recall)
    if sum(len(g) for g in gold):
        report.accuracy = token_accuracy(gold, predicted)
    if report.repaired:
        logger.warning("repaired %d stray I- tags while extracting spans", report.repaired)
    return report


def accuracy_report(gold: Labels, predicted: Labels) -> ScoreReport:
    """Report for labels without span structure (POS and other raw tags)."""
    return ScoreReport(accuracy=token_accuracy(gold, predicted), has_spans=False)


__all__ = [
    "TypeScore",
    "ScoreReport",
    "f1_score",
    "token_accuracy",
    "span_f1",
    "accuracy_report",
]
