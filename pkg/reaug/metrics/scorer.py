from dataclasses import dataclass, field
from typing import Dict, Sequence, Set, Tuple

from ..datasets.types import Sample
from ..errors import ScoreInputError
from .predictions import PredictionSet, Span

REGIMES = ["Ent", "Rel", "Rel+"]


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


@dataclass
class RegimeScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def to_dict(self) -> Dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


@dataclass
class ScoreReport:
    regimes: Dict[str, RegimeScore] = field(default_factory=lambda: {name: RegimeScore() for name in REGIMES})

    def __getitem__(self, regime: str) -> RegimeScore:
        return self.regimes[regime]

    def to_dict(self) -> Dict:
        return {name: self.regimes[name].to_dict() for name in REGIMES}

    def table(self) -> str:
        lines = [f"{'':<6}{'P':>8}{'R':>8}{'F1':>8}{'tp':>8}{'fp':>8}{'fn':>8}"]
        for name in REGIMES:
            s = self.regimes[name]
            lines.append(f"{name:<6}{s.precision * 100:>8.2f}{s.recall * 100:>8.2f}{s.f1 * 100:>8.2f}"
                         f"{s.tp:>8}{s.fp:>8}{s.fn:>8}")
        return "\n".join(lines)


def _relation_key(id: str, subj, obj, rtype, symmetric: bool):
    if symmetric and rtype.symmetric and obj < subj:
        subj, obj = obj, subj
    return id, subj, obj, rtype.value


def _typed(span: Span, etype) -> Tuple[Span, str]:
    return span, etype.value if etype is not None else ""


def _gold_keys(sample: Sample, symmetric: bool):
    ents = {(sample.id, e.start, e.end, e.type.value) for e in sample.entities}
    rels, rels_plus = set(), set()
    for r in sample.relations:
        subj, obj = sample.entities[r.subject], sample.entities[r.object]
        rels.add(_relation_key(sample.id, subj.span, obj.span, r.type, symmetric))
        rels_plus.add(
            _relation_key(sample.id, _typed(subj.span, subj.type), _typed(obj.span, obj.type), r.type, symmetric))
    return ents, rels, rels_plus


def _check_span(id: str, span: Span, length: int) -> None:
    if not 0 <= span[0] < span[1] <= length:
        raise ScoreInputError(f"sample {id}: predicted span {list(span)} is out of bounds for {length} tokens")


def _pred_keys(sample: Sample, predictions: PredictionSet, symmetric: bool):
    prediction = predictions.get(sample.id)
    length = len(sample.tokens)
    ents = set()
    for e in prediction.entities:
        _check_span(sample.id, e.span, length)
        ents.add((sample.id, e.start, e.end, e.type.value))
    rels, rels_plus = set(), set()
    for r in prediction.relations:
        _check_span(sample.id, r.subject, length)
        _check_span(sample.id, r.object, length)
        subj_type = r.subject_type if r.subject_type is not None else prediction.entity_type_at(r.subject)
        obj_type = r.object_type if r.object_type is not None else prediction.entity_type_at(r.object)
        rels.add(_relation_key(sample.id, r.subject, r.object, r.type, symmetric))
        rels_plus.add(
            _relation_key(sample.id, _typed(r.subject, subj_type), _typed(r.object, obj_type), r.type, symmetric))
    return ents, rels, rels_plus


def _count(score: RegimeScore, gold: Set, pred: Set) -> None:
    tp = len(gold & pred)
    score.tp += tp
    score.fp += len(pred) - tp
    score.fn += len(gold) - tp


def score(gold: Sequence[Sample], pred: PredictionSet, symmetric_relations: bool = True) -> ScoreReport:
    """Micro-averaged Ent, Rel and Rel+ scores.

    Ent matches ``(sample, start, end, type)``; Rel matches both entity spans and the
    relation type; Rel+ also needs both entity types. With ``symmetric_relations``
    Compare and Conjunction also match with subject and object swapped.
    """
    ids = [sample.id for sample in gold]
    if len(ids) != len(set(ids)):
        raise ScoreInputError("gold sample ids must be unique")
    unknown = sorted(set(pred.samples) - set(ids))
    if unknown:
        raise ScoreInputError(f"{len(unknown)} predicted ids are not in gold, e.g. {unknown[0]!r}")

    report = ScoreReport()
    for sample in gold:
        gold_keys = _gold_keys(sample, symmetric_relations)
        pred_keys = _pred_keys(sample, pred, symmetric_relations)
        for name, g, p in zip(REGIMES, gold_keys, pred_keys):
            _count(report[name], g, p)
    return report
