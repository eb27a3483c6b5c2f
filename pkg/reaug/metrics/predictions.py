import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..datasets.types import EntityType, RelationType, Sample
from ..errors import CorpusFormatError, ScoreInputError

Span = Tuple[int, int]


@dataclass(frozen=True)
class PredictedEntity:
    start: int
    end: int    # exclusive
    type: EntityType

    @property
    def span(self) -> Span:
        return self.start, self.end


@dataclass(frozen=True)
class PredictedRelation:
    subject: Span
    object: Span
    type: RelationType
    subject_type: Optional[EntityType] = None
    object_type: Optional[EntityType] = None


@dataclass
class SamplePrediction:
    entities: List[PredictedEntity] = field(default_factory=list)
    relations: List[PredictedRelation] = field(default_factory=list)

    def entity_type_at(self, span: Span) -> Optional[EntityType]:
        for entity in self.entities:
            if entity.span == span:
                return entity.type
        return None


@dataclass
class PredictionSet:
    """Predictions keyed by sample id; samples without an entry count as empty predictions."""

    samples: Dict[str, SamplePrediction] = field(default_factory=dict)

    def get(self, id: str) -> SamplePrediction:
        return self.samples.get(id, SamplePrediction())

    def __len__(self) -> int:
        return len(self.samples)


def predictions_from_samples(samples: Iterable[Sample]) -> PredictionSet:
    predictions = PredictionSet()
    for sample in samples:
        if sample.id in predictions.samples:
            raise ScoreInputError(f"duplicate prediction for sample {sample.id!r}")
        entities = [PredictedEntity(e.start, e.end, e.type) for e in sample.entities]
        relations = []
        for r in sample.relations:
            subj, obj = sample.entities[r.subject], sample.entities[r.object]
            relations.append(PredictedRelation(subj.span, obj.span, r.type, subj.type, obj.type))
        predictions.samples[sample.id] = SamplePrediction(entities, relations)
    return predictions


def _parse_relation(item: Sequence) -> PredictedRelation:
    if len(item) not in (5, 7):
        raise ValueError(f"relation {item!r} must have 5 or 7 fields")
    subj_type = EntityType.parse(item[5]) if len(item) == 7 else None
    obj_type = EntityType.parse(item[6]) if len(item) == 7 else None
    return PredictedRelation((int(item[0]), int(item[1])), (int(item[2]), int(item[3])), RelationType.parse(item[4]),
                             subj_type, obj_type)


def load_predictions(path: Union[str, Path]) -> PredictionSet:
    """Read line-delimited predictions.

    Each line is ``{"id": ..., "entities": [[start, end, type], ...], "relations": [[s_start, s_end, o_start,
    o_end, type(, subject_type, object_type)], ...]}`` with end-exclusive token offsets.
    """
    predictions = PredictionSet()
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                entities = [PredictedEntity(int(s), int(e), EntityType.parse(t)) for s, e, t in record["entities"]]
                relations = [_parse_relation(item) for item in record.get("relations", [])]
                id = record["id"]
            except CorpusFormatError as e:
                raise CorpusFormatError(str(e), line=line_number) from None
            except (ValueError, TypeError, KeyError) as e:
                raise CorpusFormatError(f"malformed prediction record ({e})", line=line_number) from None
            if id in predictions.samples:
                raise ScoreInputError(f"line {line_number}: duplicate prediction for sample {id!r}")
            predictions.samples[id] = SamplePrediction(entities, relations)
    return predictions
