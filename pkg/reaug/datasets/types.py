from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import CorpusFormatError

STAGES = ["train", "dev", "test", "pseudo"]


class EntityType(str, Enum):
    TASK = "Task"
    METHOD = "Method"
    METRIC = "Metric"
    MATERIAL = "Material"
    GENERIC = "Generic"
    OTHER_SCIENTIFIC_TERM = "OtherScientificTerm"

    @classmethod
    def parse(cls, value: str) -> "EntityType":
        try:
            return cls(value)
        except ValueError:
            raise CorpusFormatError(f"unknown entity type {value!r}") from None


class RelationType(str, Enum):
    USED_FOR = "Used-for"
    FEATURE_OF = "Feature-of"
    HYPONYM_OF = "Hyponym-of"
    PART_OF = "Part-of"
    EVALUATE_FOR = "Evaluate-for"
    COMPARE = "Compare"
    CONJUNCTION = "Conjunction"

    @classmethod
    def parse(cls, value: str) -> "RelationType":
        try:
            return cls(value)
        except ValueError:
            raise CorpusFormatError(f"unknown relation type {value!r}") from None

    @property
    def symmetric(self) -> bool:
        return self in (RelationType.COMPARE, RelationType.CONJUNCTION)


class AugmentMethod(str, Enum):
    PARAPHRASE = "paraphrase"
    GENERATE = "generate"

    @property
    def code(self) -> str:
        return self.value[0]


@dataclass(frozen=True)
class EntityMention:
    start: int    # inclusive
    end: int    # exclusive
    type: EntityType
    surface: str

    @property
    def span(self) -> Tuple[int, int]:
        return self.start, self.end


@dataclass(frozen=True)
class RelationMention:
    subject: int
    object: int
    type: RelationType


@dataclass(frozen=True)
class Sample:
    """One tokenized sentence with its typed entity spans and typed relation pairs.

    Entity spans are half-open token ranges. Relations refer to entities by their
    position in ``entities``, which is kept ordered by ``(start, end)``.
    """

    id: str
    tokens: Tuple[str, ...]
    entities: Tuple[EntityMention, ...]
    relations: Tuple[RelationMention, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "relations", tuple(self.relations))
        self._validate()

    def _validate(self) -> None:
        for token in self.tokens:
            if not isinstance(token, str) or not token:
                raise CorpusFormatError(f"sample {self.id}: tokens must be non-empty strings")
        seen = set()
        previous = None
        for entity in self.entities:
            if not 0 <= entity.start < entity.end <= len(self.tokens):
                raise CorpusFormatError(
                    f"sample {self.id}: span [{entity.start}, {entity.end}) out of range for {len(self.tokens)} tokens")
            if entity.surface != " ".join(self.tokens[entity.start:entity.end]):
                raise CorpusFormatError(f"sample {self.id}: surface {entity.surface!r} does not match its tokens")
            key = (entity.start, entity.end, entity.type)
            if key in seen:
                raise CorpusFormatError(f"sample {self.id}: duplicate entity {key}")
            seen.add(key)
            if previous is not None and entity.span < previous:
                raise CorpusFormatError(f"sample {self.id}: entities must be ordered by (start, end)")
            previous = entity.span
        for relation in self.relations:
            n = len(self.entities)
            if not (0 <= relation.subject < n and 0 <= relation.object < n):
                raise CorpusFormatError(f"sample {self.id}: relation refers to a missing entity")
            if relation.subject == relation.object:
                raise CorpusFormatError(f"sample {self.id}: relation subject and object are the same entity")

    @classmethod
    def build(cls,
              id: str,
              tokens: Sequence[str],
              entities: Iterable[Tuple[int, int, Any]] = (),
              relations: Iterable[Tuple[int, int, Any]] = (),
              **extra) -> "Sample":
        """Build a sample from bare ``(start, end, type)`` and ``(subject, object, type)`` tuples.

        Entities are sorted by span; relation indices refer to the order entities were given in.
        """
        tokens = tuple(tokens)
        raw = [(int(s), int(e), EntityType.parse(t) if not isinstance(t, EntityType) else t)
               for s, e, t in entities]
        order = sorted(range(len(raw)), key=lambda i: (raw[i][0], raw[i][1], raw[i][2].value))
        position = {old: new for new, old in enumerate(order)}
        mentions = []
        for i in order:
            s, e, t = raw[i]
            if not 0 <= s < e <= len(tokens):
                raise CorpusFormatError(f"sample {id}: span [{s}, {e}) out of range for {len(tokens)} tokens")
            mentions.append(EntityMention(s, e, t, " ".join(tokens[s:e])))
        rels = []
        for subj, obj, t in relations:
            if not (0 <= subj < len(raw) and 0 <= obj < len(raw)):
                raise CorpusFormatError(f"sample {id}: relation refers to a missing entity")
            rels.append(RelationMention(position[subj], position[obj],
                                        RelationType.parse(t) if not isinstance(t, RelationType) else t))
        return cls(id=id, tokens=tokens, entities=tuple(mentions), relations=tuple(rels), **extra)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    @property
    def bracketable(self) -> bool:
        """False when two entity spans share a token (nested or crossing) or a token holds a square bracket."""
        if any("[" in token or "]" in token for token in self.tokens):
            return False
        for left, right in zip(self.entities, self.entities[1:]):
            if right.start < left.end:
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "tokens": list(self.tokens),
            "entities": [[e.start, e.end, e.type.value] for e in self.entities],
            "relations": [[r.subject, r.object, r.type.value] for r in self.relations],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Sample":
        if "method" in payload:
            return PseudoSample.from_dict(payload)
        return cls.build(payload["id"], payload["tokens"], payload["entities"], payload["relations"])


@dataclass(frozen=True)
class PseudoSample(Sample):
    """A sample synthesized by the LLM, with its provenance."""

    method: AugmentMethod
    origin_id: str
    attempts: int

    def __post_init__(self):
        object.__setattr__(self, "method", AugmentMethod(self.method))
        if self.attempts < 1:
            raise CorpusFormatError(f"sample {self.id}: attempts must be positive")
        super().__post_init__()

    def as_sample(self, id: Optional[str] = None) -> Sample:
        return Sample(id=self.id if id is None else id,
                      tokens=self.tokens,
                      entities=self.entities,
                      relations=self.relations)

    def with_id(self, id: str) -> "PseudoSample":
        return replace(self, id=id)

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload.update(method=self.method.value, origin_id=self.origin_id, attempts=self.attempts)
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "PseudoSample":
        return cls.build(payload["id"],
                         payload["tokens"],
                         payload["entities"],
                         payload["relations"],
                         method=payload["method"],
                         origin_id=payload["origin_id"],
                         attempts=payload["attempts"])


@dataclass
class Document:
    doc_key: str
    sentences: List[Sample] = field(default_factory=list)


@dataclass
class DocumentSet:
    documents: List[Document] = field(default_factory=list)
    split: str = "train"

    def __post_init__(self):
        if self.split not in STAGES:
            raise ValueError(f"Supplied split was {self.split}. Must be one of {STAGES}.")
        keys = [doc.doc_key for doc in self.documents]
        if len(keys) != len(set(keys)):
            raise CorpusFormatError("document keys must be unique")

    def __len__(self) -> int:
        return len(self.documents)
