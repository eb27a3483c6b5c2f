from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable

from .types import Sample


@dataclass
class DatasetStats:
    sample_count: int = 0
    entity_count: int = 0
    relation_count: int = 0
    entity_types: Counter = field(default_factory=Counter)
    relation_types: Counter = field(default_factory=Counter)

    @property
    def entity_type_count(self) -> int:
        return len(self.entity_types)

    @property
    def relation_type_count(self) -> int:
        return len(self.relation_types)

    def __add__(self, other: "DatasetStats") -> "DatasetStats":
        return DatasetStats(sample_count=self.sample_count + other.sample_count,
                            entity_count=self.entity_count + other.entity_count,
                            relation_count=self.relation_count + other.relation_count,
                            entity_types=self.entity_types + other.entity_types,
                            relation_types=self.relation_types + other.relation_types)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sample_count": self.sample_count,
            "entity_count": self.entity_count,
            "relation_count": self.relation_count,
            "entity_type_count": self.entity_type_count,
            "relation_type_count": self.relation_type_count,
            "entity_types": dict(sorted(self.entity_types.items())),
            "relation_types": dict(sorted(self.relation_types.items())),
        }

    def summary(self) -> str:
        return (f"samples: {self.sample_count:,}, "
                f"entities: {self.entity_count:,}({self.entity_type_count}), "
                f"relations: {self.relation_count:,}({self.relation_type_count})")


class LabelCounter:
    """
    accumulate label statistics over a stream of samples
    """

    def __init__(self):
        self._stats = DatasetStats()

    def update(self, sample: Sample) -> None:
        self._stats.sample_count += 1
        self._stats.entity_count += len(sample.entities)
        self._stats.relation_count += len(sample.relations)
        self._stats.entity_types.update(e.type.value for e in sample.entities)
        self._stats.relation_types.update(r.type.value for r in sample.relations)

    def compute(self) -> DatasetStats:
        return DatasetStats(sample_count=self._stats.sample_count,
                            entity_count=self._stats.entity_count,
                            relation_count=self._stats.relation_count,
                            entity_types=Counter(self._stats.entity_types),
                            relation_types=Counter(self._stats.relation_types))


def compute_stats(samples: Iterable[Sample]) -> DatasetStats:
    counter = LabelCounter()
    for sample in samples:
        counter.update(sample)
    return counter.compute()
