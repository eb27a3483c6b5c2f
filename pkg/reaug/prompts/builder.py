from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import List, Tuple

from ..datasets.types import AugmentMethod, EntityType, RelationType, Sample
from ..errors import GenerateInputError
from .bracket import render_bracketed

TEMPLATE_DIR = Path(__file__).parent / "templates"
SLOT = "{{sample}}"
SENTINEL = "No result can be generated with the given information."


@lru_cache(maxsize=None)
def load_template(kind: str) -> str:
    kind = AugmentMethod(kind).value
    text = (TEMPLATE_DIR / f"{kind}.txt").read_text(encoding="utf-8").rstrip("\n")
    if text.count(SLOT) != 1:
        raise ValueError(f"template {kind} must hold exactly one {SLOT} slot")
    return text


@dataclass(frozen=True)
class PromptText:
    text: str
    kind: AugmentMethod
    origin_sample_id: str


@dataclass(frozen=True)
class GenerateInput:
    """The label-only view of a sample: entity surfaces with types and surface-level relation triples."""

    entities: Tuple[Tuple[str, EntityType], ...] = field(default_factory=tuple)
    relations: Tuple[Tuple[str, RelationType, str], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple((s, EntityType(t)) for s, t in self.entities))
        object.__setattr__(self, "relations", tuple((s, RelationType(r), o) for s, r, o in self.relations))
        surfaces = {surface for surface, _ in self.entities}
        for subj, rel, obj in self.relations:
            for surface in (subj, obj):
                if surface not in surfaces:
                    raise GenerateInputError(f"relation {rel.value} refers to unknown entity {surface!r}")

    @property
    def empty(self) -> bool:
        return not self.entities

    @classmethod
    def from_sample(cls, sample: Sample) -> "GenerateInput":
        entities = [(e.surface, e.type) for e in sample.entities]
        relations = [(sample.entities[r.subject].surface, r.type, sample.entities[r.object].surface)
                     for r in sample.relations]
        return cls(entities=tuple(entities), relations=tuple(relations))

    def render(self) -> str:
        """The input notation of the generate prompt, e.g. ``{'entities': [['method', {'type': 'Method'}]], ...}``."""
        payload = {
            'entities': [[surface, {'type': etype.value}] for surface, etype in self.entities],
            'relations': [[subj, rel.value, obj] for subj, rel, obj in self.relations],
        }
        return repr(payload)


def _fill(kind: str, value: str) -> str:
    return load_template(kind).replace(SLOT, value)


def build_paraphrase_prompt(sample: Sample) -> PromptText:
    return PromptText(text=_fill("paraphrase", render_bracketed(sample).text),
                      kind=AugmentMethod.PARAPHRASE,
                      origin_sample_id=sample.id)


def build_generate_prompt(g: GenerateInput, origin_sample_id: str = "") -> PromptText:
    return PromptText(text=_fill("generate", g.render()),
                      kind=AugmentMethod.GENERATE,
                      origin_sample_id=origin_sample_id)


def template_parts(kind: str) -> List[str]:
    """The fixed text before and after the sample slot."""
    return load_template(kind).split(SLOT)
