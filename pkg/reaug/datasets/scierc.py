import json
import os
import re
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Tuple, Union

from ..errors import CorpusFormatError
from .types import STAGES, Document, DocumentSet, EntityType, RelationType, Sample

ENTITY_TYPES = [t.value for t in EntityType]
RELATION_TYPES = [t.value for t in RelationType]

# sentence counts of the public release, 8,089 entities and 4,716 relations over the three splits
TRAIN_SAMPLES = 1_861
DEV_SAMPLES = 275
TEST_SAMPLES = 551

SAMPLE_ID_PATTERN = re.compile(r"^(?P<doc_key>.+)#(?P<index>\d+)$")


def sample_id(doc_key: str, index: int) -> str:
    return f"{doc_key}#{index}"


def split_sample_id(id: str):
    match = SAMPLE_ID_PATTERN.match(id)
    if match is None:
        return None
    return match.group("doc_key"), int(match.group("index"))


def _default_record_mapper(record: Dict[str, Any]) -> Document:
    """Convert one SciERC document record into per-sentence samples.

    The release stores entity spans as document-level token offsets with inclusive
    ends; samples keep sentence-level, end-exclusive spans. Coreference clusters are dropped.
    """
    for key in ("doc_key", "sentences", "ner", "relations"):
        if key not in record:
            raise CorpusFormatError(f"record is missing field {key!r}")
    doc_key = record["doc_key"]
    sentences, ner, relations = record["sentences"], record["ner"], record["relations"]
    if not (len(sentences) == len(ner) == len(relations)):
        raise CorpusFormatError(f"document {doc_key}: sentences, ner and relations differ in length")

    samples = []
    offset = 0
    for index, (tokens, sentence_ner, sentence_relations) in enumerate(zip(sentences, ner, relations)):
        entities = []
        span_to_entity = {}
        for start, end, label in sentence_ner:
            local = (start - offset, end - offset + 1)
            if not 0 <= local[0] < local[1] <= len(tokens):
                raise CorpusFormatError(f"document {doc_key}: span [{start}, {end}] is outside sentence {index}")
            span_to_entity.setdefault(local, len(entities))
            entities.append((local[0], local[1], EntityType.parse(label)))

        pairs = []
        for s_start, s_end, o_start, o_end, label in sentence_relations:
            subj = span_to_entity.get((s_start - offset, s_end - offset + 1))
            obj = span_to_entity.get((o_start - offset, o_end - offset + 1))
            if subj is None or obj is None:
                raise CorpusFormatError(f"document {doc_key}: relation in sentence {index} refers to an unknown span")
            pairs.append((subj, obj, RelationType.parse(label)))

        samples.append(Sample.build(sample_id(doc_key, index), tokens, entities, pairs))
        offset += len(tokens)
    return Document(doc_key=doc_key, sentences=samples)


class SciERCIterDataPipe:
    """Iterate over a line-delimited SciERC file, yielding ``(line_number, Document)``.

    The marker format (same fields, no coreference clusters) is read by the same pipe.

    Args:
        path (str): The file to read.
        record_mapper (Callable): Maps a decoded record to a :class:`Document`.
    """

    def __init__(self,
                 path: Union[str, Path],
                 record_mapper: Callable[[Dict[str, Any]], Document] = _default_record_mapper):
        self.path = Path(path)
        self.record_mapper = record_mapper

    def __iter__(self) -> Iterator[Tuple[int, Document]]:
        with open(self.path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                    yield line_number, self.record_mapper(record)
                except CorpusFormatError as e:
                    raise CorpusFormatError(str(e), line=line_number) from None
                except (ValueError, TypeError, KeyError) as e:
                    raise CorpusFormatError(f"malformed record ({e})", line=line_number) from None


def load_scierc(path: Union[str, Path], split: str = "train") -> DocumentSet:
    documents = []
    seen = set()
    for line_number, document in SciERCIterDataPipe(path):
        if document.doc_key in seen:
            raise CorpusFormatError(f"duplicate doc_key {document.doc_key!r}", line=line_number)
        seen.add(document.doc_key)
        documents.append(document)
    return DocumentSet(documents=documents, split=split)


def load_split(dataset_dir: Union[str, Path], stage: str) -> DocumentSet:
    stage = stage.lower()
    if stage not in STAGES[:3]:
        raise ValueError(f"Supplied stage was {stage}. Must be one of {STAGES[:3]}.")
    return load_scierc(os.path.join(dataset_dir, f"{stage}.json"), split=stage)


def flatten(ds: DocumentSet) -> List[Sample]:
    samples = []
    for document in ds.documents:
        for index, sentence in enumerate(document.sentences):
            expected = sample_id(document.doc_key, index)
            samples.append(sentence if sentence.id == expected else replace(sentence, id=expected))
    return samples
