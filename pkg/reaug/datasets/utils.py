from typing import Any, Dict, List, Sequence, Tuple

from .scierc import split_sample_id
from .types import PseudoSample, Sample

PSEUDO_KEY_TEMPLATE = "pga_{code}_{counter:06d}"


def pseudo_doc_key(code: str, counter: int) -> str:
    return PSEUDO_KEY_TEMPLATE.format(code=code, counter=counter)


def group_documents(samples: Sequence[Sample]) -> List[Tuple[str, List[Sample]]]:
    """Pack samples back into documents.

    A sample whose id is ``<doc_key>#<i>`` joins the previous document when that
    document has the same key and holds exactly ``i`` sentences, or opens a new one
    when ``i == 0``. Every other sample becomes a one-sentence document under a
    generated key, ``pga_<p|g>_<counter>`` for pseudo-samples.
    """
    documents: List[Tuple[str, List[Sample]]] = []
    used = set()
    counter = 0
    for sample in samples:
        parsed = split_sample_id(sample.id)
        if parsed is not None:
            doc_key, index = parsed
            if documents and documents[-1][0] == doc_key and len(documents[-1][1]) == index:
                documents[-1][1].append(sample)
                continue
            if index == 0 and doc_key not in used:
                used.add(doc_key)
                documents.append((doc_key, [sample]))
                continue
        if isinstance(sample, PseudoSample):
            doc_key = pseudo_doc_key(sample.method.code, counter)
            while doc_key in used:
                counter += 1
                doc_key = pseudo_doc_key(sample.method.code, counter)
            counter += 1
        else:
            doc_key, suffix = sample.id, 1
            while doc_key in used:
                doc_key = f"{sample.id}~{suffix}"
                suffix += 1
        used.add(doc_key)
        documents.append((doc_key, [sample]))
    return documents


class SciERCTransform:
    """Render one document as a SciERC record: document-level offsets, inclusive span ends."""

    with_clusters = True

    def transform(self, doc_key: str, sentences: Sequence[Sample]) -> Dict[str, Any]:
        ner, relations = [], []
        offset = 0
        for sample in sentences:
            ner.append([[e.start + offset, e.end - 1 + offset, e.type.value] for e in sample.entities])
            pairs = []
            for r in sample.relations:
                subj, obj = sample.entities[r.subject], sample.entities[r.object]
                pairs.append([subj.start + offset, subj.end - 1 + offset, obj.start + offset, obj.end - 1 + offset,
                              r.type.value])
            relations.append(pairs)
            offset += len(sample.tokens)
        record = {}
        if self.with_clusters:
            record["clusters"] = []
        record["sentences"] = [list(s.tokens) for s in sentences]
        record["ner"] = ner
        record["relations"] = relations
        record["doc_key"] = doc_key
        return record


class MarkerTransform(SciERCTransform):
    """The span-marker backbones read the SciERC layout without coreference clusters, keyed first by doc_key."""

    with_clusters = False

    def transform(self, doc_key: str, sentences: Sequence[Sample]) -> Dict[str, Any]:
        record = super().transform(doc_key, sentences)
        return {
            "doc_key": record["doc_key"],
            "sentences": record["sentences"],
            "ner": record["ner"],
            "relations": record["relations"],
        }


class SpertTransform:
    """Render one sample as a spert record: sentence-level, end-exclusive spans, head/tail entity indices."""

    def transform(self, sample: Sample) -> Dict[str, Any]:
        return {
            "tokens": list(sample.tokens),
            "entities": [{"type": e.type.value, "start": e.start, "end": e.end} for e in sample.entities],
            "relations": [{"type": r.type.value, "head": r.subject, "tail": r.object} for r in sample.relations],
            "orig_id": sample.id,
        }
