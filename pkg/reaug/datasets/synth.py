import argparse
import json
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from .scierc import sample_id
from .types import Document, DocumentSet, EntityType, RelationType, Sample
from .utils import SciERCTransform

FILLER_WORDS = [
    'we', 'propose', 'a', 'novel', 'the', 'of', 'for', 'in', 'on', 'with', 'and', 'to', 'is', 'are', 'show', 'that',
    'this', 'paper', 'results', 'our', 'based', 'using', 'can', 'be', 'improves', 'over', 'between', 'via', 'from',
    'e.g.', 'i.e.', ',', '.', '(', ')', ';', ':', "'s", '--', '%'
]
ENTITY_PHRASES = {
    EntityType.TASK: ['machine translation', 'parsing', 'robust visual tracking', 'information extraction',
                      'speech recognition', 'question answering'],
    EntityType.METHOD: ['method', 'neural network', 'CRF', 'SVM classifier', 'beam search', 'EM algorithm',
                        'model'],
    EntityType.METRIC: ['accuracy', 'F1 score', 'BLEU', 'word error rate', 'perplexity'],
    EntityType.MATERIAL: ['English', 'French', 'Penn Treebank', 'corpus', 'text collections', 'WSJ'],
    EntityType.GENERIC: ['approach', 'system', 'model', 'tasks', 'it', 'state-of-the-art methods'],
    EntityType.OTHER_SCIENTIFIC_TERM: ['features', 'grammatical gender', 'intrinsic object structure', 'nouns',
                                       'reflexive pronouns', 'context-free grammar', 'lexical rules'],
}
ENTITY_TYPES = list(ENTITY_PHRASES)
RELATION_TYPES = list(RelationType)


def generate_sample(rng: np.random.Generator,
                    id: str,
                    max_entities: int = 5,
                    max_relations: int = 4,
                    overlap_rate: float = 0.0) -> Sample:
    """Draw one sentence of filler words interleaved with typed entity phrases."""
    tokens: List[str] = []
    entities = []
    num_entities = int(rng.integers(0, max_entities + 1))
    for _ in range(num_entities):
        tokens += [FILLER_WORDS[i] for i in rng.integers(0, len(FILLER_WORDS), size=int(rng.integers(1, 4)))]
        etype = ENTITY_TYPES[int(rng.integers(0, len(ENTITY_TYPES)))]
        phrases = ENTITY_PHRASES[etype]
        phrase = phrases[int(rng.integers(0, len(phrases)))].split()
        entities.append((len(tokens), len(tokens) + len(phrase), etype))
        tokens += phrase
    tokens += [FILLER_WORDS[i] for i in rng.integers(0, len(FILLER_WORDS), size=int(rng.integers(1, 4)))]
    tokens.append('.')

    if entities and rng.random() < overlap_rate:
        start, end, etype = entities[int(rng.integers(0, len(entities)))]
        other = ENTITY_TYPES[(ENTITY_TYPES.index(etype) + 1) % len(ENTITY_TYPES)]
        entities.append((start, end if end - start == 1 else end - 1, other))

    relations = []
    if len(entities) >= 2:
        seen = set()
        for _ in range(int(rng.integers(0, max_relations + 1))):
            subj, obj = (int(i) for i in rng.choice(len(entities), size=2, replace=False))
            rtype = RELATION_TYPES[int(rng.integers(0, len(RELATION_TYPES)))]
            if (subj, obj, rtype) not in seen:
                seen.add((subj, obj, rtype))
                relations.append((subj, obj, rtype))
    return Sample.build(id, tokens, entities, relations)


def generate_corpus(num_docs: int,
                    sentences_per_doc: int = 3,
                    seed: int = 0,
                    overlap_rate: float = 0.0,
                    split: str = "train") -> DocumentSet:
    """Build a deterministic SciERC-style corpus for fixtures and benchmarks."""
    rng = np.random.default_rng(seed)
    documents = []
    for d in range(num_docs):
        doc_key = f"SYN_{seed}_{d:05d}"
        sentences = [
            generate_sample(rng, sample_id(doc_key, i), overlap_rate=overlap_rate) for i in range(sentences_per_doc)
        ]
        documents.append(Document(doc_key=doc_key, sentences=sentences))
    return DocumentSet(documents=documents, split=split)


def write_corpus(ds: DocumentSet, path: Union[str, Path]) -> None:
    transform = SciERCTransform()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for document in ds.documents:
            f.write(json.dumps(transform.transform(document.doc_key, document.sentences), ensure_ascii=False) + "\n")


def parse_args(args: Optional[List[str]] = None):
    parser = argparse.ArgumentParser(description="Write a synthetic SciERC-style corpus")
    parser.add_argument("--num_docs", type=int, default=100)
    parser.add_argument("--sentences_per_doc", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--overlap_rate",
                        type=float,
                        default=0.0,
                        help="probability that a sentence gets one nested entity (makes it unbracketable)")
    parser.add_argument("--output", type=str, required=True, help="path of the line-delimited SciERC file to write")
    return parser.parse_args(args)


def main():
    args = parse_args()
    write_corpus(generate_corpus(args.num_docs, args.sentences_per_doc, args.seed, args.overlap_rate), args.output)


if __name__ == "__main__":
    main()
