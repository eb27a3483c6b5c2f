from collections import Counter, defaultdict, deque
from typing import Collection, Dict, List, Optional, Sequence, Tuple, Union

from ..datasets.types import AugmentMethod, EntityType, PseudoSample, RelationType, Sample
from ..prompts.builder import SENTINEL, GenerateInput
from .parsing import DefectClass, ParsedCompletion
from .tokenize import CHUNK_PATTERN, Token, tokenize_with_offsets


def normalize_surface(text: str) -> str:
    return " ".join(text.split())


def is_sentinel(pc: ParsedCompletion) -> bool:
    return not pc.bracketed_spans and normalize_surface(pc.plain_text) == SENTINEL


def classify_entity_mismatch(found: Sequence[str], expected: Sequence[str]) -> Optional[DefectClass]:
    """Compare bracketed surfaces against the expected multiset; ``None`` when they agree."""
    found, expected = Counter(found), Counter(expected)
    missing = expected - found
    extra = found - expected
    if missing and extra:
        return DefectClass.ENTITY_SET_MISMATCH
    if missing:
        return DefectClass.MISSING_ENTITY
    if extra:
        return DefectClass.EXTRA_ENTITY
    return None


def _tokenize_segments(pc: ParsedCompletion, keep: Collection[str]) -> Tuple[List[Token], List[Tuple[int, int]]]:
    """Tokenize ``pc.plain_text`` so every bracket boundary is a token boundary.

    Bracketed text is split on whitespace only; the text between brackets goes through
    :func:`tokenize_with_offsets`. Returns the tokens and the token span of each bracket.
    """
    text = pc.plain_text
    spans = set(pc.bracketed_spans)
    boundaries = sorted({0, len(text)} | {s for s, _ in spans} | {e for _, e in spans})
    tokens: List[Token] = []
    token_spans: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for a, b in zip(boundaries, boundaries[1:]):
        first = len(tokens)
        if (a, b) in spans:
            chunks = CHUNK_PATTERN.finditer(text[a:b])
            tokens.extend(Token(m.group(), a + m.start(), a + m.end()) for m in chunks)
            token_spans[(a, b)] = (first, len(tokens))
        else:
            tokens.extend(Token(t.text, a + t.start, a + t.end) for t in tokenize_with_offsets(text[a:b], keep))
    return tokens, [token_spans[span] for span in pc.bracketed_spans]


def _realign(pc: ParsedCompletion,
             expected: Sequence[Tuple[str, EntityType]],
             relations: Sequence[Tuple[int, int, RelationType]],
             keep: Collection[str],
             id: str,
             method: AugmentMethod,
             origin_id: str,
             attempts: int) -> Union[PseudoSample, DefectClass]:
    found = [normalize_surface(s) for s in pc.surfaces]
    defect = classify_entity_mismatch(found, [surface for surface, _ in expected])
    if defect is not None:
        return defect

    queues = defaultdict(deque)
    for index, (surface, _) in enumerate(expected):
        queues[surface].append(index)
    position = {}
    for pred_index, surface in enumerate(found):
        position[queues[surface].popleft()] = pred_index

    tokens, token_spans = _tokenize_segments(pc, keep)
    entities = [None] * len(expected)
    for index, (_, etype) in enumerate(expected):
        start, end = token_spans[position[index]]
        entities[position[index]] = (start, end, etype)
    pairs = [(position[subj], position[obj], rtype) for subj, obj, rtype in relations]
    return PseudoSample.build(id, [t.text for t in tokens],
                              entities,
                              pairs,
                              method=method,
                              origin_id=origin_id,
                              attempts=attempts)


def realign_paraphrase(pc: ParsedCompletion,
                       origin: Sample,
                       attempts: int = 1,
                       id: Optional[str] = None) -> Union[PseudoSample, DefectClass]:
    """Rebuild a paraphrased sample, copying types and relations from ``origin`` by surface.

    Repeated surfaces take the origin types in reading order.
    """
    if is_sentinel(pc):
        return DefectClass.SENTINEL_OUTPUT
    expected = [(normalize_surface(e.surface), e.type) for e in origin.entities]
    relations = [(r.subject, r.object, r.type) for r in origin.relations]
    return _realign(pc, expected, relations, set(origin.tokens), id or f"{origin.id}~p", AugmentMethod.PARAPHRASE,
                    origin.id, attempts)


def realign_generated(pc: ParsedCompletion,
                      g: GenerateInput,
                      origin_id: str = "",
                      attempts: int = 1,
                      id: Optional[str] = None) -> Union[PseudoSample, DefectClass]:
    """Rebuild a generated sample from the labels it was asked to express.

    The sentinel answer is returned as ``SENTINEL_OUTPUT`` both for an empty and a
    non-empty input; the caller decides its severity with :func:`~reaug.postproc.defect_log.severity_of`.
    """
    if is_sentinel(pc):
        return DefectClass.SENTINEL_OUTPUT
    expected = [(normalize_surface(surface), etype) for surface, etype in g.entities]
    by_surface = defaultdict(list)
    for index, (surface, _) in enumerate(expected):
        by_surface[surface].append(index)
    relations = []
    for subj, rtype, obj in g.relations:
        subj = by_surface[normalize_surface(subj)][0]
        # a relation between two mentions of one surface takes the next mention as object
        candidates = [i for i in by_surface[normalize_surface(obj)] if i != subj]
        if candidates:
            relations.append((subj, candidates[0], rtype))
    keep = {token for surface, _ in expected for token in surface.split()}
    return _realign(pc, expected, relations, keep, id or f"{origin_id}~g", AugmentMethod.GENERATE, origin_id,
                    attempts)
