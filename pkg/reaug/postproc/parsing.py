from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

QUOTES = {"'": "'", '"': '"', "‘": "’", "“": "”"}


class DefectClass(str, Enum):
    UNBALANCED_BRACKETS = "unbalanced_brackets"
    NESTED_BRACKETS = "nested_brackets"
    ENTITY_SET_MISMATCH = "entity_set_mismatch"
    MISSING_ENTITY = "missing_entity"
    EXTRA_ENTITY = "extra_entity"
    SENTINEL_OUTPUT = "sentinel_output"
    EMPTY_OUTPUT = "empty_output"


@dataclass(frozen=True)
class ParsedCompletion:
    plain_text: str
    bracketed_spans: Tuple[Tuple[int, int], ...]

    @property
    def surfaces(self) -> Tuple[str, ...]:
        return tuple(self.plain_text[s:e] for s, e in self.bracketed_spans)


def _unwrap(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and QUOTES.get(text[0]) == text[-1]:
        return text[1:-1].strip()
    return text


def quote_depth(text: str) -> int:
    """Number of quote pairs wrapping the whole of ``text``, e.g. 1 for ``' CRF works '``."""
    depth, text = 0, text.strip()
    while True:
        inner = _unwrap(text)
        if inner == text:
            return depth
        depth, text = depth + 1, inner


def strip_completion(text: str, keep_quotes: int = 0) -> str:
    """Strip whitespace and one pair of quotes wrapping the whole text, then whitespace again.

    The innermost ``keep_quotes`` wrapping pairs belong to the sentence itself and are left in place.
    """
    text = text.strip()
    if quote_depth(text) > keep_quotes:
        text = _unwrap(text)
    return text.strip()


def parse_bracketed(text: str, keep_quotes: int = 0) -> Union[ParsedCompletion, DefectClass]:
    text = strip_completion(text, keep_quotes=keep_quotes)
    if not text:
        return DefectClass.EMPTY_OUTPUT

    plain = []
    spans = []
    opened = None
    for ch in text:
        if ch == "[":
            if opened is not None:
                return DefectClass.NESTED_BRACKETS
            opened = len(plain)
        elif ch == "]":
            if opened is None:
                return DefectClass.UNBALANCED_BRACKETS
            spans.append((opened, len(plain)))
            opened = None
        else:
            plain.append(ch)
    if opened is not None:
        return DefectClass.UNBALANCED_BRACKETS
    return ParsedCompletion(plain_text="".join(plain), bracketed_spans=tuple(spans))
