import re
from typing import Collection, List, NamedTuple

PUNCTUATION = set('.,;:!?()"\'')
CHUNK_PATTERN = re.compile(r"\S+")


class Token(NamedTuple):
    text: str
    start: int
    end: int


def _split_chunk(chunk: str, offset: int, keep: Collection[str]) -> List[Token]:
    head, tail = [], []
    lo, hi = 0, len(chunk)
    while lo < hi and chunk[lo:hi] not in keep and chunk[lo] in PUNCTUATION:
        head.append(Token(chunk[lo], offset + lo, offset + lo + 1))
        lo += 1
    while lo < hi and chunk[lo:hi] not in keep and chunk[hi - 1] in PUNCTUATION:
        tail.append(Token(chunk[hi - 1], offset + hi - 1, offset + hi))
        hi -= 1
    core = [Token(chunk[lo:hi], offset + lo, offset + hi)] if lo < hi else []
    return head + core + tail[::-1]


def tokenize_with_offsets(text: str, keep: Collection[str] = ()) -> List[Token]:
    """Split on whitespace, then peel leading and trailing punctuation into their own tokens.

    Offsets are character offsets into ``text``. A whitespace chunk, or what is left of it
    while peeling, that appears in ``keep`` is never split further.
    """
    keep = keep if isinstance(keep, (set, frozenset)) else set(keep)
    tokens = []
    for match in CHUNK_PATTERN.finditer(text):
        tokens.extend(_split_chunk(match.group(), match.start(), keep))
    return tokens
