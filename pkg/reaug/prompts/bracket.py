from dataclasses import dataclass

from ..datasets.types import Sample
from ..errors import OverlapError

OPEN, CLOSE = "[", "]"


@dataclass(frozen=True)
class BracketedText:
    text: str


def plain_sentence(sample: Sample) -> str:
    return " ".join(sample.tokens)


def render_bracketed(sample: Sample) -> BracketedText:
    """Wrap every entity of ``sample`` in square brackets, types omitted.

    Brackets are inserted by token position, so repeated surfaces are each wrapped
    where they occur. Tokens are joined by single spaces.
    """
    if not sample.bracketable:
        raise OverlapError(f"sample {sample.id}: overlapping entity spans or bracket tokens cannot be bracketed")
    starts = {e.start for e in sample.entities}
    ends = {e.end - 1 for e in sample.entities}
    pieces = []
    for i, token in enumerate(sample.tokens):
        if i in starts:
            token = OPEN + token
        if i in ends:
            token = token + CLOSE
        pieces.append(token)
    return BracketedText(" ".join(pieces))
