import json
from pathlib import Path
from typing import Sequence, Union

from ..utils import get_logger, write_text_atomic
from .types import Sample
from .utils import MarkerTransform, SciERCTransform, SpertTransform, group_documents

FORMATS = ["scierc", "spert", "marker"]

logger = get_logger()


def _dump(record) -> str:
    return json.dumps(record, ensure_ascii=False)


def export(samples: Sequence[Sample], format: str, path: Union[str, Path]) -> Path:
    """Write ``samples`` in one of the backbone training formats.

    ``scierc`` and ``marker`` are line-delimited documents with document-level,
    inclusive-end offsets; ``spert`` is a single JSON array of sentence records.
    """
    format = format.lower()
    if format not in FORMATS:
        raise ValueError(f"Supplied format was {format}. Must be one of {FORMATS}.")
    path = Path(path)

    if format == "spert":
        transform = SpertTransform()
        text = json.dumps([transform.transform(s) for s in samples], ensure_ascii=False) + "\n"
    else:
        transform = MarkerTransform() if format == "marker" else SciERCTransform()
        lines = [_dump(transform.transform(doc_key, sentences)) for doc_key, sentences in group_documents(samples)]
        text = "".join(line + "\n" for line in lines)

    write_text_atomic(path, text)
    logger.info(f"exported {len(samples):,} samples as {format} to {path}")
    return path
