import json
from pathlib import Path
from typing import Any, Dict, List, Union

from ..errors import CorpusFormatError
from .types import Sample


def _default_record_mapper(index: int, record: Dict[str, Any]) -> Sample:
    try:
        entities = [(e["start"], e["end"], e["type"]) for e in record["entities"]]
        relations = [(r["head"], r["tail"], r["type"]) for r in record["relations"]]
        return Sample.build(record.get("orig_id", f"spert#{index}"), record["tokens"], entities, relations)
    except (KeyError, TypeError) as e:
        raise CorpusFormatError(f"record {index}: malformed spert record ({e})") from None


def load_spert(path: Union[str, Path], record_mapper=_default_record_mapper) -> List[Sample]:
    """Read a spert training file (one JSON array of sentence records) back into samples."""
    with open(path, "r", encoding="utf-8") as f:
        try:
            records = json.load(f)
        except ValueError as e:
            raise CorpusFormatError(f"malformed spert file ({e})") from None
    if not isinstance(records, list):
        raise CorpusFormatError("spert file must hold a JSON array")
    return [record_mapper(i, record) for i, record in enumerate(records)]
