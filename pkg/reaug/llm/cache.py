import json
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterator, Optional, Tuple, Union

from ..errors import CorpusFormatError
from ..utils import get_logger

TRANSPORT_STATUSES = ["ok", "http_error", "timeout"]

logger = get_logger()


@dataclass(frozen=True)
class CompletionRecord:
    prompt_digest: str
    raw_text: str
    attempt: int
    transport_status: str
    created_at: float

    def __post_init__(self):
        if self.transport_status not in TRANSPORT_STATUSES:
            raise ValueError(
                f"Supplied transport_status was {self.transport_status}. Must be one of {TRANSPORT_STATUSES}.")
        if self.attempt < 1:
            raise ValueError("attempt must be positive")
        if self.transport_status != "ok" and self.raw_text:
            raise ValueError("failed completions carry no text")

    @property
    def ok(self) -> bool:
        return self.transport_status == "ok"

    @property
    def key(self) -> Tuple[str, int]:
        return self.prompt_digest, self.attempt

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Dict) -> "CompletionRecord":
        return cls(**payload)


class CompletionCache:
    """Append-only line-delimited store of completion records with an in-memory index.

    Records are keyed by ``(prompt_digest, attempt)``; a key is written at most once.
    With ``path=None`` the cache lives in memory only.

    Args:
        path (str, optional): The line-delimited file backing the cache.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else None
        self._index: Dict[Tuple[str, int], CompletionRecord] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = CompletionRecord.from_dict(json.loads(line))
                except (ValueError, TypeError) as e:
                    raise CorpusFormatError(f"malformed cache record in {self.path} ({e})", line=line_number) from None
                self._index.setdefault(record.key, record)
        logger.info(f"loaded {len(self._index):,} cached completions from {self.path}")

    def get(self, prompt_digest: str, attempt: int = 1) -> Optional[CompletionRecord]:
        with self._lock:
            record = self._index.get((prompt_digest, attempt))
            if record is None:
                self.misses += 1
            else:
                self.hits += 1
            return record

    def put(self, record: CompletionRecord) -> bool:
        """Persist ``record`` unless its key is already present. Returns whether it was written."""
        with self._lock:
            if record.key in self._index:
                return False
            self._index[record.key] = record
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as f:
                    f.write(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
            return True

    def __contains__(self, key: Tuple[str, int]) -> bool:
        return key in self._index

    def __len__(self) -> int:
        return len(self._index)

    def __iter__(self) -> Iterator[CompletionRecord]:
        return iter(list(self._index.values()))
