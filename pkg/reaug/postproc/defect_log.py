import json
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..prompts.builder import GenerateInput
from ..utils import sha256_text
from .parsing import DefectClass

DEFECT = "defect"
BENIGN = "benign"


def severity_of(defect: DefectClass, generate_input: Optional[GenerateInput] = None) -> str:
    """The sentinel answer to an empty generate input is expected; everything else is a defect."""
    if defect == DefectClass.SENTINEL_OUTPUT and generate_input is not None and generate_input.empty:
        return BENIGN
    return DEFECT


@dataclass(frozen=True)
class DefectRecord:
    origin_id: str
    method: str
    defect: str
    completion_digest: str
    attempt: int
    severity: str = DEFECT

    @classmethod
    def create(cls, origin_id: str, method: str, defect: DefectClass, raw_text: str, attempt: int, severity: str):
        return cls(origin_id=origin_id,
                   method=method,
                   defect=DefectClass(defect).value,
                   completion_digest=sha256_text(raw_text),
                   attempt=attempt,
                   severity=severity)

    def to_dict(self) -> Dict:
        return asdict(self)


class DefectLog:
    """Collects defect records of a run and writes them as line-delimited JSON."""

    def __init__(self):
        self._records: List[DefectRecord] = []
        self._lock = threading.Lock()

    def add(self, record: DefectRecord) -> None:
        with self._lock:
            self._records.append(record)

    def extend(self, records) -> None:
        with self._lock:
            self._records.extend(records)

    @property
    def records(self) -> List[DefectRecord]:
        return list(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def write(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            for record in self._records:
                f.write(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
