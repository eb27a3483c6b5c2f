from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from ..datasets.types import AugmentMethod
from ..llm.gateway import CompletionParams
from ..utils import canonical_json, sha256_text

# semantic re-synthesis cap for paraphrase; generate discards on the first defect
DEFAULT_MAX_SEMANTIC_RETRIES = {AugmentMethod.PARAPHRASE: 5, AugmentMethod.GENERATE: 0}


@dataclass(frozen=True)
class AugmentPolicy:
    method: AugmentMethod
    params: CompletionParams
    max_semantic_retries: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "method", AugmentMethod(self.method))
        if self.max_semantic_retries is None:
            object.__setattr__(self, "max_semantic_retries", DEFAULT_MAX_SEMANTIC_RETRIES[self.method])
        if self.max_semantic_retries < 0:
            raise ValueError("max_semantic_retries must be non-negative")
        if self.method == AugmentMethod.GENERATE and self.max_semantic_retries != 0:
            raise ValueError("generate discards defective samples, max_semantic_retries must be 0")

    @property
    def max_attempts(self) -> int:
        return 1 + self.max_semantic_retries

    @property
    def fingerprint(self) -> str:
        """Digest of everything that shapes an outcome: method, retry cap and sampling parameters."""
        return sha256_text(
            canonical_json({
                "method": self.method.value,
                "max_attempts": self.max_attempts,
                "params": self.params.to_wire(""),
            }))

    @classmethod
    def for_method(cls, method, model_name: str, **param_overrides) -> "AugmentPolicy":
        method = AugmentMethod(method)
        retries = param_overrides.pop("max_semantic_retries", None)
        if method == AugmentMethod.GENERATE:
            retries = 0
        return cls(method=method,
                   params=CompletionParams.for_method(method, model_name, **param_overrides),
                   max_semantic_retries=retries)


@dataclass
class RunReport:
    """Outcome counts of one augmentation run.

    ``defects`` counts first-attempt defects by class; benign sentinel answers are
    counted under ``benign`` instead. Every input ends up produced, discarded or skipped.
    """

    method: str = ""
    inputs: int = 0
    produced: int = 0
    discarded: int = 0
    skipped: int = 0
    benign: int = 0
    attempts_total: int = 0
    defects: Counter = field(default_factory=Counter)

    @property
    def first_attempt_defects(self) -> int:
        return sum(self.defects.values())

    @property
    def defect_rate(self) -> float:
        return self.first_attempt_defects / self.inputs if self.inputs else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "inputs": self.inputs,
            "produced": self.produced,
            "discarded": self.discarded,
            "skipped": self.skipped,
            "benign": self.benign,
            "attempts_total": self.attempts_total,
            "defects": dict(sorted(self.defects.items())),
            "defect_rate": round(self.defect_rate, 6),
        }

    def summary(self) -> str:
        return (f"{self.method}: inputs {self.inputs:,}, produced {self.produced:,}, discarded {self.discarded:,}, "
                f"skipped {self.skipped:,}, defect rate {self.defect_rate:.2%}, attempts {self.attempts_total:,}")
