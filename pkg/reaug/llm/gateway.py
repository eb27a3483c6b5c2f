import hashlib
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

from ..datasets.types import AugmentMethod
from ..errors import CacheMissError, TransportError
from ..prompts.builder import PromptText
from ..utils import canonical_json, get_logger
from .cache import CompletionCache, CompletionRecord
from .transport import BaseTransport, RequestsTransport, send_with_retries

MODES = ["live", "record", "replay"]
API_KEY_ENV = "PGA_API_KEY"
DEFAULT_MAX_TOKENS = 512
# sampling temperature per augmentation method
DEFAULT_TEMPERATURES = {AugmentMethod.PARAPHRASE: 0.5, AugmentMethod.GENERATE: 1.0}

logger = get_logger()


@dataclass(frozen=True)
class CompletionParams:
    model_name: str
    temperature: float
    max_tokens: int = DEFAULT_MAX_TOKENS
    stop_sequences: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "temperature", float(self.temperature))
        object.__setattr__(self, "stop_sequences", tuple(self.stop_sequences))
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must lie in [0, 2], got {self.temperature}")
        if self.max_tokens <= 0:
            raise ValueError(f"max_tokens must be positive, got {self.max_tokens}")

    @classmethod
    def for_method(cls, method: AugmentMethod, model_name: str, **kwargs) -> "CompletionParams":
        kwargs.setdefault("temperature", DEFAULT_TEMPERATURES[AugmentMethod(method)])
        return cls(model_name=model_name, **kwargs)

    def to_wire(self, prompt: str) -> Dict:
        return {
            "model": self.model_name,
            "prompt": prompt,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "stop": list(self.stop_sequences),
        }


def digest(prompt: PromptText, params: CompletionParams) -> str:
    """SHA-256 over the canonical JSON of the prompt text and every sampling parameter."""
    return hashlib.sha256(canonical_json(params.to_wire(prompt.text)).encode("utf-8")).hexdigest()


def _first_choice_text(body) -> str:
    try:
        return body["choices"][0]["text"]
    except (KeyError, IndexError, TypeError):
        raise TransportError("response carries no choices[0].text") from None


class LLMGateway:
    """Completion endpoint client with a record/replay cache.

    ``live`` calls the endpoint and persists nothing; ``record`` serves cached completions
    and persists new successful ones; ``replay`` serves only the cache and never touches
    the network. At most ``concurrency`` requests are in flight at once.
    """

    def __init__(self,
                 url: Optional[str] = None,
                 mode: str = "replay",
                 cache: Optional[CompletionCache] = None,
                 transport: Optional[BaseTransport] = None,
                 api_key: Optional[str] = None,
                 concurrency: int = 4,
                 max_attempts: int = 5,
                 backoff_seconds: float = 1.0,
                 timeout: float = 60.0,
                 sleep: Callable[[float], None] = time.sleep):
        if mode not in MODES:
            raise ValueError(f"Supplied mode was {mode}. Must be one of {MODES}.")
        if concurrency < 1:
            raise ValueError("concurrency must be at least 1")
        self.url = url
        self.mode = mode
        self.cache = cache if cache is not None else CompletionCache()
        self._transport = transport
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.concurrency = concurrency
        self.max_attempts = max_attempts
        self.backoff_seconds = backoff_seconds
        self.timeout = timeout
        self.sleep = sleep
        self._slots = threading.BoundedSemaphore(concurrency)
        self._lock = threading.Lock()
        self.network_calls = 0

    @property
    def transport(self) -> BaseTransport:
        if self._transport is None:
            self._transport = RequestsTransport()
        return self._transport

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def _call(self, prompt: PromptText, params: CompletionParams, prompt_digest: str, attempt: int) -> CompletionRecord:
        if not self.url:
            raise TransportError("no endpoint url configured")
        with self._lock:
            self.network_calls += 1
        with self._slots:
            try:
                body = send_with_retries(self.transport,
                                         self.url,
                                         params.to_wire(prompt.text),
                                         self._headers(),
                                         timeout=self.timeout,
                                         max_attempts=self.max_attempts,
                                         backoff_seconds=self.backoff_seconds,
                                         sleep=self.sleep)
            except TransportError as e:
                e.record = CompletionRecord(prompt_digest, "", attempt, e.status, time.time())
                raise
        return CompletionRecord(prompt_digest, _first_choice_text(body), attempt, "ok", time.time())

    def complete(self,
                 prompt: PromptText,
                 params: CompletionParams,
                 attempt: int = 1,
                 mode: Optional[str] = None) -> CompletionRecord:
        mode = mode or self.mode
        if mode not in MODES:
            raise ValueError(f"Supplied mode was {mode}. Must be one of {MODES}.")
        prompt_digest = digest(prompt, params)

        if mode != "live":
            cached = self.cache.get(prompt_digest, attempt)
            if cached is not None:
                return cached
            if mode == "replay":
                raise CacheMissError(f"no cached completion for digest {prompt_digest[:12]} attempt {attempt} "
                                     f"(origin {prompt.origin_sample_id})")

        record = self._call(prompt, params, prompt_digest, attempt)
        if mode == "record":
            self.cache.put(record)
        return record

    def close(self) -> None:
        if self._transport is not None:
            self._transport.close()
