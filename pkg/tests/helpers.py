import threading
import time
from typing import Callable, List, Sequence

from reaug.llm import BaseTransport, CompletionRecord, TransportResponse, digest


def completion_response(text: str) -> TransportResponse:
    return TransportResponse(status_code=200, body={"choices": [{"text": text}]})


class ScriptedTransport(BaseTransport):
    """Answers each POST with ``responder(payload, call_index)``; exceptions returned by it are raised."""

    def __init__(self, responder: Callable, delay: float = 0.0):
        self.responder = responder
        self.delay = delay
        self.calls: List[tuple] = []
        self.in_flight = 0
        self.max_in_flight = 0
        self._lock = threading.Lock()

    def post(self, url, payload, headers, timeout):
        with self._lock:
            index = len(self.calls)
            self.calls.append((url, payload, dict(headers)))
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)
        try:
            if self.delay:
                time.sleep(self.delay)
            result = self.responder(payload, index)
        finally:
            with self._lock:
                self.in_flight -= 1
        if isinstance(result, Exception):
            raise result
        return result


class ForbiddenTransport(BaseTransport):

    def post(self, url, payload, headers, timeout):
        raise AssertionError("no network call expected")


def prefill(cache, prompt, params, texts: Sequence[str]) -> str:
    """Store ``texts[k]`` as the completion of attempt ``k + 1`` of ``prompt``."""
    key = digest(prompt, params)
    for attempt, text in enumerate(texts, start=1):
        cache.put(CompletionRecord(key, text, attempt, "ok", 0.0))
    return key


def drop_first_bracket(text: str) -> str:
    """Unwrap the first bracketed entity, leaving its words in place."""
    open_at = text.index("[")
    close_at = text.index("]", open_at)
    return text[:open_at] + text[open_at + 1:close_at] + text[close_at + 1:]


class SleepRecorder:

    def __init__(self):
        self.waits: List[float] = []

    def __call__(self, seconds: float) -> None:
        self.waits.append(seconds)
