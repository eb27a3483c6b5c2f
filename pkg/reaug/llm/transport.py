#!/usr/bin/env python
# -*- encoding: utf-8 -*-

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import requests

from ..errors import TransportError
from ..utils import get_logger

TIMEOUT = "timeout"
HTTP_ERROR = "http_error"
RETRYABLE_STATUS = {429, 500, 502, 503, 504}

logger = get_logger()


@dataclass
class TransportResponse:
    status_code: int
    body: Any = None
    headers: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return 200 <= self.status_code < 300


class BaseTransport(ABC):
    """One HTTP POST of a JSON body. Implementations raise :class:`TransportError` on connection failures."""

    @abstractmethod
    def post(self, url: str, payload: Dict[str, Any], headers: Dict[str, str], timeout: float) -> TransportResponse:
        pass

    def close(self) -> None:
        pass


class RequestsTransport(BaseTransport):

    def __init__(self, session: Optional[requests.Session] = None):
        self.session = session or requests.Session()

    def post(self, url, payload, headers, timeout):
        try:
            response = self.session.post(url, json=payload, headers=headers, timeout=timeout)
        except requests.Timeout as e:
            raise TransportError(f"request to {url} timed out ({e})", status=TIMEOUT) from None
        except requests.RequestException as e:
            raise TransportError(f"request to {url} failed ({e})", status=HTTP_ERROR) from None
        try:
            body = response.json()
        except ValueError:
            body = None
        return TransportResponse(status_code=response.status_code, body=body, headers=dict(response.headers))

    def close(self):
        self.session.close()


def _retry_after(response: TransportResponse) -> Optional[float]:
    for key, value in response.headers.items():
        if key.lower() == "retry-after":
            try:
                return max(0.0, float(value))
            except ValueError:
                return None
    return None


def send_with_retries(transport: BaseTransport,
                      url: str,
                      payload: Dict[str, Any],
                      headers: Dict[str, str],
                      timeout: float = 60.0,
                      max_attempts: int = 5,
                      backoff_seconds: float = 1.0,
                      sleep: Callable[[float], None] = time.sleep) -> Any:
    """POST ``payload`` and return the decoded body of the first successful response.

    Failed attempts wait ``backoff_seconds * 2**k`` before attempt ``k + 2``; a 429 with
    a ``Retry-After`` header waits that long instead. Non-retryable HTTP statuses fail at once.
    """
    last_error = None
    for attempt in range(max_attempts):
        wait = backoff_seconds * 2**attempt
        try:
            response = transport.post(url, payload, headers, timeout)
        except TransportError as e:
            last_error = e
        else:
            if response.ok and response.body is not None:
                return response.body
            last_error = TransportError(f"{url} answered HTTP {response.status_code}", status=HTTP_ERROR)
            if response.ok or response.status_code not in RETRYABLE_STATUS:
                raise last_error
            retry_after = _retry_after(response) if response.status_code == 429 else None
            if retry_after is not None:
                wait = retry_after
        if attempt + 1 < max_attempts:
            logger.warning(f"attempt {attempt + 1}/{max_attempts} failed ({last_error}), retrying in {wait:.1f}s")
            sleep(wait)
    raise TransportError(f"giving up after {max_attempts} attempts: {last_error}", status=last_error.status)
