#!/usr/bin/env python
# -*- encoding: utf-8 -*-

import json
import os
import threading
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from ..errors import FidelityInputError, TransportError
from ..llm.gateway import API_KEY_ENV
from ..llm.transport import BaseTransport, RequestsTransport, send_with_retries
from ..utils import get_logger, sha256_text

logger = get_logger()


class BaseEmbeddingProvider(ABC):

    @abstractmethod
    def embed(self, sentences: Sequence[str]) -> List[List[float]]:
        pass


class PrecomputedEmbeddingProvider(BaseEmbeddingProvider):
    """Serve vectors from a line-delimited ``{"sentence": ..., "vector": [...]}`` file."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.vectors: Dict[str, List[float]] = {}
        with open(self.path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                    self.vectors[record["sentence"]] = [float(v) for v in record["vector"]]
                except (ValueError, TypeError, KeyError) as e:
                    raise FidelityInputError(f"line {line_number}: malformed embedding record ({e})") from None

    def embed(self, sentences):
        missing = [s for s in sentences if s not in self.vectors]
        if missing:
            raise FidelityInputError(f"{len(missing)} sentences have no precomputed vector, e.g. {missing[0]!r}")
        return [self.vectors[s] for s in sentences]


class HttpEmbeddingProvider(BaseEmbeddingProvider):
    """Embeddings endpoint client: POST ``{"model", "input"}``, read ``data[i].embedding``."""

    def __init__(self,
                 url: str,
                 model: str,
                 transport: Optional[BaseTransport] = None,
                 api_key: Optional[str] = None,
                 batch_size: int = 64,
                 max_attempts: int = 5,
                 backoff_seconds: float = 1.0,
                 timeout: float = 60.0,
                 sleep=None):
        self.url = url
        self.model = model
        self.transport = transport or RequestsTransport()
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.batch_size = batch_size
        self.retry_kwargs = dict(max_attempts=max_attempts, backoff_seconds=backoff_seconds, timeout=timeout)
        if sleep is not None:
            self.retry_kwargs["sleep"] = sleep

    def embed(self, sentences):
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        vectors = []
        for i in range(0, len(sentences), self.batch_size):
            batch = list(sentences[i:i + self.batch_size])
            body = send_with_retries(self.transport, self.url, {"model": self.model, "input": batch}, headers,
                                     **self.retry_kwargs)
            try:
                data = sorted(body["data"], key=lambda item: item.get("index", 0))
                vectors.extend([float(v) for v in item["embedding"]] for item in data)
            except (KeyError, TypeError) as e:
                raise TransportError(f"embedding response is malformed ({e})") from None
            if len(vectors) != i + len(batch):
                raise TransportError(f"embedding response holds {len(vectors) - i} vectors for {len(batch)} inputs")
        return vectors


class EmbeddingCache:
    """Vectors keyed by the SHA-256 of their sentence, optionally persisted as line-delimited JSON."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else None
        self._vectors: Dict[str, List[float]] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            with open(self.path, "r", encoding="utf-8") as f:
                for line in f:
                    if line.strip():
                        record = json.loads(line)
                        self._vectors[record["digest"]] = record["vector"]

    def get(self, sentence: str) -> Optional[List[float]]:
        return self._vectors.get(sha256_text(sentence))

    def put(self, sentence: str, vector: List[float]) -> None:
        key = sha256_text(sentence)
        with self._lock:
            if key in self._vectors:
                return
            self._vectors[key] = list(vector)
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as f:
                    f.write(json.dumps({"digest": key, "vector": list(vector)}) + "\n")

    def __len__(self) -> int:
        return len(self._vectors)


def embed_sentences(sentences: Sequence[str],
                    provider: BaseEmbeddingProvider,
                    cache: Optional[EmbeddingCache] = None,
                    batch_size: int = 256,
                    progress: bool = False) -> np.ndarray:
    """One vector per sentence, in order; cached sentences are never sent to the provider."""
    cache = cache if cache is not None else EmbeddingCache()
    missing = list(dict.fromkeys(s for s in sentences if cache.get(s) is None))
    for i in tqdm(range(0, len(missing), batch_size), desc="embed", ncols=0, disable=not progress):
        batch = missing[i:i + batch_size]
        for sentence, vector in zip(batch, provider.embed(batch)):
            cache.put(sentence, vector)
    if missing:
        logger.info(f"embedded {len(missing):,} new sentences, {len(sentences) - len(missing):,} served from cache")

    vectors = [cache.get(s) for s in sentences]
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise FidelityInputError(f"embedding dimensions differ within a batch: {sorted(dims)}")
    if not vectors:
        return np.zeros((0, 0))
    return np.asarray(vectors, dtype=np.float64)
