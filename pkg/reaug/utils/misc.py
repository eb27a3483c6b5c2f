import hashlib
import json
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Union

import psutil
from contexttimer import Timer


def get_mem_info(prefix=''):
    return f'{prefix}CPU memory usage: {psutil.Process().memory_info().rss / 1024**3:.2f} GB'


@contextmanager
def get_time_elapsed(logger, repr: str):
    with Timer() as timer:
        yield timer
    logger.info(f"Time elapsed for {repr}: {timer.elapsed:.4f}s")


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_json(obj: Any) -> str:
    """Serialize ``obj`` so equal values always produce equal bytes."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_json(path: Union[str, Path], payload: Any) -> None:
    write_text_atomic(path, json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
