# Shared helpers: logging, timing, hashing and atomic file output
from .logging import get_logger, disable_existing_loggers, PipelineLogger
from .misc import get_mem_info, get_time_elapsed, sha256_text, canonical_json, write_text_atomic, write_json

__all__ = [
    'get_logger', 'disable_existing_loggers', 'PipelineLogger', 'get_mem_info', 'get_time_elapsed', 'sha256_text',
    'canonical_json', 'write_text_atomic', 'write_json'
]
