from .transport import BaseTransport, RequestsTransport, TransportResponse, send_with_retries
from .cache import CompletionCache, CompletionRecord
from .gateway import MODES, CompletionParams, LLMGateway, digest

__all__ = [
    'BaseTransport', 'RequestsTransport', 'TransportResponse', 'send_with_retries', 'CompletionCache',
    'CompletionRecord', 'MODES', 'CompletionParams', 'LLMGateway', 'digest'
]
