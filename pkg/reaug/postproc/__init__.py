from .parsing import DefectClass, ParsedCompletion, parse_bracketed, quote_depth, strip_completion
from .tokenize import Token, tokenize_with_offsets
from .realign import classify_entity_mismatch, is_sentinel, normalize_surface, realign_generated, realign_paraphrase
from .defect_log import BENIGN, DEFECT, DefectLog, DefectRecord, severity_of

__all__ = [
    'DefectClass', 'ParsedCompletion', 'parse_bracketed', 'quote_depth', 'strip_completion', 'Token',
    'tokenize_with_offsets', 'classify_entity_mismatch', 'is_sentinel', 'normalize_surface', 'realign_generated',
    'realign_paraphrase', 'BENIGN', 'DEFECT', 'DefectLog', 'DefectRecord', 'severity_of'
]
