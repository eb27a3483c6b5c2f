class ReaugError(Exception):
    """Base class of every failure the pipeline reports to its caller.

    ``error_class`` is the stable token printed by the command line on failure.
    """

    error_class = "reaug_error"


class CorpusFormatError(ReaugError):
    error_class = "corpus_format"

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OverlapError(ReaugError):
    error_class = "overlap"


class GenerateInputError(ReaugError):
    error_class = "generate_input"


class CacheMissError(ReaugError):
    error_class = "cache_miss"


class TransportError(ReaugError):
    error_class = "transport"

    def __init__(self, message: str, status: str = "http_error", record=None):
        self.status = status
        self.record = record
        super().__init__(message)


class AugmentAborted(ReaugError):
    error_class = "augment_aborted"

    def __init__(self, message: str, checkpoint_path=None):
        self.checkpoint_path = checkpoint_path
        super().__init__(message)


class CheckpointMismatchError(ReaugError):
    error_class = "checkpoint_mismatch"


class DuplicateIdError(ReaugError):
    error_class = "duplicate_id"


class SubsetRangeError(ReaugError):
    error_class = "subset_range"


class ScoreInputError(ReaugError):
    error_class = "score_input"


class FidelityInputError(ReaugError):
    error_class = "fidelity_input"


class ConfigError(ReaugError):
    error_class = "config"


class ReplayMismatchError(ReaugError):
    error_class = "replay_mismatch"
