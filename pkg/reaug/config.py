from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError

LIST_KEYS = {"stop_sequences"}


class RunConfig(BaseModel):
    """Every setting a subcommand may read. Unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    # paths
    input_path: Optional[str] = None
    output_dir: str = "output"
    cache_path: Optional[str] = None

    # augmentation
    method: Optional[Literal["paraphrase", "generate"]] = None
    mode: Literal["live", "record", "replay"] = "replay"
    endpoint_url: Optional[str] = None
    model_name: str = "text-davinci-003"
    paraphrase_temperature: float = Field(0.5, ge=0.0, le=2.0)
    generate_temperature: float = Field(1.0, ge=0.0, le=2.0)
    max_tokens: int = Field(512, gt=0)
    stop_sequences: List[str] = Field(default_factory=list)
    max_semantic_retries: int = Field(5, ge=0)
    concurrency: int = Field(4, ge=1)
    max_transport_attempts: int = Field(5, ge=1)
    backoff_seconds: float = Field(1.0, ge=0.0)
    request_timeout: float = Field(60.0, gt=0.0)

    # assembly and export
    seed: int = 13
    n: Optional[int] = Field(None, ge=0)
    format: Literal["scierc", "spert", "marker"] = "scierc"
    split: Literal["train", "dev", "test", "pseudo"] = "train"

    # scoring and fidelity
    symmetric_relations: bool = True
    fidelity_pairs: int = Field(400, ge=1)
    embedding_url: Optional[str] = None
    embedding_model: Optional[str] = None
    embeddings_path: Optional[str] = None

    # logging
    log_level: Literal["INFO", "DEBUG", "WARNING", "ERROR"] = "INFO"
    log_file: Optional[str] = None

    @field_validator("stop_sequences", mode="before")
    @classmethod
    def _split_list(cls, value):
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper(cls, value):
        return value.upper() if isinstance(value, str) else value

    def resolved_cache_path(self) -> Path:
        return Path(self.cache_path) if self.cache_path else Path(self.output_dir) / "completions.jsonl"

    def temperature_for(self, method: str) -> float:
        return self.paraphrase_temperature if method == "paraphrase" else self.generate_temperature


def parse_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Read flat ``key = value`` lines; ``#`` starts a comment, list values are comma separated."""
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path} ({e.strerror})") from None
    for line_number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_number}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{line_number}: missing key")
        if key in values:
            raise ConfigError(f"{path}:{line_number}: duplicate key {key!r}")
        values[key] = value
    return values


def load_config(path: Optional[Union[str, Path]] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Defaults, then the config file, then ``overrides`` (command-line flags; ``None`` values are ignored)."""
    values: Dict[str, Any] = parse_config_file(path) if path is not None else {}
    values = {k: (None if v == "" and k not in LIST_KEYS else v) for k, v in values.items()}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors())
        raise ConfigError(problems) from None
