#!/usr/bin/env python
# -*- encoding: utf-8 -*-

import logging
from pathlib import Path
from typing import List, Optional, Union

from rich.console import Console
from rich.logging import RichHandler

# rich renders time and level itself; the file sink spells them out
CONSOLE_FORMAT = "%(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s: %(message)s"
DEFAULT_NAME = "reaug"


class PipelineLogger:
    """A named logger rendered through rich, with an optional plain-text file sink.

    One instance exists per name; use :func:`get_logger` rather than the constructor.

    Args:
        name (str): The name of the underlying :class:`logging.Logger`.
    """

    __instances = dict()

    @staticmethod
    def get_instance(name: str) -> "PipelineLogger":
        if name not in PipelineLogger.__instances:
            PipelineLogger.__instances[name] = PipelineLogger(name=name)
        return PipelineLogger.__instances[name]

    def __init__(self, name: str):
        if name in PipelineLogger.__instances:
            raise RuntimeError(f"Logger with the same name {name} has been created, use get_logger() instead")
        self._name = name
        self._logger = logging.getLogger(name)
        self._logger.propagate = False
        if not self._logger.handlers:
            handler = RichHandler(console=Console(stderr=True), show_path=False, markup=False, rich_tracebacks=True)
            handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
            self._logger.addHandler(handler)
        self._logger.setLevel(logging.INFO)

    @property
    def name(self) -> str:
        return self._name

    @staticmethod
    def _check_valid_logging_level(level: str):
        assert level in ['INFO', 'DEBUG', 'WARNING', 'ERROR'], 'found invalid logging level'

    def set_level(self, level: str) -> None:
        self._check_valid_logging_level(level)
        self._logger.setLevel(getattr(logging, level))
        for handler in self._logger.handlers:
            handler.setLevel(getattr(logging, level))

    def log_to_file(self, path: Union[str, Path], mode: str = 'a', level: str = 'INFO') -> None:
        """Also write records to ``path``.

        Args:
            path (Union[str, Path]): A file, or a directory that receives ``<name>.log``.
            mode (str): File mode, defaults to 'a'.
            level (str): Level of the file sink, defaults to 'INFO'.
        """
        self._check_valid_logging_level(level)
        path = Path(path)
        if path.is_dir():
            path = path / f"{self._name}.log"
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path, mode)
        file_handler.setLevel(getattr(logging, level))
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        self._logger.addHandler(file_handler)

    def info(self, message: str) -> None:
        self._logger.info(message)

    def warning(self, message: str) -> None:
        self._logger.warning(message)

    def debug(self, message: str) -> None:
        self._logger.debug(message)

    def error(self, message: str) -> None:
        self._logger.error(message)


def get_logger(name: str = DEFAULT_NAME) -> PipelineLogger:
    return PipelineLogger.get_instance(name=name)


def disable_existing_loggers(include: Optional[List[str]] = None, exclude: List[str] = [DEFAULT_NAME]) -> None:
    """Raise every other registered logger to WARNING so library chatter stays out of run logs."""
    if include is None:
        loggers = logging.root.manager.loggerDict.keys()
    else:
        loggers = include
    for log_name in loggers:
        if log_name not in exclude:
            logging.getLogger(log_name).setLevel(logging.WARNING)
