import logging

from rich.logging import RichHandler

from reaug.utils import canonical_json, get_logger, sha256_text


def test_console_lines_carry_the_level_once():
    get_logger("reaug.console_check")
    handler = next(h for h in logging.getLogger("reaug.console_check").handlers if isinstance(h, RichHandler))
    record = logging.LogRecord("reaug.console_check", logging.INFO, __file__, 1, "resumed 3 samples", None, None)
    assert handler.format(record) == "resumed 3 samples"


def test_file_sink_spells_out_name_and_level(tmp_path):
    logger = get_logger("reaug.file_check")
    logger.log_to_file(tmp_path)
    logger.info("wrote 5 samples")
    underlying = logging.getLogger("reaug.file_check")
    file_handlers = [h for h in underlying.handlers if isinstance(h, logging.FileHandler)]
    for handler in file_handlers:
        handler.close()
        underlying.removeHandler(handler)

    line = (tmp_path / "reaug.file_check.log").read_text(encoding="utf-8").strip()
    assert line.endswith("reaug.file_check - INFO: wrote 5 samples")
    assert line.count("INFO") == 1


def test_canonical_json_ignores_key_order():
    assert canonical_json({"b": 1, "a": [1, 2]}) == canonical_json({"a": [1, 2], "b": 1}) == '{"a":[1,2],"b":1}'
    assert sha256_text("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
