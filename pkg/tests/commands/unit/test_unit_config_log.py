import json

import pytest
import structlog

from src.config_log import configure_logging


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    configure_logging()


def test_json_lines_on_stderr(capsys):
    configure_logging("DEBUG", "json")
    structlog.get_logger("selftest").info("selftest: completed", instances=3)
    captured = capsys.readouterr()
    assert captured.out == ""
    record = json.loads(captured.err.strip().splitlines()[-1])
    assert record["event"] == "selftest: completed"
    assert record["level"] == "info"
    assert record["logger"] == "selftest"
    assert record["instances"] == 3
    assert record["timestamp"].endswith("Z")


def test_level_filter(capsys):
    configure_logging("warning", "json")
    logger = structlog.get_logger("selftest")
    logger.info("selftest: hidden")
    logger.warning("selftest: shown")
    lines = capsys.readouterr().err.strip().splitlines()
    assert [json.loads(line)["event"] for line in lines] == ["selftest: shown"]


def test_unknown_format_falls_back_to_console(capsys):
    configure_logging("INFO", "xml")
    structlog.get_logger("selftest").info("selftest: completed", answer=1)
    err = capsys.readouterr().err
    assert "selftest: completed" in err
    assert "answer=1" in err


def test_reconfigure_switches_renderer(capsys):
    logger = structlog.get_logger("selftest")
    configure_logging("INFO", "console")
    logger.info("selftest: first")
    configure_logging("INFO", "json")
    logger.info("selftest: second")
    first, second = capsys.readouterr().err.strip().splitlines()
    assert "selftest: first" in first
    assert json.loads(second)["event"] == "selftest: second"
