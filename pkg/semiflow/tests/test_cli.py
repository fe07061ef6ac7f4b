"""
Tests for the command-line entry point.
"""

import io
import json
from unittest.mock import patch

import pytest

from semiflow import __version__
from semiflow.cli import build_parser, main


@pytest.fixture
def printer():
    """Capture the auto printer main() creates."""
    with patch("semiflow.cli.create_auto_printer") as factory:
        yield factory.return_value


def messages(printer):
    return "\n".join(str(call.args[0]) for call in printer.call_args_list)


def documents(text):
    """Every JSON report in text, in order."""
    decoder = json.JSONDecoder()
    found, index = [], 0
    while index < len(text):
        if text[index].isspace():
            index += 1
            continue
        document, index = decoder.raw_decode(text, index)
        found.append(document)
    return found


class TestParser:
    def test_global_options(self):
        args = build_parser().parse_args(["-vv", "--config", "x.ini", "flow", "--z", "1"])
        assert args.verbose == 2
        assert args.config == "x.ini"
        assert args.command == ["flow", "--z", "1"]

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(["--version"])
        assert excinfo.value.code == 0
        assert __version__ in capsys.readouterr().out


@pytest.mark.integration
class TestMain:
    """Exit codes of whole command lines."""

    def test_no_command_shows_help(self, printer):
        assert main([]) == 64
        assert "Available Commands:" in messages(printer)

    def test_help(self, printer):
        assert main(["help"]) == 0

    def test_catalog(self, printer, capsys):
        assert main(["catalog"]) == 0
        assert json.loads(capsys.readouterr().out)["header"]["command"] == "catalog"

    def test_flow(self, printer, capsys):
        assert main(["flow", "--gen", "hp:sqrt", "--z", "1", "--t", "1", "--samples", "2"]) == 0
        assert "t,re,im" in capsys.readouterr().out

    def test_unknown_command(self, printer):
        assert main(["nope"]) == 64
        assert "Unknown command: nope" in messages(printer)

    def test_unknown_generator(self, printer):
        assert main(["flow", "--gen", "zz:1", "--z", "1", "--t", "1"]) == 3

    def test_flow_start_outside_domain(self, printer):
        assert main(["flow", "--gen", "hp:sqrt", "--z", "-1", "--t", "1"]) == 64
        assert "--z must lie in" in messages(printer)

    def test_verify_config_error_writes_report(self, printer, capsys):
        assert main(["verify", "thm1.1", "--gen", "hp:sqrt"]) == 64
        document = json.loads(capsys.readouterr().out)
        assert document["header"]["command"] == "verify"
        assert document["payload"]["passed"] is False
        assert document["payload"]["error"]["type"] == "ConfigError"

    def test_rate_unknown_generator_writes_report(self, printer, capsys):
        assert main(["rate", "--gen", "zz:1"]) == 3
        error = json.loads(capsys.readouterr().out)["payload"]["error"]
        assert error["type"] == "UnknownGeneratorError"

    def test_bad_global_option(self, printer):
        assert main(["--bogus"]) == 64

    def test_bad_thread_count(self, printer, monkeypatch):
        monkeypatch.setenv("SEMIFLOW_THREADS", "zero")
        assert main(["catalog"]) == 64
        assert "SEMIFLOW_THREADS" in messages(printer)

    def test_batch_from_stdin(self, printer, monkeypatch, capsys):
        lines = (
            "catalog\n"
            "harmonic --subset full --w 2+2i --N 2000\n"
            "flow --gen hp:sqrt --z -1 --t 1\n"
        )
        monkeypatch.setattr("sys.stdin", io.StringIO(lines))
        assert main(["batch"]) == 2
        catalog, harmonic = documents(capsys.readouterr().out)
        assert catalog["header"]["command"] == "catalog"
        assert harmonic["header"]["command"] == "harmonic"
        assert harmonic["payload"]["error"]["type"] == "DomainViolation"


@pytest.mark.integration
class TestConfigFile:
    """--config FILE supplies the [experiment] defaults."""

    def test_generator_from_config(self, printer, tmp_path, capsys):
        path = tmp_path / "run.ini"
        path.write_text("[experiment]\ngenerator = hp:sqrt\n")
        assert main(["--config", str(path), "flow", "--z", "1", "--t", "0.5"]) == 0
        assert "# generator: " in capsys.readouterr().out

    def test_missing_file(self, printer, tmp_path):
        assert main(["--config", str(tmp_path / "missing.ini"), "catalog"]) == 64
        assert "Cannot read config" in messages(printer)

    def test_unknown_key(self, printer, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[experiment]\ncolour = blue\n")
        assert main(["--config", str(path), "catalog"]) == 64
        assert "Unknown config key" in messages(printer)
