"""
Tests for batch mode.
"""

import io
from unittest.mock import Mock

import pytest

from semiflow.batch import EXIT_INTERRUPTED, EXIT_NESTED, BatchRunner, run_batch


def handler_returning(*codes):
    handler = Mock()
    handler.handle_command.side_effect = list(codes)
    return handler


class TestBatchRunner:
    """Line handling and exit codes."""

    def test_skips_blank_and_comment_lines(self):
        handler = handler_returning(0, 0)
        stream = io.StringIO("# header\n\ncatalog\n   \n  flow --gen hp:sqrt --z 1 --t 1  \n")
        assert BatchRunner(handler).run(stream) == 0
        commands = [call.args[0] for call in handler.handle_command.call_args_list]
        assert commands == ["catalog", "flow --gen hp:sqrt --z 1 --t 1"]

    def test_marks_commands_as_batch(self, stdout):
        handler = handler_returning(0)
        BatchRunner(handler).run(io.StringIO("catalog\n"), stdout=stdout)
        handler.handle_command.assert_called_once_with(
            "catalog", triggered_by="batch", stdout=stdout
        )

    def test_first_failure_wins_and_all_lines_run(self):
        handler = handler_returning(0, 3, 2, 0)
        runner = BatchRunner(handler)
        assert runner.run(io.StringIO("a\nb\nc\nd\n")) == 3
        assert runner.codes == [0, 3, 2, 0]

    def test_empty_input(self):
        assert BatchRunner(Mock()).run(io.StringIO("")) == 0

    def test_nested_batch_is_rejected(self):
        handler = handler_returning(0)
        runner = BatchRunner(handler)
        assert runner.run(io.StringIO("batch\ncatalog\n")) == EXIT_NESTED
        handler.handle_command.assert_called_once()

    def test_interrupt(self):
        handler = Mock()
        handler.handle_command.side_effect = [0, KeyboardInterrupt()]
        runner = BatchRunner(handler)
        assert runner.run(io.StringIO("a\nb\nc\n")) == EXIT_INTERRUPTED
        assert runner.interrupted is True
        assert handler.handle_command.call_count == 2

    def test_reads_stdin_by_default(self, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("catalog\n"))
        handler = handler_returning(5)
        assert run_batch(handler) == 5


@pytest.mark.integration
class TestBatchWithRegistry:
    def test_real_commands(self, registry, stdout):
        stream = io.StringIO("catalog\nhelp nope\ncatalog\n")
        assert BatchRunner(registry).run(stream, stdout=stdout) == 64
        assert stdout.getvalue().count('"command": "catalog"') == 2
