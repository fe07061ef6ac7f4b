"""
Tests for formatted text utilities.
"""

import io
import sys
from unittest.mock import patch

from prompt_toolkit.formatted_text import ANSI, HTML

from semiflow.formatting import (
    FAIL,
    PASS,
    auto_format,
    check_line,
    create_auto_printer,
    detect_format_type,
    error_line,
    print_auto_formatted,
    status_markup,
    suite_summary,
)
from semiflow.suites import SuiteReport


class TestDetectFormatType:
    """Format detection for printer input."""

    def test_html(self):
        assert detect_format_type("<b>bold</b>") == "html"
        assert detect_format_type(PASS) == "html"

    def test_ansi(self):
        assert detect_format_type("\x1b[31mred\x1b[0m") == "ansi"

    def test_comparisons_are_plain(self):
        """Check names such as 'sup <= 1.1 C sqrt(t)' are not markup."""
        assert detect_format_type("sup <= 1.1 C sqrt(t)") == "plain"
        assert detect_format_type("0 < t < 1") == "plain"
        assert detect_format_type("") == "plain"


class TestAutoFormat:
    def test_wraps_by_type(self):
        assert isinstance(auto_format("<b>x</b>"), HTML)
        assert isinstance(auto_format("\x1b[1mx\x1b[0m"), ANSI)
        assert auto_format("plain") == "plain"

    def test_print_auto_formatted_passes_kwargs(self):
        with patch("semiflow.formatting.print_formatted_text") as mock_print:
            print_auto_formatted("plain", end="")
        mock_print.assert_called_once_with("plain", end="")


class TestAutoPrinter:
    """create_auto_printer routes to stderr unless told otherwise."""

    def test_default_stream_is_stderr_at_call_time(self, monkeypatch):
        fake_stderr = io.StringIO()
        printer = create_auto_printer()
        monkeypatch.setattr(sys, "stderr", fake_stderr)
        with patch("semiflow.formatting.print_formatted_text") as mock_print:
            printer("hello")
        assert mock_print.call_args.kwargs["file"] is fake_stderr

    def test_explicit_stream(self):
        stream = io.StringIO()
        printer = create_auto_printer(stream)
        with patch("semiflow.formatting.print_formatted_text") as mock_print:
            printer("<b>x</b>", end="")
        (text,), kwargs = mock_print.call_args
        assert isinstance(text, HTML)
        assert kwargs == {"file": stream, "end": ""}


class TestSummaryLines:
    """Check and error lines escape their text."""

    def test_status_markup(self):
        assert status_markup(True) == PASS
        assert status_markup(False) == FAIL

    def test_check_line_escapes(self):
        line = check_line("sup <= 1.1 C sqrt(t)", False, detail="a < b")
        assert line == f"  {FAIL} sup &lt;= 1.1 C sqrt(t) (a &lt; b)"
        # Escaped text still parses as HTML
        HTML(line)

    def test_error_line(self):
        assert error_line("x < 0") == "<ansired>error</ansired>: x &lt; 0"

    def test_suite_summary(self):
        report = SuiteReport("demo")
        report.check("first", True)
        report.check("second", False)
        lines = suite_summary(report)
        assert lines[0] == f"<b>demo</b> {FAIL}"
        assert lines[1:] == [f"  {PASS} first", f"  {FAIL} second"]
