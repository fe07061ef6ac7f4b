"""
Formatted text utilities for semiflow.

Human-readable summaries go through prompt_toolkit with auto-detection of the
format type, so the same printer handles plain, HTML-marked and ANSI text.
"""

import re
import sys
from typing import Callable, List, Optional, TextIO

from prompt_toolkit import print_formatted_text
from prompt_toolkit.formatted_text import ANSI, HTML
from prompt_toolkit.formatted_text.html import html_escape

_ANSI_PATTERN = re.compile(r"\x1b\[[0-9;]*m")
_HTML_PATTERN = re.compile(r"</?[a-zA-Z][a-zA-Z0-9]*\s*/?>")

PASS = "<ansigreen>PASS</ansigreen>"
FAIL = "<ansired>FAIL</ansired>"


def detect_format_type(text: str) -> str:
    """
    Detect the format type of a text string.

    Args:
        text: Text string to analyze

    Returns:
        Format type: 'ansi', 'html', or 'plain'

    Examples:
        >>> detect_format_type("<b>Bold</b>")
        'html'
        >>> detect_format_type("\\x1b[1mBold\\x1b[0m")
        'ansi'
        >>> detect_format_type("sup <= 1.1 C sqrt(t)")
        'plain'
    """
    if _ANSI_PATTERN.search(text):
        return "ansi"
    if _HTML_PATTERN.search(text):
        return "html"
    return "plain"


def auto_format(text: str):
    """
    Wrap text in the prompt_toolkit type matching its format.

    Examples:
        >>> auto_format("<b>Bold</b>")
        HTML('<b>Bold</b>')
        >>> auto_format("Plain text")
        'Plain text'
    """
    format_type = detect_format_type(text)
    if format_type == "ansi":
        return ANSI(text)
    elif format_type == "html":
        return HTML(text)
    return text


def print_auto_formatted(text: str, **kwargs) -> None:
    """Print text with auto-detected formatting; kwargs go to print_formatted_text."""
    print_formatted_text(auto_format(text), **kwargs)


def create_auto_printer(file: Optional[TextIO] = None) -> Callable:
    """
    Create a ``print``-compatible printer with auto-format detection.

    Args:
        file: Stream to write to (default: sys.stderr at call time)

    Examples:
        >>> printer = create_auto_printer(sys.stdout)
        >>> printer("<b>Bold</b>")
        Bold
    """

    def printer(text: str, **kwargs):
        kwargs.setdefault("file", file if file is not None else sys.stderr)
        print_auto_formatted(text, **kwargs)

    return printer


def status_markup(passed: bool) -> str:
    return PASS if passed else FAIL


def check_line(name: str, passed: bool, detail: str = "") -> str:
    """
    One summary line for a named check, with its text escaped for HTML markup.

    Example:
        >>> check_line("sup <= 2.1 t", True)
        '  <ansigreen>PASS</ansigreen> sup &lt;= 2.1 t'
    """
    suffix = f" ({html_escape(detail)})" if detail else ""
    return f"  {status_markup(passed)} {html_escape(name)}{suffix}"


def error_line(message: str) -> str:
    return f"<ansired>error</ansired>: {html_escape(message)}"


def suite_summary(report) -> List[str]:
    """Summary lines for a SuiteReport: a heading, then one line per check."""
    lines = [f"<b>{html_escape(report.suite)}</b> {status_markup(report.passed)}"]
    lines.extend(check_line(check.name, check.passed) for check in report.checks)
    return lines


__all__ = [
    "PASS",
    "FAIL",
    "detect_format_type",
    "auto_format",
    "print_auto_formatted",
    "create_auto_printer",
    "status_markup",
    "check_line",
    "error_line",
    "suite_summary",
    "print_formatted_text",
]
