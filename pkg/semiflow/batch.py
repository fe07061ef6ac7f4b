"""
Batch mode: run commands read line by line from a stream.
"""

import logging
import sys
from typing import List, Optional, TextIO

from .ptypes import ActionHandler

logger = logging.getLogger(__name__)

EXIT_INTERRUPTED = 1
EXIT_NESTED = 64


class BatchRunner:
    """
    Run newline-separated command lines through an action handler.

    Blank lines and lines starting with ``#`` are skipped. Every command runs,
    even after a failure; the result is the first non-zero exit code seen.
    """

    def __init__(self, action_registry: ActionHandler):
        logger.debug("BatchRunner.__init__() entry")
        self.action_registry = action_registry
        self.codes: List[int] = []
        self.interrupted = False
        logger.debug("BatchRunner.__init__() exit")

    @property
    def exit_code(self) -> int:
        return next((code for code in self.codes if code != 0), 0)

    def run(self, stream: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
        """
        Process every line of ``stream`` (default: sys.stdin).

        KeyboardInterrupt stops the loop and is converted to a non-zero code.

        Returns:
            First non-zero exit code, or 0 when every command succeeded
        """
        logger.debug("BatchRunner.run() entry")
        try:
            self._stdin_loop(stream if stream is not None else sys.stdin, stdout)
        except KeyboardInterrupt:
            logger.info("Batch interrupted by user (Ctrl+C)")
            self.interrupted = True
            self.codes.append(EXIT_INTERRUPTED)
        logger.debug(f"BatchRunner.run() exit - {len(self.codes)} commands, code {self.exit_code}")
        return self.exit_code

    def _stdin_loop(self, stream: TextIO, stdout: Optional[TextIO]) -> None:
        line_num = 0
        while True:
            line = stream.readline()
            if not line:  # EOF
                break
            line_num += 1
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.split()[0] == "batch":
                logger.error(f"Line {line_num}: nested batch is not allowed")
                self.codes.append(EXIT_NESTED)
                continue
            self.codes.append(self._execute_command(line, line_num, stdout))

    def _execute_command(self, command: str, line_num: int, stdout: Optional[TextIO]) -> int:
        logger.info(f"Line {line_num}: {command}")
        code = self.action_registry.handle_command(command, triggered_by="batch", stdout=stdout)
        if code != 0:
            logger.warning(f"Line {line_num} exited with code {code}")
        return code


def run_batch(action_registry: ActionHandler, stream: Optional[TextIO] = None) -> int:
    """Run a batch from ``stream`` (default: sys.stdin) and return its exit code."""
    return BatchRunner(action_registry).run(stream)


__all__ = ["BatchRunner", "run_batch"]
