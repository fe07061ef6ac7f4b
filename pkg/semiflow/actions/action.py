"""
Core action definition and context for the command system.

An Action binds a command name to a handler; an ActionContext carries the
parsed arguments, the experiment configuration and the output streams into
the handler.
"""

import logging
import sys
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, List, Optional, TextIO, Union

from ..config import ExperimentConfig

logger = logging.getLogger(__name__)

if TYPE_CHECKING:
    from .registry import ActionRegistry


@dataclass
class Action:
    """
    Command definition.

    Example:
        verify_action = Action(
            name="verify",
            description="Run a verification suite",
            category="Experiments",
            handler=cmd_verify,
            command="verify",
            command_usage="verify SUITE [options] - Run an acceptance suite",
        )
    """

    name: str  # Unique action identifier
    description: str
    category: str  # Grouping for help listings
    handler: Optional[Union[Callable, str]]  # Callable, import path, or None for built-ins

    command: Optional[str] = None
    command_usage: Optional[str] = None

    enabled: bool = True
    hidden: bool = False

    def __post_init__(self):
        """Validate action definition after initialization."""
        logger.debug("Action.__post_init__() entry")

        if not self.name:
            raise ValueError("Action name cannot be empty")
        if not self.description:
            raise ValueError("Action description cannot be empty")
        if not self.category:
            raise ValueError("Action category cannot be empty")
        if self.handler == "":
            raise ValueError("Action handler cannot be empty string")
        if not self.command:
            raise ValueError("Action must have a command binding")
        if self.command.startswith("-") or any(c.isspace() for c in self.command):
            raise ValueError(
                f"Command '{self.command}' must be a single word not starting with '-'"
            )
        if not self.command_usage:
            logger.warning(f"Action '{self.name}' has command but no usage description")

        logger.debug("Action.__post_init__() exit")

    @property
    def has_command(self) -> bool:
        return self.command is not None


@dataclass
class ActionContext:
    """
    Context information passed to action handlers.

    Streams left as None resolve to ``sys.stdin`` / ``sys.stdout`` when used, so
    handlers follow whatever the process streams are at call time.
    """

    registry: "ActionRegistry"
    args: List[str] = field(default_factory=list)
    triggered_by: str = "unknown"  # "command", "batch" or "programmatic"
    user_input: Optional[str] = None
    printer: Callable[..., None] = print  # Human-readable messages
    config: ExperimentConfig = field(default_factory=ExperimentConfig)
    stdin: Optional[TextIO] = None
    stdout: Optional[TextIO] = None

    def __post_init__(self):
        logger.debug("ActionContext.__post_init__() entry")
        if self.triggered_by == "unknown":
            self.triggered_by = "command" if (self.args or self.user_input) else "programmatic"
        logger.debug("ActionContext.__post_init__() exit")

    @property
    def input_stream(self) -> TextIO:
        return self.stdin if self.stdin is not None else sys.stdin

    @property
    def output_stream(self) -> TextIO:
        return self.stdout if self.stdout is not None else sys.stdout


class ActionError(Exception):
    """Base exception for action-related errors."""

    def __init__(self, message: str, action_name: Optional[str] = None):
        """
        Initialize action error.

        Args:
            message: Error description
            action_name: Name of action that caused error (optional)
        """
        logger.debug("ActionError.__init__() entry/exit")
        super().__init__(message)
        self.action_name = action_name


class ActionValidationError(ActionError):
    """Exception raised when action registration fails."""


class ActionExecutionError(ActionError):
    """Exception raised when a handler returns something other than an exit code."""
