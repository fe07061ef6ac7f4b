"""
Command system for semiflow.

Commands are Actions registered in an ActionRegistry; every handler receives
an ActionContext and returns a process exit code.
"""

from .action import Action, ActionContext, ActionError, ActionExecutionError, ActionValidationError
from .commands import CommandParser, command_actions, create_registry, register_commands
from .registry import ActionRegistry

__all__ = [
    # Core action types
    "Action",
    "ActionContext",
    "ActionError",
    "ActionValidationError",
    "ActionExecutionError",
    # Registry
    "ActionRegistry",
    # Commands
    "CommandParser",
    "command_actions",
    "register_commands",
    "create_registry",
]
