"""
Protocol types for semiflow.

Defines the interface contracts that command registries, printers and flow
handles implement.
"""

from typing import TYPE_CHECKING, List, Protocol, runtime_checkable

if TYPE_CHECKING:
    from .actions.action import ActionContext


@runtime_checkable
class Printer(Protocol):
    """Output function for human-readable messages (``print``-compatible)."""

    def __call__(self, text: str, **kwargs) -> None: ...


@runtime_checkable
class FlowHandle(Protocol):
    """Callable ``(z, t) -> Phi_t(z)`` as returned by ``flow.flow_handle``."""

    def __call__(self, z, t: float): ...


@runtime_checkable
class ActionHandler(Protocol):
    """
    Protocol for command dispatchers.

    Every entry point returns a process exit code: 0 on success, otherwise the
    code of the error that stopped the command.
    """

    def execute_action(self, action_name: str, context: "ActionContext") -> int:
        """
        Execute an action by name.

        Args:
            action_name: Name of the action to execute
            context: Action context containing arguments and output streams

        Returns:
            Exit code of the handler

        Raises:
            ActionError: If the action does not exist
        """
        ...

    def handle_command(self, command_string: str, **kwargs) -> int:
        """
        Handle a command line such as ``"flow --gen hp:sqrt --z 1 --t 1"``.

        Args:
            command_string: Command name followed by its arguments
            **kwargs: Additional context fields

        Returns:
            Exit code; errors are reported, never raised
        """
        ...

    def validate_action(self, action_name: str) -> bool:
        """Return True if the action is registered."""
        ...

    def list_actions(self) -> List[str]:
        """Return all registered action names."""
        ...
