"""
Action registry for managing commands.

The registry registers, organizes and executes actions, and converts every
failure into a process exit code.
"""

import importlib
import logging
import shlex
from typing import Any, Callable, Dict, List, Optional

from ..config import ExperimentConfig
from ..errors import SemiflowError, SuiteFailure, UsageError
from ..formatting import error_line
from ..ptypes import ActionHandler
from .action import Action, ActionContext, ActionError, ActionExecutionError, ActionValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = UsageError.exit_code


class ActionRegistry(ActionHandler):
    """
    Registry of command actions.

    Example:
        registry = ActionRegistry()
        registry.register_action(
            name="catalog",
            description="List generator identifiers",
            category="Generators",
            handler=cmd_catalog,
            command="catalog",
            command_usage="catalog [--out FILE] - List generator identifiers",
        )
        exit_code = registry.handle_command("catalog")
    """

    def __init__(
        self,
        printer: Callable[..., None] = print,
        config: Optional[ExperimentConfig] = None,
    ):
        """
        Initialize the action registry with built-in actions.

        Args:
            printer: Callable for human-readable messages (default: print)
            config: Base experiment configuration handed to every handler
        """
        logger.debug("ActionRegistry.__init__() entry")
        self.actions: Dict[str, Action] = {}
        self.command_map: Dict[str, str] = {}  # command -> action_name
        self.handler_cache: Dict[str, Callable] = {}
        self.printer = printer
        self.config = config or ExperimentConfig()
        self._register_builtin_actions()
        logger.debug("ActionRegistry.__init__() exit")

    def _register_builtin_actions(self) -> None:
        logger.debug("ActionRegistry._register_builtin_actions() entry")
        self.register_action(
            Action(
                name="show_help",
                description="Show help for all commands or a specific one",
                category="General",
                handler=self._show_help,
                command="help",
                command_usage="help [command] - Show help for all commands or a specific one",
            )
        )
        logger.debug("ActionRegistry._register_builtin_actions() exit")

    def register_action(self, *args, **kwargs) -> None:
        """
        Register an action, given as an Action or as Action keyword arguments.

        Raises:
            ActionValidationError: If the name or command is already taken
        """
        logger.debug("ActionRegistry.register_action() entry")

        if args and isinstance(args[0], Action):
            action = args[0]
            for k, v in kwargs.items():
                setattr(action, k, v)
        else:
            action = Action(**kwargs)

        if action.name in self.actions:
            raise ActionValidationError(f"Action '{action.name}' already exists", action.name)
        if action.command in self.command_map:
            existing_action = self.command_map[action.command]
            raise ActionValidationError(
                f"Command '{action.command}' already bound to action '{existing_action}'",
                action.name,
            )

        self.actions[action.name] = action
        self.command_map[action.command] = action.name
        logger.debug(f"Registered action '{action.name}' with command='{action.command}'")
        logger.debug("ActionRegistry.register_action() exit")

    def get_action(self, name: str) -> Optional[Action]:
        return self.actions.get(name)

    def get_action_by_command(self, command: str) -> Optional[Action]:
        action_name = self.command_map.get(command)
        return self.actions.get(action_name) if action_name else None

    def _resolve_handler(self, action: Action) -> Optional[Callable]:
        """
        Resolve action handler to a callable function.

        Raises:
            ActionValidationError: If an import path does not resolve
        """
        logger.debug("ActionRegistry._resolve_handler() entry")

        if action.handler is None:
            logger.debug("ActionRegistry._resolve_handler() exit - None handler")
            return None

        cache_key = f"{action.name}:{action.handler}"
        if cache_key in self.handler_cache:
            logger.debug("ActionRegistry._resolve_handler() exit - cached")
            return self.handler_cache[cache_key]

        if callable(action.handler):
            self.handler_cache[cache_key] = action.handler
            logger.debug("ActionRegistry._resolve_handler() exit - callable")
            return action.handler

        if isinstance(action.handler, str):
            try:
                module_path, func_name = action.handler.rsplit(".", 1)
                module = importlib.import_module(module_path)
                handler_func = getattr(module, func_name)
            except (ValueError, ImportError, AttributeError) as e:
                logger.error(
                    f"Failed to import handler '{action.handler}' for action '{action.name}': {e}"
                )
                raise ActionValidationError(
                    f"Cannot resolve handler '{action.handler}'", action.name
                ) from None
            self.handler_cache[cache_key] = handler_func
            logger.debug("ActionRegistry._resolve_handler() exit - imported")
            return handler_func

        raise ActionValidationError(
            f"Invalid handler type for action '{action.name}': {type(action.handler)}", action.name
        )

    def execute_action(self, action_name: str, context: ActionContext) -> int:
        """
        Execute an action by name and return its exit code.

        Handler exceptions propagate; ``handle_command`` maps them to exit codes.

        Raises:
            ActionError: If the action is not found
            ActionExecutionError: If the handler returns a non-integer
        """
        logger.debug("ActionRegistry.execute_action() entry")

        action = self.get_action(action_name)
        if not action:
            raise ActionError(f"Action '{action_name}' not found", action_name)

        if not action.enabled:
            logger.debug("ActionRegistry.execute_action() exit - disabled")
            return EXIT_OK

        handler = self._resolve_handler(action)
        if handler is None:
            logger.debug("ActionRegistry.execute_action() exit - no handler")
            return EXIT_OK

        logger.debug(f"Executing action '{action_name}' via {context.triggered_by}")
        code = handler(context)
        if code is None:
            code = EXIT_OK
        if not isinstance(code, int):
            raise ActionExecutionError(
                f"Handler for '{action_name}' returned {code!r}, not an exit code", action_name
            )
        logger.debug(f"ActionRegistry.execute_action() exit - code {code}")
        return code

    def handle_command(self, command_string: str, **kwargs: Any) -> int:
        """
        Parse a command line and run it, reporting errors through the printer.

        Args:
            command_string: Command name followed by shell-quoted arguments
            **kwargs: Extra ActionContext fields (stdin, stdout, triggered_by, ...)

        Returns:
            Exit code
        """
        logger.debug("ActionRegistry.handle_command() entry")
        try:
            parts = shlex.split(command_string)
        except ValueError as e:
            self.printer(error_line(f"cannot parse command line: {e}"))
            logger.debug("ActionRegistry.handle_command() exit - unparsable")
            return EXIT_USAGE
        if not parts:
            logger.debug("ActionRegistry.handle_command() exit - no parts")
            return EXIT_OK
        return self.dispatch(parts[0], parts[1:], user_input=command_string, **kwargs)

    def dispatch(self, command: str, args: List[str], **kwargs: Any) -> int:
        """Run an already split command; see ``handle_command``."""
        logger.debug(f"ActionRegistry.dispatch() entry - {command}")

        action = self.get_action_by_command(command)
        if not action:
            self.printer(error_line(f"Unknown command: {command}"))
            self.printer("Use 'help' to see available commands.")
            logger.debug("ActionRegistry.dispatch() exit - unknown command")
            return EXIT_USAGE

        options = {"triggered_by": "command", "printer": self.printer, "config": self.config}
        options.update(kwargs)
        context = ActionContext(registry=self, args=list(args), **options)

        try:
            code = self.execute_action(action.name, context)
        except SuiteFailure as e:
            self.printer(error_line(str(e)))
            logger.debug("ActionRegistry.dispatch() exit - suite failure")
            return e.exit_code
        except SemiflowError as e:
            location = f" at {e.point}" if e.point is not None else ""
            self.printer(error_line(f"{e}{location}"))
            logger.debug(f"ActionRegistry.dispatch() exit - {type(e).__name__}")
            return e.exit_code
        except ActionError as e:
            logger.warning(f"Action error in command '{command}': {e}")
            self.printer(error_line(str(e)))
            return EXIT_FAILURE
        except Exception:
            logger.exception(f"Unexpected error handling command '{command}'")
            return EXIT_FAILURE
        logger.debug(f"ActionRegistry.dispatch() exit - code {code}")
        return code

    # ActionHandler protocol implementation
    def validate_action(self, action_name: str) -> bool:
        return action_name in self.actions

    def list_actions(self) -> List[str]:
        return list(self.actions.keys())

    def list_commands(self) -> List[str]:
        return list(self.command_map.keys())

    def get_actions_by_category(self) -> Dict[str, List[Action]]:
        """Get visible actions organized by category."""
        categories: Dict[str, List[Action]] = {}
        for action in self.actions.values():
            if action.hidden:
                continue
            categories.setdefault(action.category, []).append(action)
        return categories

    # Built-in action handlers
    def _show_help(self, context: ActionContext) -> int:
        logger.debug("ActionRegistry._show_help() entry")
        if context.args:
            target = context.args[0]
            action = self.get_action(target) or self.get_action_by_command(target)
            if not action:
                context.printer(f"No help available for: {target}")
                logger.debug("ActionRegistry._show_help() exit - unknown target")
                return EXIT_USAGE
            self._show_action_help(action, context)
        else:
            self._show_general_help(context)
        logger.debug("ActionRegistry._show_help() exit")
        return EXIT_OK

    def _show_action_help(self, action: Action, context: ActionContext) -> None:
        context.printer(f"\n{action.description}")
        context.printer(f"Category: {action.category}")
        context.printer(f"Usage: {action.command_usage or action.command}")
        if not action.enabled:
            context.printer("Status: Disabled")
        context.printer("")

    def _show_general_help(self, context: ActionContext) -> None:
        context.printer("\nAvailable Commands:")
        context.printer("=" * 50)
        for category, actions in sorted(self.get_actions_by_category().items()):
            context.printer(f"\n{category}:")
            for action in sorted(actions, key=lambda a: a.command):
                context.printer(f"  {action.command:<12}{action.description}")
        context.printer("\nUse 'help <command>' for detailed information about a specific command.")
        context.printer("")
