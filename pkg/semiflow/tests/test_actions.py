"""
Tests for the action system: Action, ActionContext and ActionRegistry.
"""

import io
import logging
import sys
from unittest.mock import Mock

import pytest

from semiflow.actions import (
    Action,
    ActionContext,
    ActionError,
    ActionRegistry,
    ActionValidationError,
)
from semiflow.config import ExperimentConfig
from semiflow.errors import DomainViolation, SuiteFailure, UnknownGeneratorError, UsageError
from semiflow.ptypes import ActionHandler


def make_action(handler, name="probe", command="probe", **kwargs):
    return Action(
        name=name,
        description="Probe action",
        category="Test",
        handler=handler,
        command=command,
        command_usage=f"{command} [args]",
        **kwargs,
    )


class TestAction:
    """Action definition and validation."""

    def test_creation(self):
        action = make_action(lambda context: 0)
        assert action.has_command
        assert action.enabled is True
        assert action.hidden is False

    @pytest.mark.parametrize(
        "field,value,message",
        [
            ("name", "", "name cannot be empty"),
            ("description", "", "description cannot be empty"),
            ("category", "", "category cannot be empty"),
            ("handler", "", "handler cannot be empty"),
            ("command", None, "must have a command"),
            ("command", "two words", "single word"),
            ("command", "-x", "single word"),
        ],
    )
    def test_validation(self, field, value, message):
        kwargs = {
            "name": "probe",
            "description": "Probe",
            "category": "Test",
            "handler": None,
            "command": "probe",
            "command_usage": "probe",
        }
        kwargs[field] = value
        with pytest.raises(ValueError, match=message):
            Action(**kwargs)

    def test_missing_usage_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="semiflow.actions.action"):
            Action(name="a", description="d", category="c", handler=None, command="a")
        assert "no usage description" in caplog.text


class TestActionContext:
    """Context defaults and stream resolution."""

    def test_triggered_by_detection(self):
        registry = Mock()
        assert ActionContext(registry=registry).triggered_by == "programmatic"
        assert ActionContext(registry=registry, args=["x"]).triggered_by == "command"
        assert ActionContext(registry=registry, triggered_by="batch").triggered_by == "batch"

    def test_streams_resolve_at_use(self, monkeypatch):
        context = ActionContext(registry=Mock())
        fake_in, fake_out = io.StringIO(), io.StringIO()
        monkeypatch.setattr(sys, "stdin", fake_in)
        monkeypatch.setattr(sys, "stdout", fake_out)
        assert context.input_stream is fake_in
        assert context.output_stream is fake_out

    def test_explicit_streams(self, stdout):
        context = ActionContext(registry=Mock(), stdout=stdout)
        assert context.output_stream is stdout

    def test_default_config(self):
        assert ActionContext(registry=Mock()).config == ExperimentConfig()


class TestActionRegistry:
    """Registration, lookup and dispatch."""

    def setup_method(self):
        self.printer = Mock()
        self.registry = ActionRegistry(printer=self.printer)

    def test_builtin_help(self):
        assert self.registry.list_commands() == ["help"]
        assert self.registry.validate_action("show_help")
        assert not self.registry.validate_action("missing")

    def test_protocol_compliance(self):
        assert isinstance(self.registry, ActionHandler)

    def test_register_action_forms(self):
        self.registry.register_action(make_action(lambda context: 0))
        self.registry.register_action(
            name="other",
            description="Other action",
            category="Test",
            handler=None,
            command="other",
            command_usage="other",
        )
        assert self.registry.get_action_by_command("other").name == "other"
        assert set(self.registry.list_actions()) == {"show_help", "probe", "other"}

    def test_register_conflicts(self):
        self.registry.register_action(make_action(None))
        with pytest.raises(ActionValidationError, match="already exists"):
            self.registry.register_action(make_action(None, command="fresh"))
        with pytest.raises(ActionValidationError, match="already bound"):
            self.registry.register_action(make_action(None, name="fresh"))

    def test_categories_skip_hidden(self):
        self.registry.register_action(make_action(None, hidden=True))
        categories = self.registry.get_actions_by_category()
        assert list(categories) == ["General"]

    def test_context_carries_args_and_config(self):
        seen = {}

        def handler(context):
            seen["args"] = context.args
            seen["config"] = context.config
            seen["printer"] = context.printer
            seen["triggered_by"] = context.triggered_by
            return 0

        self.registry.register_action(make_action(handler))
        assert self.registry.handle_command("probe --x 'a b'") == 0
        assert seen["args"] == ["--x", "a b"]
        assert seen["config"] is self.registry.config
        assert seen["printer"] is self.printer
        assert seen["triggered_by"] == "command"

    def test_handler_by_import_path(self, stdout):
        self.registry.register_action(
            make_action("semiflow.actions.commands.cmd_catalog", name="cat", command="cat")
        )
        assert self.registry.handle_command("cat", stdout=stdout) == 0
        assert '"command": "catalog"' in stdout.getvalue()

    def test_bad_import_path(self):
        self.registry.register_action(make_action("semiflow.nowhere.handler"))
        assert self.registry.handle_command("probe") == 1
        self.printer.assert_called()

    def test_none_return_means_success(self):
        self.registry.register_action(make_action(lambda context: None))
        assert self.registry.handle_command("probe") == 0

    def test_non_integer_return_fails(self):
        self.registry.register_action(make_action(lambda context: "done"))
        assert self.registry.handle_command("probe") == 1

    def test_disabled_action_is_a_no_op(self):
        handler = Mock(return_value=5)
        self.registry.register_action(make_action(handler, enabled=False))
        assert self.registry.handle_command("probe") == 0
        handler.assert_not_called()

    def test_execute_missing_action(self):
        with pytest.raises(ActionError, match="not found"):
            self.registry.execute_action("missing", ActionContext(registry=self.registry))

    @pytest.mark.parametrize(
        "error,code",
        [
            (UsageError("bad flag"), 64),
            (DomainViolation("outside", point=2.0), 2),
            (UnknownGeneratorError("unknown generator id 'zz'"), 3),
            (SuiteFailure("suite x failed: a", ["a"]), 1),
            (RuntimeError("boom"), 1),
        ],
    )
    def test_errors_become_exit_codes(self, error, code):
        def handler(context):
            raise error

        self.registry.register_action(make_action(handler))
        assert self.registry.handle_command("probe") == code

    def test_error_message_names_point(self):
        def handler(context):
            raise DomainViolation("outside the disc", point=2.0)

        self.registry.register_action(make_action(handler))
        self.registry.handle_command("probe")
        message = self.printer.call_args.args[0]
        assert "outside the disc at 2.0" in message

    def test_unknown_command(self):
        assert self.registry.handle_command("nope") == 64
        assert "Unknown command: nope" in self.printer.call_args_list[0].args[0]

    def test_unparsable_line(self):
        assert self.registry.handle_command("probe 'unclosed") == 64

    def test_empty_line(self):
        assert self.registry.handle_command("   ") == 0


class TestHelp:
    """The built-in help command."""

    def test_general_help_lists_commands(self, registry, mock_printer):
        assert registry.handle_command("help") == 0
        text = "\n".join(call.args[0] for call in mock_printer.call_args_list)
        for command in ("catalog", "flow", "rate", "harmonic", "verify", "batch"):
            assert command in text

    def test_command_help(self, registry, mock_printer):
        assert registry.handle_command("help flow") == 0
        text = "\n".join(call.args[0] for call in mock_printer.call_args_list)
        assert "Usage: flow --gen ID" in text

    def test_unknown_topic(self, registry, mock_printer):
        assert registry.handle_command("help nope") == 64
        mock_printer.assert_any_call("No help available for: nope")
