"""Collection class for dispatching subcommands by name."""

import logging
from typing import Any

import jsonschema

from ..errors import FormatError, NumericsError
from .base import (
    BaseCommand,
    CommandError,
    CommandFailure,
    CommandParam,
    CommandResult,
)

logger = logging.getLogger(__name__)


class CommandCollection:
    """A collection of subcommands."""

    def __init__(self, *commands: BaseCommand):
        self.commands = commands
        self.command_map = {command.to_params()["name"]: command for command in commands}

    def to_params(self) -> list[CommandParam]:
        return [command.to_params() for command in self.commands]

    async def run(self, *, name: str, command_input: dict[str, Any]) -> CommandResult:
        command = self.command_map.get(name)
        if not command:
            return CommandFailure(error=f"Command {name} is invalid")
        try:
            jsonschema.validate(command_input, command.to_params()["input_schema"])
        except jsonschema.ValidationError as e:
            return CommandFailure(error=f"invalid input for {name}: {e.message}")
        try:
            return await command(**command_input)
        except (CommandError, FormatError, NumericsError) as e:
            logger.debug("command %s failed: %s", name, e.message)
            return CommandFailure(error=e.message)
        except TimeoutError as e:
            return CommandFailure(error=str(e))
