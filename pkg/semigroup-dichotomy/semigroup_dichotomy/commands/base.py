from abc import ABCMeta, abstractmethod
from dataclasses import dataclass, fields, replace
from typing import Any, Literal, TypedDict

from ..formats import dumps

OutputFormat = Literal["csv", "json"]


class CommandParam(TypedDict):
    name: str
    description: str
    input_schema: dict[str, Any]


class BaseCommand(metaclass=ABCMeta):
    """Abstract base class for CLI subcommands."""

    @abstractmethod
    async def __call__(self, **kwargs) -> "CommandResult":
        """Executes the command with the given arguments."""
        ...

    @abstractmethod
    def to_params(self) -> CommandParam:
        raise NotImplementedError


@dataclass(kw_only=True, frozen=True)
class CommandResult:
    """Represents the result of a command execution."""

    output: str | None = None
    error: str | None = None
    system: str | None = None
    violations: tuple[dict[str, Any], ...] = ()

    def __bool__(self):
        return any(getattr(self, field.name) for field in fields(self))

    def __add__(self, other: "CommandResult"):
        def combine_fields(field: str | None, other_field: str | None):
            if field and other_field:
                return field + other_field
            return field or other_field

        return CommandResult(
            output=combine_fields(self.output, other.output),
            error=combine_fields(self.error, other.error),
            system=combine_fields(self.system, other.system),
            violations=self.violations + other.violations,
        )

    def replace(self, **kwargs):
        """Returns a new CommandResult with the given fields replaced."""
        return replace(self, **kwargs)


class CommandFailure(CommandResult):
    """A CommandResult that represents a failure."""


class CommandError(Exception):
    """Raised when a command is called with unusable input."""

    def __init__(self, message):
        self.message = message


COMMON_PROPERTIES: dict[str, Any] = {
    "seed": {"type": "integer", "minimum": 0},
    "output_format": {"enum": ["csv", "json"]},
    "tol_report": {"type": "boolean"},
}


class ReportCommand(BaseCommand):
    """
    A command whose result is one JSON document, optionally a CSV table.

    Subclasses declare `name`, `description` and the schema `properties` of
    their own inputs; seed, output_format and tol_report are shared.
    """

    name: str
    description: str
    properties: dict[str, Any] = {}
    required: tuple[str, ...] = ()

    def __init__(self, timeout: float | None = None):
        self.timeout = timeout
        super().__init__()

    def to_params(self) -> CommandParam:
        return {
            "name": self.name,
            "description": self.description,
            "input_schema": {
                "type": "object",
                "properties": {**COMMON_PROPERTIES, **self.properties},
                "required": list(self.required),
                "additionalProperties": False,
            },
        }

    def result(
        self,
        document: dict[str, Any],
        *,
        output_format: OutputFormat,
        seed: int | None,
        verdict: str,
        violations: list[dict[str, Any]] | tuple[dict[str, Any], ...] = (),
        csv: str | None = None,
    ) -> CommandResult:
        if output_format == "csv":
            if csv is None:
                raise CommandError(f"command {self.name} has no CSV form; use --format json")
            output = csv
        else:
            output = dumps({"command": self.name, "seed": seed, **document})
        seed_note = f" (seed {seed})" if seed is not None else ""
        return CommandResult(output=output, system=f"{self.name}{seed_note}: {verdict}", violations=tuple(violations))
