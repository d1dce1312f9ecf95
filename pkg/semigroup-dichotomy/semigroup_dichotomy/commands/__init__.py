from .base import BaseCommand, CommandError, CommandFailure, CommandResult
from .collection import CommandCollection
from .inequalities import KrivineCommand, MinkowskiCommand
from .operators import BmCommand, CounterexampleCommand, DsumCommand, ShiftCommand
from .semigroups import ConvolutionCommand, GrowthCommand, HyperbolicityCommand, LaplaceCommand

__all__ = [
    "BaseCommand",
    "BmCommand",
    "CommandCollection",
    "CommandError",
    "CommandFailure",
    "CommandResult",
    "ConvolutionCommand",
    "CounterexampleCommand",
    "DsumCommand",
    "GrowthCommand",
    "HyperbolicityCommand",
    "KrivineCommand",
    "LaplaceCommand",
    "MinkowskiCommand",
    "ShiftCommand",
]
