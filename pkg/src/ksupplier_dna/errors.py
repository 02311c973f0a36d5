"""Exception hierarchy shared by the simulator, the model and the CLI."""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for everything raised by this package."""

    exit_code = 1


class TubeConsumed(SimulationError):
    """A tube was used after an operation consumed or discarded it."""

    exit_code = 30


class DuplexPresent(SimulationError):
    exit_code = 31


class OperationError(SimulationError):
    """An operation was called with arguments outside its precondition."""

    exit_code = 32


class StrandExplosion(SimulationError):
    exit_code = 20


class NonTerminating(SimulationError):
    exit_code = 21


class NoSolution(SimulationError):
    exit_code = 22


class MalformedStrand(SimulationError):
    exit_code = 23


class SizeGuard(SimulationError):
    exit_code = 24


class InsufficientData(SimulationError):
    exit_code = 25


class InstanceParseError(SimulationError):
    exit_code = 3


# per-issue exit codes for instance validation
ISSUE_EXIT_CODES = {
    "NonIntegerWeight": 10,
    "Disconnected": 11,
    "OverlappingCF": 12,
    "BadK": 13,
    "DuplicateEdge": 14,
    "InvalidEdge": 15,
    "BadVertexSet": 16,
    "EdgeBound": 17,
}


class InstanceError(SimulationError):
    """Instance validation failed; ``issues`` lists every problem found."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(f"{i.code}: {i.message}" for i in self.issues))

    @property
    def exit_code(self):
        return ISSUE_EXIT_CODES.get(self.issues[0].code, 19) if self.issues else 19

    @property
    def codes(self):
        return [i.code for i in self.issues]


class Disconnected(InstanceError):
    pass
