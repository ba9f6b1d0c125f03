"""
Exception hierarchy for cascade-lab.

Every error carries the exit code of its family so the command line
can map failures without inspecting messages:
- 2: configuration errors (bad config file, invalid parameters)
- 3: data errors (unparseable or empty edge lists, broken graphs)
- 4: runtime errors (bad inputs to an operation, exhausted budgets)
"""

from typing import List, Optional


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


class CascadeLabError(Exception):
    """Base class for all cascade-lab errors."""
    exit_code: int = EXIT_RUNTIME

    def __init__(self, message: str, issues: Optional[List[str]] = None):
        super().__init__(message)
        self.message = message
        self.issues = list(issues or [])

    def to_dict(self) -> dict:
        """Machine-readable form printed by the CLI."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "issues": self.issues,
            "exit_code": self.exit_code,
        }


# Configuration family

class ConfigError(CascadeLabError):
    """Config file failed validation; `issues` lists every violation."""
    exit_code = EXIT_CONFIG


class ParameterError(CascadeLabError, ValueError):
    """A generator, cascade or strategy parameter is out of range."""
    exit_code = EXIT_CONFIG


# Data family

class ParseError(CascadeLabError):
    """Malformed line in an edge-list file."""
    exit_code = EXIT_DATA

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyGraphError(CascadeLabError):
    exit_code = EXIT_DATA


class GraphError(CascadeLabError, ValueError):
    """Graph invariants violated at construction."""
    exit_code = EXIT_DATA


class LedgerError(CascadeLabError, ValueError):
    """An existing run ledger whose hash chain does not verify."""
    exit_code = EXIT_DATA


# Runtime family

class InputError(CascadeLabError, ValueError):
    """Invalid operation input (seeds, k, grid)."""
    exit_code = EXIT_RUNTIME


class GenerationError(CascadeLabError):
    exit_code = EXIT_RUNTIME


class BudgetError(CascadeLabError):
    """Exact enumeration requested beyond its edge budget."""
    exit_code = EXIT_RUNTIME


class FitError(CascadeLabError):
    exit_code = EXIT_RUNTIME


class DegenerateCostError(CascadeLabError, ValueError):
    """Utility condition evaluated with T <= 1."""
    exit_code = EXIT_RUNTIME


class UndefinedTransitionError(CascadeLabError, ValueError):
    """<k^2> <= <k>: the critical-point formula has no transition in range."""
    exit_code = EXIT_RUNTIME
