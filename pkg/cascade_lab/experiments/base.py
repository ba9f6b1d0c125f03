"""
Base class for CLI experiments.

Every subcommand is an Experiment. `run()` wraps the subclass's
`execute()` with the run ledger: it records the start (with the resolved
config), every output file, library warnings, and completion or failure,
and always returns an ExperimentResult instead of raising.
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..audit import NullLedger, RunAction, RunLedger
from ..config import ExperimentConfig, NetworkSource
from ..errors import EXIT_OK, EXIT_RUNTIME, CascadeLabError
from ..generators import generate
from ..graph import Graph, dominant_component
from ..ingest import ingest_edge_list
from ..output import write_json
from ..schemas import RunSummary
from ..strategies import StrategyRegistry
from .sweep import network_descriptor

PACKAGE_LOGGER = "cascade_lab"


@dataclass
class ExperimentResult:
    """Outcome of one experiment run, as reported by the CLI."""
    command: str
    success: bool
    outputs: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    duration_ms: int = 0
    session_id: Optional[str] = None

    error_message: Optional[str] = None
    error_type: Optional[str] = None
    exit_code: int = EXIT_OK
    issues: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "success": self.success,
            "outputs": list(self.outputs),
            "summary": self.summary,
            "timestamp": self.timestamp,
            "duration_ms": self.duration_ms,
            "session_id": self.session_id,
            "error_message": self.error_message,
            "error_type": self.error_type,
            "exit_code": self.exit_code,
            "issues": list(self.issues),
        }

    def error_dict(self) -> dict:
        return {
            "error": self.error_type,
            "message": self.error_message,
            "issues": list(self.issues),
            "exit_code": self.exit_code,
        }


class LedgerWarningHandler(logging.Handler):
    """Copies library warnings into the run ledger."""

    def __init__(self, ledger: Union[RunLedger, NullLedger]):
        super().__init__(level=logging.WARNING)
        self.ledger = ledger

    def emit(self, record: logging.LogRecord) -> None:
        try:
            self.ledger.log(action=RunAction.WARNING, component=record.name, note=record.getMessage())
        except Exception:
            self.handleError(record)


class Experiment(ABC):
    """
    One subcommand.

    Subclasses set `command` and implement `execute()`, which writes its
    files through `self.write_summary` / `self.record_output` and returns
    the summary dict.

    Usage:
        result = SweepExperiment(config, ledger).run()
        if not result.success:
            print(result.error_dict())
    """

    command: str = "experiment"
    description: str = "Base experiment"

    def __init__(self, config: ExperimentConfig, ledger: Optional[Union[RunLedger, NullLedger]] = None):
        self.config = config
        self.ledger = ledger or NullLedger()
        self.output_dir = Path(config.output_dir)
        self._outputs: List[str] = []
        self._start_time: Optional[float] = None

    def run(self) -> ExperimentResult:
        """Execute with ledger bookkeeping; never raises."""
        self._start_time = time.time()
        self._outputs = []

        self.ledger.log(
            action=RunAction.RUN_STARTED,
            component=self.command,
            payload_in=self.config.echo(),
            note=self.description,
        )

        handler = LedgerWarningHandler(self.ledger)
        package_logger = logging.getLogger(PACKAGE_LOGGER)
        package_logger.addHandler(handler)
        try:
            summary = self.execute()
            duration_ms = self._elapsed_ms()
            self.ledger.log(
                action=RunAction.RUN_COMPLETED,
                component=self.command,
                payload_out={"outputs": self._outputs},
                duration_ms=duration_ms,
            )
            return ExperimentResult(
                command=self.command,
                success=True,
                outputs=list(self._outputs),
                summary=summary,
                duration_ms=duration_ms,
                session_id=self.ledger.session_id,
            )

        except Exception as e:
            duration_ms = self._elapsed_ms()
            exit_code = e.exit_code if isinstance(e, CascadeLabError) else EXIT_RUNTIME
            issues = list(e.issues) if isinstance(e, CascadeLabError) else []
            self.ledger.log(
                action=RunAction.RUN_FAILED,
                component=self.command,
                payload_out={"error": type(e).__name__, "issues": issues},
                note=f"{self.command} failed with {type(e).__name__}",
                duration_ms=duration_ms,
                success=False,
                error_message=str(e),
            )
            return ExperimentResult(
                command=self.command,
                success=False,
                outputs=list(self._outputs),
                duration_ms=duration_ms,
                session_id=self.ledger.session_id,
                error_message=str(e),
                error_type=type(e).__name__,
                exit_code=exit_code,
                issues=issues,
            )
        finally:
            package_logger.removeHandler(handler)

    @abstractmethod
    def execute(self) -> Dict[str, Any]:
        """Do the work, write outputs, return the summary."""

    def _elapsed_ms(self) -> int:
        return int((time.time() - (self._start_time or time.time())) * 1000)

    # Helpers for subclasses

    def registry(self) -> StrategyRegistry:
        return StrategyRegistry(self.ledger, workers=self.config.workers)

    def record_output(self, path: Path) -> None:
        self._outputs.append(str(path))
        self.ledger.log(action=RunAction.OUTPUT_WRITTEN, component=self.command, payload_out={"path": str(path)})

    def run_summary(self, results: Dict[str, Any]) -> RunSummary:
        return RunSummary(
            command=self.command,
            rng_seed=self.config.rng_seed,
            config=self.config.echo(),
            results=results,
            session_id=self.ledger.session_id,
            duration_ms=self._elapsed_ms(),
        )

    def write_summary(self, name: str, results: Dict[str, Any]) -> Path:
        path = write_json(self.output_dir / name, self.run_summary(results))
        self.record_output(path)
        return path

    def load_network(self) -> Tuple[Graph, Dict[str, Any]]:
        """The configured network (generated, or ingested and optionally cut to its dominant component)."""
        net = self.config.network
        if net.source == NetworkSource.GENERATOR:
            g = generate(net.generator)
            descriptor = network_descriptor(g, "generator", net.generator)
        else:
            ingested = ingest_edge_list(net.edge_list)
            g = ingested.graph
            descriptor = network_descriptor(g, "edge_list")
            descriptor.update(path=net.edge_list, cleaning=ingested.report.to_dict())
            if net.dominant_component:
                g, _ = dominant_component(g)
                descriptor.update(n=g.n, edge_count=g.edge_count, dominant_component=True)

        self.ledger.log(action=RunAction.NETWORK_READY, component=self.command, payload_out=descriptor)
        return g, descriptor
