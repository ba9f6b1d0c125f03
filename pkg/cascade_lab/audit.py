"""
Run ledger for reproducible experiments.

Every CLI run appends to a JSON Lines ledger in its output directory:
- each entry records what ran, with which inputs and what it produced
- each entry carries the SHA-256 of the previous entry (hash chain), so
  a result file can be traced back to an untouched record of its run
- `verify_chain()` detects edited, dropped or reordered entries
"""

import hashlib
import json
import os
from dataclasses import dataclass, asdict
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Iterator, List, Optional

from .errors import LedgerError


class RunAction(Enum):
    """Kinds of ledger entries."""
    RUN_STARTED = "run_started"
    RUN_COMPLETED = "run_completed"
    RUN_FAILED = "run_failed"
    NETWORK_READY = "network_ready"
    STRATEGY_INVOKED = "strategy_invoked"
    STRATEGY_RESULT = "strategy_result"
    SWEEP_POINT = "sweep_point"
    OUTPUT_WRITTEN = "output_written"
    WARNING = "warning"


@dataclass(frozen=True)
class LedgerEntry:
    """
    Immutable ledger entry.

    `entry_hash` covers every other field, `previous_hash` links to the
    entry before it (empty for the first entry of a ledger).
    """
    timestamp: str  # ISO 8601, UTC
    action: str  # RunAction value
    component: str  # experiment or strategy that produced the entry
    session_id: str

    payload_in: Optional[str] = None
    payload_out: Optional[str] = None
    note: Optional[str] = None

    sequence_num: int = 0
    previous_hash: str = ""
    entry_hash: str = ""

    duration_ms: Optional[int] = None
    success: bool = True
    error_message: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "LedgerEntry":
        return cls(**data)


def compute_entry_hash(entry: LedgerEntry) -> str:
    """SHA-256 over the canonical JSON of every field except `entry_hash`."""
    data = entry.to_dict()
    data.pop("entry_hash", None)
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _serialize(value: Any) -> Optional[str]:
    if value is None or isinstance(value, str):
        return value
    return json.dumps(value, default=str, sort_keys=True)


class RunLedger:
    """
    Append-only, hash-chained run ledger.

    Usage:
        ledger = RunLedger("results/run_ledger.jsonl")
        ledger.log(
            action=RunAction.SWEEP_POINT,
            component="sweep",
            payload_out={"p": 0.33, "strategy": "hill_climb", "median": 412},
        )
        ok, errors = ledger.verify_chain()
    """

    def __init__(
        self,
        log_path: str,
        session_id: Optional[str] = None,
        auto_verify: bool = True
    ):
        """
        Open (or create) a ledger.

        Args:
            log_path: Path to the JSON Lines file
            session_id: Groups the entries of one run (generated if omitted)
            auto_verify: Refuse to continue a ledger whose chain is broken
        """
        self.log_path = Path(log_path)
        self.session_id = session_id or self._generate_session_id()
        self._sequence_num = 0
        self._last_hash = ""

        self.log_path.parent.mkdir(parents=True, exist_ok=True)

        if self.log_path.exists():
            self._load_chain_state()
            if auto_verify:
                ok, errors = self.verify_chain()
                if not ok:
                    raise LedgerError(f"run ledger {self.log_path} failed its integrity check", errors)

    def _generate_session_id(self) -> str:
        timestamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S")
        suffix = hashlib.sha256(os.urandom(32)).hexdigest()[:8]
        return f"run_{timestamp}_{suffix}"

    def _load_chain_state(self) -> None:
        last = None
        for entry in self._read_entries():
            last = entry
        if last:
            self._sequence_num = last.sequence_num
            self._last_hash = last.entry_hash

    def _read_entries(self) -> Iterator[LedgerEntry]:
        if not self.log_path.exists():
            return
        with open(self.log_path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    yield LedgerEntry.from_dict(json.loads(line))

    def log(
        self,
        action: RunAction,
        component: str,
        payload_in: Optional[Any] = None,
        payload_out: Optional[Any] = None,
        note: Optional[str] = None,
        duration_ms: Optional[int] = None,
        success: bool = True,
        error_message: Optional[str] = None
    ) -> LedgerEntry:
        """
        Append one entry.

        Args:
            action: Kind of entry
            component: Experiment or strategy producing it
            payload_in: Inputs (JSON-serialized if not a string)
            payload_out: Outputs (JSON-serialized if not a string)
            note: Free-form remark
            duration_ms: Elapsed time
            success: Whether the step succeeded
            error_message: Failure details

        Returns:
            The stored entry, hash included
        """
        self._sequence_num += 1

        unsigned = LedgerEntry(
            timestamp=datetime.now(timezone.utc).isoformat(),
            action=action.value,
            component=component,
            session_id=self.session_id,
            payload_in=_serialize(payload_in),
            payload_out=_serialize(payload_out),
            note=note,
            sequence_num=self._sequence_num,
            previous_hash=self._last_hash,
            duration_ms=duration_ms,
            success=success,
            error_message=error_message
        )
        data = unsigned.to_dict()
        data["entry_hash"] = compute_entry_hash(unsigned)
        entry = LedgerEntry.from_dict(data)

        with open(self.log_path, "a", encoding="utf-8") as f:
            f.write(json.dumps(entry.to_dict()) + "\n")

        self._last_hash = entry.entry_hash
        return entry

    def verify_chain(self) -> tuple[bool, List[str]]:
        """
        Check sequence continuity, hash linkage and per-entry hashes.

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        errors = []
        previous_hash = ""
        expected = 0

        for entry in self._read_entries():
            expected += 1
            if entry.sequence_num != expected:
                errors.append(f"Sequence gap at {entry.sequence_num}, expected {expected}")
            if entry.previous_hash != previous_hash:
                errors.append(
                    f"Hash chain broken at sequence {entry.sequence_num}: "
                    f"expected previous_hash '{previous_hash[:16]}...', "
                    f"got '{entry.previous_hash[:16]}...'"
                )
            computed = compute_entry_hash(entry)
            if computed != entry.entry_hash:
                errors.append(
                    f"Entry altered at sequence {entry.sequence_num}: "
                    f"computed '{computed[:16]}...', stored '{entry.entry_hash[:16]}...'"
                )
            previous_hash = entry.entry_hash

        return (len(errors) == 0, errors)

    def get_entries(
        self,
        session_id: Optional[str] = None,
        component: Optional[str] = None,
        action: Optional[RunAction] = None
    ) -> List[LedgerEntry]:
        """Entries matching every given filter."""
        results = []
        for entry in self._read_entries():
            if session_id and entry.session_id != session_id:
                continue
            if component and entry.component != component:
                continue
            if action and entry.action != action.value:
                continue
            results.append(entry)
        return results

    def generate_summary(self, session_id: Optional[str] = None) -> dict:
        """Counts per action and component for one session (default: current)."""
        session_id = session_id or self.session_id
        entries = self.get_entries(session_id=session_id)
        if not entries:
            return {"total_entries": 0}

        action_counts: dict = {}
        component_counts: dict = {}
        failed = 0
        total_duration = 0
        for entry in entries:
            action_counts[entry.action] = action_counts.get(entry.action, 0) + 1
            component_counts[entry.component] = component_counts.get(entry.component, 0) + 1
            total_duration += entry.duration_ms or 0
            if not entry.success:
                failed += 1

        return {
            "session_id": session_id,
            "total_entries": len(entries),
            "first_timestamp": entries[0].timestamp,
            "last_timestamp": entries[-1].timestamp,
            "action_counts": action_counts,
            "component_counts": component_counts,
            "total_duration_ms": total_duration,
            "failed_count": failed,
        }


class NullLedger:
    """Drop-in ledger that records nothing (library use without a run directory)."""

    session_id = "none"

    def log(self, action: RunAction, component: str, **kwargs: Any) -> None:
        return None


def verify_ledger_file(log_path: str) -> tuple[bool, List[str]]:
    """Verify a ledger file without continuing it."""
    return RunLedger(log_path, auto_verify=False).verify_chain()
