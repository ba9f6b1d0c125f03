#!/usr/bin/env python3
"""
Tests for the run ledger.

Tests:
1. Hash chain over appended entries
2. Tamper detection
3. Continuing an existing ledger
"""

import json
import os
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from cascade_lab.audit import NullLedger, RunAction, RunLedger, verify_ledger_file
from cascade_lab.errors import LedgerError


def _fill(ledger: RunLedger) -> None:
    ledger.log(action=RunAction.RUN_STARTED, component="sweep", payload_in={"k": 3, "rng_seed": 7})
    ledger.log(action=RunAction.SWEEP_POINT, component="sweep", payload_out={"p": 0.3, "median": 41})
    ledger.log(action=RunAction.RUN_COMPLETED, component="sweep", duration_ms=12)


def test_hash_chain():
    print("\n" + "=" * 60)
    print("TEST: Ledger hash chain")
    print("=" * 60)

    with tempfile.TemporaryDirectory() as tmpdir:
        log_path = os.path.join(tmpdir, "run_ledger.jsonl")
        ledger = RunLedger(log_path, session_id="chain_test")
        _fill(ledger)

        entries = ledger.get_entries()
        print(f"  Entry 1 hash: {entries[0].entry_hash[:16]}...")
        print(f"  Entry 2 prev: {entries[1].previous_hash[:16]}...")
        assert [e.sequence_num for e in entries] == [1, 2, 3]
        assert entries[0].previous_hash == ""
        assert entries[1].previous_hash == entries[0].entry_hash
        assert json.loads(entries[0].payload_in) == {"k": 3, "rng_seed": 7}

        ok, errors = ledger.verify_chain()
        assert ok, errors

        summary = ledger.generate_summary()
        print(f"  Summary: {summary['total_entries']} entries, {summary['action_counts']}")
        assert summary["total_entries"] == 3
        assert summary["action_counts"]["sweep_point"] == 1
        assert summary["total_duration_ms"] == 12
        assert len(ledger.get_entries(action=RunAction.SWEEP_POINT)) == 1
        assert ledger.get_entries(component="width") == []

    print("\n  [PASS] Hash chain links every entry")


def test_tamper_detection():
    print("\n" + "=" * 60)
    print("TEST: Tamper detection")
    print("=" * 60)

    with tempfile.TemporaryDirectory() as tmpdir:
        log_path = os.path.join(tmpdir, "run_ledger.jsonl")
        _fill(RunLedger(log_path, session_id="tamper_test"))

        lines = Path(log_path).read_text(encoding="utf-8").splitlines()
        edited = json.loads(lines[1])
        edited["payload_out"] = json.dumps({"p": 0.3, "median": 99})
        lines[1] = json.dumps(edited)
        Path(log_path).write_text("\n".join(lines) + "\n", encoding="utf-8")

        ok, errors = verify_ledger_file(log_path)
        print(f"  Chain valid: {ok}, errors: {len(errors)}")
        assert not ok
        assert any("altered" in e for e in errors)

        with pytest.raises(LedgerError) as info:
            RunLedger(log_path)
        assert info.value.issues

        # dropping an entry breaks the sequence and the linkage
        Path(log_path).write_text("\n".join([lines[0], lines[2]]) + "\n", encoding="utf-8")
        ok, errors = verify_ledger_file(log_path)
        assert not ok
        assert any("Sequence gap" in e for e in errors)

    print("\n  [PASS] Edits and deletions are detected")


def test_continue_ledger():
    print("\n" + "=" * 60)
    print("TEST: Continuing a ledger")
    print("=" * 60)

    with tempfile.TemporaryDirectory() as tmpdir:
        log_path = os.path.join(tmpdir, "run_ledger.jsonl")
        first = RunLedger(log_path, session_id="first")
        _fill(first)

        second = RunLedger(log_path, session_id="second")
        entry = second.log(action=RunAction.WARNING, component="ingest", note="dropped 2 self-loops")
        assert entry.sequence_num == 4
        assert entry.previous_hash == first.get_entries()[2].entry_hash

        ok, errors = verify_ledger_file(log_path)
        assert ok, errors
        assert second.generate_summary()["total_entries"] == 1
        assert second.generate_summary("first")["total_entries"] == 3

    assert NullLedger().log(RunAction.WARNING, "anything", note="ignored") is None

    print("\n  [PASS] Sessions share one chain")


def main():
    """Run all tests."""
    print("\nRun Ledger Tests")
    print("=" * 60)

    test_hash_chain()
    test_tamper_detection()
    test_continue_ledger()

    print("\n" + "=" * 60)
    print("All tests completed!")
    print("=" * 60)


if __name__ == "__main__":
    main()
