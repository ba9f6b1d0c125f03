"""Defaults for the lab.py command line."""

# Output
DEFAULT_OUTPUT_DIR = "results"
LEDGER_FILENAME = "run_ledger.jsonl"

# Logging
LOG_LEVEL = "INFO"
LOG_LEVEL_VERBOSE = "DEBUG"
LOG_LEVEL_QUIET = "WARNING"
LOG_FORMAT = "%(message)s"
LOG_DATE_FORMAT = "[%X]"

# Summary table: nested values longer than this are shortened
SUMMARY_VALUE_WIDTH = 80
