"""Command-line entry point, experiment config, and result storage."""

from .store import (ExperimentConfig, ResultRecord, append_jsonl, load_jsonl,
                    payload_fingerprint, read_config_file, to_jsonable,
                    write_csv, RECORD_FIELDS, VOLATILE_KEYS)
from .cli import main

__all__ = [
    "ExperimentConfig",
    "RECORD_FIELDS",
    "ResultRecord",
    "VOLATILE_KEYS",
    "append_jsonl",
    "load_jsonl",
    "main",
    "payload_fingerprint",
    "read_config_file",
    "to_jsonable",
    "write_csv",
]
