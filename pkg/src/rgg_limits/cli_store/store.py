"""Experiment configuration and append-only result storage.

An :class:`ExperimentConfig` is a flat key-value document: one command
name, one level of scalar parameters, plus the master seed, output
directory, and worker count.  Every output record embeds the full config
verbatim, so any result is reproducible from the record alone.

A :class:`ResultRecord` is immutable and append-only: one JSON object per
line in a ``.jsonl`` file, never rewritten.  The experiment id is a hash
of the config's semantic fields (command, parameters, seed).  The output
directory, worker count, and echo format are execution placement: results
are identical for any worker count, so placement does not change the id.

``payload_fingerprint`` canonicalizes a record's payload with the volatile
keys (timestamps, elapsed times, worker-split counts) removed; re-running
an identical config must reproduce the fingerprint exactly.

CSV summaries use a fixed, documented column order; JSONL records hold
the full payloads.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import numbers
import os
from datetime import datetime, timezone

import numpy as np

__all__ = ["ExperimentConfig", "ResultRecord", "to_jsonable",
           "payload_fingerprint", "append_jsonl", "load_jsonl", "write_csv",
           "read_config_file", "RECORD_FIELDS", "VOLATILE_KEYS"]

log = logging.getLogger("rgg_limits.store")

RECORD_FIELDS = ("experiment", "timestamp", "config", "payload", "version")

# keys that legitimately differ between runs of the same experiment
VOLATILE_KEYS = frozenset({"timestamp", "elapsed", "elapsed_ms",
                           "merged_chunks"})


def to_jsonable(obj):
    """Recursively convert to plain JSON types (deterministic)."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if hasattr(obj, "to_json_dict"):
        return to_jsonable(obj.to_json_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    return str(obj)


def _is_scalar(v) -> bool:
    return v is None or isinstance(v, (bool, str, numbers.Number))


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a command plus flat parameters.

    ``params`` values must be scalars or flat lists of scalars — no
    nesting beyond one level.
    """

    command: str
    params: dict
    seed: int = 0
    out: str = "results"
    workers: int = 0

    def __post_init__(self):
        if not self.command or not isinstance(self.command, str):
            raise ValueError("command must be a non-empty string")
        clean = {}
        for k, v in dict(self.params).items():
            if not isinstance(k, str):
                raise ValueError(f"parameter names must be strings: {k!r}")
            if isinstance(v, (list, tuple)):
                v = [to_jsonable(x) for x in v]
                if not all(_is_scalar(x) for x in v):
                    raise ValueError(f"parameter {k!r} nests beyond one level")
            elif _is_scalar(v):
                v = to_jsonable(v)
            else:
                raise ValueError(f"parameter {k!r} has non-scalar value {v!r}")
            clean[k] = v
        object.__setattr__(self, "params", clean)
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "workers", int(self.workers))

    def to_dict(self) -> dict:
        return {"command": self.command,
                "params": {k: self.params[k] for k in sorted(self.params)},
                "seed": self.seed, "out": self.out, "workers": self.workers}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(command=d["command"], params=dict(d.get("params", {})),
                   seed=d.get("seed", 0), out=d.get("out", "results"),
                   workers=d.get("workers", 0))

    def identity(self) -> str:
        """Hash of what is computed: command, parameters, and seed."""
        doc = {"command": self.command,
               "params": {k: self.params[k] for k in sorted(self.params)},
               "seed": self.seed}
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


@dataclasses.dataclass(frozen=True)
class ResultRecord:
    """Append-only result: config echo plus a JSON payload."""

    experiment: str
    timestamp: str
    config: dict
    payload: dict
    version: str

    @classmethod
    def create(cls, config: ExperimentConfig, payload,
               version: str) -> "ResultRecord":
        return cls(experiment=config.identity(),
                   timestamp=datetime.now(timezone.utc).isoformat(
                       timespec="seconds"),
                   config=config.to_dict(),
                   payload=to_jsonable(payload),
                   version=version)

    def to_json_dict(self) -> dict:
        return {f: getattr(self, f) for f in RECORD_FIELDS}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ResultRecord":
        missing = [f for f in RECORD_FIELDS if f not in d]
        if missing:
            raise ValueError(f"record is missing fields {missing}")
        return cls(**{f: d[f] for f in RECORD_FIELDS})


def _strip_volatile(obj):
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in obj.items()
                if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def payload_fingerprint(record: ResultRecord) -> str:
    """Canonical serialization of the payload minus volatile keys."""
    return json.dumps(_strip_volatile(record.payload), sort_keys=True,
                      separators=(",", ":"))


def append_jsonl(path, records) -> int:
    """Append records one JSON object per line; returns the count written.

    A single writer owns each output file; records are never rewritten.
    """
    records = list(records)
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json_dict(), sort_keys=True) + "\n")
    return len(records)


def load_jsonl(path):
    """Parse records back; returns (records, skipped_count).

    Malformed lines are skipped with a logged warning, never fatal.
    """
    out, skipped = [], 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(ResultRecord.from_json_dict(json.loads(line)))
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                skipped += 1
                log.warning("skipping malformed record %s:%d (%s)",
                            path, lineno, exc)
    return out, skipped


def write_csv(path, rows, columns) -> int:
    """Write dict rows under a fixed column order; missing cells empty."""
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    with open(path, "a", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), restval="",
                           extrasaction="ignore", lineterminator="\n")
        if not exists:
            w.writeheader()
        w.writerows(rows)
    return len(rows)


def read_config_file(path) -> dict:
    """Parse a flat INI config into a click-style default map.

    ``[global]`` keys become top-level defaults; every other section maps
    to the subcommand of the same name.  Only scalar options are
    supported (one level, per the flat-config contract).  Raises
    ValueError on an empty or unreadable file.
    """
    import configparser
    cp = configparser.ConfigParser()
    read = cp.read(os.fspath(path))
    if not read or not cp.sections():
        raise ValueError(f"config file {path!r} is empty or has no sections")
    out: dict = {}
    for section in cp.sections():
        kv = {k.replace("-", "_"): v for k, v in cp.items(section)}
        if section == "global":
            out.update(kv)
        else:
            out[section] = kv
    return out
