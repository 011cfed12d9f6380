"""JSONL I/O with a reproducibility header on every output file."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Optional


def config_hash(params: dict) -> str:
    canon = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def make_header(tool: str, params: dict, seed: Optional[int] = None) -> dict:
    header = {"tool": tool, "config_hash": config_hash(params)}
    if seed is not None:
        header["seed"] = seed
    return header


def write_jsonl(path: str | Path, records: Iterable[dict], header: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header is not None:
            fh.write(json.dumps({"header": header}, sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")


def read_jsonl(path: str | Path) -> tuple[Optional[dict], list[dict]]:
    header = None
    records: list[dict] = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if i == 0 and set(obj) == {"header"}:
                header = obj["header"]
            else:
                records.append(obj)
    return header, records
