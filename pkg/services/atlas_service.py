"""
atlas_service.py - Marking atlas written as JSON Lines shards

One record per coprime pair (n, a), 0 < a < n <= max_n. Shard i holds the
pairs with n % shards == i, sorted by (n, a), so the sorted concatenation of
all shards does not depend on the shard count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
import logging
from math import gcd
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from config import atlas_dir, thread_count
from errors import AtlasWriteError, OutOfRange
from geometry import degree8_fiber_class
from marking import classify_markings, realizable_degrees
from toric import build_fake_wpp
from wahl import WahlPair, wahl_chain

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class AtlasRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    n: int
    a: int
    chain: List[int]
    markings: List[Dict[str, Any]]
    realizable_degrees: List[int]
    fake_wpp: List[Dict[str, Any]]
    degree8: List[Dict[str, Any]] = []


def atlas_record(n: int, a: int) -> AtlasRecord:
    p = WahlPair(n, a)
    markings = classify_markings(p, formal=False)
    return AtlasRecord(
        n=n,
        a=a,
        chain=list(wahl_chain(p)),
        markings=[m.record() for m in markings],
        realizable_degrees=sorted(realizable_degrees(p)),
        fake_wpp=[build_fake_wpp(m).record() for m in markings],
        degree8=[degree8_fiber_class(m).record() for m in markings if m.degree == 8],
    )


def shard_pairs(max_n: int, shards: int, index: int) -> List[WahlPair]:
    return [
        WahlPair(n, a)
        for n in range(2, max_n + 1)
        if n % shards == index
        for a in range(1, n)
        if gcd(n, a) == 1
    ]


def shard_lines(max_n: int, shards: int, index: int) -> List[str]:
    """Serialized records of one shard; runs in a worker process."""
    return [atlas_record(p.n, p.a).model_dump_json() for p in shard_pairs(max_n, shards, index)]


class AtlasStore:
    """Owns the shard files of one atlas run."""

    def __init__(self, out_dir: Optional[Path] = None, shards: int = 1):
        if shards < 1:
            raise OutOfRange("shards must be >= 1")
        self.out_dir = Path(out_dir) if out_dir is not None else atlas_dir()
        self.shards = shards
        self.paths = [self.out_dir / f"atlas-{i:03d}-of-{shards:03d}.jsonl" for i in range(shards)]
        self.written: Dict[int, int] = {}
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise AtlasWriteError(f"{self.out_dir}: {e}")

    def write_shard(self, index: int, lines: List[str]) -> Path:
        path = self.paths[index]
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                for line in lines:
                    f.write(line + "\n")
        except OSError as e:
            raise AtlasWriteError(f"{path}: {e}")
        self.written[index] = len(lines)
        logger.info("atlas shard %s: %d records", path.name, len(lines))
        return path

    def read_records(self) -> List[AtlasRecord]:
        out = []
        for path in self.paths:
            try:
                with open(path, encoding="utf-8") as f:
                    out.extend(AtlasRecord.model_validate_json(line) for line in f if line.strip())
            except OSError as e:
                raise AtlasWriteError(f"{path}: {e}")
        return sorted(out, key=lambda r: (r.n, r.a))

    def close(self) -> None:
        missing = [str(self.paths[i]) for i in range(self.shards) if i not in self.written]
        if missing:
            logger.warning("atlas closed with unwritten shards: %s", missing)

    def __enter__(self) -> "AtlasStore":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def write_atlas(max_n: int, shards: int = 1, out_dir: Optional[Path] = None) -> Dict:
    """Enumerate every coprime pair up to max_n and write the shards."""
    if max_n < 2:
        raise OutOfRange("max_n must be >= 2")
    with AtlasStore(out_dir, shards) as store:
        workers = min(thread_count(), shards)
        if workers == 1:
            results = [shard_lines(max_n, shards, i) for i in range(shards)]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(shard_lines, [max_n] * shards, [shards] * shards, range(shards)))
        for i, lines in enumerate(results):
            store.write_shard(i, lines)
        return {
            "max_n": max_n,
            "shards": shards,
            "records": sum(store.written.values()),
            "files": [str(p) for p in store.paths],
            "schema_version": SCHEMA_VERSION,
        }

