"""Canonical invariant keys and a persistent JSON-lines cache.

A cache line looks like::

    {"k": "QO:3|C|1|-|h2,h2,h2|-", "v": "8/1", "prov": "wdvv", "ver": "1"}
"""

from __future__ import annotations

import json
import logging
import os
import threading
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .geometry import GeometryError, Space, make_space

log = logging.getLogger(__name__)

PROVENANCES = ("axiom", "seed", "wdvv", "owdvv", "wall-crossing", "open-closed")
CACHE_ENV = "OGW_CACHE"


class StoreConflict(RuntimeError):
    """A key was stored twice with different values."""


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    value = Fraction(int(num), int(den or 1))
    return value


def _sorted_tags(tags: Sequence[str], degrees: Sequence[int], indices: Iterable[int]) -> str:
    ordered = sorted(indices, key=lambda i: (degrees[i], i))
    return ",".join(tags[i] for i in ordered)


def canonical_key(
    space: Space,
    kind: str,
    beta: int | Sequence[int],
    k: int | None,
    constraints: Iterable[int | str],
    enhanced: bool = False,
) -> str:
    """Canonical string for an invariant.

    ``kind`` is ``"closed"`` or ``"open"``; constraints may be basis indices
    or tags of the matching side.
    """
    if kind not in ("closed", "open"):
        raise ValueError(f"unknown kind {kind!r}")
    closed = kind == "closed"
    tags = space.abs_tags if closed else space.rel_tags
    degrees = space.abs_degrees if closed else space.rel_degrees
    indices = []
    for c in constraints:
        if isinstance(c, str):
            idx = space.abs_index(c) if closed else space.rel_index(c)
        else:
            idx = int(c)
            if not 0 <= idx < len(tags):
                raise GeometryError(f"class index {idx} out of range")
        indices.append(idx)
    comps = (beta,) if isinstance(beta, int) else tuple(beta)
    if any(int(b) < 0 for b in comps):
        raise GeometryError("curve class must be nonnegative")
    beta_text = ",".join(str(int(b)) for b in comps)
    if closed:
        return f"{space.code}|C|{beta_text}|-|{_sorted_tags(tags, degrees, indices)}|-"
    if k is None or k < 0:
        raise GeometryError("open keys need k >= 0")
    flag = "E" if enhanced else "-"
    return f"{space.code}|O|{beta_text}|{k}|{_sorted_tags(tags, degrees, indices)}|{flag}"


def canonical_from_internal(space: Space, key: tuple) -> str:
    if key[0] == "C":
        return canonical_key(space, "closed", key[1], None, key[2])
    return canonical_key(space, "open", key[1], key[2], key[3], enhanced=True)


def parse_key(text: str) -> dict:
    """Inverse of :func:`canonical_key`."""
    head, kind, beta, k, tags, flag = text.split("|")
    family, _, n = head.partition(":")
    space = make_space(family, int(n))
    closed = kind == "C"
    constraints = [t for t in tags.split(",") if t]
    return {
        "space": space,
        "kind": "closed" if closed else "open",
        "beta": tuple(int(b) for b in beta.split(",")) if closed else int(beta),
        "k": None if k == "-" else int(k),
        "constraints": constraints,
        "enhanced": flag == "E",
    }


class Store:
    """Thread-safe memo cache with optional JSON-lines persistence."""

    def __init__(self, path: str | os.PathLike | None = None, engine_version: str = "1") -> None:
        self.engine_version = engine_version
        self._lock = threading.Lock()
        self._values: dict[str, tuple[Fraction, str]] = {}
        self._unflushed: list[str] = []
        self.path = Path(path) if path else None
        if self.path is not None and self.path.exists():
            self.load(self.path)

    @classmethod
    def from_env(cls, path: str | None = None, engine_version: str = "1") -> "Store":
        return cls(path or os.environ.get(CACHE_ENV) or None, engine_version=engine_version)

    def __len__(self) -> int:
        return len(self._values)

    def get(self, key: str) -> Fraction | None:
        hit = self._values.get(key)
        return None if hit is None else hit[0]

    def provenance(self, key: str) -> str | None:
        hit = self._values.get(key)
        return None if hit is None else hit[1]

    def put(self, key: str, value: Fraction, provenance: str) -> None:
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        value = Fraction(value)
        with self._lock:
            old = self._values.get(key)
            if old is not None:
                if old[0] != value:
                    raise StoreConflict(f"{key}: cached {old[0]} but computed {value}")
                return
            self._values[key] = (value, provenance)
            self._unflushed.append(key)

    def items(self) -> list[tuple[str, Fraction, str]]:
        with self._lock:
            return [(k, v, p) for k, (v, p) in self._values.items()]

    def load(self, path: str | os.PathLike) -> int:
        """Merge records from ``path``; returns the number accepted."""
        accepted = 0
        skipped = 0
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                if record.get("ver") != self.engine_version:
                    skipped += 1
                    continue
                self.put(record["k"], parse_rational(record["v"]), record["prov"])
                accepted += 1
        if skipped:
            log.warning("ignored %d cache records from another engine version", skipped)
        with self._lock:
            self._unflushed.clear()
        return accepted

    def flush(self, path: str | os.PathLike | None = None) -> None:
        """Append new records to ``path`` (or rewrite it entirely when it differs from self.path)."""
        target = Path(path) if path else self.path
        if target is None:
            raise ValueError("no cache path configured")
        with self._lock:
            if target == self.path and target.exists():
                keys, mode = list(self._unflushed), "a"
            else:
                keys, mode = list(self._values), "w"
            with open(target, mode, encoding="utf-8") as handle:
                for key in keys:
                    value, prov = self._values[key]
                    handle.write(
                        json.dumps(
                            {"k": key, "v": format_rational(value), "prov": prov, "ver": self.engine_version}
                        )
                        + "\n"
                    )
            if target == self.path:
                self._unflushed.clear()
