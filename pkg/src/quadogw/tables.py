"""Regeneration of the four published invariant tables and their check against fixtures."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterator

from .geometry import make_space
from .open_engine import Engine
from .store import Store

TABLE1_NS = (3, 5, 7, 9, 11)


@dataclass
class Cell:
    table: int
    row: str
    col: str
    coords: dict[str, int]
    value: Fraction
    structural_zero: bool = False

    def as_dict(self) -> dict:
        out = {"table": self.table, "row": self.row, "col": self.col, **self.coords}
        out["value"] = str(self.value.numerator) if self.value.denominator == 1 else str(self.value)
        return out


def load_fixtures() -> dict:
    text = resources.files("quadogw").joinpath("data/tables.json").read_text(encoding="utf-8")
    return json.loads(text)


def table1(ns: tuple[int, ...] = TABLE1_NS, max_m: int = 2, store: Store | None = None,
           progress: Callable[[str], None] | None = None) -> Iterator[Cell]:
    for n in ns:
        engine = Engine(make_space("QO", n), store=store)
        for m in range(max_m + 1):
            beta, k = 1 + (n - 1) * m, 3 + 2 * n * m
            if progress:
                progress(f"table 1: n={n} m={m} (beta={beta}, k={k})")
            value = engine.open_invariant(beta, k, ())
            yield Cell(1, f"n={n}", f"m={m}", {"n": n, "m": m, "beta": beta, "k": k}, value)


def _interior_table(table: int, n: int, beta_max: int, rows: int, classes_for: Callable[[int, int], tuple[int, int]],
                    second: str, row_name: str, store: Store | None,
                    progress: Callable[[str], None] | None) -> Iterator[Cell]:
    family = "QO" if n % 2 else "QE"
    engine = Engine(make_space(family, n), store=store)
    for r in range(rows):
        for beta in range(1, beta_max + 1):
            l2, other = classes_for(beta, r)
            coords = {"beta": beta, row_name: r, "l2": l2, ("l3" if second == "g3" else "lL"): other}
            if l2 < 0 or other < 0:
                yield Cell(table, f"{row_name}={r}", f"beta={beta}", coords, Fraction(0), structural_zero=True)
                continue
            if progress:
                progress(f"table {table}: beta={beta} {row_name}={r}")
            value = engine.open_invariant(beta, 1, ["g2"] * l2 + [second] * other)
            yield Cell(table, f"{row_name}={r}", f"beta={beta}", coords, value)


def table2(beta_max: int = 5, store: Store | None = None, progress: Callable[[str], None] | None = None) -> Iterator[Cell]:
    return _interior_table(2, 3, beta_max, 6, lambda b, l3: (3 * b - 1 - 2 * l3, l3), "g3", "l3", store, progress)


def table3(beta_max: int = 4, store: Store | None = None, progress: Callable[[str], None] | None = None) -> Iterator[Cell]:
    return _interior_table(3, 4, beta_max, 5, lambda b, l3: (4 * b - 1 - 2 * l3, l3), "g3", "l3", store, progress)


def table4(beta_max: int = 3, store: Store | None = None, progress: Callable[[str], None] | None = None) -> Iterator[Cell]:
    return _interior_table(4, 4, beta_max, 5, lambda b, m: (1 + 2 * m, 4 * b - 2 - 2 * m), "PDL", "m", store, progress)


DEFAULT_BETA_MAX = {2: 5, 3: 4, 4: 3}


def compute_table(table: int, *, ns: tuple[int, ...] | None = None, max_m: int = 2, beta_max: int | None = None,
                  store: Store | None = None, progress: Callable[[str], None] | None = None) -> list[Cell]:
    if table == 1:
        return list(table1(ns or TABLE1_NS, max_m, store, progress))
    if table not in DEFAULT_BETA_MAX:
        raise ValueError(f"unknown table {table}")
    limit = DEFAULT_BETA_MAX[table] if beta_max is None else beta_max
    builder = {2: table2, 3: table3, 4: table4}[table]
    return list(builder(limit, store, progress))


def check_cells(table: int, cells: list[Cell]) -> list[str]:
    """Mismatches against the published values, one message per cell."""
    fixture = {(c["row"], c["col"]): Fraction(c["value"]) for c in load_fixtures()[f"table{table}"]["cells"]}
    problems = []
    for cell in cells:
        expected = fixture.get((cell.row, cell.col))
        if expected is None:
            problems.append(f"table {table} {cell.row} {cell.col}: outside the published range")
        elif expected != cell.value:
            problems.append(f"table {table} {cell.row} {cell.col}: expected {expected}, computed {cell.value}")
    return problems
