from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from quadogw.geometry import make_space
from quadogw.store import Store, StoreConflict, canonical_key, format_rational, parse_key, parse_rational


def test_canonical_key_examples() -> None:
    qo = make_space("QO", 3)
    assert canonical_key(qo, "closed", 1, None, ["h2", "h2", "h2"]) == "QO:3|C|1|-|h2,h2,h2|-"
    qe = make_space("QE", 4)
    key = canonical_key(qe, "open", 1, 1, ["PDL", "g2", "PDL"], enhanced=True)
    assert key == "QE:4|O|1|1|g2,PDL,PDL|E"


def test_canonical_key_ignores_order() -> None:
    sp = make_space("QE", 6)
    classes = ["h2", "PDL", "h5", "h1", "PDL"]
    expected = canonical_key(sp, "closed", 2, None, classes)
    rng = random.Random(4)
    for _ in range(20):
        rng.shuffle(classes)
        assert canonical_key(sp, "closed", 2, None, classes) == expected


def test_parse_key_round_trip() -> None:
    parsed = parse_key("QE:4|O|1|1|g2,PDL,PDL|E")
    assert parsed["space"].code == "QE:4" and parsed["k"] == 1 and parsed["enhanced"]
    assert parse_key("QS:2|C|1,1|-|ll|-")["beta"] == (1, 1)


def test_rationals() -> None:
    assert format_rational(Fraction(2)) == "2/1"
    assert parse_rational("-7/3") == Fraction(-7, 3)
    assert parse_rational("12") == 12


def test_put_get_conflict() -> None:
    store = Store()
    store.put("QO:3|C|1|-|h2,h2,h2|-", Fraction(8), "wdvv")
    assert store.get("QO:3|C|1|-|h2,h2,h2|-") == 8
    store.put("QO:3|C|1|-|h2,h2,h2|-", Fraction(8), "wdvv")
    with pytest.raises(StoreConflict):
        store.put("QO:3|C|1|-|h2,h2,h2|-", Fraction(9), "wdvv")


def test_random_round_trip(tmp_path: Path) -> None:
    rng = random.Random(11)
    store = Store()
    records = {}
    for i in range(1000):
        value = Fraction(rng.randint(-10**40, 10**40), rng.randint(1, 10**12))
        key = f"QO:3|O|{i}|1|g2|E"
        records[key] = value
        store.put(key, value, rng.choice(["seed", "wdvv", "owdvv", "axiom"]))
    path = tmp_path / "cache.jsonl"
    store.flush(path)
    again = Store(path)
    assert len(again) == 1000
    for key, value in records.items():
        assert again.get(key) == value
        assert again.provenance(key) == store.provenance(key)


def test_append_flush_and_version_mismatch(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    path = tmp_path / "cache.jsonl"
    store = Store(path)
    store.put("a", Fraction(1), "seed")
    store.flush()
    store.put("b", Fraction(2), "seed")
    store.flush()
    assert len(path.read_text().splitlines()) == 2
    with open(path, "a", encoding="utf-8") as handle:
        handle.write(json.dumps({"k": "c", "v": "3/1", "prov": "seed", "ver": "0"}) + "\n")
    reloaded = Store(path)
    assert reloaded.get("b") == 2 and reloaded.get("c") is None
    assert "another engine version" in caplog.text


def test_unknown_provenance_rejected() -> None:
    with pytest.raises(ValueError):
        Store().put("a", Fraction(1), "guess")
