"""Memoized evaluation of invariants defined by linear rules.

Every normalized invariant key is computed by a :class:`Rule`: a sum of
products of other invariants, optionally with terms that are linear in the
target itself.  Evaluation walks the dependency graph with an explicit stack,
so arbitrarily deep recursions never touch the Python recursion limit.

Keys are tuples:

* ``("C", beta, classes)`` for closed invariants, ``beta`` a tuple;
* ``("O", beta, k, classes)`` for open invariants, ``beta`` an int.

``classes`` is a sorted tuple of basis indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .geometry import Space
from .store import Store, canonical_from_internal

Key = tuple
Normalized = tuple[Fraction, "Key | None"]

ZERO: Normalized = (Fraction(0), None)


class EngineError(RuntimeError):
    """Internal inconsistency of a recursion (cycle, zero pivot, missing rule)."""


class Unsupported(EngineError):
    """The requested invariant lies outside what the engine computes."""


@dataclass
class Rule:
    """``target * sum(pivot) + sum(terms) = 0``, or ``target = sum(terms)``.

    Both ``terms`` and ``pivot`` map a sorted tuple of keys to a coefficient;
    the value of an entry is the coefficient times the product of the keys.
    """

    provenance: str
    terms: dict[tuple, Fraction] = field(default_factory=dict)
    pivot: dict[tuple, Fraction] | None = None

    def dependencies(self, target: Key) -> list[Key]:
        seen: dict[Key, None] = {}
        for group in (self.terms, self.pivot or {}):
            for keys in group:
                for key in keys:
                    if key != target:
                        seen.setdefault(key)
        return list(seen)

    def solve(self, memo: dict[Key, Fraction]) -> Fraction:
        total = _evaluate(self.terms, memo)
        if self.pivot is None:
            return total
        denom = _evaluate(self.pivot, memo)
        if denom == 0:
            raise EngineError("vanishing pivot coefficient")
        return -total / denom


def _evaluate(group: dict[tuple, Fraction], memo: dict[Key, Fraction]) -> Fraction:
    total = Fraction(0)
    for keys, coef in group.items():
        value = coef
        for key in keys:
            value *= memo[key]
            if not value:
                break
        total += value
    return total


class RuleBuilder:
    """Collects products of raw invariants into a :class:`Rule` for ``target``."""

    def __init__(self, evaluator: "Evaluator", target: Key | None, provenance: str) -> None:
        self.ev = evaluator
        self.target = target
        self.rule = Rule(provenance, {}, {} if target is not None else None)

    def add(self, coef: Fraction | int, *raw: Key) -> None:
        if not coef:
            return
        coef = Fraction(coef)
        keys: list[Key] = []
        for item in raw:
            factor, key = self.ev.normalize(item)
            if not factor:
                return
            coef *= factor
            if key is not None:
                keys.append(key)
        self._record(coef, keys)

    def add_normalized(self, coef: Fraction, keys: Iterable[Key]) -> None:
        self._record(coef, list(keys))

    def _record(self, coef: Fraction, keys: list[Key]) -> None:
        target = self.target
        group = self.rule.terms
        if target is not None and target in keys:
            keys.remove(target)
            if target in keys:
                raise EngineError(f"rule for {target} is not linear in the target")
            group = self.rule.pivot  # type: ignore[assignment]
        ident = tuple(sorted(keys))
        value = group.get(ident, Fraction(0)) + coef
        if value:
            group[ident] = value
        else:
            group.pop(ident, None)

    def residual(self) -> Fraction:
        """Evaluate the collected expression (used for identity checks)."""
        for key in self.rule.dependencies(None):
            self.ev.value(key)
        return _evaluate(self.rule.terms, self.ev.memo)


class Evaluator:
    """Base class holding the memo table and the stack-based solver."""

    ENGINE_VERSION = "1"

    def __init__(self, space: Space, store: Store | None = None) -> None:
        self.space = space
        self.store = store if store is not None else Store(engine_version=self.ENGINE_VERSION)
        self.memo: dict[Key, Fraction] = {}
        self.provenance: dict[Key, str] = {}

    # subclasses provide these
    def normalize(self, raw: Key) -> Normalized:  # pragma: no cover - abstract
        raise NotImplementedError

    def rule_for(self, key: Key) -> Rule:  # pragma: no cover - abstract
        raise NotImplementedError

    def store_tag(self, key: Key) -> str:
        return canonical_from_internal(self.space, key)

    def value(self, key: Key) -> Fraction:
        memo = self.memo
        if key in memo:
            return memo[key]
        stack: list[Key] = [key]
        on_path: set[Key] = {key}
        pending: dict[Key, list] = {}
        while stack:
            top = stack[-1]
            if top in memo:
                stack.pop()
                on_path.discard(top)
                continue
            entry = pending.get(top)
            if entry is None:
                cached = self.store.get(self.store_tag(top))
                if cached is not None:
                    memo[top] = cached
                    continue
                rule = self.rule_for(top)
                entry = [rule, rule.dependencies(top), 0]
                pending[top] = entry
            rule, deps, pos = entry
            while pos < len(deps) and deps[pos] in memo:
                pos += 1
            entry[2] = pos
            if pos < len(deps):
                nxt = deps[pos]
                if nxt in on_path:
                    raise EngineError(f"cyclic reduction through {nxt}")
                stack.append(nxt)
                on_path.add(nxt)
                continue
            result = rule.solve(memo)
            memo[top] = result
            self.provenance[top] = rule.provenance
            self.store.put(self.store_tag(top), result, rule.provenance)
            del pending[top]
            stack.pop()
            on_path.discard(top)
        return memo[key]

    def evaluate_raw(self, raw: Key) -> Fraction:
        factor, key = self.normalize(raw)
        if not factor or key is None:
            return factor
        return factor * self.value(key)
