"""Closed genus-zero invariants by axioms plus WDVV reduction."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Iterator, Sequence

from .evaluator import ZERO, EngineError, Evaluator, Key, Normalized, Rule, RuleBuilder, Unsupported
from .geometry import AbsClass, Combo, Family, Space
from .store import Store

PN_MAX_N = 9
PN_MAX_BETA = 6


@lru_cache(maxsize=None)
def sub_multisets(extras: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """All splittings of a sorted multiset into (S, rest) with multiplicity weights."""
    groups: list[tuple[int, int]] = []
    for c in extras:
        if groups and groups[-1][0] == c:
            groups[-1] = (c, groups[-1][1] + 1)
        else:
            groups.append((c, 1))
    out = []
    for counts in product(*(range(m + 1) for _, m in groups)):
        left: list[int] = []
        right: list[int] = []
        weight = 1
        for (c, m), s in zip(groups, counts):
            left.extend([c] * s)
            right.extend([c] * (m - s))
            weight *= comb(m, s)
        out.append((tuple(left), tuple(right), weight))
    return tuple(out)


def abs_splits(beta: AbsClass) -> Iterator[tuple[AbsClass, AbsClass]]:
    for first in product(*(range(b + 1) for b in beta)):
        yield tuple(first), tuple(b - f for b, f in zip(beta, first))


def expand(combos: Sequence[Combo]) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Multilinear expansion of a list of class combinations."""
    terms: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for combo in combos:
        nxt: dict[tuple[int, ...], Fraction] = {}
        for classes, coef in terms.items():
            for idx, c in combo.items():
                key = tuple(sorted(classes + (idx,)))
                nxt[key] = nxt.get(key, Fraction(0)) + coef * c
        terms = {k: v for k, v in nxt.items() if v}
    return [(v, k) for k, v in terms.items()]


class ClosedEngine(Evaluator):
    """Closed invariants GW_beta(A_1, ..., A_l) of one space."""

    def __init__(
        self,
        space: Space,
        store: Store | None = None,
        allow_large: bool = False,
        swap_order: bool = False,
    ) -> None:
        super().__init__(space, store)
        self.allow_large = allow_large
        # swapping the roles of the second and third insertions gives an
        # independent reduction order, used to cross-check values
        self.swap_order = swap_order
        degs = space.abs_degrees
        self._abs_deg = degs
        self._by_degree: dict[int, list[tuple[int, int, Fraction]]] = {}
        for m, l, g in space.inverse_pairs:
            self._by_degree.setdefault(degs[m], []).append((m, l, g))
        if space.is_surface:
            self._divisor_of = {1: 0, 2: 1}
        else:
            self._divisor_of = {1: 0}
        self._base = 2 * space.n - 6

    # ------------------------------------------------------------------
    def closed_dim(self, beta: AbsClass) -> int:
        return self._base + 2 * self.space.chern(beta)

    def normalize(self, raw: Key) -> Normalized:
        if raw[0] == "C":
            return self.normalize_closed(raw[1], raw[2])
        return self.normalize_open(raw[1], raw[2], raw[3])

    def normalize_open(self, beta: int, k: int, classes: Sequence[int]) -> Normalized:  # pragma: no cover
        raise NotImplementedError

    def normalize_closed(self, beta: AbsClass, classes: Sequence[int]) -> Normalized:
        degs = self._abs_deg
        if sum(degs[c] for c in classes) != self._base + 2 * self.space.chern(beta) + 2 * len(classes):
            return ZERO
        if not any(beta):
            if len(classes) == 3:
                value = self.space.triple_integral(*classes)
                return (value, None) if value else ZERO
            return ZERO
        coef = Fraction(1)
        rest = []
        for c in classes:
            if c == 0:
                return ZERO
            if degs[c] == 2:
                weight = beta[self._divisor_of[c]]
                if not weight:
                    return ZERO
                coef *= weight
            else:
                rest.append(c)
        rest.sort()
        return coef, ("C", beta, tuple(rest))

    # ------------------------------------------------------------------
    def closed_seed(self, beta: AbsClass, classes: tuple[int, ...]) -> Fraction | None:
        sp = self.space
        n = sp.n
        fam = sp.family
        if fam in (Family.QUADRIC_ODD, Family.QUADRIC_EVEN):
            if beta == (1,) and classes == (n - 1, n):
                return Fraction(4)
        elif fam is Family.PROJ:
            if beta == (1,) and classes == (n, n):
                return Fraction(1)
        elif beta in ((1, 0), (0, 1)) and classes == (3,):
            return Fraction(1)
        return None

    def closed_rule(self, key: Key) -> Rule:
        _, beta, classes = key
        seed = self.closed_seed(beta, classes)
        if seed is not None:
            return Rule("seed", {(): seed})
        sp = self.space
        if sp.pdl is not None and all(c == sp.pdl for c in classes):
            return Rule("axiom", {})
        if len(classes) < 3:
            raise EngineError(f"no closed reduction for {key}")
        a = classes[0]
        w, y = classes[1], classes[2]
        if self.swap_order:
            w, y = y, w
        u, v = (1, 2) if sp.is_surface else (a - 1, 1)
        builder = RuleBuilder(self, key, "wdvv")
        self.wdvv_terms(builder, u, v, w, y, beta, classes[3:])
        if not builder.rule.pivot:
            raise EngineError(f"closed reduction of {key} does not contain the target")
        return builder.rule

    def rule_for(self, key: Key) -> Rule:
        return self.closed_rule(key)

    def wdvv_terms(
        self,
        builder: RuleBuilder,
        u: int,
        v: int,
        w: int,
        y: int,
        beta: AbsClass,
        extras: tuple[int, ...],
    ) -> None:
        """Add LHS - RHS of the WDVV equation at (beta, extras) to ``builder``."""
        degs = self._abs_deg
        by_degree = self._by_degree
        for b1, b2 in abs_splits(beta):
            dim1 = self.closed_dim(b1)
            zero1 = not any(b1)
            zero2 = not any(b2)
            for left, right, weight in sub_multisets(extras):
                if (zero1 and left) or (zero2 and right):
                    continue
                slots = dim1 + 2 * (3 + len(left)) - sum(degs[c] for c in left)
                for p, q, sign in ((u, w, weight), (w, u, -weight)):
                    need = slots - degs[p] - degs[v]
                    for m, l, g in by_degree.get(need, ()):
                        builder.add(
                            sign * g,
                            ("C", b1, (p, v, m) + left),
                            ("C", b2, (l, q, y) + right),
                        )

    # ------------------------------------------------------------------
    # public API
    def _check_classes(self, classes: Iterable[int | str]) -> list[int]:
        sp = self.space
        out = []
        for c in classes:
            idx = sp.abs_index(c) if isinstance(c, str) else int(c)
            if not 0 <= idx < len(sp.abs_tags):
                raise ValueError(f"class index {idx} out of range")
            out.append(idx)
        return out

    def closed_invariant(self, beta: int | Sequence[int], classes: Iterable[int | str]) -> Fraction:
        sp = self.space
        beta_t = sp.check_abs_class((beta,) if isinstance(beta, int) else beta)
        if sp.family is Family.PROJ and not self.allow_large:
            if sp.n > PN_MAX_N or beta_t[0] > PN_MAX_BETA:
                raise Unsupported("projective space capped at n <= 9, beta <= 6 (use allow_large)")
        return self.evaluate_raw(("C", beta_t, tuple(self._check_classes(classes))))

    def closed_combo(self, beta: AbsClass, combos: Sequence[Combo]) -> Fraction:
        """GW_beta evaluated multilinearly on class combinations."""
        total = Fraction(0)
        for coef, classes in expand(combos):
            total += coef * self.evaluate_raw(("C", beta, classes))
        return total

    def wdvv_residual(
        self,
        u: int,
        v: int,
        w: int,
        y: int,
        beta: int | Sequence[int],
        extras: Iterable[int] = (),
    ) -> Fraction:
        beta_t = self.space.check_abs_class((beta,) if isinstance(beta, int) else beta)
        builder = RuleBuilder(self, None, "wdvv")
        self.wdvv_terms(builder, u, v, w, y, beta_t, tuple(sorted(extras)))
        return builder.residual()
