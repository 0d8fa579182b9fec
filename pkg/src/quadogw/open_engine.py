"""Open genus-zero invariants.

Internally every open key ``("O", beta, k, classes)`` stores the enhanced
invariant.  The plain invariant differs only for ``k = 0`` with ``beta`` in
the image of varpi, where it vanishes.

* [L] = 0, odd quadric: full open WDVV recursion from the single disk seed
  ``OGW_{1,3}``.  Diamond insertions are traded for boundary points.
* [L] != 0 (even quadric, quadric surface): only ``k = 1`` survives and it is
  expressed through closed invariants with two Lagrangian-dual insertions.
* odd projective space: the degree-one values are known in closed form;
  anything else is reported as unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .closed_engine import ClosedEngine, expand, sub_multisets
from .evaluator import ZERO, EngineError, Key, Normalized, Rule, RuleBuilder, Unsupported
from .geometry import Family, Space
from .store import Store


@dataclass(frozen=True)
class SignConvention:
    seed_sign: int = 1
    modulus: int = 2


def quadric_seed(n: int, sign: int = 1) -> Fraction:
    return Fraction(sign * (-1) ** ((n - 2) * (n - 3) // 2) * 2)


class Engine(ClosedEngine):
    """Closed and open invariants of one space, sharing one memo table."""

    def __init__(
        self,
        space: Space,
        store: Store | None = None,
        seed_sign: int = 1,
        allow_large: bool = False,
        swap_order: bool = False,
    ) -> None:
        if seed_sign not in (1, -1):
            raise ValueError("seed_sign must be +1 or -1")
        if seed_sign == -1 and store is None:
            store = Store(engine_version=f"{self.ENGINE_VERSION}-flipped")
        super().__init__(space, store, allow_large=allow_large, swap_order=swap_order)
        self.seed_sign = seed_sign
        self._rel_deg = space.rel_degrees
        self._diamond = space.diamond
        self._open_base = space.n - 3

    # ------------------------------------------------------------------
    def boundary_count(self, beta: int, classes: Sequence[int]) -> int | None:
        n = self.space.n
        top = n - 3 + self.space.maslov(beta) + 2 * len(classes) - sum(self._rel_deg[c] for c in classes)
        if top < 0 or top % (n - 1):
            return None
        return top // (n - 1)

    def normalize_open(self, beta: int, k: int, classes: Sequence[int]) -> Normalized:
        sp = self.space
        coef = Fraction(1)
        diamond = self._diamond
        if diamond is not None and diamond in classes:
            r = classes.count(diamond)
            classes = [c for c in classes if c != diamond]
            k += r
            if r % 2:
                coef = -coef
        if k < 0:
            return ZERO
        degs = self._rel_deg
        n = sp.n
        l = len(classes)
        if self._open_base + sp.maslov(beta) + k + 2 * l != k * n + sum(degs[c] for c in classes):
            return ZERO
        if beta == 0:
            # zero axiom; pair values P_R(A1 A2) vanish for the hhat-power splitting
            if k == 1 and l == 1 and classes[0] == 0:
                return -coef, None
            return ZERO
        rest = []
        for c in classes:
            if c == 0:
                return ZERO
            if c == 1:
                coef *= sp.rel_divisor_integral(beta, 1)
            else:
                rest.append(c)
        if not sp.lagrangian_trivial and k != 1:
            return ZERO
        rest.sort()
        return coef, ("O", beta, k, tuple(rest))

    # ------------------------------------------------------------------
    def rule_for(self, key: Key) -> Rule:
        if key[0] == "C":
            return self.closed_rule(key)
        fam = self.space.family
        if fam is Family.QUADRIC_ODD:
            return self._odd_quadric_rule(key)
        if fam is Family.PROJ:
            return self._proj_rule(key)
        return self.open_closed_rule(key)

    def _proj_rule(self, key: Key) -> Rule:
        _, beta, k, classes = key
        n = self.space.n
        sign = (-1) ** ((n - 1) // 2)
        if beta == 1:
            if k == 2 and classes == ():
                return Rule("seed", {(): Fraction(2 * self.seed_sign)})
            if k == 1 and classes == ((n + 1) // 2,):
                return Rule("seed", {})
            if k == 0 and classes == (n,):
                return Rule("seed", {(): Fraction(sign)})
            if k == 0 and len(classes) == 2 and sum(classes) == n + 1:
                return Rule("seed", {(): Fraction(sign, 2)})
        raise Unsupported(f"open invariant {self.store_tag(key)} of projective space is not computed")

    def _odd_quadric_rule(self, key: Key) -> Rule:
        _, beta, k, classes = key
        n = self.space.n
        if beta == 1 and k == 3 and classes == ():
            return Rule("seed", {(): quadric_seed(n, self.seed_sign)})
        builder = RuleBuilder(self, key, "owdvv")
        if not classes:
            if n * (2 * beta - k + 1) != 3 - k:
                raise EngineError(f"degree bookkeeping fails for {key}")
            r = (n - 1) // 2
            self.cor2_terms(builder, r + 1, r + 1, beta + 1, k - 1, ())
        elif len(classes) == 1:
            self.cor2_terms(builder, 1, classes[0] - 1, beta, k - 1, ())
        else:
            j1, j2 = classes[0], classes[1]
            self.cor1_terms(builder, j2, j1 - 1, 1, beta, k, classes[2:])
        if not builder.rule.pivot:
            raise EngineError(f"open reduction of {key} does not contain the target")
        return builder.rule

    def open_closed_rule(self, key: Key) -> Rule:
        _, beta, k, classes = key
        sp = self.space
        builder = RuleBuilder(self, None, "open-closed")
        self.open_closed_terms(builder, beta, classes)
        return builder.rule

    def open_closed_terms(self, builder: RuleBuilder, beta: int, classes: Sequence[int]) -> None:
        sp = self.space
        sign = (-1) ** (sp.n + 1)
        combos = [sp.eta, sp.lagrangian_dual] + [sp.rho(c) for c in classes]
        expansion = expand(combos)
        for hat in sp.varpi_preimages(beta):
            tw = sign * sp.spin_sign(hat)
            for coef, abs_classes in expansion:
                builder.add(tw * coef, ("C", hat, abs_classes))

    # ------------------------------------------------------------------
    # open WDVV coefficient identities
    def _closed_factor(self, beta: int, combos: Sequence[dict]) -> list[tuple[Fraction, Key]]:
        """Raw closed keys (with twist) summing over varpi-preimages of beta."""
        sp = self.space
        out = []
        expansion = expand(combos)
        for hat in sp.varpi_preimages(beta):
            tw = sp.spin_sign(hat)
            for coef, classes in expansion:
                out.append((tw * coef, ("C", hat, classes)))
        return out

    def _k_for(self, beta: int, classes: Sequence[int]) -> int | None:
        return self.boundary_count(beta, classes)

    def cor2_terms(
        self,
        builder: RuleBuilder,
        v: int,
        w: int,
        beta: int,
        k: int,
        extras: tuple[int, ...],
    ) -> None:
        """LHS - RHS of the second open WDVV identity at (T^beta, s^k, extras)."""
        sp = self.space
        rho = sp.rho
        cutoff = sp.adapted_cutoff
        adapted = sp.adapted_basis
        pairs = [(m, l, g) for m, l, g in sp.adapted_inverse_pairs if l <= cutoff]
        for b1 in range(beta + 1):
            b2 = beta - b1
            for left, right, weight in sub_multisets(extras):
                # closed-open term
                for m, l, g in pairs:
                    for coef, closed in self._closed_factor(b2, [adapted[m], rho(w), rho(v)] + [rho(c) for c in right]):
                        builder.add(weight * g * coef, ("O", b1, k + 1, (l,) + left), closed)
                # open-open term on the left: i + 2 boundary points in the first factor
                k1 = self._k_for(b1, left)
                if k1 is not None and 0 <= k1 - 2 <= k:
                    i = k1 - 2
                    builder.add(-weight * comb(k, i), ("O", b1, k1, left), ("O", b2, k - i, (w, v) + right))
                # right-hand side, moved over
                k1 = self._k_for(b1, (w,) + left)
                if k1 is not None and 0 <= k1 - 1 <= k:
                    i = k1 - 1
                    builder.add(
                        weight * comb(k, i), ("O", b1, k1, (w,) + left), ("O", b2, k - i + 1, (v,) + right)
                    )

    def cor1_terms(
        self,
        builder: RuleBuilder,
        u: int,
        v: int,
        w: int,
        beta: int,
        k: int,
        extras: tuple[int, ...],
    ) -> None:
        """LHS - RHS of the first open WDVV identity at (T^beta, s^k, extras)."""
        sp = self.space
        rho = sp.rho
        cutoff = sp.adapted_cutoff
        adapted = sp.adapted_basis
        inverse_pairs = sp.adapted_inverse_pairs
        for b1 in range(beta + 1):
            b2 = beta - b1
            for left, right, weight in sub_multisets(extras):
                for m, l, g in inverse_pairs:
                    if l <= cutoff:
                        for coef, closed in self._closed_factor(
                            b2, [adapted[m], rho(w), rho(v)] + [rho(c) for c in right]
                        ):
                            builder.add(weight * g * coef, ("O", b1, k, (u, l) + left), closed)
                    if m <= cutoff:
                        for coef, closed in self._closed_factor(
                            b1, [rho(u), rho(w), adapted[l]] + [rho(c) for c in left]
                        ):
                            builder.add(-weight * g * coef, closed, ("O", b2, k, (m, v) + right))
                k1 = self._k_for(b1, (u,) + left)
                if k1 is not None and 0 <= k1 - 1 <= k:
                    i = k1 - 1
                    builder.add(-weight * comb(k, i), ("O", b1, k1, (u,) + left), ("O", b2, k - i, (w, v) + right))
                k1 = self._k_for(b1, (u, w) + left)
                if k1 is not None and 0 <= k1 <= k:
                    i = k1
                    builder.add(
                        weight * comb(k, i), ("O", b1, k1, (u, w) + left), ("O", b2, k - i + 1, (v,) + right)
                    )

    # ------------------------------------------------------------------
    # public API
    def _rel_classes(self, classes: Iterable[int | str]) -> list[int]:
        sp = self.space
        out = []
        for c in classes:
            idx = sp.rel_index(c) if isinstance(c, str) else int(c)
            if not 0 <= idx < len(sp.rel_tags):
                raise ValueError(f"class index {idx} out of range")
            out.append(idx)
        return out

    def open_invariant(
        self,
        beta: int,
        k: int | None,
        classes: Iterable[int | str] = (),
        enhanced: bool = False,
    ) -> Fraction:
        sp = self.space
        if beta < 0:
            raise ValueError("beta must be nonnegative")
        idx = self._rel_classes(classes)
        if k is None:
            k = self.boundary_count(beta, idx)
            if k is None:
                return Fraction(0)
        if not enhanced and k == 0 and sp.in_image_of_varpi(beta):
            return Fraction(0)
        return self.evaluate_raw(("O", beta, k, tuple(idx)))

    def enhanced_invariant(self, beta: int, k: int | None, classes: Iterable[int | str] = ()) -> Fraction:
        return self.open_invariant(beta, k, classes, enhanced=True)

    def open_closed_evaluate(self, beta: int, classes: Iterable[int | str]) -> Fraction:
        """k = 1 open invariant expressed through closed invariants ([L] != 0 only)."""
        if self.space.lagrangian_trivial:
            raise ValueError("the open-closed relation needs [L] != 0")
        builder = RuleBuilder(self, None, "open-closed")
        self.open_closed_terms(builder, beta, self._rel_classes(classes))
        return builder.residual()

    def owdvv_residual(
        self,
        which: str,
        u: int | None,
        v: int,
        w: int,
        beta: int,
        k: int,
        extras: Iterable[int] = (),
    ) -> Fraction:
        builder = RuleBuilder(self, None, "owdvv")
        ext = tuple(sorted(extras))
        if which == "cor1":
            if u is None:
                raise ValueError("cor1 needs u")
            self.cor1_terms(builder, u, v, w, beta, k, ext)
        elif which == "cor2":
            self.cor2_terms(builder, v, w, beta, k, ext)
        else:
            raise ValueError(f"unknown identity {which!r}")
        return builder.residual()
