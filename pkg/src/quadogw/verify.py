"""Property suites: axioms, WDVV and open WDVV residuals, rings, sign change, vanishing."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

from .evaluator import Unsupported
from .geometry import Family, Space, make_space
from .open_engine import Engine
from .rings import (
    Report,
    relative_quantum_table,
    small_quantum_table,
    verify_associativity,
    verify_grading,
    verify_homomorphism,
    verify_presentation,
    verify_unit,
)

SUITE_SPACES = (("QO", 3), ("QE", 4), ("QS", 2), ("PN", 3))
RING_SPACES = (("QO", 3), ("QO", 5), ("QE", 4), ("QE", 6), ("QS", 2), ("PN", 3), ("PN", 5))


def curve_classes(space: Space, budget: int) -> list[tuple[int, ...]]:
    """Absolute classes with total energy at most ``budget``."""
    if space.is_surface:
        return [(a, b) for a in range(budget + 1) for b in range(budget + 1 - a)]
    return [(d,) for d in range(budget + 1)]


def admissible_closed(space: Space, beta: tuple[int, ...], max_len: int) -> Iterator[tuple[int, ...]]:
    """Multisets of non-unit, non-divisor classes satisfying the degree axiom."""
    excess = 2 * space.n - 6 + 2 * space.chern(beta)
    classes = [i for i, d in enumerate(space.abs_degrees) if d > 2]

    def rec(start: int, left: int, acc: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if left == 0:
            yield acc
            return
        if len(acc) >= max_len:
            return
        for pos in range(start, len(classes)):
            c = classes[pos]
            weight = space.abs_degrees[c] - 2
            if weight <= left:
                yield from rec(pos, left - weight, acc + (c,))

    if excess >= 0:
        yield from rec(0, excess, ())


# ----------------------------------------------------------------------
# axioms


def _random_closed_key(space: Space, rng: random.Random, budget: int) -> tuple[tuple[int, ...], list[int]] | None:
    beta = rng.choice(curve_classes(space, budget))
    if space.family is Family.PROJ and beta[0] > 2:
        beta = (rng.randint(0, 2),)
    size = rng.randint(1, 5)
    degs = space.abs_degrees
    first = [rng.randrange(len(degs)) for _ in range(size - 1)]
    need = 2 * space.n - 6 + 2 * space.chern(beta) + 2 * size - sum(degs[c] for c in first)
    options = [i for i, d in enumerate(degs) if d == need]
    if not options:
        return None
    return beta, first + [rng.choice(options)]


def axioms_suite(budget: int = 3, samples: int = 500, seed: int = 0) -> list[Report]:
    reports = []
    for fam, n in SUITE_SPACES:
        space = make_space(fam, n)
        engine = Engine(space)
        rng = random.Random(seed)
        closed = Report(f"closed axioms {space.code}")
        attempts = 0
        while closed.checked < samples and attempts < 50 * samples:
            attempts += 1
            drawn = _random_closed_key(space, rng, budget)
            if drawn is None:
                continue
            beta, classes = drawn
            closed.checked += 1
            _check_closed_axioms(engine, beta, classes, rng, closed)
        reports.append(closed)
        opened = Report(f"open axioms {space.code}")
        attempts = 0
        while opened.checked < samples and attempts < 50 * samples:
            attempts += 1
            try:
                done = _check_open_axioms(engine, rng, budget, opened)
            except Unsupported:
                opened.skipped += 1
                continue
            if done:
                opened.checked += 1
        reports.append(opened)
    return reports


def _check_closed_axioms(engine: Engine, beta: tuple[int, ...], classes: list[int], rng: random.Random, report: Report) -> None:
    sp = engine.space
    value = engine.closed_invariant(beta, classes)
    shuffled = list(classes)
    rng.shuffle(shuffled)
    label = f"GW_{beta}({','.join(sp.abs_tags[c] for c in classes)})"
    if engine.closed_invariant(beta, shuffled) != value:
        report.failures.append(f"{label}: order dependence")
    # degree gate: dropping an insertion breaks the degree axiom
    if len(classes) > 1 and engine.closed_invariant(beta, classes[1:]) != 0 and sp.abs_degrees[classes[0]] != 2:
        report.failures.append(f"{label}: degree gate")
    if any(beta):
        degs = sp.abs_degrees
        head = classes[:-1] + [0]
        need = 2 * sp.n - 6 + 2 * sp.chern(beta) + 2 * (len(head) + 1) - sum(degs[c] for c in head)
        for last in [i for i, d in enumerate(degs) if d == need]:
            if engine.closed_invariant(beta, head + [last]) != 0:
                report.failures.append(f"{label}: unit axiom")
        for d in [i for i, deg in enumerate(sp.abs_degrees) if deg == 2]:
            with_divisor = engine.closed_invariant(beta, classes + [d])
            if with_divisor != sp.abs_divisor_integral(beta, d) * value:
                report.failures.append(f"{label}: divisor axiom")
    elif len(classes) == 3 and value != sp.triple_integral(*classes):
        report.failures.append(f"{label}: zero axiom")


def _check_open_axioms(engine: Engine, rng: random.Random, budget: int, report: Report) -> bool:
    sp = engine.space
    basis = len(sp.enumerate_basis("relative"))
    beta = rng.randint(0, 1 if sp.family is Family.PROJ else budget)
    classes = [rng.randrange(basis) for _ in range(rng.randint(0, 4))]
    k = engine.boundary_count(beta, classes)
    label = f"OGW_{beta}({','.join(sp.rel_tags[c] for c in classes)})"
    if k is None:
        for kk in range(3):
            if engine.open_invariant(beta, kk, classes, enhanced=True) != 0:
                report.failures.append(f"{label}, k={kk}: degree gate")
        return True
    enhanced = engine.open_invariant(beta, k, classes, enhanced=True)
    plain = engine.open_invariant(beta, k, classes)
    if k == 0 and sp.in_image_of_varpi(beta):
        if plain != 0:
            report.failures.append(f"{label}: plain k=0 vanishing")
    elif plain != enhanced:
        report.failures.append(f"{label}: plain differs from enhanced")
    if beta == 0:
        if (k, classes) == (1, [0]):
            expected = Fraction(-1)
        else:
            expected = None if sp.diamond in classes else Fraction(0)
        if expected is not None and enhanced != expected:
            report.failures.append(f"{label}: zero axiom")
    else:
        if 0 in classes and enhanced != 0:
            report.failures.append(f"{label}: unit axiom")
        if engine.open_invariant(beta, k, classes + [1], enhanced=True) != sp.rel_divisor_integral(beta, 1) * enhanced:
            report.failures.append(f"{label}: divisor axiom")
    if sp.diamond is not None and k >= 1:
        crossed = engine.open_invariant(beta, k - 1, classes + [sp.diamond], enhanced=True)
        if crossed != -enhanced:
            report.failures.append(f"{label}: wall-crossing")
    return True


# ----------------------------------------------------------------------
# residual suites


def wdvv_suite(budget: int = 3, extras_max: int = 1) -> list[Report]:
    reports = []
    for fam, n in SUITE_SPACES + (("QO", 5),):
        engine = Engine(make_space(fam, n))
        reports.append(wdvv_report(engine, budget, extras_max))
    return reports


def wdvv_report(engine: Engine, budget: int, extras_max: int = 1) -> Report:
    sp = engine.space
    size = len(sp.abs_tags)
    report = Report(f"wdvv {sp.code}")
    extras_options = [()] + [(x,) for x in range(size)] if extras_max >= 1 else [()]
    for beta in curve_classes(sp, budget):
        for u, v, w, y in product(range(size), repeat=4):
            for extras in extras_options:
                report.checked += 1
                residual = engine.wdvv_residual(u, v, w, y, beta, extras)
                if residual:
                    report.failures.append(f"beta={beta} ({u},{v},{w},{y}) extras={extras}: {residual}")
    return report


def owdvv_cases(engine: Engine, budget: int, which: str) -> Iterator[tuple[int, int, int, int, int, tuple[int, ...]]]:
    """Tuples (u, v, w, beta, k, extras) whose open WDVV coefficient is degree-consistent."""
    sp = engine.space
    n = sp.n
    basis = len(sp.enumerate_basis("relative"))
    degs = sp.rel_degrees
    max_beta = 1 if sp.family is Family.PROJ else budget
    us = range(basis) if which == "cor1" else (0,)
    for beta in range(max_beta + 1):
        for u, v, w in product(us, range(basis), range(basis)):
            for extras in [()] + [(x,) for x in range(basis)]:
                total = degs[v] + degs[w] + sum(degs[c] for c in extras)
                count = len(extras) + 1
                if which == "cor1":
                    total += degs[u]
                    count += 1
                top = n - 3 + sp.maslov(beta) + 2 * count - total
                if top < 0 or top % (n - 1):
                    continue
                k = top // (n - 1) - (1 if which == "cor2" else 0)
                if k >= 0:
                    yield u, v, w, beta, k, extras


def owdvv_report(engine: Engine, budget: int) -> Report:
    sp = engine.space
    report = Report(f"owdvv {sp.code}")
    identities = ("cor1", "cor2") if sp.lagrangian_trivial else ("cor1",)
    for which in identities:
        for u, v, w, beta, k, extras in owdvv_cases(engine, budget, which):
            try:
                residual = engine.owdvv_residual(which, u, v, w, beta, k, extras)
            except Unsupported:
                report.skipped += 1
                continue
            report.checked += 1
            if residual:
                report.failures.append(f"{which} beta={beta} k={k} ({u},{v},{w}) extras={extras}: {residual}")
    return report


def owdvv_suite(budget: int = 3) -> list[Report]:
    reports = []
    for fam, n in SUITE_SPACES + (("QO", 5),):
        engine = Engine(make_space(fam, n))
        reports.append(owdvv_report(engine, budget if (fam, n) != ("QO", 5) else min(budget, 2)))
    return reports


def mutation_suite(budget: int = 3) -> list[Report]:
    """Perturb one cached value and confirm that some residual notices."""
    reports = []
    closed = Engine(make_space("QO", 3))
    wdvv_report(closed, 1)
    target = ("C", (1,), (2, 2, 2))
    closed.memo[target] += 1
    report = Report("mutation closed GW_1(h2,h2,h2) + 1")
    report.checked = 1
    if wdvv_report(closed, 1).ok:
        report.failures.append("perturbation not detected")
    reports.append(report)

    opened = Engine(make_space("QO", 3))
    owdvv_report(opened, 2)
    seed_key = ("O", 1, 3, ())
    opened.memo[seed_key] = Fraction(3)
    report = Report("mutation open seed set to 3")
    report.checked = 1
    if owdvv_report(opened, 2).ok:
        report.failures.append("perturbation not detected")
    reports.append(report)
    return reports


# ----------------------------------------------------------------------
# rings


def rings_suite() -> list[Report]:
    reports = []
    for fam, n in RING_SPACES:
        engine = Engine(make_space(fam, n))
        absolute = small_quantum_table(engine)
        relative = relative_quantum_table(engine)
        reports += [
            verify_grading(absolute),
            verify_grading(relative),
            verify_unit(absolute),
            verify_unit(relative),
            verify_presentation(absolute),
            verify_presentation(relative),
            verify_homomorphism(relative, absolute),
        ]
    return reports


def assoc_suite() -> list[Report]:
    reports = []
    for fam, n in RING_SPACES:
        engine = Engine(make_space(fam, n))
        reports.append(verify_associativity(small_quantum_table(engine)))
        reports.append(verify_associativity(relative_quantum_table(engine)))
    return reports


# ----------------------------------------------------------------------
# sign change and vanishing


def odd_quadric_keys(engine: Engine, budget: int, max_len: int = 6) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    """Open keys (beta, k, classes) with classes among hhat^2..hhat^n."""
    sp = engine.space
    inner = list(range(2, sp.n + 1))

    def multisets(start: int, left: int) -> Iterator[tuple[int, ...]]:
        yield ()
        if left == 0:
            return
        for pos in range(start, len(inner)):
            for rest in multisets(pos, left - 1):
                yield (inner[pos],) + rest

    for beta in range(1, budget + 1):
        for classes in multisets(0, max_len):
            k = engine.boundary_count(beta, classes)
            if k is not None:
                yield beta, k, classes


def signs_suite(budget: int = 3) -> list[Report]:
    space = make_space("QO", 3)
    original = Engine(space)
    flipped = Engine(space, seed_sign=-1)
    report = Report("sign change QO:3")
    for beta, k, classes in odd_quadric_keys(original, budget):
        a = original.open_invariant(beta, k, classes, enhanced=True)
        b = flipped.open_invariant(beta, k, classes, enhanced=True)
        report.checked += 1
        if k % 2 == 1:
            expected = (-1) ** ((k - 1) // 2) * a
        else:
            expected = a if a == 0 else None
        if b != expected:
            report.failures.append(f"beta={beta} k={k} {classes}: {a} vs {b}")
        for r in range(1, k + 1) if k % 2 else ():
            # r boundary points traded for diamonds
            with_d = classes + (space.diamond,) * r  # type: ignore[operator]
            a_d = original.open_invariant(beta, k - r, with_d, enhanced=True)
            b_d = flipped.open_invariant(beta, k - r, with_d, enhanced=True)
            report.checked += 1
            if b_d != (-1) ** ((k - r + r - 1) // 2) * a_d:
                report.failures.append(f"beta={beta} k={k - r} {classes} +{r} diamonds")
    # every memoized open key obeys the rule too
    for key, value in original.memo.items():
        if key[0] != "O":
            continue
        k = key[2]
        report.checked += 1
        other = flipped.evaluate_raw(key)
        if k % 2 == 1 and other != (-1) ** ((k - 1) // 2) * value:
            report.failures.append(f"memo {key}")
        if k % 2 == 0 and (value or other):
            report.failures.append(f"memo {key} nonzero at even k")
    return [report]


def vanishing_suite(budget: int = 3) -> list[Report]:
    reports = []
    odd = Engine(make_space("QO", 3))
    report = Report("even k vanishing QO:3")
    for beta, k, classes in odd_quadric_keys(odd, budget):
        if k % 2 == 0:
            report.checked += 1
            if odd.open_invariant(beta, k, classes):
                report.failures.append(f"beta={beta} k={k} {classes}")
    reports.append(report)

    for n in (4, 6):
        even = Engine(make_space("QE", n))
        pdl = even.space.pdl
        report = Report(f"PD(L) vanishing QE:{n}")
        for beta in curve_classes(even.space, budget if n == 4 else min(budget, 2)):
            if not any(beta):
                continue
            for classes in admissible_closed(even.space, beta, 12):
                count = classes.count(pdl)
                if count % 2 == 1 or count == len(classes):
                    report.checked += 1
                    if even.closed_invariant(beta, classes):
                        report.failures.append(f"GW_{beta}{classes}")
        reports.append(report)

    for fam, n in (("QE", 4), ("QS", 2)):
        engine = Engine(make_space(fam, n))
        sp = engine.space
        report = Report(f"k >= 2 vanishing {sp.code}")
        basis = len(sp.rel_tags)
        for beta in range(budget + 1):
            for size in range(4):
                for classes in product(range(basis), repeat=size):
                    k = engine.boundary_count(beta, classes)
                    if k is not None and k >= 2:
                        report.checked += 1
                        if engine.open_invariant(beta, k, classes):
                            report.failures.append(f"beta={beta} k={k} {classes}")
        reports.append(report)
    return reports


SUITES: dict[str, Callable[[int], list[Report]]] = {
    "axioms": lambda budget: axioms_suite(budget),
    "wdvv": lambda budget: wdvv_suite(budget) + mutation_suite(budget)[:1],
    "owdvv": lambda budget: owdvv_suite(budget) + mutation_suite(budget)[1:],
    "assoc": lambda budget: assoc_suite(),
    "rings": lambda budget: rings_suite(),
    "signs": lambda budget: signs_suite(budget),
    "vanishing": lambda budget: vanishing_suite(budget),
}


def run_suite(name: str, budget: int = 3) -> list[Report]:
    if name == "all":
        out: list[Report] = []
        for suite in SUITES.values():
            out += suite(budget)
        return out
    return SUITES[name](budget)
