"""Small quantum products, relative products, and their verification.

Ring elements are sparse dicts ``{(basis_index, T_exponent): coefficient}``.
The exponent is always the relative class, so for projective space ``T``
stands for ``q^(1/2)`` and for the quadrics ``T = q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .evaluator import Unsupported
from .exact import rank
from .geometry import Family, Space
from .open_engine import Engine

Element = dict[tuple[int, int], Fraction]


def add_into(target: Element, source: Element, scale: Fraction | int = 1) -> Element:
    for key, coef in source.items():
        value = target.get(key, Fraction(0)) + coef * scale
        if value:
            target[key] = value
        else:
            target.pop(key, None)
    return target


def shift(elem: Element, exponent: int) -> Element:
    return {(i, e + exponent): c for (i, e), c in elem.items()}


@dataclass
class StructureConstants:
    """Lazily filled multiplication table of a quantum product."""

    space: Space
    side: str
    tags: tuple[str, ...]
    degrees: tuple[int, ...]
    entry_fn: Callable[[int, int], Element]
    table: dict[tuple[int, int], Element] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.tags)

    def weight(self, exponent: int) -> int:
        return self.space.maslov(exponent)

    def entry(self, a: int, b: int) -> Element:
        key = (min(a, b), max(a, b))
        if key not in self.table:
            self.table[key] = self.entry_fn(*key)
        return self.table[key]

    def basis(self, i: int) -> Element:
        return {(i, 0): Fraction(1)}

    def mul(self, x: Element, y: Element) -> Element:
        out: Element = {}
        for (a, ea), ca in x.items():
            for (b, eb), cb in y.items():
                add_into(out, shift(self.entry(a, b), ea + eb), ca * cb)
        return out

    def power(self, x: Element, exponent: int) -> Element:
        result = self.basis(0)
        for _ in range(exponent):
            result = self.mul(result, x)
        return result

    def fill(self) -> list[tuple[int, int]]:
        """Compute every entry that the engine supports; returns the skipped pairs."""
        skipped = []
        for a in range(self.size):
            for b in range(a, self.size):
                try:
                    self.entry(a, b)
                except Unsupported:
                    skipped.append((a, b))
        return skipped

    def format_element(self, elem: Element) -> str:
        return format_element(self, elem)


def format_element(table: StructureConstants, elem: Element) -> str:
    """ASCII rendering such as ``T^2 - 1/2*T*diamond``."""
    variable = "T"
    terms = []
    for (i, e), c in sorted(elem.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        factors = []
        if e:
            factors.append(variable if e == 1 else f"{variable}^{e}")
        if i != 0:
            tag = table.tags[i]
            factors.append("diamond" if tag == "D" else tag)
        terms.append((c, factors))
    return _format_terms(terms)


def _format_terms(terms: Iterable[tuple[Fraction, list[str]]]) -> str:
    pieces = []
    for coef, factors in terms:
        if coef == 0:
            continue
        parts = ([] if abs(coef) == 1 and factors else [str(abs(coef))]) + factors
        pieces.append(("-" if coef < 0 else "+", "*".join(parts)))
    if not pieces:
        return "0"
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def _abs_classes_for(space: Space, total_degree: int) -> list[tuple[int, ...]]:
    """Absolute curve classes whose Chern weight is at most half the given degree."""
    limit = total_degree // 2
    out = []
    if space.is_surface:
        for d1 in range(limit + 1):
            for d2 in range(limit + 1):
                if 0 < space.chern((d1, d2)) <= limit:
                    out.append((d1, d2))
        return out
    d = 1
    while space.chern((d,)) <= limit:
        out.append((d,))
        d += 1
    return out


def small_quantum_table(engine: Engine) -> StructureConstants:
    sp = engine.space
    ginv = sp.inverse_pairs
    degs = sp.abs_degrees

    def entry(v: int, u: int) -> Element:
        out: Element = {}
        for m, l, g in ginv:
            value = sp.triple_integral(v, u, l)
            if value:
                add_into(out, {(m, 0): value * g})
        for hat in _abs_classes_for(sp, degs[v] + degs[u]):
            tw = sp.spin_sign(hat)
            exp = sp.varpi(hat)
            for m, l, g in ginv:
                value = engine.evaluate_raw(("C", hat, (v, u, l)))
                if value:
                    add_into(out, {(m, exp): tw * value * g})
        return out

    return StructureConstants(sp, "absolute", sp.abs_tags, sp.abs_degrees, entry)


def relative_quantum_table(engine: Engine) -> StructureConstants:
    sp = engine.space
    basis = sp.enumerate_basis("relative")
    tags = tuple(t for t, _ in basis)
    degrees = tuple(d for _, d in basis)
    cutoff = sp.adapted_cutoff
    adapted = sp.adapted_basis
    pairs = [(m, l, g) for m, l, g in sp.adapted_inverse_pairs if m <= cutoff]
    diamond = sp.diamond

    def entry(v: int, u: int) -> Element:
        out: Element = {}
        rv, ru = sp.rho(v), sp.rho(u)
        if rv and ru:
            top = max(degrees[v] + degrees[u], 0)
            hats = [(0,) * (2 if sp.is_surface else 1)] + _abs_classes_for(sp, top)
            for hat in hats:
                tw = sp.spin_sign(hat)
                exp = sp.varpi(hat)
                for m, l, g in pairs:
                    value = engine.closed_combo(hat, [rv, ru, adapted[l]])
                    if value:
                        add_into(out, {(m, exp): tw * value * g})
        if diamond is not None:
            beta = 0
            # OGW-bar_{beta,0}(v, u) can be nonzero only while mu(beta) <= deg v + deg u + 3 - n
            while sp.maslov(beta) <= degrees[v] + degrees[u] + 3 - sp.n:
                value = engine.open_invariant(beta, 0, [v, u], enhanced=True)
                if value:
                    add_into(out, {(diamond, beta): value})
                beta += 1
        return out

    return StructureConstants(sp, "relative", tags, degrees, entry)


# ----------------------------------------------------------------------
# verification


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": self.failures[:20],
        }


def verify_grading(table: StructureConstants) -> Report:
    report = Report(f"grading {table.space.code} {table.side}")
    skipped = table.fill()
    report.skipped = len(skipped)
    for (a, b), elem in table.table.items():
        for (i, e), _ in elem.items():
            report.checked += 1
            if table.degrees[i] + table.weight(e) != table.degrees[a] + table.degrees[b]:
                report.failures.append(f"{table.tags[a]}*{table.tags[b]} has term {table.tags[i]} T^{e}")
    return report


def verify_associativity(table: StructureConstants) -> Report:
    report = Report(f"associativity {table.space.code} {table.side}")
    for a, b, c in product(range(table.size), repeat=3):
        x, y, z = table.basis(a), table.basis(b), table.basis(c)
        try:
            left = table.mul(table.mul(x, y), z)
            right = table.mul(x, table.mul(y, z))
        except Unsupported:
            report.skipped += 1
            continue
        report.checked += 1
        if left != right:
            report.failures.append(f"({table.tags[a]},{table.tags[b]},{table.tags[c]})")
    return report


def verify_unit(table: StructureConstants) -> Report:
    report = Report(f"unit {table.space.code} {table.side}")
    for a in range(table.size):
        report.checked += 1
        if table.entry(0, a) != table.basis(a):
            report.failures.append(table.tags[a])
    return report


def _const(value: Fraction | int, exponent: int = 0) -> Element:
    return {(0, exponent): Fraction(value)} if value else {}


def _combine(*terms: tuple[Fraction | int, Element]) -> Element:
    out: Element = {}
    for coef, elem in terms:
        add_into(out, elem, coef)
    return out


@dataclass
class PresentationData:
    generators: dict[str, Element]
    relations: dict[str, Element]
    monomials: list[Element]


def presentation_data(table: StructureConstants) -> PresentationData:
    """Generators, relations (evaluated in the table) and the monomial basis."""
    sp = table.space
    n = sp.n
    fam = sp.family
    mul, power = table.mul, table.power
    q_exp = 2 if fam is Family.PROJ else 1
    q = _const(1, q_exp)
    relative = table.side == "relative"
    if fam is Family.QUADRIC_SURFACE and not relative:
        l, ls = table.basis(1), table.basis(2)
        return PresentationData(
            {"l": l, "ls": ls},
            {"l^2 - q": _combine((1, mul(l, l)), (-1, q)), "ls^2 - q": _combine((1, mul(ls, ls)), (-1, q))},
            [table.basis(0), l, ls, mul(l, ls)],
        )
    x = table.basis(1)
    xs = [power(x, j) for j in range(n + 2)]
    gens = {"x": x}
    rels: dict[str, Element] = {}
    monomials = xs[: n + 1]
    if fam is Family.PROJ:
        s_top = (-1) ** ((n + 1) // 2)
        if relative:
            y = table.basis(sp.diamond)  # type: ignore[arg-type]
            gens["y"] = y
            s_y = (-1) ** ((n - 1) // 2)
            rels["y^2 - 2*q^(1/2)*y"] = _combine((1, mul(y, y)), (-2, shift(y, 1)))
            rels[f"x^{n + 1} - ({s_top})*q - ({s_y})*(1/2)*q^(1/2)*y"] = _combine(
                (1, xs[n + 1]), (-s_top, q), (-Fraction(s_y, 2), shift(y, 1))
            )
            rels["x*y"] = mul(x, y)
            monomials = monomials + [y]
        else:
            rels[f"x^{n + 1} - ({s_top})*q"] = _combine((1, xs[n + 1]), (-s_top, q))
        return PresentationData(gens, rels, monomials)
    rels[f"x^{n + 1} - 4*q*x"] = _combine((1, xs[n + 1]), (-4, shift(x, 1)))
    if fam is Family.QUADRIC_ODD and relative:
        y = table.basis(sp.diamond)  # type: ignore[arg-type]
        gens["y"] = y
        rels["x*y"] = mul(x, y)
        rels["y^2"] = mul(y, y)
        monomials = monomials + [y]
    if fam is Family.QUADRIC_EVEN and not relative:
        y = table.basis(sp.pdl)  # type: ignore[arg-type]
        gens["y"] = y
        half = n // 2
        rels["x*y"] = mul(x, y)
        rels[f"y^2 - ({(-1) ** (half + 1)})*4*q - ({(-1) ** half})*x^{n}"] = _combine(
            (1, mul(y, y)), (-4 * (-1) ** (half + 1), q), (-((-1) ** half), xs[n])
        )
        monomials = monomials + [y]
    return PresentationData(gens, rels, monomials)


def verify_presentation(table: StructureConstants) -> Report:
    report = Report(f"presentation {table.space.code} {table.side}")
    data = presentation_data(table)
    for name, value in data.relations.items():
        report.checked += 1
        if value:
            report.failures.append(f"{name} = {format_element(table, value)}")
    # generation: the T^0 parts of the monomials form an invertible matrix
    matrix = [[m.get((i, 0), Fraction(0)) for i in range(table.size)] for m in data.monomials]
    report.checked += 1
    if len(matrix) != table.size or rank(matrix) != table.size:
        report.failures.append("monomials do not form a basis")
    return report


def rho_matrix(space: Space, relative: StructureConstants) -> list[list[Fraction]]:
    size = len(space.abs_tags)
    rows = []
    for i in range(relative.size):
        image = space.rho(i)
        rows.append([image.get(j, Fraction(0)) for j in range(size)])
    return rows


def apply_rho(space: Space, elem: Element) -> Element:
    out: Element = {}
    for (i, e), c in elem.items():
        for j, coef in space.rho(i).items():
            add_into(out, {(j, e): coef * c})
    return out


def verify_homomorphism(relative: StructureConstants, absolute: StructureConstants) -> Report:
    sp = relative.space
    report = Report(f"homomorphism {sp.code}")
    for a in range(relative.size):
        for b in range(a, relative.size):
            try:
                left = apply_rho(sp, relative.entry(a, b))
            except Unsupported:
                report.skipped += 1
                continue
            right: Element = {}
            for i, ci in sp.rho(a).items():
                for j, cj in sp.rho(b).items():
                    add_into(right, absolute.entry(i, j), ci * cj)
            report.checked += 1
            if left != right:
                report.failures.append(f"({relative.tags[a]},{relative.tags[b]})")
    matrix = rho_matrix(sp, relative)
    r = rank(matrix)
    report.checked += 1
    if sp.lagrangian_trivial:
        # surjective, with kernel spanned by the diamond class
        if r != len(sp.abs_tags) or any(matrix[sp.diamond]):  # type: ignore[index]
            report.failures.append("rho is not onto with kernel spanned by y")
    elif r != relative.size:
        report.failures.append("rho is not injective")
    return report


# ----------------------------------------------------------------------
# symbolic presentations for complete intersections


class PresentationError(ValueError):
    """The complete-intersection data violates the hypotheses."""


Monomial = tuple[int, ...]


def _format_poly(variables: Sequence[str], terms: Iterable[tuple[Fraction, Monomial]]) -> str:
    rendered = []
    for coef, mono in terms:
        factors = [name if power == 1 else f"{name}^{power}" for name, power in zip(variables, mono) if power]
        # the Novikov variable is printed right after the coefficient
        if "q" in variables and mono[variables.index("q")]:
            q_factor = factors.pop()
            factors.insert(0, q_factor)
        rendered.append((coef, factors))
    return _format_terms(rendered)


@dataclass
class RingPresentation:
    variables: list[dict]
    relations: list[str]
    source: str

    def as_dict(self) -> dict:
        return {"variables": self.variables, "relations": self.relations, "source": self.source}


def ci_presentation(
    n: int,
    degrees: Sequence[int],
    primitive_pairing: Sequence[Sequence[Fraction | int]] = (),
    l_trivial: bool = False,
) -> RingPresentation:
    if n < 3:
        raise PresentationError("need n >= 3")
    if not degrees or any(d < 2 for d in degrees):
        raise PresentationError("hypersurface degrees must be >= 2")
    delta = sum(d - 1 for d in degrees)
    mu = 2 * (n + 1 - delta)
    if mu <= n + 1:
        raise PresentationError(f"minimal Maslov index {mu} is not above n + 1 = {n + 1}")
    upsilon = 1
    total = 1
    for d in degrees:
        upsilon *= d**d
        total *= d
    g = [[Fraction(x) for x in row] for row in primitive_pairing]
    p = len(g)
    if any(len(row) != p for row in g) or any(g[i][j] != g[j][i] for i in range(p) for j in range(p)):
        raise PresentationError("primitive pairing must be a symmetric square matrix")
    names = ["x"] + [f"w{j + 1}" for j in range(p)] + (["y"] if l_trivial else []) + ["q"]
    nvar = len(names)

    def mono(**powers: int) -> Monomial:
        out = [0] * nvar
        for name, value in powers.items():
            out[names.index(name)] += value
        return tuple(out)

    relations = [_format_poly(names, [(Fraction(1), mono(x=n + 1)), (Fraction(-upsilon), mono(x=delta, q=1))])]
    for j in range(p):
        for k in range(j, p):
            wj, wk = f"w{j + 1}", f"w{k + 1}"
            square = mono(**{wj: 1}) if j != k else mono(**{wj: 2})
            if j != k:
                square = tuple(a + b for a, b in zip(square, mono(**{wk: 1})))
            c = g[j][k] / total
            relations.append(
                _format_poly(
                    names,
                    [(Fraction(1), square), (-c, mono(x=n)), (c * upsilon, mono(x=delta - 1, q=1))],
                )
            )
    for j in range(p):
        relations.append(_format_poly(names, [(Fraction(1), mono(**{"x": 1, f"w{j + 1}": 1}))]))
    if l_trivial:
        relations.append(_format_poly(names, [(Fraction(1), mono(y=2))]))
        relations.append(_format_poly(names, [(Fraction(1), mono(y=1, x=1))]))
        for j in range(p):
            relations.append(_format_poly(names, [(Fraction(1), mono(**{"y": 1, f"w{j + 1}": 1}))]))
    variables = [{"name": "x", "degree": 2}]
    variables += [{"name": f"w{j + 1}", "degree": n} for j in range(p)]
    if l_trivial:
        variables.append({"name": "y", "degree": n + 1})
    source = "complete intersection, [L] = 0" if l_trivial else "complete intersection, [L] != 0"
    return RingPresentation(variables, relations, source)
