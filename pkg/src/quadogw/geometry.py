"""Topological data for the supported pairs (X, L).

Four families are supported:

* ``PN``: odd-dimensional projective space with the real projective space.
* ``QO``: odd-dimensional quadric with its real sphere.
* ``QE``: even-dimensional quadric (n >= 4) with its real sphere.
* ``QS``: the quadric surface P^1 x P^1 with the antidiagonal sphere.

Cohomology classes are plain integer indices into an ordered basis.  The
absolute basis is h^0..h^n, followed by PD(L) for ``QE``; the surface uses
``1, l, l*, l.l*``.  The relative basis is hhat^0..hhat^n followed by the
diamond class when [L] = 0.  For ``QE`` the index n+1 on the relative side
denotes the extended PD(L) insertion used by the open-closed relation.

Linear combinations of classes are ``dict[int, Fraction]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import permutations

from .exact import Matrix, inverse

Combo = dict[int, Fraction]
AbsClass = tuple[int, ...]


class GeometryError(ValueError):
    """Invalid space, class or curve class."""


class Family(str, Enum):
    PROJ = "PN"
    QUADRIC_ODD = "QO"
    QUADRIC_EVEN = "QE"
    QUADRIC_SURFACE = "QS"


SURFACE_TAGS = ("h0", "l", "ls", "ll")


def combo_add(target: Combo, source: Combo, scale: Fraction | int = 1) -> Combo:
    for idx, coef in source.items():
        value = target.get(idx, Fraction(0)) + coef * scale
        if value:
            target[idx] = value
        else:
            target.pop(idx, None)
    return target


@dataclass(frozen=True)
class Space:
    family: Family
    n: int

    def __post_init__(self) -> None:
        fam, n = Family(self.family), self.n
        object.__setattr__(self, "family", fam)
        if fam is Family.PROJ and (n < 3 or n % 2 == 0):
            raise GeometryError("projective space needs odd n >= 3")
        if fam is Family.QUADRIC_ODD and (n < 3 or n % 2 == 0):
            raise GeometryError("odd quadric needs odd n >= 3")
        if fam is Family.QUADRIC_EVEN and (n < 4 or n % 2):
            raise GeometryError("even quadric needs even n >= 4")
        if fam is Family.QUADRIC_SURFACE and n != 2:
            raise GeometryError("the quadric surface has n = 2")

    @property
    def code(self) -> str:
        return f"{self.family.value}:{self.n}"

    @property
    def lagrangian_trivial(self) -> bool:
        return self.family in (Family.PROJ, Family.QUADRIC_ODD)

    @property
    def is_surface(self) -> bool:
        return self.family is Family.QUADRIC_SURFACE

    # ------------------------------------------------------------------
    # bases
    @cached_property
    def abs_tags(self) -> tuple[str, ...]:
        if self.is_surface:
            return SURFACE_TAGS
        tags = tuple(f"h{j}" for j in range(self.n + 1))
        if self.family is Family.QUADRIC_EVEN:
            tags += ("PDL",)
        return tags

    @cached_property
    def abs_degrees(self) -> tuple[int, ...]:
        if self.is_surface:
            return (0, 2, 2, 4)
        degs = tuple(2 * j for j in range(self.n + 1))
        if self.family is Family.QUADRIC_EVEN:
            degs += (self.n,)
        return degs

    @cached_property
    def rel_tags(self) -> tuple[str, ...]:
        tags = tuple(f"g{j}" for j in range(self.n + 1))
        if self.lagrangian_trivial:
            tags += ("D",)
        elif self.family is Family.QUADRIC_EVEN:
            tags += ("PDL",)
        return tags

    @cached_property
    def rel_degrees(self) -> tuple[int, ...]:
        degs = tuple(2 * j for j in range(self.n + 1))
        if self.lagrangian_trivial:
            degs += (self.n + 1,)
        elif self.family is Family.QUADRIC_EVEN:
            degs += (self.n,)
        return degs

    @property
    def diamond(self) -> int | None:
        """Relative index of the diamond class, when [L] = 0."""
        return self.n + 1 if self.lagrangian_trivial else None

    @property
    def ext_pdl(self) -> int | None:
        """Relative index reserved for the extended PD(L) insertion."""
        return self.n + 1 if self.family is Family.QUADRIC_EVEN else None

    @property
    def pdl(self) -> int | None:
        return self.n + 1 if self.family is Family.QUADRIC_EVEN else None

    def enumerate_basis(self, side: str) -> list[tuple[str, int]]:
        if side == "absolute":
            return list(zip(self.abs_tags, self.abs_degrees))
        if side == "relative":
            tags, degs = self.rel_tags, self.rel_degrees
            if self.family is Family.QUADRIC_EVEN:
                tags, degs = tags[:-1], degs[:-1]
            return list(zip(tags, degs))
        raise GeometryError(f"unknown side {side!r}")

    def abs_index(self, tag: str) -> int:
        if self.is_surface and tag in ("1", "lstar", "l*"):
            tag = {"1": "h0", "lstar": "ls", "l*": "ls"}[tag]
        try:
            return self.abs_tags.index(tag)
        except ValueError:
            raise GeometryError(f"class {tag!r} not in the absolute basis of {self.code}") from None

    def rel_index(self, tag: str) -> int:
        try:
            return self.rel_tags.index(tag)
        except ValueError:
            raise GeometryError(f"class {tag!r} not in the relative basis of {self.code}") from None

    # ------------------------------------------------------------------
    # cup product and pairing
    def cup(self, a: int, b: int) -> Combo:
        n = self.n
        if self.is_surface:
            if a == 0:
                return {b: Fraction(1)}
            if b == 0:
                return {a: Fraction(1)}
            if {a, b} == {1, 2}:
                return {3: Fraction(1)}
            return {}
        pdl = self.pdl
        if pdl is not None and (a == pdl or b == pdl):
            other = b if a == pdl else a
            if other == 0:
                return {pdl: Fraction(1)}
            if other == pdl:
                return {n: Fraction((-1) ** (n // 2))}
            return {}
        if a + b > n:
            return {}
        return {a + b: Fraction(1)}

    def integrate(self, combo: Combo) -> Fraction:
        top = 3 if self.is_surface else self.n
        weight = 1 if self.family is Family.PROJ or self.is_surface else 2
        return combo.get(top, Fraction(0)) * weight

    def cup_combo(self, x: Combo, y: Combo) -> Combo:
        out: Combo = {}
        for a, ca in x.items():
            for b, cb in y.items():
                combo_add(out, self.cup(a, b), ca * cb)
        return out

    def triple_integral(self, a: int, b: int, c: int) -> Fraction:
        return self.integrate(self.cup_combo(self.cup(a, b), {c: Fraction(1)}))

    @cached_property
    def pairing(self) -> Matrix:
        size = len(self.abs_tags)
        return [[self.integrate(self.cup(i, j)) for j in range(size)] for i in range(size)]

    @cached_property
    def pairing_inverse(self) -> Matrix:
        return inverse(self.pairing)

    def pairing_matrix(self) -> tuple[Matrix, Matrix]:
        return self.pairing, self.pairing_inverse

    @cached_property
    def inverse_pairs(self) -> tuple[tuple[int, int, Fraction], ...]:
        """Nonzero entries (m, l, g^{ml}) of the inverse pairing."""
        ginv = self.pairing_inverse
        return tuple(
            (m, l, ginv[m][l])
            for m in range(len(ginv))
            for l in range(len(ginv))
            if ginv[m][l] != 0
        )

    # ------------------------------------------------------------------
    # curve classes
    def check_abs_class(self, beta: AbsClass) -> AbsClass:
        beta = tuple(int(b) for b in beta)
        size = 2 if self.is_surface else 1
        if len(beta) != size or any(b < 0 for b in beta):
            raise GeometryError(f"bad curve class {beta} for {self.code}")
        return beta

    def chern(self, beta: AbsClass) -> int:
        if self.is_surface:
            return 2 * beta[0] + 2 * beta[1]
        if self.family is Family.PROJ:
            return (self.n + 1) * beta[0]
        return self.n * beta[0]

    def maslov(self, beta: int) -> int:
        if self.family is Family.PROJ:
            return (self.n + 1) * beta
        return 2 * self.n * beta

    def spin_sign(self, beta: AbsClass) -> int:
        if self.family is Family.PROJ:
            return (-1) ** (((self.n + 1) // 2) * beta[0])
        return 1

    def varpi(self, beta: AbsClass) -> int:
        if self.is_surface:
            return beta[0] + beta[1]
        if self.family is Family.PROJ:
            return 2 * beta[0]
        return beta[0]

    def varpi_preimages(self, beta: int) -> list[AbsClass]:
        if beta < 0:
            return []
        if self.is_surface:
            return [(a, beta - a) for a in range(beta + 1)]
        if self.family is Family.PROJ:
            return [(beta // 2,)] if beta % 2 == 0 else []
        return [(beta,)]

    def in_image_of_varpi(self, beta: int) -> bool:
        return bool(self.varpi_preimages(beta))

    def abs_divisor_integral(self, beta: AbsClass, divisor: int) -> Fraction:
        if self.abs_degrees[divisor] != 2:
            raise GeometryError("divisor must have degree 2")
        if self.is_surface:
            return Fraction(beta[divisor - 1])
        return Fraction(beta[0])

    def rel_divisor_integral(self, beta: int, divisor: int) -> Fraction:
        if divisor != 1:
            raise GeometryError("divisor must have degree 2")
        if self.family is Family.PROJ:
            return Fraction(beta, 2)
        return Fraction(beta)

    def divisor_integral(self, beta: int | AbsClass, divisor: int, side: str = "relative") -> Fraction:
        if side == "absolute":
            return self.abs_divisor_integral(self.check_abs_class(beta), divisor)  # type: ignore[arg-type]
        return self.rel_divisor_integral(int(beta), divisor)  # type: ignore[arg-type]

    # ------------------------------------------------------------------
    # maps between absolute and relative cohomology
    def rho(self, rel: int) -> Combo:
        if rel == self.diamond:
            return {}
        if rel == self.ext_pdl:
            return {self.pdl: Fraction(1)}  # type: ignore[dict-item]
        if self.is_surface:
            return {0: {0: Fraction(1)}, 1: {1: Fraction(1), 2: Fraction(1)}, 2: {3: Fraction(2)}}[rel]
        return {rel: Fraction(1)}

    def sigma(self, absolute: int) -> Combo:
        if self.is_surface:
            if absolute == 0:
                return {0: Fraction(1)}
            if absolute == 3:
                return {2: Fraction(1, 2)}
            raise GeometryError(f"no relative lift for {self.abs_tags[absolute]}")
        if absolute == self.pdl:
            raise GeometryError("no relative lift for PDL")
        return {absolute: Fraction(1)}

    @cached_property
    def boundary_degree(self) -> int:
        """Degree of the boundary point constraint, i.e. dim L."""
        return self.n

    # ------------------------------------------------------------------
    # adapted basis used by the relative product and the open recursion
    @cached_property
    def adapted_basis(self) -> tuple[Combo, ...]:
        """Absolute basis whose first K+1 entries are rho of hhat^0..hhat^K."""
        if self.is_surface:
            return (
                {0: Fraction(1)},
                {1: Fraction(1), 2: Fraction(1)},
                {3: Fraction(2)},
                {2: Fraction(1), 1: Fraction(-1)},
            )
        return tuple({i: Fraction(1)} for i in range(len(self.abs_tags)))

    @property
    def adapted_cutoff(self) -> int:
        """K: the last adapted index lying in the image of rho."""
        return 2 if self.is_surface else self.n

    @cached_property
    def adapted_inverse_pairs(self) -> tuple[tuple[int, int, Fraction], ...]:
        basis = self.adapted_basis
        g = [[self.integrate(self.cup_combo(x, y)) for y in basis] for x in basis]
        ginv = inverse(g)
        size = len(basis)
        return tuple((m, l, ginv[m][l]) for m in range(size) for l in range(size) if ginv[m][l] != 0)

    @cached_property
    def lagrangian_dual(self) -> Combo:
        """Delta_L = PD([L]) in the native absolute basis (only when [L] != 0)."""
        if self.family is Family.QUADRIC_EVEN:
            return {self.n + 1: Fraction(1)}
        if self.is_surface:
            return {2: Fraction(1), 1: Fraction(-1)}
        raise GeometryError("[L] = 0 for this space")

    @cached_property
    def eta(self) -> Combo:
        """A class eta with  integral over L of eta equal to 1, written via Delta_L."""
        dl = self.lagrangian_dual
        self_int = self.integrate(self.cup_combo(dl, dl))
        # eta is the multiple of Delta_L whose pairing with Delta_L is 1
        return {i: c / self_int for i, c in dl.items()}


def check_permutation_symmetry(space: Space) -> bool:
    size = len(space.abs_tags)
    for a in range(size):
        for b in range(size):
            for c in range(size):
                values = {space.triple_integral(*p) for p in permutations((a, b, c))}
                if len(values) != 1:
                    return False
    return True


def make_space(family: str | Family, n: int | None = None) -> Space:
    fam = Family(family)
    if fam is Family.QUADRIC_SURFACE:
        n = 2 if n is None else n
    if n is None:
        raise GeometryError("n is required")
    return Space(fam, int(n))
