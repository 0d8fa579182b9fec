from __future__ import annotations

from fractions import Fraction

import pytest

from quadogw.exact import identity, matmul
from quadogw.geometry import GeometryError, check_permutation_symmetry, make_space

ALL_SPACES = [("PN", 3), ("PN", 5), ("QO", 3), ("QO", 5), ("QE", 4), ("QE", 6), ("QS", 2)]


def test_relative_basis_odd_quadric() -> None:
    sp = make_space("QO", 3)
    assert [d for _, d in sp.enumerate_basis("relative")] == [0, 2, 4, 6, 4]
    assert [t for t, _ in sp.enumerate_basis("relative")][-1] == "D"


def test_absolute_bases() -> None:
    assert [d for _, d in make_space("QE", 4).enumerate_basis("absolute")] == [0, 2, 4, 6, 8, 4]
    assert [d for _, d in make_space("QS").enumerate_basis("absolute")] == [0, 2, 2, 4]


@pytest.mark.parametrize("family,n", [("PN", 4), ("QO", 4), ("QE", 5), ("QE", 2), ("QS", 3), ("PN", 1)])
def test_construction_rejects_bad_dimension(family: str, n: int) -> None:
    with pytest.raises(GeometryError):
        make_space(family, n)


def test_pairings() -> None:
    g, g_inv = make_space("QO", 3).pairing_matrix()
    for i in range(4):
        for j in range(4):
            assert g[i][j] == (2 if i + j == 3 else 0)
            assert g_inv[i][j] == (Fraction(1, 2) if i + j == 3 else 0)
    qe = make_space("QE", 4)
    assert qe.pairing[qe.pdl][qe.pdl] == 2
    g, _ = make_space("PN", 3).pairing_matrix()
    assert g == [[int(i + j == 3) for j in range(4)] for i in range(4)]


@pytest.mark.parametrize("family,n", ALL_SPACES)
def test_pairing_inverse_is_inverse(family: str, n: int) -> None:
    g, g_inv = make_space(family, n).pairing_matrix()
    assert matmul(g, g_inv) == identity(len(g))


@pytest.mark.parametrize("family,n", ALL_SPACES)
def test_triple_integrals_symmetric(family: str, n: int) -> None:
    assert check_permutation_symmetry(make_space(family, n))


def test_triple_integral_examples() -> None:
    assert make_space("QO", 5).triple_integral(1, 2, 2) == 2
    qe = make_space("QE", 4)
    assert qe.triple_integral(qe.pdl, qe.pdl, 0) == 2
    assert make_space("PN", 3).triple_integral(0, 1, 1) == 0


def test_characteristic_numbers() -> None:
    qo = make_space("QO", 3)
    assert qo.chern((2,)) == 6 and qo.spin_sign((2,)) == 1
    assert make_space("PN", 3).spin_sign((1,)) == 1
    assert make_space("PN", 5).spin_sign((1,)) == -1
    assert make_space("QO", 5).maslov(1) == 10


@pytest.mark.parametrize("family,n", ALL_SPACES)
def test_maslov_is_twice_chern(family: str, n: int) -> None:
    sp = make_space(family, n)
    for beta in ([(a, b) for a in range(3) for b in range(3)] if sp.is_surface else [(d,) for d in range(4)]):
        assert sp.maslov(sp.varpi(beta)) == 2 * sp.chern(beta)


def test_varpi() -> None:
    assert make_space("PN", 3).varpi((1,)) == 2
    assert sorted(make_space("QS").varpi_preimages(2)) == [(0, 2), (1, 1), (2, 0)]
    assert make_space("QO", 3).varpi((4,)) == 4
    assert make_space("PN", 3).varpi_preimages(3) == []


def test_divisor_integrals() -> None:
    assert make_space("PN", 3).divisor_integral(3, 1) == Fraction(3, 2)
    assert make_space("QO", 3).divisor_integral(2, 1) == 2
    qs = make_space("QS")
    assert qs.divisor_integral((1, 2), qs.abs_index("ls"), side="absolute") == 2
    assert qs.divisor_integral((1, 2), qs.abs_index("l"), side="absolute") == 1


def test_rho_and_sigma() -> None:
    qo = make_space("QO", 3)
    assert qo.rho(qo.diamond) == {}
    qe = make_space("QE", 4)
    assert qe.rho(2) == {2: 1}
    with pytest.raises(GeometryError, match="no relative lift"):
        qe.sigma(qe.pdl)
    for j in range(qe.n + 1):
        assert qe.rho(next(iter(qe.sigma(j)))) == {j: 1}


def test_surface_lagrangian_class_is_antidiagonal() -> None:
    qs = make_space("QS")
    dual = qs.lagrangian_dual
    assert dual == {qs.abs_index("ls"): 1, qs.abs_index("l"): -1}
    assert qs.integrate(qs.cup_combo(dual, dual)) == -2
    assert qs.integrate(qs.cup_combo(dual, qs.eta)) == 1
    assert not qs.lagrangian_trivial
