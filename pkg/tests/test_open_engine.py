from __future__ import annotations

from fractions import Fraction

import pytest

from quadogw.evaluator import Unsupported
from quadogw.geometry import make_space
from quadogw.open_engine import Engine, quadric_seed


def engine(family: str, n: int | None = None, **kwargs) -> Engine:
    return Engine(make_space(family, n), **kwargs)


def test_seed_sign() -> None:
    assert [quadric_seed(n) for n in (3, 5, 7, 9, 11)] == [2, -2, 2, -2, 2]
    assert quadric_seed(3, -1) == -2


def test_boundary_count() -> None:
    qo = engine("QO", 3)
    assert qo.boundary_count(1, ()) == 3
    assert qo.boundary_count(3, (2,) * 8) == 1
    assert qo.boundary_count(1, (2, 2)) == 1
    assert qo.boundary_count(1, (2,)) == 2
    assert qo.boundary_count(1, (3, 3, 3)) is None


def test_odd_quadric_values() -> None:
    qo = engine("QO", 3)
    assert qo.open_invariant(1, 3) == 2
    assert qo.open_invariant(3, 9) == 96
    assert qo.open_invariant(1, 1, ["g3"]) == 2
    assert qo.open_invariant(1, 1, ["g2", "g2"]) == 2
    assert qo.open_invariant(2, 4, ["g2"]) == 0
    assert qo.open_invariant(3, 1, ["g3"] * 3 + ["g2"] * 2) == 32
    assert engine("QO", 5).open_invariant(1, 3) == -2


def test_enhanced_values() -> None:
    qo = engine("QO", 3)
    assert qo.enhanced_invariant(0, 0, ["D", "g0"]) == 1
    assert qo.enhanced_invariant(1, 0, ["g3", "D"]) == -2
    assert qo.open_invariant(1, 0, ["g3", "D"]) == 0
    pn = engine("PN", 3)
    assert pn.enhanced_invariant(1, 0, ["g1", "g3"]) == Fraction(-1, 2)
    assert pn.enhanced_invariant(1, 0, ["D", "D"]) == 2
    assert pn.open_invariant(2, 0, ["g1", "g3"]) == 0


def test_projective_higher_degree_unsupported() -> None:
    with pytest.raises(Unsupported):
        engine("PN", 3).enhanced_invariant(2, 0, ["g3", "g3"])


def test_even_quadric_values() -> None:
    qe = engine("QE", 4)
    assert qe.open_invariant(1, 1, ["g2"] * 3) == 2
    assert qe.open_invariant(2, 1, ["g2"] * 5 + ["g3"]) == 116
    assert qe.open_invariant(1, 1, ["g2", "PDL", "PDL"]) == -2
    assert qe.open_closed_evaluate(1, ["g4"]) == 2
    assert qe.open_closed_evaluate(2, ["g2"] * 7) == 412
    for classes in (["g4"], ["g3", "g3"], ["g2", "g2", "g2", "g2"]):
        k = qe.boundary_count(1, [qe.space.rel_index(c) for c in classes])
        if k is not None and k >= 2:
            assert qe.open_invariant(1, k, classes) == 0
    assert qe.open_invariant(1, 3, ["g2"]) == 0


def test_surface_open_closed_sums_preimages() -> None:
    qs = engine("QS")
    sp = qs.space
    value = qs.open_closed_evaluate(1, ["g2"])
    assert value == qs.open_invariant(1, 1, ["g2"])
    # independent evaluation: both insertions of degree 2 come off by the divisor
    # axiom, leaving the line-through-a-point seeds GW_(1,0)(ll) = GW_(0,1)(ll) = 1
    ll = sp.abs_index("ll")
    total = Fraction(0)
    for beta in sp.varpi_preimages(1):
        eta = sum(c * sp.abs_divisor_integral(beta, i) for i, c in sp.eta.items())
        dual = sum(c * sp.abs_divisor_integral(beta, i) for i, c in sp.lagrangian_dual.items())
        total += -sp.spin_sign(beta) * eta * dual * 2 * qs.closed_invariant(beta, [ll])
    assert total == value == 2


def test_sign_flip_examples() -> None:
    flipped = engine("QO", 3, seed_sign=-1)
    assert flipped.open_invariant(1, 3) == -2
    assert flipped.open_invariant(3, 9) == 96
    assert flipped.store.engine_version != Engine.ENGINE_VERSION


def test_owdvv_residuals() -> None:
    qo = engine("QO", 3)
    for beta in range(1, 4):
        k = qo.boundary_count(beta, (1, 2))
        if k is not None:
            assert qo.owdvv_residual("cor2", None, 1, 2, beta, k + 0) == 0
    qo5 = engine("QO", 5)
    for beta in (1, 2):
        for k in range(0, 12):
            assert qo5.owdvv_residual("cor1", 2, 2, 1, beta, k) == 0
