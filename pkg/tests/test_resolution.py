import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacsyz.field import QQ, PrimeField
from jacsyz.groebner import FreeModule, GradedModuleMap
from jacsyz.oracle import quotient_dimension
from jacsyz.polyring import PolyRing, parse
from jacsyz.resolution import (
    BettiTable,
    ResolutionTooLong,
    composes_to_zero,
    is_minimal,
    minimize_presentation,
    resolve,
    resolve_submodule,
)

R = PolyRing(3, QQ)
Fp = PolyRing(3, PrimeField(32003))


def ideal_presentation(polys):
    ring = polys[0].ring
    return GradedModuleMap.from_rows(ring, [list(polys)], [0], [p.degree() for p in polys])


def test_koszul_resolution_of_the_point():
    maps, betti = resolve(ideal_presentation(list(R.gens)))
    assert betti.shape() == "0 -> S(-3) -> S(-2)^3 -> S(-1)^3 -> S"
    assert composes_to_zero(maps) and is_minimal(maps)


def test_twisted_cubic():
    S = PolyRing(4, QQ)
    x, y, z, w = S.gens
    minors = [x * z - y * y, x * w - y * z, y * w - z * z]
    _, betti = resolve(ideal_presentation(minors))
    assert betti == BettiTable({(0, 0): 1, (1, 2): 3, (2, 3): 2})


@pytest.mark.parametrize("text,d", [("x^2 + y^2 + z^2", 2), ("x^3 + y^3 + z^3", 3), ("x^4 + y^4 + z^4 + x*y*z^2", 4)])
def test_milnor_algebra_of_smooth_curve_is_a_complete_intersection(text, d):
    f = parse(text)
    _, betti = resolve(ideal_presentation(list(f.gradient())))
    k = d - 1
    assert betti == BettiTable({(0, 0): 1, (1, k): 3, (2, 2 * k): 3, (3, 3 * k): 1})


def test_minimize_presentation_drops_units():
    x, y, z = R.gens
    # the cokernel of [[1, x], [0, y]] is S / (y)
    M = GradedModuleMap.from_rows(R, [[R.one, x], [R.zero, y]], [0, 0], [0, 1])
    P = minimize_presentation(M)
    assert P.shape == (1, 1)
    assert P.entries[0][0] == -y or P.entries[0][0] == y


def test_resolve_submodule_stage_zero_holds_generators():
    F = FreeModule(R, [0])
    gens = [F.element([p]) for p in R.gens] + [F.element([parse("x + y")])]
    maps, betti = resolve_submodule(gens, F)
    assert betti.shape() == "0 -> S(-3) -> S(-2)^3 -> S(-1)^3"
    assert composes_to_zero(maps)


def test_resolution_too_long():
    with pytest.raises(ResolutionTooLong) as exc:
        resolve(ideal_presentation(list(R.gens)), max_length=1)
    assert exc.value.betti.rank(1) == 3


def test_betti_table_text_and_json():
    b = BettiTable.from_degrees([[0], [4, 4, 4], [7, 7, 7], [9]])
    assert b.shape() == "0 -> S(-9) -> S(-7)^3 -> S(-4)^3 -> S"
    assert BettiTable.from_json(b.to_json()) == b
    assert b.to_json()[1] == {"stage": 1, "twist": -4, "multiplicity": 3}
    lines = b.staircase().splitlines()
    assert lines[1].split() == ["total:", "1", "3", "3", "1"]
    assert lines[2].split() == ["0:", "1", ".", ".", "."]
    assert lines[3].split() == ["3:", ".", "3", ".", "."]
    assert BettiTable().shape() == "0"


def _random_form(ring, degree, rng):
    return ring.poly({ring.exponents(mk): rng.randint(-3, 3) for mk in ring.monomials(degree)})


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_betti_numbers_give_the_hilbert_function(seed):
    # sum_i (-1)^i sum_a beta_{i,a} dim S_{e-a} = dim (S/I)_e, checked by row reduction
    rng = random.Random(seed)
    polys = [_random_form(Fp, rng.randint(1, 3), rng) for _ in range(rng.randint(1, 4))]
    polys = [p for p in polys if p]
    if not polys:
        return
    maps, betti = resolve(ideal_presentation(polys))
    assert composes_to_zero(maps) and is_minimal(maps)
    assert betti.length <= 3
    for e in range(7):
        total = sum((-1) ** i * n * comb(e - a + 2, 2) for (i, a), n in betti.entries.items() if e >= a)
        assert total == quotient_dimension(polys, e)
