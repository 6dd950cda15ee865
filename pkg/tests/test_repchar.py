import math
import random

import pytest

from grakos.repchar import (
    SP,
    ORTH,
    CharacterVector,
    RepCharError,
    decompose,
    decomposition_report,
    exterior_power,
    irreducible_character,
    standard_character,
    tensor,
    trivial_character,
    trivial_multiplicity,
    weyl_dimension,
)


def test_trivial_character():
    ch = irreducible_character((), 3)
    assert ch.dim() == 1
    assert decompose(ch) == [((), 1)]


def test_standard_representation_dims():
    for g in (1, 2, 3, 4):
        assert standard_character(g).dim() == 2 * g


def test_lambda_111_sp3_dimension():
    # third fundamental representation of Sp(6): Lambda^3(6) minus 6
    ch = irreducible_character((1, 1, 1), 3)
    assert ch.dim() == 14


def test_exterior_power_dims():
    for g in (2, 3):
        std = standard_character(g)
        assert exterior_power(std, 1).dim() == 2 * g
        assert exterior_power(std, 2).dim() == math.comb(2 * g, 2)
        assert exterior_power(std, 3).dim() == math.comb(2 * g, 3)


def test_tensor_dimension_multiplicative():
    for g in (2, 3):
        std = standard_character(g)
        assert tensor(std, std).dim() == (2 * g) ** 2


def test_lambda3_std_decomposition():
    # Lambda^3 of the standard representation for g >= 3: V_1 + V_{1^3}
    for g in (3, 4, 5, 6):
        ch = exterior_power(standard_character(g), 3)
        assert decompose(ch) == [((1,), 1), ((1, 1, 1), 1)]


def test_lambda2_lambda3_std_g6():
    ch = exterior_power(exterior_power(standard_character(6), 3), 2)
    got = dict(decompose(ch))
    expect = {
        (): 2,
        (1, 1): 3,
        (1, 1, 1, 1): 2,
        (1, 1, 1, 1, 1, 1): 1,
        (2, 1, 1): 1,
        (2, 2): 1,
        (2, 2, 1, 1): 1,
    }
    assert got == expect


def test_decompose_roundtrip_exact():
    # re-assembling the decomposition reproduces the character verbatim
    for g in (2, 3):
        ch = exterior_power(standard_character(g), 3)
        acc = trivial_character(g).scale(0)
        for lam, m in decompose(ch):
            acc = acc + irreducible_character(lam, g).scale(m)
        assert acc == ch


def test_weyl_dimension_cross_check():
    rng = random.Random(11)
    samples = 0
    for g in (2, 3, 4, 5, 6):
        for _ in range(3):
            lam = tuple(
                sorted((rng.randint(0, 2) for _ in range(g)), reverse=True)
            )
            lam = tuple(x for x in lam if x)
            if sum(lam) > 6:
                continue
            ch = irreducible_character(lam, g)
            assert ch.dim() == weyl_dimension(lam, g)
            samples += 1
    assert samples >= 10


def test_virtual_character_rejected():
    ch = trivial_character(3) - standard_character(3)
    with pytest.raises(RepCharError, match="virtual"):
        decompose(ch)


def test_trivial_multiplicity():
    ch = tensor(standard_character(3), standard_character(3))
    assert trivial_multiplicity(ch) == 1
    assert trivial_multiplicity(exterior_power(standard_character(3), 3)) == 0


def test_orthogonal_type_smoke():
    std = standard_character(3, ORTH)
    assert std.dim() == 6
    l2 = exterior_power(std, 2)
    got = dict(decompose(l2))
    # for SO(3,3): Lambda^2(std) is the adjoint, irreducible of dim 15
    assert sum(m * weyl_dimension(l, 3, ORTH) for l, m in got.items()) == 15


def test_decomposition_report_schema():
    rep = decomposition_report(exterior_power(standard_character(3), 3))
    assert rep == [
        {"lambda": [1], "mult": 1, "dim": 6},
        {"lambda": [1, 1, 1], "mult": 1, "dim": 14},
    ]
