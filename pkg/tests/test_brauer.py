import random

import pytest
from hypothesis import given, settings, strategies as st

from grakos.brauer import (
    BrauerError,
    BrauerMorphism,
    compose,
    day_summands,
    hom_basis,
    identity,
    normalize,
)


def test_normalize_signed_reversed_pair():
    m = BrauerMorphism((1, 2), (), (), ((2, 1),), signed=True)
    nm = normalize(m)
    assert nm.matching == ((1, 2),)
    assert nm.sign == -1


def test_normalize_unsigned_reversed_pair():
    m = BrauerMorphism((1, 2), (), (), ((2, 1),), signed=False)
    nm = normalize(m)
    assert nm.matching == ((1, 2),)
    assert nm.sign == 1


def test_normalize_identity_unchanged():
    m = identity((1, 2, 3), signed=True)
    assert normalize(m) == m


def test_normalize_idempotent_random():
    rng = random.Random(0)
    for _ in range(50):
        m = _random_morphism(rng, signed=True)
        n1 = normalize(m)
        assert normalize(n1) == n1


def test_overlapping_pairs_rejected():
    m = BrauerMorphism((1, 2, 3), (3,), (3,), ((1, 2), (2, 1)), signed=True)
    with pytest.raises(BrauerError):
        normalize(m)


def test_compose_with_identity():
    rng = random.Random(1)
    for signed in (True, False):
        for _ in range(20):
            f = _random_morphism(rng, signed=signed)
            assert compose(identity(f.src, signed), f) == normalize(f)
            assert compose(f, identity(f.tgt, signed)) == normalize(f)


def test_compose_pushforward_example():
    S = (1, 2, 3, 4)
    T = (1, 2)
    f = BrauerMorphism(S, T, (1, 2), ((3, 4),), signed=False)
    g = BrauerMorphism(T, (), (), ((1, 2),), signed=False)
    h = compose(f, g)
    assert h.src == S and h.tgt == ()
    assert set(h.matching) == {(1, 2), (3, 4)}


def _random_morphism(rng, signed, src=None, tgt_size=None):
    if src is None:
        src = tuple(range(1, rng.randint(1, 6) + 1))
    k = len(src)
    if tgt_size is None:
        choices = [t for t in range(k + 1) if (k - t) % 2 == 0]
        tgt_size = rng.choice(choices)
    tgt = tuple(range(101, 101 + tgt_size))
    image = tuple(rng.sample(src, tgt_size))
    rest = [x for x in src if x not in image]
    rng.shuffle(rest)
    matching = tuple((rest[2 * i], rest[2 * i + 1]) for i in range(len(rest) // 2))
    sign = rng.choice([1, -1]) if signed else 1
    return BrauerMorphism(src, tgt, image, matching, signed, sign)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_compose_associative(seed, signed):
    rng = random.Random(seed)
    f = _random_morphism(rng, signed)
    g = _random_morphism(rng, signed, src=f.tgt)
    h = _random_morphism(rng, signed, src=g.tgt)
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_hom_basis_counts():
    assert len(hom_basis((1, 2), (), signed=True)) == 1
    assert len(hom_basis((1, 2, 3, 4), (), signed=True)) == 3
    assert len(hom_basis((1, 2), (8, 9), signed=True)) == 2
    assert hom_basis((1, 2, 3), (8, 9), signed=True) == []
    assert hom_basis((1,), (8, 9), signed=False) == []


def test_hom_basis_dimension_formula():
    # #injections times double factorial of the matched leftover
    def df(k):
        out = 1
        while k > 1:
            out *= k - 1
            k -= 2
        return out

    import math

    for s in range(5):
        for t in range(s + 1):
            if (s - t) % 2:
                continue
            S = tuple(range(s))
            T = tuple(range(100, 100 + t))
            expect = math.perm(s, t) * df(s - t)
            assert len(hom_basis(S, T, signed=False)) == expect


def test_day_summands_examples():
    assert len(day_summands((1,), (2,), (), signed=True)) == 1
    assert day_summands((1, 2), (), (), signed=True) == []
    assert len(day_summands((1, 2), (3, 4), (8, 9), signed=True)) == 8


def test_day_summands_bracketing_independence():
    # ternary gluings built by iterating the binary formula (summing over
    # all intermediate objects) agree for both bracketings, and match the
    # one-shot description: no pair internal to a single block
    S1, S2, S3, S = (1,), (2,), (3,), (9,)
    src = S1 + S2 + S3

    def lift(inner, extra, extra_first):
        # extend inner: A + B -> T to src -> T + extra by the identity
        if extra_first:
            tgt = extra + tuple(inner.tgt)
            inj = extra + tuple(inner.injection)
        else:
            tgt = tuple(inner.tgt) + extra
            inj = tuple(inner.injection) + extra
        return BrauerMorphism(src, tgt, inj, inner.matching, True, inner.sign)

    def composites(first_pair, rest, rest_first):
        out = set()
        a, b = first_pair
        for tsize in range(len(a) + len(b), -1, -2):
            T = tuple(range(50, 50 + tsize))
            for inner in day_summands(a, b, T, signed=True):
                inner_src = tuple(inner.tgt)
                blocks = (inner_src, rest) if not rest_first else (rest, inner_src)
                for outer in day_summands(blocks[0], blocks[1], S, signed=True):
                    out.add(
                        _key(compose(lift(inner, rest, rest_first), outer))
                    )
        return out

    def _key(m):
        return (m.src, m.tgt, m.injection, m.matching)

    left = composites((S1, S2), S3, rest_first=False)
    right = composites((S2, S3), S1, rest_first=True)
    flat = {_key(m) for m in day_summands_3fold(src, S)}
    assert left == right == flat


def day_summands_3fold(src, S):
    # one-shot: basis morphisms with no matching pair inside one block
    out = []
    for m in hom_basis(src, S, signed=True):
        if all(a != b for a, b in m.matching):
            out.append(m)
    return out


def test_serialize_format():
    m = normalize(BrauerMorphism((1, 2, 3), (7,), (3,), ((2, 1),), True))
    s = m.serialize()
    assert s == "1,2,3|7|inj:7→3|match:(1,2)|sign:-1"
