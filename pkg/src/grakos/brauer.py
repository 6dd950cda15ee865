"""The downward Brauer category and its signed variant.

Objects are finite totally ordered label sets (plain tuples; the order is
the tuple order, fixed at creation).  A morphism S -> T consists of an
injection T into S together with a matching on the leftover elements of S.
In the signed variant the matching pairs are ordered and reversing r pairs
costs (-1)^r; normal form sorts every pair ascending and the pair list
lexicographically, folding the sign into a coefficient.

Composition never creates loops: following the injections backwards, the
matching of the second morphism is pushed forward along the injection of
the first, so all computations stay at the level of finite data with a
sign.  All values are immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .canonical import perm_sign


class BrauerError(Exception):
    pass


def _pos(obj: tuple, x):
    try:
        return obj.index(x)
    except ValueError:
        raise BrauerError(f"label {x!r} not in object {obj!r}")


@dataclass(frozen=True)
class BrauerMorphism:
    """A basis morphism src -> tgt: an injection tgt -> src plus a matching.

    injection[i] is the source label assigned to tgt[i].  matching is a
    tuple of (a, b) pairs of source labels covering src minus the image.
    sign is only meaningful when signed is True; the unsigned category
    fixes it at +1.
    """

    src: tuple
    tgt: tuple
    injection: tuple
    matching: tuple
    signed: bool
    sign: int = 1

    def validate(self) -> None:
        if len(set(self.src)) != len(self.src) or len(set(self.tgt)) != len(self.tgt):
            raise BrauerError("object labels must be distinct")
        if len(self.injection) != len(self.tgt):
            raise BrauerError("injection length mismatch")
        img = set(self.injection)
        if len(img) != len(self.injection) or not img <= set(self.src):
            raise BrauerError("injection is not an injection into the source")
        matched = [x for p in self.matching for x in p]
        if len(set(matched)) != len(matched):
            raise BrauerError("overlapping matching pairs")
        for a, b in self.matching:
            if a == b:
                raise BrauerError("matching pair with equal elements")
        if img | set(matched) != set(self.src) or img & set(matched):
            raise BrauerError("matching must cover exactly source minus image")
        if self.sign not in (1, -1):
            raise BrauerError("sign must be +-1")

    def serialize(self) -> str:
        inj = ",".join(f"{t}→{s}" for t, s in zip(self.tgt, self.injection))
        mat = ",".join(f"({a},{b})" for a, b in self.matching)
        sgn = "+1" if self.sign == 1 else "-1"
        src = ",".join(str(x) for x in self.src)
        tgt = ",".join(str(x) for x in self.tgt)
        return f"{src}|{tgt}|inj:{inj}|match:{mat}|sign:{sgn}"


def normalize(m: BrauerMorphism) -> BrauerMorphism:
    """Sort each pair ascending and the pair list; fold reversals into sign.

    Idempotent.  In the unsigned category the sign stays +1.
    """
    m.validate()
    reversals = 0
    pairs = []
    for a, b in m.matching:
        pa, pb = _pos(m.src, a), _pos(m.src, b)
        if pa > pb:
            a, b = b, a
            reversals += 1
        pairs.append((a, b))
    pairs.sort(key=lambda p: (_pos(m.src, p[0]), _pos(m.src, p[1])))
    sign = m.sign * ((-1) ** reversals if m.signed else 1)
    if not m.signed:
        sign = 1
    return BrauerMorphism(m.src, m.tgt, m.injection, tuple(pairs), m.signed, sign)


def identity(obj: tuple, signed: bool) -> BrauerMorphism:
    return BrauerMorphism(obj, obj, tuple(obj), (), signed, 1)


def compose(f: BrauerMorphism, g: BrauerMorphism) -> BrauerMorphism:
    """Composite of f: S -> T and g: T -> U, a morphism S -> U.

    The injection is the composite U -> T -> S; g's matching on T is pushed
    forward along f's injection; signs multiply and the result is
    normalized.
    """
    if f.tgt != g.src:
        raise BrauerError("objects do not match in composition")
    if f.signed != g.signed:
        raise BrauerError("cannot mix signed and unsigned morphisms")
    inj_f = dict(zip(f.tgt, f.injection))
    injection = tuple(inj_f[t] for t in g.injection)
    pushed = tuple((inj_f[a], inj_f[b]) for a, b in g.matching)
    out = BrauerMorphism(
        f.src, g.tgt, injection, f.matching + pushed, f.signed, f.sign * g.sign
    )
    return normalize(out)


def _perfect_matchings(elems: list):
    if not elems:
        yield ()
        return
    a = elems[0]
    for i in range(1, len(elems)):
        b = elems[i]
        rest = elems[1:i] + elems[i + 1 :]
        for sub in _perfect_matchings(rest):
            yield ((a, b),) + sub


def hom_basis(S: tuple, T: tuple, signed: bool) -> list[BrauerMorphism]:
    """All normalized basis morphisms S -> T.

    Empty unless |S| - |T| is even and nonnegative.  The count is
    (#injections) * (|S|-|T|-1)!!.
    """
    k = len(S) - len(T)
    if k < 0 or k % 2:
        return []
    out = []
    for image in itertools.permutations(S, len(T)):
        rest = [x for x in S if x not in set(image)]
        for matching in _perfect_matchings(rest):
            out.append(
                normalize(BrauerMorphism(S, T, tuple(image), matching, signed, 1))
            )
    return out


def day_summands(S1: tuple, S2: tuple, S: tuple, signed: bool) -> list[BrauerMorphism]:
    """Basis morphisms S1 + S2 -> S with no matching pair inside S1 or S2.

    These are the gluing morphisms appearing in the Day convolution of two
    species values; S1 and S2 must carry disjoint labels.
    """
    if set(S1) & set(S2):
        raise BrauerError("day_summands requires disjoint label sets")
    src = tuple(S1) + tuple(S2)
    s1 = set(S1)
    out = []
    for m in hom_basis(src, S, signed):
        if all((a in s1) != (b in s1) for a, b in m.matching):
            out.append(m)
    return out


def block_of(label, blocks: list) -> int:
    for i, b in enumerate(blocks):
        if label in b:
            return i
    raise BrauerError(f"label {label!r} not in any block")


def cross_only(m: BrauerMorphism, blocks: list) -> bool:
    """True when no matching pair of m is internal to a single block."""
    return all(block_of(a, blocks) != block_of(b, blocks) for a, b in m.matching)


def relabel_object(obj: tuple, rename: dict) -> tuple:
    return tuple(rename.get(x, x) for x in obj)
