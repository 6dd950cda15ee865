"""Characters of Sp(2g) and O(g,g) as exact weight-multiplicity functions.

A character is stored by its multiplicities on dominant weights; the full
Weyl-orbit expansion is materialized on demand.  Irreducible characters
come from Freudenthal's recursion in integer arithmetic; tensor products
are orbit convolutions; exterior powers use Adams operations and Newton's
identity; decomposition peels lexicographically maximal dominant weights,
which are always highest weights of some constituent.

Type conventions: Sp(2g) is the rank-g root system with positive roots
e_i - e_j, e_i + e_j (i < j) and 2 e_i; O(g,g) is handled through the
weight lattice of its identity component (positive roots e_i +- e_j),
which is enough for the dimension and multiplicity bookkeeping used here.
Partition labels are weakly decreasing positive integer tuples of length
at most g.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

SP = "Sp"
ORTH = "O"


class RepCharError(Exception):
    pass


def _pad(lam, g: int) -> tuple:
    lam = tuple(lam)
    if len(lam) > g:
        raise RepCharError(f"partition {lam} longer than rank {g}")
    return lam + (0,) * (g - len(lam))


def positive_roots(g: int, gtype: str) -> list[tuple]:
    roots = []
    for i in range(g):
        for j in range(i + 1, g):
            a = [0] * g
            a[i], a[j] = 1, -1
            roots.append(tuple(a))
            b = [0] * g
            b[i], b[j] = 1, 1
            roots.append(tuple(b))
    if gtype == SP:
        for i in range(g):
            c = [0] * g
            c[i] = 2
            roots.append(tuple(c))
    elif gtype != ORTH:
        raise RepCharError(f"unknown type {gtype!r}")
    return roots


def weyl_vector(g: int, gtype: str) -> tuple:
    if gtype == SP:
        return tuple(range(g, 0, -1))
    return tuple(range(g - 1, -1, -1))


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def dominant_representative(mu, gtype: str) -> tuple:
    """Dominant Weyl-chamber representative of a weight.

    For the even orthogonal lattice, sign flips come in pairs; a zero
    coordinate absorbs the parity, so the sign on the last entry only
    survives when every coordinate is nonzero.
    """
    a = sorted((abs(x) for x in mu), reverse=True)
    if gtype == ORTH and all(x != 0 for x in mu):
        neg = sum(1 for x in mu if x < 0)
        if neg % 2:
            a[-1] = -a[-1]
    return tuple(a)


def weyl_orbit(mu: tuple, gtype: str) -> list[tuple]:
    """The full orbit of a dominant weight."""
    out = set()
    support = [x for x in mu]
    has_zero = any(x == 0 for x in mu)
    for perm in set(itertools.permutations(support)):
        nz = [i for i, x in enumerate(perm) if x != 0]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            if (
                gtype == ORTH
                and not has_zero
                and sum(1 for s in signs if s < 0) % 2
            ):
                continue
            w = list(perm)
            for i, s in zip(nz, signs):
                w[i] *= s
            out.add(tuple(w))
    return sorted(out)


@dataclass(frozen=True)
class CharacterVector:
    """Finitely supported Weyl-invariant multiplicity function."""

    gtype: str
    g: int
    mults: tuple  # sorted tuple of (dominant weight, multiplicity)

    @staticmethod
    def from_dominant(gtype, g, mult_dict) -> "CharacterVector":
        items = tuple(sorted((k, v) for k, v in mult_dict.items() if v))
        return CharacterVector(gtype, g, items)

    def dominant_mults(self) -> dict:
        return dict(self.mults)

    def full_mults(self) -> dict:
        out: dict = {}
        for mu, m in self.mults:
            for w in weyl_orbit(mu, self.gtype):
                out[w] = out.get(w, 0) + m
        return out

    def dim(self) -> int:
        return sum(
            m * len(weyl_orbit(mu, self.gtype)) for mu, m in self.mults
        )

    def is_genuine(self) -> bool:
        return all(m >= 0 for _, m in self.mults)

    def __add__(self, other):
        d = self.dominant_mults()
        for k, v in other.dominant_mults().items():
            d[k] = d.get(k, 0) + v
        return CharacterVector.from_dominant(self.gtype, self.g, d)

    def __sub__(self, other):
        d = self.dominant_mults()
        for k, v in other.dominant_mults().items():
            d[k] = d.get(k, 0) - v
        return CharacterVector.from_dominant(self.gtype, self.g, d)

    def scale(self, c: int):
        return CharacterVector.from_dominant(
            self.gtype, self.g, {k: c * v for k, v in self.mults}
        )


def trivial_character(g: int, gtype: str = SP) -> CharacterVector:
    return CharacterVector.from_dominant(gtype, g, {(0,) * g: 1})


def _from_full(gtype, g, full: dict) -> CharacterVector:
    dom: dict = {}
    for mu, m in full.items():
        if not m:
            continue
        if dominant_representative(mu, gtype) == mu:
            dom[mu] = m
    ch = CharacterVector.from_dominant(gtype, g, dom)
    if ch.full_mults() != {k: v for k, v in full.items() if v}:
        raise RepCharError("multiplicity function is not Weyl-invariant")
    return ch


@lru_cache(maxsize=None)
def irreducible_character(lam: tuple, g: int, gtype: str = SP) -> CharacterVector:
    """Character of the irreducible with highest weight lam (Freudenthal)."""
    lam = _pad(lam, g)
    if any(
        lam[i] < lam[i + 1] for i in range(g - 1)
    ) or any(x < 0 for x in lam):
        raise RepCharError(f"{lam} is not a partition label")
    roots = positive_roots(g, gtype)
    rho = weyl_vector(g, gtype)
    lam_rho = tuple(l + r for l, r in zip(lam, rho))
    c_lam = _dot(lam_rho, lam_rho)

    # dominant weights below lam in the root order, by breadth-first search
    layer = {lam}
    dominant = {lam}
    while layer:
        nxt = set()
        for mu in layer:
            for a in roots:
                nu = tuple(m - x for m, x in zip(mu, a))
                nd = dominant_representative(nu, gtype)
                if nd in dominant:
                    continue
                if _in_root_lattice_cone(lam, nd, gtype):
                    dominant.add(nd)
                    nxt.add(nd)
        layer = nxt

    order = sorted(dominant, key=lambda mu: (-_dot(mu, rho), mu))
    mult: dict = {lam: 1}
    for mu in order:
        if mu == lam:
            continue
        mu_rho = tuple(m + r for m, r in zip(mu, rho))
        denom = c_lam - _dot(mu_rho, mu_rho)
        if denom == 0:
            mult[mu] = 0
            continue
        total = 0
        for a in roots:
            k = 1
            while True:
                nu = tuple(m + k * x for m, x in zip(mu, a))
                nd = dominant_representative(nu, gtype)
                mk = mult.get(nd, 0)
                if mk == 0 and not _in_root_lattice_cone(lam, nd, gtype):
                    break
                if mk:
                    total += 2 * mk * _dot(nu, a)
                k += 1
                if k > 4 * sum(lam) + 4 * g + 4:
                    break
        if total % denom:
            raise RepCharError("Freudenthal recursion produced a fraction")
        m = total // denom
        if m:
            mult[mu] = m
    return CharacterVector.from_dominant(gtype, g, mult)


def _in_root_lattice_cone(lam, mu, gtype) -> bool:
    """Whether lam - mu is plausibly a nonnegative sum of positive roots.

    A cheap necessary filter: partial sums of lam - mu stay nonnegative and
    the total is even for Sp (the root lattice has even coordinate sum) or
    even for O.  Freudenthal only needs a superset of the true support.
    """
    diff = [l - m for l, m in zip(lam, mu)]
    s = 0
    for d in diff:
        s += d
        if s < 0:
            return False
    total = sum(diff)
    return total >= 0 and total % 2 == 0


def weyl_dimension(lam, g: int, gtype: str = SP) -> int:
    lam = _pad(lam, g)
    rho = weyl_vector(g, gtype)
    num = den = 1
    lr = [l + r for l, r in zip(lam, rho)]
    for a in positive_roots(g, gtype):
        num *= _dot(lr, a)
        den *= _dot(rho, a)
    if num % den:
        raise RepCharError("Weyl dimension is not an integer")
    return num // den


def standard_character(g: int, gtype: str = SP) -> CharacterVector:
    return irreducible_character((1,), g, gtype)


def tensor(ch1: CharacterVector, ch2: CharacterVector) -> CharacterVector:
    if (ch1.gtype, ch1.g) != (ch2.gtype, ch2.g):
        raise RepCharError("rank or type mismatch in tensor")
    f1, f2 = ch1.full_mults(), ch2.full_mults()
    out: dict = {}
    for mu, m in f1.items():
        for nu, k in f2.items():
            key = tuple(a + b for a, b in zip(mu, nu))
            out[key] = out.get(key, 0) + m * k
    return _from_full(ch1.gtype, ch1.g, out)


def adams(ch: CharacterVector, j: int) -> CharacterVector:
    full = ch.full_mults()
    out: dict = {}
    for mu, m in full.items():
        key = tuple(j * x for x in mu)
        out[key] = out.get(key, 0) + m
    return _from_full(ch.gtype, ch.g, out)


def exterior_power(ch: CharacterVector, k: int) -> CharacterVector:
    """Lambda^k via Newton's identity over the Adams operations."""
    if k == 0:
        return trivial_character(ch.g, ch.gtype)
    es = [trivial_character(ch.g, ch.gtype)]
    for m in range(1, k + 1):
        acc: dict = {}
        for i in range(1, m + 1):
            term = tensor(es[m - i], adams(ch, i))
            sign = -1 if (i - 1) % 2 else 1
            for mu, c in term.dominant_mults().items():
                acc[mu] = acc.get(mu, 0) + sign * c
        if any(v % m for v in acc.values()):
            raise RepCharError("exterior power multiplicities not integral")
        es.append(
            CharacterVector.from_dominant(
                ch.gtype, ch.g, {mu: v // m for mu, v in acc.items()}
            )
        )
    return es[k]


def decompose(ch: CharacterVector) -> list[tuple[tuple, int]]:
    """Greedy highest-weight peeling into irreducibles.

    Returns [(partition label, multiplicity)] sorted by label; raises on a
    virtual character (negative multiplicity encountered).
    """
    work = dict(ch.mults)
    out = []
    total = ch.dim()
    while work:
        lam = max(work)
        m = work[lam]
        if m < 0:
            raise RepCharError(f"virtual character: negative multiplicity at {lam}")
        if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)) or lam[-1] < 0:
            raise RepCharError(f"support weight {lam} is not dominant-integral")
        irr = irreducible_character(_strip(lam), ch.g, ch.gtype)
        for mu, c in irr.mults:
            v = work.get(mu, 0) - m * c
            if v:
                work[mu] = v
            else:
                work.pop(mu, None)
        out.append((_strip(lam), m))
    check = sum(
        m * weyl_dimension(lam, ch.g, ch.gtype) for lam, m in out
    )
    if check != total:
        raise RepCharError("decomposition does not add up to the dimension")
    return sorted(out)


def _strip(lam) -> tuple:
    return tuple(x for x in lam if x != 0)


def trivial_multiplicity(ch: CharacterVector) -> int:
    return dict(decompose(ch)).get((), 0)


def decomposition_report(ch: CharacterVector) -> list[dict]:
    out = []
    for lam, m in decompose(ch):
        out.append(
            {
                "lambda": list(lam),
                "mult": m,
                "dim": weyl_dimension(lam, ch.g, ch.gtype),
            }
        )
    return out


def character_of_subspace_weights(gtype, g, weight_dims: dict) -> CharacterVector:
    """Character from per-weight dimensions of a torus-stable subspace."""
    return _from_full(gtype, g, dict(weight_dims))
