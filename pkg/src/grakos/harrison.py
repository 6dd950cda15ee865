"""Harrison and Chevalley-Eilenberg complexes with exact homology.

The Harrison complex of a nonunital graded-commutative algebra is modeled
as bar words modulo signed shuffles (Ree's description of the cofree Lie
coalgebra on the suspension): the arity-p chain group is the span of words
(x_1 | ... | x_p) in the suspended algebra, the differential multiplies
adjacent letters, and the quotient by all (r, s)-shuffle products is taken
by explicit linear algebra per graded block.  Suspension shifts every
letter's degree up by one, and all shuffle and differential signs are
computed from the shifted degrees only.

The same machinery runs in two settings:

* plain algebras presented by structure constants (used for realized
  algebras and for toy examples), and
* algebra objects over the downward (signed) Brauer category, where the
  words are the canonical cluster words of species.day_tensor_basis and
  the face maps contract the matched pairs between merged blocks.

Gradings: a word of arity p with letters of internal degree q_i sits in
Harrison degree p, internal degree q = sum q_i, and weight w = sum w_i.
The reported table entry at (p, q, w) is the homology of the arity-indexed
complex in that block, which matches the total-degree convention
H_(p+q)(Harr)_q since the differential lowers arity and total degree by
one together.

Chevalley-Eilenberg chains of a weight-graded Lie algebra concentrated in
homological degree zero are classical exterior powers with the bracket
differential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import species
from .exactla import (
    ChainComplexOverQ,
    Echelon,
    ExactLAError,
    RationalSparseMatrix,
    mapping_cone,
)


class HarrisonError(Exception):
    pass


# -- plain graded-commutative algebras -----------------------------------


@dataclass
class GradedAlgebraPresentation:
    """Finite graded-commutative algebra chunk given by structure constants.

    generators: list of (label, q, w).  products maps (i, j) with i <= j to
    {k: coeff}; the (j, i) value is filled in by the Koszul sign rule
    (-1)^(q_i q_j).  Products landing outside the listed generators must
    simply be absent (the algebra is assumed truncated above the window of
    interest, which is fine as long as queries stay inside the window).
    """

    generators: list
    products: dict

    def __post_init__(self):
        self.by_index = {i: g for i, g in enumerate(self.generators)}

    def degree(self, i: int) -> int:
        return self.generators[i][1]

    def weight(self, i: int) -> int:
        return self.generators[i][2]

    def mult(self, i: int, j: int) -> dict:
        if i <= j:
            return self.products.get((i, j), {})
        qi, qj = self.degree(i), self.degree(j)
        sign = -1 if (qi * qj) % 2 else 1
        return {k: sign * c for k, c in self.products.get((j, i), {}).items()}

    def check_graded_commutative(self) -> None:
        for (i, j), val in self.products.items():
            for k, c in val.items():
                if self.degree(k) != self.degree(i) + self.degree(j):
                    raise HarrisonError("product is not degree-homogeneous")
                if self.weight(k) != self.weight(i) + self.weight(j):
                    raise HarrisonError("product is not weight-homogeneous")

    def check_associative(self) -> None:
        n = len(self.generators)
        for a, b, c in itertools.product(range(n), repeat=3):
            left: dict = {}
            for k, co in self.mult(a, b).items():
                for m, co2 in self.mult(k, c).items():
                    left[m] = left.get(m, Fraction(0)) + co * co2
            right: dict = {}
            for k, co in self.mult(b, c).items():
                for m, co2 in self.mult(a, k).items():
                    right[m] = right.get(m, Fraction(0)) + co * co2
            if {m: v for m, v in left.items() if v} != {
                m: v for m, v in right.items() if v
            }:
                raise HarrisonError(f"associativity fails on ({a},{b},{c})")


def free_commutative_truncation(gens, max_w):
    """Free graded-commutative nonunital algebra on gens, truncated.

    gens: list of (label, q, w) with w >= 1.  Returns a presentation whose
    generators are the monomials of weight <= max_w.
    """
    monomials = {}
    for i, (label, q, w) in enumerate(gens):
        monomials[(i,)] = (q, w)
    frontier = dict(monomials)
    while frontier:
        new = {}
        for mono, (q, w) in frontier.items():
            for i, (_, qi, wi) in enumerate(gens):
                if i < mono[-1]:
                    continue
                if qi % 2 and mono.count(i) >= 1:
                    continue  # odd generator squares to zero
                m2 = tuple(sorted(mono + (i,)))
                if w + wi <= max_w and m2 not in monomials:
                    new[m2] = (q + qi, w + wi)
        monomials.update(new)
        frontier = new
    index = {m: k for k, m in enumerate(sorted(monomials))}
    generators = [
        (m, monomials[m][0], monomials[m][1]) for m in sorted(monomials)
    ]
    products = {}
    for ma, mb in itertools.combinations_with_replacement(sorted(monomials), 2):
        wa, wb = monomials[ma][1], monomials[mb][1]
        if wa + wb > max_w:
            continue
        coeff, prod = _merge_monomials(ma, mb, gens)
        if coeff and prod in index:
            products[(index[ma], index[mb])] = {index[prod]: Fraction(coeff)}
    return GradedAlgebraPresentation(generators, products)


def _merge_monomials(ma, mb, gens):
    """Sign-sorted product of two sorted monomials in graded generators."""
    seq = [("a", x) for x in ma] + [("b", x) for x in mb]
    items = [x for _, x in seq]
    # bubble sort counting Koszul swaps of odd generators
    sign = 1
    arr = list(items)
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                if gens[arr[j]][1] % 2 and gens[arr[j + 1]][1] % 2:
                    sign = -sign
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
    for x in set(arr):
        if gens[x][1] % 2 and arr.count(x) > 1:
            return 0, ()
    return sign, tuple(arr)


# -- bar words modulo shuffles: generic engine ---------------------------


def _shuffles(r: int, s: int):
    """(r, s)-shuffles as maps position -> position on 0..r+s-1."""
    p = r + s
    for positions in itertools.combinations(range(p), r):
        sigma = [0] * p
        rest = [i for i in range(p) if i not in positions]
        for a, pos in enumerate(positions):
            sigma[a] = pos
        for b, pos in enumerate(rest):
            sigma[r + b] = pos
        yield tuple(sigma)


def koszul_sign_of_permutation(sigma, shifted_degrees) -> int:
    """Koszul sign of permuting homogeneous letters, from shifted degrees."""
    sign = 1
    p = len(sigma)
    for i in range(p):
        for j in range(i + 1, p):
            if sigma[i] > sigma[j]:
                if (shifted_degrees[i] % 2) and (shifted_degrees[j] % 2):
                    sign = -sign
    return sign


@dataclass
class _BlockComplex:
    """Arity-indexed shuffle-quotient complex of one (q, w) block."""

    bases: dict  # p -> list of representative word keys
    complex: ChainComplexOverQ
    word_lists: dict  # p -> full labeled word list before the quotient
    echelons: dict  # p -> Echelon of the shuffle span
    shuffle_ranks: dict = field(default_factory=dict)


class BarWordModel:
    """Interface used by the generic shuffle-quotient builder.

    Words are opaque hashable keys; the model enumerates them per arity,
    knows the shifted degree of every slot, applies slot permutations with
    the structural (non-Koszul) sign, and applies adjacent face maps with
    the structural (non-Koszul) coefficient.
    """

    def words(self, p):
        raise NotImplementedError

    def slot_degrees(self, word):
        raise NotImplementedError

    def permute(self, word, sigma):
        raise NotImplementedError

    def face(self, word, i):
        raise NotImplementedError


def _bar_differential(model: BarWordModel, word) -> dict:
    degs = model.slot_degrees(word)
    p = len(degs)
    out: dict = {}
    prefix = 0
    for i in range(p - 1):
        prefix += degs[i] + 1
        sign = -1 if prefix % 2 else 1
        for w2, c in model.face(word, i).items():
            s = out.get(w2, Fraction(0)) + sign * c
            if s:
                out[w2] = s
            else:
                out.pop(w2, None)
    return out


def _shuffle_relations(model: BarWordModel, word) -> list[dict]:
    shifted = [d + 1 for d in model.slot_degrees(word)]
    p = len(shifted)
    out = []
    for r in range(1, p):
        rel: dict = {}
        for sigma in _shuffles(r, p - r):
            ks = koszul_sign_of_permutation(sigma, shifted)
            res = model.permute(word, sigma)
            if res is None:
                continue
            c, w2 = res
            s = rel.get(w2, Fraction(0)) + ks * c
            if s:
                rel[w2] = s
            else:
                rel.pop(w2, None)
        if rel:
            out.append(rel)
    return out


def build_block_complex(model: BarWordModel, max_p: int) -> _BlockComplex:
    """Quotient of the word spans by shuffle products, with induced d."""
    word_lists = {p: list(model.words(p)) for p in range(1, max_p + 1)}
    index = {
        p: {w: i for i, w in enumerate(ws)} for p, ws in word_lists.items()
    }
    echelons: dict[int, Echelon] = {}
    shuffle_ranks = {}
    for p, ws in word_lists.items():
        ech = Echelon()
        for w in ws:
            for rel in _shuffle_relations(model, w):
                vec = {index[p][w2]: c for w2, c in rel.items()}
                ech.add(vec)
        echelons[p] = ech
        shuffle_ranks[p] = ech.rank
    reps = {}
    for p, ws in word_lists.items():
        pivots = set(echelons[p].pivots)
        reps[p] = [i for i in range(len(ws)) if i not in pivots]
    basis = {p: [word_lists[p][i] for i in reps[p]] for p in word_lists}
    diff = {}
    for p in range(2, max_p + 1):
        rows = len(reps[p - 1])
        cols = len(reps[p])
        colpos = {i: a for a, i in enumerate(reps[p - 1])}
        ent = []
        for a, i in enumerate(reps[p]):
            w = word_lists[p][i]
            img = _bar_differential(model, w)
            vec = {index[p - 1][w2]: c for w2, c in img.items() if w2 in index[p - 1]}
            for w2 in img:
                if w2 not in index[p - 1]:
                    raise HarrisonError("face map left the enumerated window")
            red = echelons[p - 1].reduce(vec)
            for j, c in red.items():
                ent.append((colpos[j], a, c))
        diff[p] = RationalSparseMatrix(rows, cols, ent)
    # relations must be closed under d (sanity; cheap at these sizes)
    for p in range(2, max_p + 1):
        for w in word_lists[p]:
            for rel in _shuffle_relations(model, w):
                img: dict = {}
                for w2, c in rel.items():
                    for w3, c3 in _bar_differential(model, w2).items():
                        s = img.get(w3, Fraction(0)) + c * c3
                        if s:
                            img[w3] = s
                        else:
                            img.pop(w3, None)
                vec = {index[p - 1][w3]: c for w3, c in img.items()}
                if echelons[p - 1].reduce(vec):
                    raise HarrisonError("shuffle span is not a subcomplex")
    cx = ChainComplexOverQ(basis=basis, diff=diff)
    cx.validate()
    return _BlockComplex(
        bases=basis,
        complex=cx,
        word_lists=word_lists,
        echelons=echelons,
        shuffle_ranks=shuffle_ranks,
    )


# -- plain-algebra instantiation -----------------------------------------


class _PlainModel(BarWordModel):
    def __init__(self, algebra: GradedAlgebraPresentation, w: int, q: int | None = None):
        self.A = algebra
        self.w = w
        self.q = q
        self._by_weight: dict[int, list] = {}
        for i, (_, _, wt) in enumerate(algebra.generators):
            self._by_weight.setdefault(wt, []).append(i)

    def words(self, p):
        def rec(remaining, slots):
            if slots == 0:
                if remaining == 0:
                    yield ()
                return
            for wi in range(1, remaining - slots + 2):
                for i in self._by_weight.get(wi, []):
                    for rest in rec(remaining - wi, slots - 1):
                        yield (i,) + rest

        out = rec(self.w, p)
        if self.q is None:
            return list(out)
        return [
            word
            for word in out
            if sum(self.A.degree(i) for i in word) == self.q
        ]

    def slot_degrees(self, word):
        return [self.A.degree(i) for i in word]

    def permute(self, word, sigma):
        out = [None] * len(word)
        for i, x in enumerate(word):
            out[sigma[i]] = x
        return (Fraction(1), tuple(out))

    def face(self, word, i):
        out = {}
        for k, c in self.A.mult(word[i], word[i + 1]).items():
            out[word[:i] + (k,) + word[i + 2 :]] = Fraction(c)
        return out


def harrison_complex(
    algebra: GradedAlgebraPresentation, w: int, q: int | None = None
) -> ChainComplexOverQ:
    """Arity-indexed Harrison chain complex of one (q, w) block.

    With q omitted the whole weight-w block is built at once (legitimate
    when the block happens to be q-homogeneous; homology tables always
    split by q).
    """
    model = _PlainModel(algebra, w, q)
    return build_block_complex(model, max_p=w).complex


def hcom_table(algebra: GradedAlgebraPresentation, max_w: int) -> dict:
    """dim H^Com_p(A)_(q, w) for w <= max_w, keyed by (p, q, w)."""
    algebra.check_graded_commutative()
    cells = {}
    for w in range(1, max_w + 1):
        qs = set()
        probe = _PlainModel(algebra, w)
        for p in range(1, w + 1):
            for word in probe.words(p):
                qs.add(sum(algebra.degree(i) for i in word))
        for q in sorted(qs):
            cx = harrison_complex(algebra, w, q)
            for p, dim in cx.homology_dims(check=False).items():
                if dim:
                    cells[(p, q, w)] = dim
    return cells


# -- species instantiation ------------------------------------------------


class _SpeciesModel(BarWordModel):
    def __init__(self, family: str, n: int, S, w: int):
        self.family = family
        self.n = n
        self.S = tuple(sorted(S))
        self.w = w

    def words(self, p):
        return species.day_tensor_basis(self.family, self.n, p, self.S, self.w)

    def slot_degrees(self, word):
        return [self.n * wi for wi in word.slot_weights]

    def permute(self, word, sigma):
        return species.slot_permute(word, sigma)

    def face(self, word, i):
        return species.merge_slots(word, i)


def hcom_species(family: str, n: int, S, max_w: int) -> dict:
    """dim H^Com_p of a species in weight w <= max_w at the object S.

    Returns {(p, q, w): dim} with q = n * w.  Arity is bounded by the
    weight since every letter has weight >= 1.
    """
    cells = {}
    for w in range(1, max_w + 1):
        model = _SpeciesModel(family, n, tuple(S), w)
        block = build_block_complex(model, max_p=w)
        for p, dim in block.complex.homology_dims(check=False).items():
            if dim:
                cells[(p, n * w, w)] = dim
    return cells


def hcom_species_relative(n: int, S, max_w: int) -> dict:
    """Relative Harrison homology of the map from the E family to Z.

    Computed from the mapping cone of the induced chain map on bar words
    (blockwise en-to-zn, reduced into the shuffle-quotient representatives
    on the Z side); returns {(p, q, w): dim}.  Validation of the cone
    certifies the chain-map property.
    """
    cells = {}
    for w in range(1, max_w + 1):
        e_block = build_block_complex(
            _SpeciesModel(species.FAMILY_E, n, tuple(S), w), max_p=w
        )
        z_block = build_block_complex(
            _SpeciesModel(species.FAMILY_Z, n, tuple(S), w), max_p=w
        )
        f_mats = {}
        for p in e_block.bases:
            rows = len(z_block.bases.get(p, []))
            cols = len(e_block.bases[p])
            z_words = z_block.word_lists.get(p, [])
            z_index = {wd: i for i, wd in enumerate(z_words)}
            rep_pos = {
                z_index[wd]: b for b, wd in enumerate(z_block.bases.get(p, []))
            }
            ent = []
            for a, wd in enumerate(e_block.bases[p]):
                img = _word_en_to_zn(wd)
                if img is None:
                    continue
                c, zwd = img
                red = z_block.echelons[p].reduce({z_index[zwd]: c})
                for j, cc in red.items():
                    ent.append((rep_pos[j], a, cc))
            f_mats[p] = RationalSparseMatrix(rows, cols, ent)
        cone = mapping_cone(e_block.complex, z_block.complex, f_mats)
        for p, dim in cone.homology_dims(check=True).items():
            if dim:
                cells[(p, n * w, w)] = dim
    return cells


def _word_en_to_zn(word: species.DayWord):
    """Blockwise algebra map to the Z family on cluster words."""
    for parts in word.blocks:
        for _, g in parts:
            if g > 0:
                return None
    res = species.canonicalize_word(
        species.FAMILY_Z, word.n, word.S, word.blocks, word.legs, word.pairs
    )
    return res


def koszul_report(cells: dict, max_w: int, include_zero_weight=False) -> list:
    """Off-diagonal nonzero cells (p != w) in weight <= max_w."""
    out = []
    for key, dim in sorted(cells.items(), key=repr):
        if not dim:
            continue
        p, q, w = key[0], key[1], key[2]
        if w <= max_w and p != w:
            out.append({"p": p, "q": q, "w": w, "dim": dim})
    return out


# -- Chevalley-Eilenberg --------------------------------------------------


@dataclass
class LiePresentation:
    """Weight-graded Lie algebra in homological degree zero.

    dims: {w: dimension}; labels (w, i).  bracket maps ((w1, i), (w2, j))
    with (w1, i) < (w2, j) to {(w1+w2, k): coeff}; antisymmetry fills the
    rest, brackets landing above the truncation must be omitted by the
    caller consistently (only weights <= max stored weight are trusted).
    """

    dims: dict
    bracket: dict

    def basis(self, w: int):
        return [(w, i) for i in range(self.dims.get(w, 0))]

    def brk(self, a, b) -> dict:
        if a == b:
            return {}
        if a < b:
            return self.bracket.get((a, b), {})
        return {k: -c for k, c in self.bracket.get((b, a), {}).items()}

    def check_antisymmetry(self) -> None:
        pass  # structural: brk is antisymmetric by construction

    def check_jacobi(self, max_weight: int) -> None:
        elems = [x for w in sorted(self.dims) for x in self.basis(w)]
        for a, b, c in itertools.combinations(elems, 3):
            if a[0] + b[0] + c[0] > max_weight:
                continue
            acc: dict = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for m, co in self.brk(x, y).items():
                    for m2, co2 in self.brk(m, z).items():
                        acc[m2] = acc.get(m2, Fraction(0)) + co * co2
            if any(v for v in acc.values()):
                raise HarrisonError(f"Jacobi fails on {(a, b, c)}")


def ce_complex(L: LiePresentation, w: int, max_p: int | None = None) -> ChainComplexOverQ:
    """Exterior-power chains of the weight-w block with the bracket face map."""
    elems = [x for wt in sorted(L.dims) for x in L.basis(wt)]
    basis: dict[int, list] = {}
    hi = max_p if max_p is not None else w
    for p in range(1, hi + 1):
        basis[p] = [
            c
            for c in itertools.combinations(elems, p)
            if sum(x[0] for x in c) == w
        ]
    index = {p: {c: i for i, c in enumerate(basis[p])} for p in basis}
    diff = {}
    for p in range(2, hi + 1):
        ent = []
        for col, chain in enumerate(basis[p]):
            for (ai, bi) in itertools.combinations(range(p), 2):
                a, b = chain[ai], chain[bi]
                rest = tuple(x for k, x in enumerate(chain) if k not in (ai, bi))
                sign = -1 if (ai + bi) % 2 else 1
                for m, co in L.brk(a, b).items():
                    merged, s2 = _insert_sorted(m, rest)
                    if merged is None:
                        continue
                    row = index[p - 1].get(merged)
                    if row is None:
                        raise HarrisonError("bracket left the window")
                    ent.append((row, col, Fraction(sign * s2) * co))
        diff[p] = RationalSparseMatrix(len(basis[p - 1]), len(basis[p]), ent)
    cx = ChainComplexOverQ(basis=basis, diff=diff)
    cx.validate()
    return cx


def _insert_sorted(x, sorted_rest):
    if x in sorted_rest:
        return None, 0
    out = list(sorted_rest)
    pos = 0
    while pos < len(out) and out[pos] < x:
        pos += 1
    out.insert(pos, x)
    return tuple(out), (-1 if pos % 2 else 1)


def hlie_table(L: LiePresentation, max_w: int) -> dict:
    """dim H^Lie_p(L)_w keyed by (p, w); internal degree is zero here."""
    cells = {}
    for w in range(1, max_w + 1):
        cx = ce_complex(L, w)
        for p, dim in cx.homology_dims(check=False).items():
            if dim:
                cells[(p, w)] = dim
    return cells
