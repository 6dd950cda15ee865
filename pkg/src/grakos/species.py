"""Partition species on the downward (signed) Brauer category.

Two families of functors to graded vector spaces are implemented, both
unital commutative algebra objects under disjoint union:

* the Z family: admissible partitions of a finite set (every part of size
  at least 3), a part of size k sitting in degree n*(k-2);
* the E family: weighted partitions (each part carries a nonnegative
  integer weight; empty parts need weight >= 2, parts of size 1 or 2 need
  weight >= 1), a part (k, g) sitting in degree n*(2g + k - 2).

Both are concentrated in degrees that are multiples of n, and the weight
grading is degree/n.  Basis elements carry a determinant twist to the n-th
power of the ambient set: we store elements against the sorted label order
and fold reordering signs (to the n-th power) into coefficients.

The quotient of the E family (n = 1) by the ideal generated by the
weight-2 empty part is also supported: that ideal has basis the weighted
partitions containing at least one part (empty, 2), so the quotient keeps
the complementary basis and kills products that land in the ideal.

The second half of the module builds the r-fold Day tensor powers of the
augmentation ideal as canonical "cluster words": ordered tuples of blocks
carrying basis elements, glued by matchings with no pair internal to a
single block.  These are the chain groups of the Harrison complex of a
species and are represented as canonically labeled structures with an
orientation sign, exactly like graph generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import brauer
from .brauer import BrauerMorphism
from .canonical import canonical_form, perm_sign

FAMILY_Z = "Z"
FAMILY_E = "E"
FAMILY_E_MOD_E2 = "E/e2"


class SpeciesError(Exception):
    pass


# -- basis elements -----------------------------------------------------

# A part is (elems, weight) with elems a sorted tuple of labels.
# A partition is a tuple of parts: nonempty parts sorted by first element,
# then empty parts sorted by weight (duplicates allowed among empty parts).


def _norm_partition(parts) -> tuple:
    nonempty = sorted(
        [(tuple(sorted(e)), g) for e, g in parts if len(e) > 0], key=lambda p: p[0]
    )
    empty = sorted([((), g) for e, g in parts if len(e) == 0], key=lambda p: p[1])
    return tuple(nonempty + empty)


def basis_element(S, parts):
    return (tuple(sorted(S)), _norm_partition(parts))


def part_degree(part, n: int) -> int:
    elems, g = part
    return n * (2 * g + len(elems) - 2)


def element_weight(basis_elt) -> int:
    _, parts = basis_elt
    return sum(2 * g + len(e) - 2 for e, g in parts)


def is_admissible(family: str, basis_elt) -> bool:
    S, parts = basis_elt
    covered = []
    for e, g in parts:
        covered.extend(e)
        if family == FAMILY_Z:
            if g != 0 or len(e) < 3:
                return False
        else:
            if len(e) == 0 and g < 2:
                return False
            if len(e) in (1, 2) and g < 1:
                return False
        if family == FAMILY_E_MOD_E2 and len(e) == 0 and g == 2:
            return False
    return sorted(covered) == list(S) and len(set(covered)) == len(covered)


def contains_e2(basis_elt) -> bool:
    _, parts = basis_elt
    return any(len(e) == 0 and g == 2 for e, g in parts)


def kappa(j: int):
    """The weight-(2j-2) empty-part generator on the empty set."""
    return basis_element((), [((), j)])


def unit_element():
    return basis_element((), [])


# -- bases --------------------------------------------------------------


def _set_partitions(elems: list):
    """All set partitions of elems into nonempty blocks."""
    if not elems:
        yield []
        return
    first, rest = elems[0], elems[1:]
    for sub in _set_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1 :]
        yield [[first]] + sub


def _even_multisets(total: int):
    """Multisets of even values >= 2 summing to total (weakly decreasing)."""
    if total == 0:
        yield ()
        return
    if total < 2 or total % 2:
        return
    for first in range(total, 1, -2):
        for rest in _even_multisets(total - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def zn_basis(S, w: int) -> list:
    """Admissible partition basis of the Z family in weight w on S."""
    S = tuple(sorted(S))
    if not S:
        return [unit_element()] if w == 0 else []
    out = []
    for partition in _set_partitions(list(S)):
        if any(len(b) < 3 for b in partition):
            continue
        if sum(len(b) - 2 for b in partition) == w:
            out.append(basis_element(S, [(tuple(b), 0) for b in partition]))
    return sorted(out)


def en_basis(S, w: int, exclude_e2: bool = False) -> list:
    """Admissible weighted partition basis of the E family in weight w on S."""
    S = tuple(sorted(S))
    out = []
    for partition in _set_partitions(list(S)):
        min_w = [1 if len(b) <= 2 else 0 for b in partition]
        c_min = sum(2 * m + len(b) - 2 for b, m in zip(partition, min_w))
        residual = w - c_min
        if residual < 0 or residual % 2:
            continue
        k = len(partition)
        # distribute residual/2 extra weight units over the k parts and
        # empty parts (an empty part of weight g eats 2g-2 = even >= 2)
        for extra_on_parts in range(residual // 2 + 1):
            rest = residual - 2 * extra_on_parts
            for combo in itertools.combinations_with_replacement(
                range(k), extra_on_parts
            ):
                extras = [0] * k
                for i in combo:
                    extras[i] += 1
                for empties in _even_multisets(rest):
                    parts = [
                        (tuple(b), m + x)
                        for b, m, x in zip(partition, min_w, extras)
                    ] + [((), v // 2 + 1) for v in empties]
                    elt = basis_element(S, parts)
                    if exclude_e2 and contains_e2(elt):
                        continue
                    out.append(elt)
    return sorted(set(out))


def family_basis(family: str, S, w: int) -> list:
    if family == FAMILY_Z:
        return zn_basis(S, w)
    if family == FAMILY_E:
        return en_basis(S, w)
    if family == FAMILY_E_MOD_E2:
        return en_basis(S, w, exclude_e2=True)
    raise SpeciesError(f"unknown family {family!r}")


# -- functoriality ------------------------------------------------------


def _extract_sign(order: list, x) -> int:
    """Sign of moving x to the front of the determinant word, removing it."""
    i = order.index(x)
    del order[i]
    return -1 if i % 2 else 1


def act_basis(family: str, n: int, m: BrauerMorphism, basis_elt):
    """Image of a single basis element under a normalized morphism.

    Returns (coefficient, basis element) or None when the image is zero.
    The coefficient collects the morphism's own sign, the determinant
    reordering signs to the n-th power, and nothing else.
    """
    S, parts = basis_elt
    if tuple(sorted(m.src)) != S:
        raise SpeciesError("morphism source does not match element ambient set")
    order = list(S)
    work = [(set(e), g) for e, g in parts]
    det_sign = 1
    for a, b in m.matching:
        det_sign *= _extract_sign(order, a)
        det_sign *= _extract_sign(order, b)
        ia = next(i for i, (e, _) in enumerate(work) if a in e)
        ib = next(i for i, (e, _) in enumerate(work) if b in e)
        if ia == ib:
            if family == FAMILY_Z:
                return None
            e, g = work[ia]
            work[ia] = (e - {a, b}, g + 1)
        else:
            ea, ga = work[ia]
            eb, gb = work[ib]
            merged = ((ea - {a}) | (eb - {b}), 0 if family == FAMILY_Z else ga + gb)
            work = [w for i, w in enumerate(work) if i not in (ia, ib)] + [merged]
    rename = {s: t for t, s in zip(m.tgt, m.injection)}
    renamed_order = [rename[x] for x in order]
    _, sort_sgn = _sorted_perm_sign(renamed_order)
    det_sign *= sort_sgn
    new_parts = [(tuple(sorted(rename[x] for x in e)), g) for e, g in work]
    elt = basis_element(m.tgt, new_parts)
    if family == FAMILY_E_MOD_E2 and contains_e2(elt):
        return None
    coeff = Fraction(m.sign) * (det_sign if n % 2 else 1)
    return coeff, elt


def _sorted_perm_sign(seq: list):
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    perm = [0] * len(seq)
    for new, old in enumerate(order):
        perm[old] = new
    return [seq[i] for i in order], perm_sign(perm)


def act(family: str, n: int, m: BrauerMorphism, element: dict) -> dict:
    """Functorial action on a linear combination {basis element: coeff}."""
    m = brauer.normalize(m)
    out: dict = {}
    for be, c in element.items():
        res = act_basis(family, n, m, be)
        if res is None:
            continue
        coeff, img = res
        s = out.get(img, Fraction(0)) + c * coeff
        if s:
            out[img] = s
        else:
            out.pop(img, None)
    return out


def disjoint_union(n: int, x_elt, y_elt):
    """(coeff, element) for the product of basis elements on disjoint sets.

    The determinant representative of the union is the sorted order; the
    coefficient is the n-th power of the sign sorting the concatenation
    (sorted S1, sorted S2).
    """
    (S1, parts1), (S2, parts2) = x_elt, y_elt
    if set(S1) & set(S2):
        raise SpeciesError("ambient sets must be disjoint")
    concat = list(S1) + list(S2)
    _, sgn = _sorted_perm_sign(concat)
    elt = basis_element(S1 + S2, list(parts1) + list(parts2))
    return (Fraction(sgn if n % 2 else 1), elt)


def multiply(family: str, n: int, x: dict, y: dict, glue: BrauerMorphism) -> dict:
    """Multiply two elements along a gluing morphism S1 + S2 -> S.

    glue should come from brauer.day_summands (no matching pair internal to
    either factor); the unit (empty partition of the empty set) is a
    two-sided unit for the identity gluing.
    """
    out: dict = {}
    for xe, xc in x.items():
        for ye, yc in y.items():
            c0, union = disjoint_union(n, xe, ye)
            res = act_basis(family, n, glue, union)
            if res is None:
                continue
            coeff, img = res
            s = out.get(img, Fraction(0)) + xc * yc * c0 * coeff
            if s:
                out[img] = s
            else:
                out.pop(img, None)
    return out


def en_to_zn(element: dict) -> dict:
    """Algebra map from the E family to the Z family.

    Zero-weight parts pass through; any positive-weight part kills the
    basis element.
    """
    out = {}
    for (S, parts), c in element.items():
        if any(g > 0 for _, g in parts):
            continue
        out[basis_element(S, parts)] = c
    return out


def augmentation(element: dict) -> Fraction:
    """Coefficient of the unit; all partitions of nonempty sets map to zero."""
    return element.get(unit_element(), Fraction(0))


def quotient_ideal_basis(S, w: int):
    """Bases of the weight-w ideal (kappa(2)) in the E family on S, and of
    the quotient.

    Multiplication by the weight-2 empty part is injective on basis
    elements (each value of the E family is free over the empty-set
    algebra), so the ideal basis is exactly the set of basis elements
    containing an (empty, 2) part.
    """
    full = en_basis(S, w)
    ideal = [b for b in full if contains_e2(b)]
    quotient = [b for b in full if not contains_e2(b)]
    return ideal, quotient


def serialize_element(element: dict) -> list:
    out = []
    for (S, parts), c in sorted(element.items()):
        out.append(
            {
                "parts": [{"elems": list(e), "g": g} for e, g in parts],
                "order": list(S),
                "coeff": f"{c.numerator}/{c.denominator}",
            }
        )
    return out


# -- Day tensor power words ---------------------------------------------
#
# A word of arity p on S is an ordered tuple of p blocks, block i carrying
# a basis element of the augmentation ideal on an abstract label set
# {(i, 0), ..., (i, k_i - 1)}, together with an injection of S into the
# elements and a matching of the remaining elements by pairs connecting
# distinct blocks.  The per-block determinant representative is the local
# index order.  Words are stored in a canonical labeling with orientation
# signs folded into coefficients; a word whose automorphism group acts
# with sign -1 is zero.


@dataclass(frozen=True)
class DayWord:
    family: str
    n: int
    S: tuple
    slot_weights: tuple  # weight of each block's basis element
    blocks: tuple  # per slot: tuple of parts ((local indices), weight)
    legs: tuple  # per label of sorted S: (slot, local index)
    pairs: tuple  # ((slot_a, ia), (slot_b, ib)) with slot_a < slot_b, sorted

    @property
    def arity(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> tuple:
        return tuple(
            sum(len(e) for e, _ in parts) for parts in self.blocks
        )

    def weight(self) -> int:
        return sum(self.slot_weights)

    def internal_degree(self) -> int:
        return self.n * self.weight()


def _word_parts_graph(family, n, S, blocks, legs, pairs):
    """Vertex/edge data for canonical labeling: vertices are parts."""
    parts_index = []  # (slot, part position) per vertex
    vert_of = {}
    colors = []
    for slot, parts in enumerate(blocks):
        for pi, (elems, g) in enumerate(parts):
            vert_of[(slot, pi)] = len(parts_index)
            parts_index.append((slot, pi))
            colors.append((slot, len(elems), g))
    part_of_elem = {}
    for slot, parts in enumerate(blocks):
        for pi, (elems, g) in enumerate(parts):
            for e in elems:
                part_of_elem[(slot, e)] = vert_of[(slot, pi)]
    edges = []
    for (sa, ia), (sb, ib) in pairs:
        edges.append((part_of_elem[(sa, ia)], part_of_elem[(sb, ib)], "m"))
    leg_list = []
    for label, (slot, idx) in zip(S, legs):
        leg_list.append((part_of_elem[(slot, idx)], label))
    return parts_index, colors, edges, leg_list, part_of_elem


def canonicalize_word(family, n, S, blocks, legs, pairs, coeff=Fraction(1)):
    """Canonical representative with sign, or None when the word is zero.

    blocks/legs/pairs are as in DayWord but in arbitrary labeling; the
    per-slot determinant representative of the input is its local index
    order.  Zero happens when some automorphism of the underlying cluster
    structure acts by -1 on the product of the per-slot determinants (only
    possible for odd n).
    """
    S = tuple(S)
    nslots = len(blocks)
    parts_index, colors, edges, leg_list, part_of_elem = _word_parts_graph(
        family, n, S, blocks, legs, pairs
    )
    nv = len(parts_index)
    res = canonical_form(nv, colors, edges, leg_list)

    # canonical order of parts; then within a part: legs sorted by label,
    # pair endpoints sorted by canonical pair key
    legs_of_part = {}
    for label, (slot, idx) in zip(S, legs):
        legs_of_part.setdefault(part_of_elem[(slot, idx)], []).append(
            (label, (slot, idx))
        )
    pair_key = {}
    grouped: dict = {}
    for pr in pairs:
        (sa, ia), (sb, ib) = pr
        va, vb = part_of_elem[(sa, ia)], part_of_elem[(sb, ib)]
        ka, kb = res.perm[va], res.perm[vb]
        key = (min(ka, kb), max(ka, kb))
        grouped.setdefault(key, []).append(pr)
    for key in grouped:
        grouped[key].sort()
        for rank, pr in enumerate(grouped[key]):
            pair_key[pr] = (key, rank)

    # new local index per element, slot by slot, parts in canonical order
    new_order_per_slot: dict[int, list] = {s: [] for s in range(nslots)}
    order_vertices = sorted(range(nv), key=lambda v: res.perm[v])
    new_parts_per_slot: dict[int, list] = {s: [] for s in range(nslots)}
    canon_vid: dict = {}  # (slot, position in canonical word) -> canonical vertex
    for v in order_vertices:
        slot, pi = parts_index[v]
        canon_vid[(slot, len(new_parts_per_slot[slot]))] = res.perm[v]
        elems, g = blocks[slot][pi]
        legs_here = sorted(legs_of_part.get(v, []), key=lambda t: repr(t[0]))
        ends_here = []
        for pr in pairs:
            for end in (0, 1):
                s_e, i_e = pr[end]
                if part_of_elem[(s_e, i_e)] == v and s_e == slot and i_e in elems:
                    ends_here.append((pair_key[pr], end, (s_e, i_e)))
        ends_here.sort(key=lambda t: (t[0], t[1]))
        ordered_elems = [idx for _, (sl, idx) in legs_here] + [
            idx for _, _, (sl, idx) in ends_here
        ]
        part_local = []
        for idx in ordered_elems:
            part_local.append((slot, idx))
        new_parts_per_slot[slot].append((part_local, g))
        new_order_per_slot[slot].extend(part_local)

    # relabeling map and the per-slot determinant sign
    relabel = {}
    sign = 1
    for slot in range(nslots):
        old_order = []
        for elems, _ in blocks[slot]:
            old_order.extend((slot, e) for e in elems)
        new_order = new_order_per_slot[slot]
        for new_idx, key in enumerate(new_order):
            relabel[key] = new_idx
        perm = [0] * len(old_order)
        pos_new = {key: i for i, key in enumerate(new_order)}
        for old_idx, key in enumerate(sorted(old_order, key=lambda t: t[1])):
            perm[old_idx] = pos_new[key]
        if n % 2:
            sign *= perm_sign(perm)

    new_blocks = []
    for slot in range(nslots):
        parts = tuple(
            (tuple(relabel[k] for k in part_local), g)
            for part_local, g in new_parts_per_slot[slot]
        )
        new_blocks.append(parts)
    new_legs = []
    for label, (slot, idx) in zip(S, legs):
        new_legs.append((slot, relabel[(slot, idx)]))
    new_pairs = []
    for pr in pairs:
        (sa, ia), (sb, ib) = pr
        ea = (sa, relabel[(sa, ia)])
        eb = (sb, relabel[(sb, ib)])
        if ea[0] > eb[0]:
            raise SpeciesError("pair endpoints must lie in increasing slots")
        new_pairs.append((ea, eb))
    new_pairs.sort()

    slot_weights = tuple(
        sum(2 * g + len(e) - 2 for e, g in blocks[s]) for s in range(nslots)
    )
    word = DayWord(
        family,
        n,
        S,
        slot_weights,
        tuple(new_blocks),
        tuple(new_legs),
        tuple(new_pairs),
    )

    # zero detection: automorphisms of the parts graph act on elements
    if n % 2:
        for auto in res.automorphisms:
            if all(auto[v] == v for v in range(nv)):
                continue
            vmap = {}
            for vc in range(nv):
                # canonical -> canonical conjugation of the automorphism
                inv0 = res.perm.index(vc)
                vmap[vc] = res.perm[auto[inv0]]
            if _auto_sign(word, canon_vid, vmap) < 0:
                return None
    return coeff * sign, word


def _auto_sign(word: DayWord, canon_vid: dict, vmap: dict) -> int:
    """Sign of a parts-graph automorphism on the per-slot determinants.

    canon_vid maps (slot, part position) of the canonical word to the
    canonical vertex id; vmap is the automorphism on canonical vertex ids.
    Elements follow their parts: legs are fixed (their parts cannot move),
    and parallel pair classes map onto each other; the choice of bijection
    inside a parallel class does not affect the sign.
    """
    part_of = {}
    for slot, parts in enumerate(word.blocks):
        for pi, (elems, _) in enumerate(parts):
            for e in elems:
                part_of[(slot, e)] = (slot, pi)
    part_of_vid = {v: sp for sp, v in canon_vid.items()}

    classes: dict = {}
    for pr in word.pairs:
        (sa, ia), (sb, ib) = pr
        va = canon_vid[part_of[(sa, ia)]]
        vb = canon_vid[part_of[(sb, ib)]]
        key = (min(va, vb), max(va, vb))
        classes.setdefault(key, []).append(pr)
    for key in classes:
        classes[key].sort()

    elem_map = {}
    for slot, idx in word.legs:
        elem_map[(slot, idx)] = (slot, idx)
    for key, prs in classes.items():
        a, b = key
        tkey = tuple(sorted((vmap[a], vmap[b])))
        targets = classes.get(tkey)
        if targets is None or len(targets) != len(prs):
            raise SpeciesError("automorphism does not preserve pair classes")
        for pr, tpr in zip(prs, targets):
            for end in (0, 1):
                src = pr[end]
                va = vmap[canon_vid[part_of[src]]]
                for tend in (0, 1):
                    if canon_vid[part_of[tpr[tend]]] == va:
                        elem_map[src] = tpr[tend]
                        break

    sign = 1
    for slot in range(word.arity):
        order = []
        for elems, _ in word.blocks[slot]:
            order.extend((slot, e) for e in elems)
        pos = {key: i for i, key in enumerate(order)}
        perm = [pos[elem_map[key]] for key in order]
        sign *= perm_sign(perm)
    return sign


def day_tensor_basis(family: str, n: int, r: int, S, w: int) -> list:
    """Canonical basis of the r-fold Day power of the augmentation ideal.

    Blocks carry homogeneous basis elements of weight >= 1 summing to w;
    the gluing morphism's matching has no pair internal to a single block.
    For r = 1 this is the basis of the augmentation ideal at S (the gluing
    must then be a bijection).
    """
    S = tuple(sorted(S))
    if r < 1:
        raise SpeciesError("arity must be >= 1")
    out = {}
    for weights in _compositions(w, r):
        if any(wi < 1 for wi in weights):
            continue
        for sizes in itertools.product(*[_block_sizes(family, wi) for wi in weights]):
            total = sum(sizes)
            rest = total - len(S)
            if rest < 0 or rest % 2:
                continue
            elements = [
                (slot, i) for slot, k in enumerate(sizes) for i in range(k)
            ]
            slot_bases = []
            ok = True
            for slot, (k, wi) in enumerate(zip(sizes, weights)):
                labels = tuple((slot, i) for i in range(k))
                basis = family_basis(family, labels, wi)
                if not basis:
                    ok = False
                    break
                slot_bases.append(basis)
            if not ok:
                continue
            for legs_img in itertools.permutations(elements, len(S)):
                used = set(legs_img)
                remaining = [e for e in elements if e not in used]
                for matching in _cross_matchings(remaining):
                    for combo in itertools.product(*slot_bases):
                        blocks = tuple(
                            tuple(
                                (tuple(i for _, i in e), g)
                                for e, g in parts
                            )
                            for (_, parts) in combo
                        )
                        res = canonicalize_word(
                            family,
                            n,
                            S,
                            blocks,
                            tuple(legs_img),
                            tuple(matching),
                        )
                        if res is None:
                            continue
                        _, word = res
                        out[word] = True
    return sorted(out, key=repr)


def _compositions(total: int, r: int):
    if r == 1:
        yield (total,)
        return
    for first in range(1, total - r + 2):
        for rest in _compositions(total - first, r - 1):
            yield (first,) + rest


def _block_sizes(family: str, w: int):
    """Possible ambient-set sizes of weight-w basis elements."""
    sizes = set()
    hi = 3 * w
    for k in range(0, hi + 1):
        labels = tuple(range(k))
        if family_basis(family, labels, w):
            sizes.add(k)
    return sorted(sizes)


def _cross_matchings(elements: list):
    """Perfect matchings with every pair connecting two distinct slots,
    endpoints ordered by slot."""
    if not elements:
        yield ()
        return
    a = elements[0]
    for i in range(1, len(elements)):
        b = elements[i]
        if a[0] == b[0]:
            continue
        rest = elements[1:i] + elements[i + 1 :]
        first, second = (a, b) if a[0] < b[0] else (b, a)
        for sub in _cross_matchings(rest):
            yield ((first, second),) + sub


def slot_permute(word: DayWord, sigma) -> tuple:
    """Apply a slot permutation (sigma[i] = new position of slot i).

    Returns (coefficient, canonical word) or None.  The coefficient
    contains the pair-reversal signs of the signed category (when a pair's
    endpoints end up in decreasing slot order it is flipped, at the cost of
    a sign for odd n) and the canonicalization sign; Koszul signs from the
    degrees of the permuted factors are the caller's business.
    """
    p = word.arity
    inv = [0] * p
    for old, new in enumerate(sigma):
        inv[new] = old
    blocks = tuple(
        tuple(
            (tuple(e for e in elems), g) for elems, g in word.blocks[inv[new]]
        )
        for new in range(p)
    )
    legs = tuple((sigma[s], i) for (s, i) in word.legs)
    pairs = []
    flips = 0
    for (sa, ia), (sb, ib) in word.pairs:
        na, nb = sigma[sa], sigma[sb]
        if na < nb:
            pairs.append(((na, ia), (nb, ib)))
        else:
            pairs.append(((nb, ib), (na, ia)))
            flips += 1
    coeff = Fraction(-1 if (word.n % 2 and flips % 2) else 1)
    return canonicalize_word(
        word.family, word.n, word.S, blocks, legs, tuple(pairs), coeff
    )


def merge_slots(word: DayWord, i: int) -> dict:
    """Multiply blocks i and i+1 (zero-based): the bar-complex face map.

    The pairs joining the two blocks become contractions of the species
    element carried by the merged block (handled by act_basis, so all the
    loop/merge/weight rules and determinant signs apply); pairs to other
    blocks and legs are re-indexed.  Returns {canonical word: coefficient}.
    """
    p = word.arity
    if not (0 <= i < p - 1):
        raise SpeciesError("merge position out of range")
    fam, n = word.family, word.n

    # concrete labels for the two blocks: (0, idx) and (1, idx)
    def lab(slot, idx):
        return (0, idx) if slot == i else (1, idx)

    both = []
    parts_in = []
    for off, slot in enumerate((i, i + 1)):
        for elems, g in word.blocks[slot]:
            parts_in.append((tuple((off, e) for e in elems), g))
        size = sum(len(e) for e, _ in word.blocks[slot])
        both.extend((off, e) for e in range(size))
    S12 = tuple(sorted(both))
    internal = [
        pr
        for pr in word.pairs
        if pr[0][0] in (i, i + 1) and pr[1][0] in (i, i + 1)
    ]
    matching = tuple(
        (lab(sa, ia), lab(sb, ib)) for (sa, ia), (sb, ib) in internal
    )
    survivors = tuple(x for x in S12 if x not in {e for prm in matching for e in prm})
    glue = BrauerMorphism(S12, survivors, survivors, matching, n % 2 == 1, 1)
    res = act_basis(fam, n, brauer.normalize(glue), (S12, _norm_partition(parts_in)))
    if res is None:
        return {}
    coeff, (new_S, new_parts) = res

    # rebuild the word: merged block sits at slot i, local order = new_S order
    local_of = {x: idx for idx, x in enumerate(new_S)}

    def new_slot_idx(slot, idx):
        if slot < i:
            return (slot, idx)
        if slot in (i, i + 1):
            return (i, local_of[lab(slot, idx)])
        return (slot - 1, idx)

    blocks = []
    for slot in range(p):
        if slot == i:
            blocks.append(
                tuple((tuple(local_of[x] for x in e), g) for e, g in new_parts)
            )
        elif slot == i + 1:
            continue
        else:
            blocks.append(word.blocks[slot])
    legs = tuple(new_slot_idx(s, idx) for (s, idx) in word.legs)
    pairs = []
    for pr in word.pairs:
        if pr in internal:
            continue
        (sa, ia), (sb, ib) = pr
        ea, eb = new_slot_idx(sa, ia), new_slot_idx(sb, ib)
        if ea[0] > eb[0]:
            ea, eb = eb, ea
        pairs.append((ea, eb))
    out = canonicalize_word(
        fam, n, word.S, tuple(blocks), legs, tuple(sorted(pairs)), Fraction(coeff)
    )
    if out is None:
        return {}
    c, w_out = out
    return {w_out: c}
