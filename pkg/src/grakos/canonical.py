"""Canonical labeling of small vertex-colored multigraphs.

Used for red-and-black graph generators and for the cluster structures
underlying the Day tensor powers of partition species.  Graphs here are
tiny (at most ~10 vertices), so we use color refinement followed by
exhaustive minimization over the refined classes.  This yields both a
canonical relabeling and the full automorphism group, which callers use
to extract orientation signs and detect classes that are killed by a
negative symmetry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

# safety valve: product of factorials of refinement cells we are willing
# to enumerate; structures in this package stay far below it
_MAX_ORBIT_ENUM = 80640


@dataclass(frozen=True)
class CanonicalResult:
    perm: tuple  # old vertex index -> new vertex index
    encoding: tuple  # canonical form (colors, edges, legs)
    automorphisms: tuple  # vertex permutations fixing the encoding


def _refine(n, colors, adj):
    """Iterated color refinement; adj[(u, v)] = sorted tuple of edge colors."""
    cur = list(colors)
    while True:
        sig = []
        for v in range(n):
            nb = []
            for u in range(n):
                key = (v, u) if v <= u else (u, v)
                cols = adj.get(key)
                if cols:
                    nb.append((cur[u], cols, u == v))
            sig.append((cur[v], tuple(sorted(nb))))
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if new == cur:
            return new
        cur = new


def canonical_form(n, vertex_colors, edges, legs=()):
    """Canonicalize a multigraph with colored vertices/edges and labeled legs.

    edges: iterable of (u, v, edge_color) with multiplicity by repetition,
    u == v allowed (loops).  legs: iterable of (vertex, leg_label); labels
    are encoded into the vertex colors so automorphisms fix them.

    Returns a CanonicalResult whose perm maps old to new indices and whose
    automorphisms are all old-index permutations preserving the structure.
    """
    legs_at = {}
    for v, lab in legs:
        legs_at.setdefault(v, []).append(lab)
    base = [
        (vertex_colors[v], tuple(sorted(legs_at.get(v, []), key=repr)))
        for v in range(n)
    ]
    adj = {}
    for u, v, c in edges:
        key = (u, v) if u <= v else (v, u)
        adj.setdefault(key, []).append(c)
    adj = {k: tuple(sorted(v, key=repr)) for k, v in adj.items()}

    ranks = {s: i for i, s in enumerate(sorted(set(base), key=repr))}
    refined = _refine(n, [ranks[b] for b in base], adj)

    cells: dict[int, list] = {}
    for v in range(n):
        cells.setdefault(refined[v], []).append(v)
    cell_list = [cells[c] for c in sorted(cells)]
    total = 1
    for c in cell_list:
        f = 1
        for i in range(2, len(c) + 1):
            f *= i
        total *= f
    if total > _MAX_ORBIT_ENUM:
        raise RuntimeError(f"canonical_form: symmetry search too large ({total})")

    base_key = tuple(base[v] for v in range(n))

    def encode(perm):
        # perm: old -> new
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        colors_part = tuple(base_key[inv[i]] for i in range(n))
        edges_part = []
        for (u, v), cols in adj.items():
            a, b = perm[u], perm[v]
            if a > b:
                a, b = b, a
            for c in cols:
                edges_part.append((a, b, c))
        return (colors_part, tuple(sorted(edges_part, key=repr)))

    best_enc = None
    best_perms = []
    for assignment in itertools.product(*(itertools.permutations(c) for c in cell_list)):
        perm = [0] * n
        new_index = 0
        # cells in sorted color order; inside a cell, order by the chosen perm
        for cell_new in assignment:
            for v in cell_new:
                perm[v] = new_index
                new_index += 1
        enc = encode(perm)
        key = repr(enc)
        if best_enc is None or key < best_enc[0]:
            best_enc = (key, enc)
            best_perms = [tuple(perm)]
        elif key == best_enc[0]:
            best_perms.append(tuple(perm))

    perm0 = best_perms[0]
    inv0 = [0] * n
    for old, new in enumerate(perm0):
        inv0[new] = old
    autos = []
    for p in best_perms:
        # automorphism in old labels: old -> old
        a = tuple(inv0[p[v]] for v in range(n))
        autos.append(a)
    return CanonicalResult(perm=perm0, encoding=best_enc[1], automorphisms=tuple(autos))


def perm_sign(perm) -> int:
    """Sign of a permutation given as a sequence old->new."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def sort_sign(items, key=None) -> tuple[tuple, int]:
    """Stable sort returning (sorted tuple, sign of the sorting permutation).

    Items must be distinct under the key; a repeated key means the caller's
    determinant is zero and should be handled before calling.
    """
    keyed = [(key(x) if key else x) for x in items]
    order = sorted(range(len(items)), key=lambda i: keyed[i])
    perm = [0] * len(items)
    for new, old in enumerate(order):
        perm[old] = new
    return tuple(items[i] for i in order), perm_sign(perm)
