"""Red-and-black graph complexes and black graph complexes.

Generators are admissible weighted graphs with two edge colors and legs
labeled by a finite set S: every vertex v satisfies
2 w(v) + val(v) >= 3.  A generator carries an orientation consisting of an
ordering of its black edges and an ordering of its legs (the latter taken
to the n-th power); we store canonical representatives whose black edges
are sorted and whose legs are sorted by label, and fold all reordering
signs into coefficients.  A graph whose automorphism group acts by -1 on
det(black edges) is zero; in particular any graph with two parallel black
edges (or two black loops at one vertex) vanishes.  Label-preserving
automorphisms fix legs pointwise, so leg signs only enter through the
functorial action and the normalization of representatives.

Degrees: a graph has internal degree q = n * sum_v (2 w(v) + val(v) - 2)
and total degree q + #(black edges).  The differential contracts a black
edge (d_con) or recolors it red (d_col, with a minus sign); contracting a
loop adds one to the weight in the E family and is zero in the Z family.
The orientation is contracted by moving the edge to the front of the
black order.  Both parts preserve q and drop the total degree by one.

Families and variants:

* RB: all admissible graphs (the unit is the empty graph on the empty
  label set);
* RB_conn: quotient by the unit and by graphs whose black subgraph (all
  vertices, black edges) is disconnected;
* G: further quotient of RB_conn by graphs with at least one red edge;
  only d_con survives.

The downward (signed) Brauer category acts by turning matched leg pairs
into red edges and relabeling the remaining legs.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass
from fractions import Fraction

from .brauer import BrauerMorphism, normalize as brauer_normalize
from .canonical import canonical_form, perm_sign
from .exactla import ChainComplexOverQ, RationalSparseMatrix

FAMILY_Z = "Z"
FAMILY_E = "E"
VARIANT_RB = "RB"
VARIANT_RB_CONN = "RB_conn"
VARIANT_G = "G"


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class RBGraph:
    """Canonical labeled representative of an orientation class."""

    nv: int
    weights: tuple  # per-vertex weight
    black: tuple  # (u, v) with u <= v, strictly sorted (no duplicates)
    red: tuple  # (u, v) with u <= v, sorted multiset
    legs: tuple  # (vertex, label) sorted by label

    def valence(self, v: int) -> int:
        val = 0
        for u, w in self.black + self.red:
            val += (u == v) + (w == v)
        for u, _ in self.legs:
            val += u == v
        return val

    def internal_degree(self, n: int) -> int:
        return n * sum(
            2 * w + self.valence(v) - 2 for v, w in enumerate(self.weights)
        )

    def total_degree(self, n: int) -> int:
        return self.internal_degree(n) + len(self.black)

    def is_admissible(self) -> bool:
        return all(
            2 * w + self.valence(v) >= 3 for v, w in enumerate(self.weights)
        )

    def black_connected(self) -> bool:
        if self.nv == 0:
            return False
        seen = {0}
        frontier = [0]
        adj: dict[int, list] = {v: [] for v in range(self.nv)}
        for u, v in self.black:
            adj[u].append(v)
            adj[v].append(u)
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return len(seen) == self.nv

    def genus(self) -> int:
        """First Betti number of the full graph plus the total weight.

        Only meaningful for connected graphs.
        """
        edges = len(self.black) + len(self.red)
        return edges - self.nv + 1 + sum(self.weights)

    def serialize(self) -> dict:
        return {
            "nv": self.nv,
            "weights": list(self.weights),
            "black": [list(e) for e in self.black],
            "red": [list(e) for e in self.red],
            "legs": [[v, lab] for v, lab in self.legs],
        }

    @staticmethod
    def deserialize(data: dict) -> "RBGraph":
        return RBGraph(
            data["nv"],
            tuple(data["weights"]),
            tuple(tuple(e) for e in data["black"]),
            tuple(tuple(e) for e in data["red"]),
            tuple((v, lab) for v, lab in data["legs"]),
        )


def canonicalize(
    nv: int,
    weights,
    black_ordered,
    red,
    legs_ordered,
    n: int,
    coeff=Fraction(1),
):
    """Normalize a raw oriented graph to (coefficient, RBGraph) or None.

    black_ordered is the input orientation of the black edges; the input
    leg orientation is the given order of legs_ordered (labels must be
    distinct).  Returns None for the zero class.
    """
    weights = tuple(weights)
    black_in = [tuple(sorted(e)) for e in black_ordered]
    red_in = [tuple(sorted(e)) for e in red]
    legs_in = list(legs_ordered)
    if len({lab for _, lab in legs_in}) != len(legs_in):
        raise GraphError("duplicate leg labels")
    if len(set(black_in)) != len(black_in):
        return None  # parallel black pair: an edge swap acts by -1

    colors = [("w", weights[v]) for v in range(nv)]
    edges = [(u, v, "B") for u, v in black_in] + [(u, v, "R") for u, v in red_in]
    res = canonical_form(nv, colors, edges, [(v, lab) for v, lab in legs_in])
    perm = res.perm

    new_black_unsorted = [
        tuple(sorted((perm[u], perm[v]))) for u, v in black_in
    ]
    new_black = sorted(new_black_unsorted)
    order = sorted(range(len(new_black)), key=lambda i: new_black_unsorted[i])
    edge_perm = [0] * len(order)
    for new_pos, old_pos in enumerate(order):
        edge_perm[old_pos] = new_pos
    sign = perm_sign(edge_perm)

    legs_relabeled = [(perm[v], lab) for v, lab in legs_in]
    legs_sorted = sorted(legs_relabeled, key=lambda t: repr(t[1]))
    lorder = sorted(
        range(len(legs_relabeled)), key=lambda i: repr(legs_relabeled[i][1])
    )
    leg_perm = [0] * len(lorder)
    for new_pos, old_pos in enumerate(lorder):
        leg_perm[old_pos] = new_pos
    if n % 2:
        sign *= perm_sign(leg_perm)

    new_red = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in red_in))
    new_weights = [0] * nv
    for v in range(nv):
        new_weights[perm[v]] = weights[v]
    graph = RBGraph(
        nv,
        tuple(new_weights),
        tuple(new_black),
        new_red,
        tuple(legs_sorted),
    )
    if not graph.is_admissible():
        raise GraphError("inadmissible graph")

    # orientation-reversing automorphism => zero class
    black_index = {e: i for i, e in enumerate(graph.black)}
    inv_perm = [0] * nv
    for old, new in enumerate(perm):
        inv_perm[new] = old
    for auto in res.automorphisms:
        if all(auto[v] == v for v in range(nv)):
            continue
        # automorphisms come in input labels; conjugate into canonical ones
        amap = [perm[auto[inv_perm[v_can]]] for v_can in range(nv)]
        eperm = []
        for u, v in graph.black:
            img = tuple(sorted((amap[u], amap[v])))
            eperm.append(black_index[img])
        if perm_sign(eperm) < 0:
            return None
    return coeff * sign, graph


def differential(
    graph: RBGraph, family: str, n: int, variant: str
) -> dict:
    """d = d_con + d_col on a canonical generator, as {generator: coeff}.

    The orientation rule contracts the black order by moving the edge to
    the front ((-1)^position) before deleting it; d_col carries an overall
    minus sign.  Terms falling out of the variant (disconnected black
    subgraph for the connected quotients, red edges for the black complex)
    are dropped.
    """
    out: dict = {}
    for k, (u, v) in enumerate(graph.black):
        pos_sign = -1 if k % 2 else 1
        rest = [e for i, e in enumerate(graph.black) if i != k]
        # contraction
        term = _contract(graph, k, family)
        if term is not None:
            nv2, w2, black2, red2, legs2 = term
            res = canonicalize(nv2, w2, black2, red2, legs2, n)
            if res is not None:
                c, g2 = res
                if _in_variant(g2, variant):
                    _acc(out, g2, Fraction(pos_sign) * c)
        # recoloring
        res = canonicalize(
            graph.nv,
            graph.weights,
            rest,
            list(graph.red) + [(u, v)],
            list(graph.legs),
            n,
        )
        if res is not None:
            c, g2 = res
            if _in_variant(g2, variant):
                _acc(out, g2, Fraction(-pos_sign) * c)
    return out


def _acc(out: dict, key, val) -> None:
    s = out.get(key, Fraction(0)) + val
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _contract(graph: RBGraph, k: int, family: str):
    u, v = graph.black[k]
    rest = [e for i, e in enumerate(graph.black) if i != k]
    if u == v:
        if family == FAMILY_Z:
            return None
        weights = list(graph.weights)
        weights[u] += 1
        return graph.nv, weights, rest, list(graph.red), list(graph.legs)
    # merge v into u, relabel the last vertex down
    def rel(x):
        if x == v:
            return u
        if x > v:
            return x - 1
        return x

    weights = []
    for x, w in enumerate(graph.weights):
        if x == v:
            continue
        weights.append(w + (graph.weights[v] if x == u else 0))
    black2 = [tuple(sorted((rel(a), rel(b)))) for a, b in rest]
    red2 = [tuple(sorted((rel(a), rel(b)))) for a, b in graph.red]
    legs2 = [(rel(a), lab) for a, lab in graph.legs]
    return graph.nv - 1, weights, black2, red2, legs2


def _in_variant(graph: RBGraph, variant: str) -> bool:
    if variant == VARIANT_RB:
        return True
    if variant == VARIANT_RB_CONN:
        return graph.black_connected()
    if variant == VARIANT_G:
        return graph.black_connected() and not graph.red
    raise GraphError(f"unknown variant {variant!r}")


# -- enumeration ----------------------------------------------------------


def enumerate_generators(
    family: str, variant: str, n: int, S, max_q: int
) -> list[RBGraph]:
    """All canonical nonzero generators with internal degree <= max_q."""
    S = tuple(sorted(S, key=repr))
    budget = max_q // n
    found: dict[RBGraph, None] = {}
    if variant == VARIANT_RB and not S:
        found[RBGraph(0, (), (), (), ())] = None  # the unit
    for nv in range(1, budget + 1):
        for weights in _weight_vectors(family, nv, budget):
            base = sum(2 * w - 2 for w in weights)
            for black, red in _edge_multisets(
                nv, budget, weights, allow_red=(variant != VARIANT_G)
            ):
                for legs in _leg_assignments(nv, S):
                    units = []
                    ok = True
                    val = [0] * nv
                    for a, b in black + red:
                        val[a] += 1
                        val[b] += 1
                    for vtx, lab in legs:
                        val[vtx] += 1
                    for vtx in range(nv):
                        u = 2 * weights[vtx] + val[vtx] - 2
                        if 2 * weights[vtx] + val[vtx] < 3:
                            ok = False
                            break
                        units.append(u)
                    if not ok or sum(units) > budget:
                        continue
                    res = canonicalize(nv, weights, black, red, legs, n)
                    if res is None:
                        continue
                    _, g = res
                    if _in_variant(g, variant):
                        found[g] = None
    return sorted(found, key=repr)


def _weight_vectors(family: str, nv: int, budget: int):
    if family == FAMILY_Z:
        yield (0,) * nv
        return
    maxw = (budget + 2) // 2
    for ws in itertools.product(range(maxw + 1), repeat=nv):
        if sum(max(0, 2 * w - 2) for w in ws) <= budget:
            yield ws


def _edge_multisets(nv: int, budget: int, weights, allow_red: bool):
    """Black (multiplicity <= 1) and red (unbounded) edge multisets.

    Pruned by the per-vertex and total unit budget, counting only edge
    valences (legs can only increase units).
    """
    pairs = [(i, j) for i in range(nv) for j in range(i, nv)]

    def rec(idx, black, red, val):
        if idx == len(pairs):
            yield list(black), list(red)
            return
        i, j = pairs[idx]
        options = []
        for nb in (0, 1):
            for nr in range(0, budget + 3):
                if not allow_red and nr > 0:
                    break
                add_i = (nb + nr) * (2 if i == j else 1)
                val2 = list(val)
                val2[i] += add_i if i == j else (nb + nr)
                if i != j:
                    val2[j] += nb + nr
                if any(
                    2 * weights[v] + val2[v] - 2 > budget for v in (i, j)
                ):
                    break
                lower = sum(
                    max(1, 2 * weights[v] + val2[v] - 2) for v in range(nv)
                )
                if lower > budget:
                    break
                options.append((nb, nr, val2))
        for nb, nr, val2 in options:
            black2 = black + [(i, j)] * nb
            red2 = red + [(i, j)] * nr
            yield from rec(idx + 1, black2, red2, val2)

    yield from rec(0, [], [], [0] * nv)


def _leg_assignments(nv: int, S):
    for combo in itertools.product(range(nv), repeat=len(S)):
        yield [(v, lab) for v, lab in zip(combo, S)]


def build_complex(
    family: str, variant: str, n: int, S, max_q: int
) -> tuple[ChainComplexOverQ, dict]:
    """Chain complex (graded by total degree, with q as secondary grading).

    Returns (complex, index) where index maps each generator to its
    (degree, position).  The q <= max_q window is closed under d.
    """
    gens = enumerate_generators(family, variant, n, S, max_q)
    by_deg: dict[int, list] = {}
    for g in gens:
        by_deg.setdefault(g.total_degree(n), []).append(g)
    for d in by_deg:
        by_deg[d].sort(key=repr)
    index = {}
    for d, gs in by_deg.items():
        for i, g in enumerate(gs):
            index[g] = (d, i)
    diff = {}
    degrees = sorted(by_deg)
    for d in degrees:
        rows = len(by_deg.get(d - 1, []))
        ent = []
        for col, g in enumerate(by_deg[d]):
            for g2, c in differential(g, family, n, variant).items():
                if g2 not in index:
                    raise GraphError("differential left the enumerated window")
                d2, row = index[g2]
                if d2 != d - 1:
                    raise GraphError("differential does not lower degree by 1")
                ent.append((row, col, c))
        if rows or by_deg[d]:
            diff[d] = RationalSparseMatrix(rows, len(by_deg[d]), ent)
    gradings = {
        d: [g.internal_degree(n) for g in gs] for d, gs in by_deg.items()
    }
    cx = ChainComplexOverQ(
        basis={d: list(gs) for d, gs in by_deg.items()},
        diff=diff,
        gradings=gradings,
    )
    return cx, index


def homology_table(
    family: str, variant: str, n: int, S, max_q: int, check: bool = True
) -> dict:
    """{(p, q): dim} with p = total degree - q, for q <= max_q."""
    cx, _ = build_complex(family, variant, n, S, max_q)
    out = {}
    for (deg, q), dim in cx.homology_dims_graded(check=check).items():
        if dim:
            out[(deg - q, q)] = dim
    return out


def relative_homology_table(n: int, S, max_q: int, variant=VARIANT_G) -> dict:
    """Relative homology of (Z family, E family) black complexes at S.

    Mapping cone of the weight-killing projection from the E-family
    complex to the Z-family complex; keys (p, q) with p = degree - q.
    """
    from .exactla import mapping_cone

    e_cx, e_index = build_complex(FAMILY_E, variant, n, S, max_q)
    z_cx, z_index = build_complex(FAMILY_Z, variant, n, S, max_q)
    f_mats = {}
    for d, gs in e_cx.basis.items():
        rows = len(z_cx.basis.get(d, []))
        ent = []
        for col, g in enumerate(gs):
            if any(w > 0 for w in g.weights):
                continue
            zg = RBGraph(g.nv, g.weights, g.black, g.red, g.legs)
            if zg in z_index:
                d2, row = z_index[zg]
                ent.append((row, col, Fraction(1)))
        f_mats[d] = RationalSparseMatrix(rows, len(gs), ent)
    cone = mapping_cone(e_cx, z_cx, f_mats)
    # secondary grading: q of the underlying generator
    gradings = {}
    for d, items in cone.basis.items():
        gr = []
        for tag, g in items:
            gr.append(g.internal_degree(n))
        gradings[d] = gr
    cone.gradings = gradings
    out = {}
    for (deg, q), dim in cone.homology_dims_graded(check=True).items():
        if dim:
            out[(deg - q, q)] = dim
    return out


# -- Brauer functoriality ---------------------------------------------------


def act_rb(m: BrauerMorphism, element: dict, n: int) -> dict:
    """Action of a downward Brauer morphism on an RB element over its source."""
    m = brauer_normalize(m)
    out: dict = {}
    for g, c in element.items():
        res = _act_one(m, g, n)
        if res is None:
            continue
        coeff, g2 = res
        _acc(out, g2, c * coeff)
    return out


def _act_one(m: BrauerMorphism, g: RBGraph, n: int):
    legs = list(g.legs)
    labels = [lab for _, lab in legs]
    if tuple(sorted(labels, key=repr)) != tuple(sorted(m.src, key=repr)):
        raise GraphError("morphism source does not match graph legs")
    red = list(g.red)
    sign = 1
    for a, b in m.matching:
        ia = next(i for i, (_, lab) in enumerate(legs) if lab == a)
        va = legs.pop(ia)[0]
        sign *= -1 if ia % 2 else 1
        ib = next(i for i, (_, lab) in enumerate(legs) if lab == b)
        vb = legs.pop(ib)[0]
        sign *= -1 if ib % 2 else 1
        red.append(tuple(sorted((va, vb))))
    rename = {s: t for t, s in zip(m.tgt, m.injection)}
    legs = [(v, rename[lab]) for v, lab in legs]
    res = canonicalize(
        g.nv,
        g.weights,
        list(g.black),
        red,
        legs,
        n,
        Fraction(m.sign) * (sign if n % 2 else 1),
    )
    return res


# -- transfers on black graph complexes --------------------------------------


def chi(graph: RBGraph, v: int, n: int) -> int:
    return n * (2 * graph.weights[v] + graph.valence(v) - 2)


def transfer_t(element: dict, n: int, leg_label=1) -> dict:
    """Add a leg in all ways, weighted by the local degree chi(v)."""
    out: dict = {}
    for g, c in element.items():
        if g.legs:
            raise GraphError("transfer_t expects generators without legs")
        if g.internal_degree(n) <= 0:
            raise GraphError("transfer_t needs positive internal degree")
        for v in range(g.nv):
            coeff = chi(g, v, n)
            if not coeff:
                continue
            res = canonicalize(
                g.nv,
                g.weights,
                list(g.black),
                list(g.red),
                list(g.legs) + [(v, leg_label)],
                n,
            )
            if res is None:
                continue
            c2, g2 = res
            _acc(out, g2, c * c2 * coeff)
    return out


def transfer_pi(element: dict, n: int) -> dict:
    """Delete the unique leg; zero when the result would be inadmissible.

    Admissibility is evaluated on the leg-deleted graph: the leg's vertex
    must satisfy 2 w + (val - 1) >= 3.
    """
    out: dict = {}
    for g, c in element.items():
        if len(g.legs) != 1:
            raise GraphError("transfer_pi expects exactly one leg")
        (v, _lab) = g.legs[0]
        if 2 * g.weights[v] + g.valence(v) - 1 < 3:
            continue
        res = canonicalize(
            g.nv, g.weights, list(g.black), list(g.red), [], n
        )
        if res is None:
            continue
        c2, g2 = res
        _acc(out, g2, c * c2)
    return out


def deg_cgp(graph: RBGraph, n: int, S_size: int | None = None) -> int:
    """Edge count minus twice the genus, for connected black-only graphs.

    Cross-checked against the degree dictionary
    deg - (1 + 1/n) deg_int + |S| - 2.
    """
    if graph.red:
        raise GraphError("deg_cgp is defined on black graphs")
    if not graph.black_connected():
        raise GraphError("deg_cgp needs a connected graph")
    e = len(graph.black)
    g_curve = graph.genus()
    first = e - 2 * g_curve
    s = len(graph.legs) if S_size is None else S_size
    q = graph.internal_degree(n)
    total = graph.total_degree(n)
    second_num = total * n - (n + 1) * q + (s - 2) * n
    if second_num % n:
        raise GraphError("degree dictionary is not integral")
    second = second_num // n
    if first != second:
        raise GraphError("degree dictionary mismatch")
    return first


# -- disk cache ---------------------------------------------------------------


def cache_root() -> str:
    return os.environ.get("KOSZUL_CACHE", ".koszul-cache")


def cache_key(**params) -> str:
    blob = json.dumps(params, sort_keys=True, default=repr).encode()
    return hashlib.sha256(blob).hexdigest()[:24]


def cached_complex(family, variant, n, S, max_q):
    """build_complex with a content-addressed disk cache."""
    key = cache_key(
        kind="complex", family=family, variant=variant, n=n, S=list(S), max_q=max_q
    )
    root = os.path.join(cache_root(), key)
    basis_path = os.path.join(root, "basis.txt")
    if os.path.exists(basis_path):
        try:
            return _load_complex(root)
        except Exception:
            # corrupted entries are evicted, never silently reused
            for name in os.listdir(root):
                os.remove(os.path.join(root, name))
    cx, index = build_complex(family, variant, n, S, max_q)
    os.makedirs(root, exist_ok=True)
    tmp = basis_path + ".tmp"
    payload = {
        "degrees": {
            str(d): [g.serialize() for g in gs] for d, gs in cx.basis.items()
        },
        "gradings": {str(d): v for d, v in (cx.gradings or {}).items()},
    }
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, basis_path)
    for d, mat in cx.diff.items():
        path = os.path.join(root, f"d{d}.mtx")
        with open(path + ".tmp", "w") as fh:
            fh.write(mat.to_text())
        os.replace(path + ".tmp", path)
    return cx, index


def _load_complex(root):
    with open(os.path.join(root, "basis.txt")) as fh:
        payload = json.load(fh)
    basis = {}
    for d, gs in payload["degrees"].items():
        basis[int(d)] = [RBGraph.deserialize(g) for g in gs]
    gradings = {int(d): v for d, v in payload["gradings"].items()}
    diff = {}
    for name in os.listdir(root):
        if name.startswith("d") and name.endswith(".mtx"):
            d = int(name[1:-4])
            with open(os.path.join(root, name)) as fh:
                diff[d] = RationalSparseMatrix.from_text(fh.read())
    cx = ChainComplexOverQ(basis=basis, diff=diff, gradings=gradings)
    index = {}
    for d, gs in basis.items():
        for i, g in enumerate(gs):
            index[g] = (d, i)
    return cx, index
