"""Exact sparse linear algebra over the rationals.

Everything downstream (graph complexes, Harrison homology, coend
realizations) reduces to ranks, nullspaces and homology dimensions of
sparse matrices with Fraction entries.  All computations here are exact;
there is no floating point anywhere in this package.

Matrices are immutable after construction and safe to share between
threads.  Elimination orders are deterministic (Markowitz score with
(row, col) tie-breaking), so ranks, nullspace bases and homology tables
are reproducible bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

FORMAT_TAG = "exactla-v1"


class ExactLAError(Exception):
    pass


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalSparseMatrix:
    """Sparse rows x cols matrix over Q, stored as {(i, j): Fraction}.

    Invariants: no stored zeros, no duplicate positions (duplicates in the
    input are summed during normalization).
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ExactLAError("negative dimensions")
        self.rows = rows
        self.cols = cols
        acc: dict = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for item in items:
                if isinstance(entries, dict):
                    (i, j), v = item
                else:
                    i, j, v = item
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ExactLAError(f"entry ({i},{j}) out of bounds")
                v = _fr(v)
                if v:
                    w = acc.get((i, j), Fraction(0)) + v
                    if w:
                        acc[(i, j)] = w
                    else:
                        acc.pop((i, j), None)
        self.entries = acc

    # -- constructors ---------------------------------------------------

    @staticmethod
    def identity(n: int) -> "RationalSparseMatrix":
        return RationalSparseMatrix(n, n, [(i, i, 1) for i in range(n)])

    @staticmethod
    def zero(rows: int, cols: int) -> "RationalSparseMatrix":
        return RationalSparseMatrix(rows, cols)

    @staticmethod
    def from_rows(rows_list: Sequence[Sequence], cols: int | None = None):
        """Build from dense row lists (for tests and tiny matrices)."""
        r = len(rows_list)
        c = cols if cols is not None else (len(rows_list[0]) if rows_list else 0)
        ent = []
        for i, row in enumerate(rows_list):
            for j, v in enumerate(row):
                if v:
                    ent.append((i, j, v))
        return RationalSparseMatrix(r, c, ent)

    @staticmethod
    def from_row_dicts(rows_list: Sequence[dict], cols: int):
        ent = []
        for i, row in enumerate(rows_list):
            for j, v in row.items():
                ent.append((i, j, v))
        return RationalSparseMatrix(len(rows_list), cols, ent)

    # -- basic ops ------------------------------------------------------

    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "RationalSparseMatrix":
        return RationalSparseMatrix(
            self.cols, self.rows, [(j, i, v) for (i, j), v in self.entries.items()]
        )

    def matmul(self, other: "RationalSparseMatrix") -> "RationalSparseMatrix":
        if self.cols != other.rows:
            raise ExactLAError("shape mismatch in matmul")
        rows_other = [dict() for _ in range(other.rows)]
        for (i, j), v in other.entries.items():
            rows_other[i][j] = v
        acc: dict = {}
        by_row: dict[int, list] = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, []).append((k, v))
        for i, terms in by_row.items():
            for k, v in terms:
                for j, w in rows_other[k].items():
                    key = (i, j)
                    s = acc.get(key, Fraction(0)) + v * w
                    if s:
                        acc[key] = s
                    else:
                        acc.pop(key, None)
        return RationalSparseMatrix(self.rows, other.cols, acc)

    def apply(self, vec: dict) -> dict:
        """Matrix times sparse column vector {j: coeff} -> {i: coeff}."""
        out: dict = {}
        for (i, j), v in self.entries.items():
            c = vec.get(j)
            if c:
                s = out.get(i, Fraction(0)) + v * c
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, RationalSparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"RationalSparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    # -- rank: fraction-free elimination --------------------------------

    def rank(self) -> int:
        """Rank over Q by fraction-free (Bareiss) elimination.

        Rows are scaled to integers first (scaling does not change rank),
        then eliminated with division postponed to the exact Bareiss step.
        Pivots are chosen by Markowitz score to limit fill-in, ties broken
        by (row, col), so the pivot sequence is deterministic.
        """
        rows = []
        for rd in self.row_dicts():
            if not rd:
                continue
            den = 1
            for v in rd.values():
                den = den * v.denominator // gcd(den, v.denominator)
            row = {j: int(v * den) for j, v in rd.items()}
            g = 0
            for v in row.values():
                g = gcd(g, abs(v))
            if g > 1:
                row = {j: v // g for j, v in row.items()}
            rows.append(row)
        return _int_rank_bareiss(rows)

    def rank_mod(self, p: int) -> int:
        """Rank of the reduction mod p.  Raises if p divides a denominator."""
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            if v.denominator % p == 0:
                raise ExactLAError(f"prime {p} divides a denominator")
            c = (v.numerator * pow(v.denominator, -1, p)) % p
            if c:
                rows[i][j] = c
        rows = [r for r in rows if r]
        rank = 0
        pivots: dict[int, dict] = {}
        for row in rows:
            row = dict(row)
            while row:
                j = min(row)
                piv = pivots.get(j)
                if piv is None:
                    inv = pow(row[j], -1, p)
                    pivots[j] = {k: (v * inv) % p for k, v in row.items()}
                    rank += 1
                    break
                c = row[j]
                for k, v in piv.items():
                    w = (row.get(k, 0) - c * v) % p
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
        return rank

    def nullspace_basis(self) -> list[dict]:
        """Basis of ker(M) as sparse {col: Fraction} vectors.

        Computed from the reduced row echelon form; one vector per free
        column, supported on that column plus the pivot columns.
        """
        ech = Echelon()
        for rd in self.row_dicts():
            ech.add(rd)
        return ech.nullspace(self.cols)

    # -- text exchange format -------------------------------------------

    def to_text(self) -> str:
        lines = [FORMAT_TAG, f"{self.rows} {self.cols} {self.nnz()}"]
        for (i, j) in sorted(self.entries):
            v = self.entries[(i, j)]
            lines.append(f"{i} {j} {v.numerator}/{v.denominator}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "RationalSparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != FORMAT_TAG:
            raise ExactLAError(f"missing {FORMAT_TAG} header")
        r, c, nnz = (int(x) for x in lines[1].split())
        ent = []
        for ln in lines[2 : 2 + nnz]:
            si, sj, sv = ln.split()
            num, den = sv.split("/")
            ent.append((int(si), int(sj), Fraction(int(num), int(den))))
        return RationalSparseMatrix(r, c, ent)


def _int_rank_bareiss(rows: list[dict]) -> int:
    """Fraction-free rank of integer rows given as {col: int} dicts.

    Division-postponed cross-multiplication elimination with a gcd
    normalization of each row after every step; coefficients stay integral
    throughout and the per-row gcd keeps them from blowing up on the sparse
    combinatorial matrices this package produces.
    """
    rows = [dict(r) for r in rows if r]
    col_count: dict[int, int] = {}
    for r in rows:
        for j in r:
            col_count[j] = col_count.get(j, 0) + 1
    rank = 0
    while rows:
        # Markowitz: minimize (len(row)-1)*(count(col)-1); ties by (row idx, col)
        best = None
        for ri, r in enumerate(rows):
            rl = len(r) - 1
            for j in r:
                score = rl * (col_count[j] - 1)
                key = (score, ri, j)
                if best is None or key < best[0]:
                    best = (key, ri, j)
        _, ri, pj = best
        pivot_row = rows.pop(ri)
        pv = pivot_row[pj]
        rank += 1
        new_rows = []
        for r in rows:
            for j in r:
                col_count[j] -= 1
            if pj in r:
                c = r.pop(pj)
                out = {}
                keys = set(r) | set(pivot_row)
                keys.discard(pj)
                for j in keys:
                    val = r.get(j, 0) * pv - c * pivot_row.get(j, 0)
                    if val:
                        out[j] = val
                r = out
            if r:
                g = 0
                for v in r.values():
                    g = gcd(g, abs(v))
                if g > 1:
                    r = {j: v // g for j, v in r.items()}
                new_rows.append(r)
                for j in r:
                    col_count[j] = col_count.get(j, 0) + 1
        rows = new_rows
    return rank


class Echelon:
    """Incremental row echelon over Q for sparse {col: Fraction} vectors.

    Maintains a reduced basis keyed by pivot column.  This is the workhorse
    for span membership, quotient coordinates and per-block annihilators.
    """

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict) -> dict:
        """Residual of vec modulo the current row span."""
        v = {j: _fr(c) for j, c in vec.items() if c}
        changed = True
        while changed:
            changed = False
            for j in sorted(v):
                piv = self.pivots.get(j)
                if piv is not None:
                    c = v[j]
                    for k, w in piv.items():
                        s = v.get(k, Fraction(0)) - c * w
                        if s:
                            v[k] = s
                        else:
                            v.pop(k, None)
                    changed = True
                    break
        return v

    def add(self, vec: dict) -> bool:
        """Insert vec; returns True if the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        j = min(v)
        inv = Fraction(1) / v[j]
        v = {k: c * inv for k, c in v.items()}
        # back-substitute into existing pivot rows to stay fully reduced
        for pj, row in list(self.pivots.items()):
            c = row.get(j)
            if c:
                for k, w in v.items():
                    s = row.get(k, Fraction(0)) - c * w
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        self.pivots[j] = v
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        return [dict(self.pivots[j]) for j in sorted(self.pivots)]

    def nullspace(self, ncols: int) -> list[dict]:
        """Basis of the annihilator {x : row . x = 0 for all rows}."""
        out = []
        piv = self.pivots
        for j in range(ncols):
            if j in piv:
                continue
            vec = {j: Fraction(1)}
            for pj, row in piv.items():
                c = row.get(j)
                if c:
                    vec[pj] = -c
            out.append(vec)
        return out


def span_rank(vectors: Iterable[dict]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


# -- chain complexes ---------------------------------------------------


@dataclass
class ChainComplexOverQ:
    """Non-negatively graded chain complex with optional secondary gradings.

    basis[k] is the list of (opaque, deterministic) basis labels in degree k.
    diff[k] maps degree k to degree k-1.  gradings, when present, assigns a
    hashable key (e.g. an (internal degree, weight) pair) to each basis
    label; differentials must preserve the key.
    """

    basis: dict[int, list]
    diff: dict[int, RationalSparseMatrix]
    gradings: dict[int, list] | None = None

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, []))

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def differential(self, k: int) -> RationalSparseMatrix:
        d = self.diff.get(k)
        if d is None:
            return RationalSparseMatrix.zero(self.dim(k - 1), self.dim(k))
        return d

    def validate(self) -> None:
        for k, d in self.diff.items():
            if d.cols != self.dim(k) or d.rows != self.dim(k - 1):
                raise ExactLAError(f"differential in degree {k} has wrong shape")
        for k in self.degrees():
            d1 = self.differential(k)
            d2 = self.differential(k + 1)
            if not d1.matmul(d2).is_zero():
                raise ExactLAError(f"d.d != 0 leaving degree {k + 1}")
        if self.gradings is not None:
            for k, d in self.diff.items():
                gsrc = self.gradings.get(k, [])
                gdst = self.gradings.get(k - 1, [])
                for (i, j), v in d.entries.items():
                    if gdst[i] != gsrc[j]:
                        raise ExactLAError(
                            f"differential in degree {k} mixes gradings "
                            f"{gsrc[j]} -> {gdst[i]}"
                        )

    def homology_dims(self, check: bool = True) -> dict[int, int]:
        """dim H_k = dim C_k - rank d_k - rank d_{k+1}."""
        if check:
            self.validate()
        ranks = {k: self.differential(k).rank() for k in self.degrees()}
        out = {}
        for k in self.degrees():
            rk = ranks.get(k, 0)
            rk1 = self.differential(k + 1).rank() if (k + 1) in self.diff else 0
            out[k] = self.dim(k) - rk - rk1
        return out

    def homology_dims_graded(self, check: bool = True) -> dict:
        """Homology dimensions keyed by (degree, grading key)."""
        if self.gradings is None:
            return {(k, None): d for k, d in self.homology_dims(check).items()}
        if check:
            self.validate()
        out: dict = {}
        for k in self.degrees():
            keys = sorted(set(self.gradings.get(k, [])), key=repr)
            for key in keys:
                sub_idx = [i for i, g in enumerate(self.gradings[k]) if g == key]
                dim_k = len(sub_idx)
                r_in = self._block_rank(k, key)
                r_out = self._block_rank(k + 1, key)
                out[(k, key)] = dim_k - r_in - r_out
        return out

    def _block_rank(self, k: int, key) -> int:
        if k not in self.diff:
            return 0
        src = [i for i, g in enumerate(self.gradings.get(k, [])) if g == key]
        src_set = set(src)
        d = self.diff[k]
        ent = [(i, j, v) for (i, j), v in d.entries.items() if j in src_set]
        remap = {j: a for a, j in enumerate(src)}
        rows = {}
        for i, j, v in ent:
            rows.setdefault(j, {})[i] = v
        return span_rank(rows[j] for j in src if j in rows)


def mapping_cone(
    C: ChainComplexOverQ,
    D: ChainComplexOverQ,
    f_mats: dict[int, RationalSparseMatrix],
) -> ChainComplexOverQ:
    """Cone of a chain map f: C -> D, cone_k = D_k + C_{k-1}.

    d(y, x) = (d_D y + f x, -d_C x).  f_mats[k] is the degree-k block of f.
    Validation of the cone's d.d = 0 is exactly the chain-map property of f.
    """
    degrees = sorted(set(C.degrees()) | set(D.degrees()))
    basis = {}
    lo = min(degrees) if degrees else 0
    hi = (max(degrees) + 1) if degrees else 0
    for k in range(lo, hi + 1):
        basis[k] = [("D", b) for b in D.basis.get(k, [])] + [
            ("C", b) for b in C.basis.get(k - 1, [])
        ]
    diff = {}
    for k in range(lo, hi + 1):
        nd = len(D.basis.get(k, []))
        ndm = len(D.basis.get(k - 1, []))
        ent = []
        dD = D.diff.get(k)
        if dD is not None:
            ent += [(i, j, v) for (i, j), v in dD.entries.items()]
        fk = f_mats.get(k - 1)
        if fk is not None:
            ent += [(i, nd + j, v) for (i, j), v in fk.entries.items()]
        dC = C.diff.get(k - 1)
        if dC is not None:
            ent += [(ndm + i, nd + j, -v) for (i, j), v in dC.entries.items()]
        diff[k] = RationalSparseMatrix(
            len(basis.get(k - 1, [])), len(basis.get(k, [])), ent
        )
    return ChainComplexOverQ(basis=basis, diff=diff)


# -- modular cross-checks ----------------------------------------------


@dataclass
class ModularReport:
    rational_rank: int
    prime_ranks: dict[int, int]
    confirmed: bool
    failures: list[str] = field(default_factory=list)


def modular_check(M: RationalSparseMatrix, primes: Sequence[int]) -> ModularReport:
    """Compare rank over Q with ranks mod p.

    rank mod p can only drop; the report is 'confirmed' when at least one
    tested prime attains the rational rank.
    """
    r = M.rank()
    pr = {}
    failures = []
    for p in primes:
        try:
            pr[p] = M.rank_mod(p)
        except ExactLAError as e:
            failures.append(str(e))
            continue
        if pr[p] > r:
            failures.append(f"rank mod {p} exceeds rational rank")
    confirmed = any(v == r for v in pr.values())
    return ModularReport(r, pr, confirmed, failures)


def random_matrix(rng, rows: int, cols: int, density: float = 0.4):
    """Deterministic pseudo-random matrix for property tests."""
    ent = []
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                ent.append((i, j, Fraction(rng.randint(-5, 5), rng.randint(1, 4))))
    return RationalSparseMatrix(rows, cols, ent)
