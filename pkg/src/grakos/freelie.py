"""Free Lie algebras on an ordered alphabet, in the Lyndon word basis.

Elements of weight k are rational combinations of Lyndon words of length
k; brackets are computed by expanding the standard (right-normed via
standard factorization) bracketing of each Lyndon word in the tensor
algebra, multiplying there, and converting back by the triangularity of
the Lyndon expansion (each bracketed Lyndon word is its word plus
lexicographically larger terms).

Also provides derivations of the free Lie algebra determined by their
values on letters, which is what the symplectic derivation Lie algebra
and the Johnson homomorphism computations consume.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class FreeLieError(Exception):
    pass


def lyndon_words(alphabet_size: int, length: int) -> list[tuple]:
    """Duval's algorithm, restricted to words of exactly the given length."""
    if length <= 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == length:
            out.append(tuple(w))
        while len(w) < length:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    return sorted(out)


def lie_dim(alphabet_size: int, length: int) -> int:
    """Necklace count = number of Lyndon words."""
    from math import gcd

    def mobius(n):
        out, p, m = 1, 2, n
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                out = -out
            p += 1
        if m > 1:
            out = -out
        return out

    total = 0
    for d in range(1, length + 1):
        if length % d == 0:
            total += mobius(d) * alphabet_size ** (length // d)
    return total // length


@lru_cache(maxsize=None)
def _standard_factorization(word: tuple) -> tuple:
    """Lyndon word uv with v the longest proper Lyndon suffix."""
    if len(word) < 2:
        raise FreeLieError("letters have no factorization")
    for i in range(1, len(word)):
        v = word[i:]
        if _is_lyndon(v):
            return word[:i], v
    raise FreeLieError(f"{word} is not a Lyndon word")


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def lyndon_tensor_expansion(word: tuple) -> tuple:
    """Expansion of the bracketed Lyndon word in the tensor algebra.

    Returned as a sorted tuple of (word, integer coefficient); the leading
    (lexicographically smallest) term is the word itself with coefficient 1.
    """
    if len(word) == 1:
        return ((word, 1),)
    u, v = _standard_factorization(word)
    eu = dict(lyndon_tensor_expansion(u))
    ev = dict(lyndon_tensor_expansion(v))
    out: dict = {}
    for wu, cu in eu.items():
        for wv, cv in ev.items():
            out[wu + wv] = out.get(wu + wv, 0) + cu * cv
            out[wv + wu] = out.get(wv + wu, 0) - cu * cv
    return tuple(sorted((w, c) for w, c in out.items() if c))


def tensor_to_lyndon(tens: dict) -> dict:
    """Convert a Lie element given in the tensor algebra to Lyndon coords."""
    work = {w: Fraction(c) for w, c in tens.items() if c}
    out: dict = {}
    while work:
        w = min(work)
        c = work.pop(w)
        if not _is_lyndon(w):
            raise FreeLieError(f"leading word {w} is not Lyndon: not a Lie element")
        out[w] = out.get(w, Fraction(0)) + c
        for w2, c2 in lyndon_tensor_expansion(w):
            if w2 == w:
                continue
            s = work.get(w2, Fraction(0)) - c * c2
            if s:
                work[w2] = s
            else:
                work.pop(w2, None)
    return {w: c for w, c in out.items() if c}


def lie_to_tensor(elt: dict) -> dict:
    out: dict = {}
    for w, c in elt.items():
        for w2, c2 in lyndon_tensor_expansion(w):
            s = out.get(w2, Fraction(0)) + Fraction(c) * c2
            if s:
                out[w2] = s
            else:
                out.pop(w2, None)
    return out


def bracket(a: dict, b: dict) -> dict:
    """Lie bracket of two elements in Lyndon coordinates."""
    ta, tb = lie_to_tensor(a), lie_to_tensor(b)
    out: dict = {}
    for wa, ca in ta.items():
        for wb, cb in tb.items():
            out[wa + wb] = out.get(wa + wb, Fraction(0)) + ca * cb
            out[wb + wa] = out.get(wb + wa, Fraction(0)) - ca * cb
    return tensor_to_lyndon(out)


def letter(i: int) -> dict:
    return {(i,): Fraction(1)}


def derivation_apply(values: dict, elt: dict) -> dict:
    """Apply the derivation sending letter i to values[i] (a Lie element).

    Letters missing from values map to zero.  Computed on the Lyndon basis
    through the standard factorization by the Leibniz rule.
    """
    out: dict = {}
    frozen = _freeze(values)
    for w, c in elt.items():
        for w2, c2 in _derivation_on_word(frozen, w):
            s = out.get(w2, Fraction(0)) + Fraction(c) * c2
            if s:
                out[w2] = s
            else:
                out.pop(w2, None)
    return out


def _freeze(values: dict) -> tuple:
    return tuple(
        sorted((i, tuple(sorted(v.items()))) for i, v in values.items())
    )


@lru_cache(maxsize=None)
def _derivation_on_word(frozen_values: tuple, word: tuple) -> tuple:
    values = {i: dict(v) for i, v in frozen_values}
    if len(word) == 1:
        return tuple(
            (w, Fraction(c)) for w, c in values.get(word[0], {}).items()
        )
    # u is always Lyndon in a standard factorization
    u, v = _standard_factorization(word)
    du = dict(_derivation_on_word(frozen_values, u))
    dv = dict(_derivation_on_word(frozen_values, v))
    out = bracket(du, {v: Fraction(1)}) if du else {}
    if dv:
        term = bracket({u: Fraction(1)}, dv)
        for w, c in term.items():
            s = out.get(w, Fraction(0)) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return tuple(sorted(out.items()))
