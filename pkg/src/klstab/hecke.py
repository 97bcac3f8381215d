"""Hecke algebra elements as sparse permutation-indexed combinations.

The standard basis satisfies ``H_w H_s = H_{ws}`` when ``l(ws) > l(w)`` and
``H_w H_s = H_{ws} + (v^-1 - v) H_w`` otherwise.  Right multiplication by a
generator is the primitive; everything else is built on top of it.
"""
from __future__ import annotations

import enum
from typing import Mapping

from .errors import BasisMismatch, RankExceeded, RankMismatch
from .laurent import LaurentPoly, ONE, V, V_INV, ZERO
from .symgroup import IDENTITY, Permutation, reduced_word, support_max

__all__ = [
    "Basis", "HeckeElt", "standard", "mult_std_gen_right", "mult_std",
    "bar_elt", "form", "bar_standard_basis",
]

Q_MINUS = V_INV - V  # v^-1 - v
Q_PLUS = V - V_INV   # v - v^-1


class Basis(enum.Enum):
    STANDARD = "standard"
    KL = "kl"
    DUAL_KL = "dual_kl"


def _acc(d: dict, w: Permutation, c: LaurentPoly) -> None:
    old = d.get(w)
    if old is None:
        d[w] = c
    else:
        new = old + c
        if new:
            d[w] = new
        else:
            del d[w]


class HeckeElt:
    """A finite combination ``sum_w c_w B_w`` in one of three bases of H_rank."""

    __slots__ = ("basis", "rank", "terms")

    def __init__(self, basis: Basis, rank: int, terms: Mapping[Permutation, LaurentPoly] = ()):
        self.basis = Basis(basis)
        self.rank = int(rank)
        d = {}
        for w, c in dict(terms).items():
            if isinstance(c, int):
                c = LaurentPoly.constant(c)
            if support_max(w) > self.rank:
                raise RankExceeded(f"{w} does not lie in S_{self.rank}")
            if c:
                _acc(d, w, c)
        self.terms = d

    @classmethod
    def _raw(cls, basis: Basis, rank: int, d: dict) -> "HeckeElt":
        h = object.__new__(cls)
        h.basis, h.rank, h.terms = basis, rank, d
        return h

    def coeff(self, w: Permutation) -> LaurentPoly:
        return self.terms.get(w, ZERO)

    def __getitem__(self, w):
        return self.coeff(w)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def support(self):
        return set(self.terms)

    def _check(self, other: "HeckeElt") -> None:
        if self.basis is not other.basis:
            raise BasisMismatch(f"{self.basis.value} vs {other.basis.value}")
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        self._check(other)
        d = dict(self.terms)
        for w, c in other.terms.items():
            _acc(d, w, c)
        return HeckeElt._raw(self.basis, self.rank, d)

    def __neg__(self):
        return HeckeElt._raw(self.basis, self.rank, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + (-other)

    def scale(self, c) -> "HeckeElt":
        if isinstance(c, int):
            c = LaurentPoly.constant(c)
        if not c:
            return HeckeElt._raw(self.basis, self.rank, {})
        return HeckeElt._raw(self.basis, self.rank, {w: c * a for w, a in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, LaurentPoly)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        if isinstance(other, HeckeElt):
            return mult_std(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return (self.basis, self.rank, self.terms) == (other.basis, other.rank, other.terms)

    def __repr__(self):
        return f"HeckeElt({self.basis.value}, rank={self.rank}, {self})"

    def __str__(self):
        from .render import render_combination
        return render_combination(self.terms, _SYMBOL[self.basis])

    def with_rank(self, rank: int) -> "HeckeElt":
        """The same combination viewed in H_rank (standard/KL only; dual-KL is rank dependent)."""
        if self.basis is Basis.DUAL_KL:
            raise BasisMismatch("dual-KL coefficients are rank dependent and cannot be re-ranked")
        return HeckeElt(self.basis, rank, self.terms)

    def to_json(self) -> dict:
        return {
            "basis": self.basis.value,
            "rank": self.rank,
            "terms": [[list(w.window), c.to_json()] for w, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HeckeElt":
        return cls(Basis(data["basis"]), data["rank"],
                   {Permutation(w): LaurentPoly.from_json(c) for w, c in data["terms"]})


_SYMBOL = {Basis.STANDARD: "H", Basis.KL: "_H", Basis.DUAL_KL: "^H"}


def standard(w: Permutation, rank: int, c=ONE) -> HeckeElt:
    """``c * H_w`` in the standard basis of H_rank."""
    return HeckeElt(Basis.STANDARD, rank, {w: c})


def _require_standard(*hs: HeckeElt) -> None:
    for h in hs:
        if h.basis is not Basis.STANDARD:
            raise BasisMismatch(f"expected the standard basis, got {h.basis.value}")


def _gen_right(d: dict, i: int) -> dict:
    out = {}
    for w, c in d.items():
        ws = w.mul_simple_right(i)
        _acc(out, ws, c)
        if ws.length() < w.length():
            _acc(out, w, Q_MINUS * c)
    return out


def mult_std_gen_right(h: HeckeElt, i: int) -> HeckeElt:
    """``h * H_{s_i}``."""
    _require_standard(h)
    if i < 1 or i >= h.rank:
        raise RankExceeded(f"s{i} does not lie in S_{h.rank}")
    return HeckeElt._raw(Basis.STANDARD, h.rank, _gen_right(h.terms, i))


def _mult_raw(a: dict, b: dict) -> dict:
    out = {}
    for u, c in b.items():
        part = a
        for i in reduced_word(u):
            part = _gen_right(part, i)
        for w, d in part.items():
            _acc(out, w, d * c)
    return out


def mult_std(h1: HeckeElt, h2: HeckeElt) -> HeckeElt:
    """Product in the standard basis, expanding ``h2`` through reduced words."""
    _require_standard(h1, h2)
    if h1.rank != h2.rank:
        raise RankMismatch(f"rank {h1.rank} vs {h2.rank}")
    return HeckeElt._raw(Basis.STANDARD, h1.rank, _mult_raw(h1.terms, h2.terms))


_BAR_CACHE: dict = {IDENTITY: {IDENTITY: ONE}}


def bar_standard_basis(w: Permutation) -> dict:
    """``bar(H_w)`` as a raw ``{Permutation: LaurentPoly}`` map.

    Uses ``bar(H_s) = H_s^-1 = H_s + (v - v^-1) H_e`` and ``bar(H_w) = bar(H_{ws}) bar(H_s)``.
    """
    hit = _BAR_CACHE.get(w)
    if hit is not None:
        return hit
    word = reduced_word(w)
    i = word[-1]
    prev = bar_standard_basis(w.mul_simple_right(i))
    out = _gen_right(prev, i)
    for u, c in prev.items():
        _acc(out, u, Q_PLUS * c)
    _BAR_CACHE[w] = out
    return out


def bar_elt(h: HeckeElt) -> HeckeElt:
    """The bar involution ``v -> v^-1``, ``H_s -> H_s^-1``."""
    _require_standard(h)
    out = {}
    for w, c in h.terms.items():
        cb = c.bar()
        for u, d in bar_standard_basis(w).items():
            _acc(out, u, cb * d)
    return HeckeElt._raw(Basis.STANDARD, h.rank, out)


def form(h1: HeckeElt, h2: HeckeElt) -> LaurentPoly:
    """The symmetric bilinear form with ``(H_x, H_y) = delta_{x,y}``."""
    _require_standard(h1, h2)
    if h1.rank != h2.rank:
        raise RankMismatch(f"rank {h1.rank} vs {h2.rank}")
    a, b = h1.terms, h2.terms
    if len(b) < len(a):
        a, b = b, a
    total = ZERO
    for w, c in a.items():
        d = b.get(w)
        if d is not None:
            total = total + c * d
    return total
