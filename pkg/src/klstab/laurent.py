"""Sparse Laurent polynomials in ``v`` with checked 64-bit integer coefficients."""
from __future__ import annotations

import re
from typing import Iterable, Mapping

from .errors import CoefficientOverflow, ParseError

__all__ = [
    "LaurentPoly", "ZERO", "ONE", "V", "V_INV", "add", "mul", "negate", "bar",
    "coeff", "is_nonnegative", "in_v_times_N", "INT64_MAX", "INT64_MIN",
]

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

_TERM_RE = re.compile(r"([+-])(\d*)(v(?:\^(-?\d+))?)?")


def _checked(d: dict) -> dict:
    for e, c in d.items():
        if c > INT64_MAX or c < INT64_MIN:
            raise CoefficientOverflow(f"coefficient {c} of v^{e} exceeds 64 bits")
    return d


class LaurentPoly:
    """An element of Z[v, v^-1], stored as ``{exponent: nonzero coefficient}``.

    Values are immutable; every operation returns a new polynomial.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        d = {}
        for e, c in items:
            e, c = int(e), int(c)
            if c:
                d[e] = d.get(e, 0) + c
                if not d[e]:
                    del d[e]
        self._t = _checked(d)
        self._hash = None

    @classmethod
    def _wrap(cls, d: dict) -> "LaurentPoly":
        # d must already be free of zero coefficients
        p = object.__new__(cls)
        p._t = _checked(d)
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exponent: int, c: int = 1) -> "LaurentPoly":
        return cls._wrap({exponent: c} if c else {})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls.monomial(0, c)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def coeff(self, k: int) -> int:
        return self._t.get(k, 0)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def min_degree(self):
        return min(self._t) if self._t else None

    def max_degree(self):
        return max(self._t) if self._t else None

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self._t.values())

    def in_v_times_N(self) -> bool:
        """True iff every exponent is >= 1 (membership in v*Z[v])."""
        return all(e >= 1 for e in self._t)

    def is_constant(self) -> bool:
        return not self._t or set(self._t) == {0}

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        d = dict(self._t)
        for e, c in other._t.items():
            c2 = d.get(e, 0) + c
            if c2:
                d[e] = c2
            else:
                del d[e]
        return LaurentPoly._wrap(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({e: c * other for e, c in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(b) == 1:
            ((f, k),) = b.items()
            return LaurentPoly._wrap({e + f: c * k for e, c in a.items()})
        if len(a) == 1:
            ((f, k),) = a.items()
            return LaurentPoly._wrap({e + f: c * k for e, c in b.items()})
        d = {}
        for e, c in a.items():
            for f, k in b.items():
                d[e + f] = d.get(e + f, 0) + c * k
        return LaurentPoly._wrap({e: c for e, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        r = ONE
        for _ in range(n):
            r = r * self
        return r

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v^k``."""
        return LaurentPoly._wrap({e + k: c for e, c in self._t.items()})

    def bar(self) -> "LaurentPoly":
        """The ring involution ``v -> v^-1``."""
        return LaurentPoly._wrap({-e: c for e, c in self._t.items()})

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- text / json ------------------------------------------------------
    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e, c in sorted(self._t.items()):
            if e == 0:
                mono = str(abs(c))
            else:
                var = "v" if e == 1 else f"v^{e}"
                mono = var if abs(c) == 1 else f"{abs(c)}{var}"
            if not parts:
                parts.append(mono if c > 0 else "-" + mono)
            else:
                parts.append(("+ " if c > 0 else "- ") + mono)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def to_json(self) -> list:
        return [[e, c] for e, c in sorted(self._t.items())]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls((int(e), int(c)) for e, c in data)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``: ``v^-1 + 2 + 3v^3``."""
        t = text.replace(" ", "")
        if t in ("", "0"):
            return ZERO
        if t[0] not in "+-":
            t = "+" + t
        d = {}
        pos = 0
        for mt in _TERM_RE.finditer(t):
            if mt.start() != pos or not (mt.group(2) or mt.group(3)):
                raise ParseError(f"bad Laurent polynomial {text!r}")
            pos = mt.end()
            sign = 1 if mt.group(1) == "+" else -1
            c = int(mt.group(2)) if mt.group(2) else 1
            if mt.group(3):
                e = int(mt.group(4)) if mt.group(4) is not None else 1
            else:
                e = 0
            d[e] = d.get(e, 0) + sign * c
        if pos != len(t):
            raise ParseError(f"bad Laurent polynomial {text!r}")
        return cls(d)


ZERO = LaurentPoly._wrap({})
ONE = LaurentPoly._wrap({0: 1})
V = LaurentPoly._wrap({1: 1})
V_INV = LaurentPoly._wrap({-1: 1})


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def negate(a: LaurentPoly) -> LaurentPoly:
    return -a


def bar(a: LaurentPoly) -> LaurentPoly:
    return a.bar()


def coeff(a: LaurentPoly, k: int) -> int:
    return a.coeff(k)


def is_nonnegative(a: LaurentPoly) -> bool:
    return a.is_nonnegative()


def in_v_times_N(a: LaurentPoly) -> bool:
    return a.in_v_times_N()
