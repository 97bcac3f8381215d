"""Finitary permutations in one-line notation.

A permutation is stored as its window ``(w(1), ..., w(m))`` with trailing fixed
points trimmed, so an element of S_n and its image in S_{n+1} are the same
object.  Simple reflections are plain integers: ``i`` stands for the
transposition ``s_i = (i, i+1)``.

Products are composition of functions: ``compose(p, q) = p o q``, i.e. ``q`` is
applied first.  Multiplying by ``s_i`` on the right swaps positions ``i`` and
``i+1`` of the window; on the left it swaps the values ``i`` and ``i+1``.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from typing import Iterable, Iterator, Sequence

from .errors import ParseError

__all__ = [
    "Permutation", "IDENTITY", "s", "from_word", "compose", "inverse",
    "length", "left_descents", "right_descents", "bruhat_leq",
    "support_max", "reduced_word", "longest_element", "enumerate_sn",
    "bruhat_interval", "lower_covers", "upper_covers", "demazure_product",
    "parse_permutation", "word_string",
]


class Permutation:
    __slots__ = ("window", "_len", "_hash")

    def __init__(self, window: Iterable[int] = ()):
        w = tuple(int(a) for a in window)
        if sorted(w) != list(range(1, len(w) + 1)):
            raise ValueError(f"not a permutation window: {w!r}")
        m = len(w)
        while m and w[m - 1] == m:
            m -= 1
        self.window = w[:m]
        self._len = -1
        self._hash = hash(self.window)

    @classmethod
    def _trusted(cls, w: tuple) -> "Permutation":
        # caller guarantees w is a permutation window; only trims
        m = len(w)
        while m and w[m - 1] == m:
            m -= 1
        p = object.__new__(cls)
        p.window = w[:m] if m != len(w) else w
        p._len = -1
        p._hash = hash(p.window)
        return p

    def __call__(self, i: int) -> int:
        return self.window[i - 1] if i <= len(self.window) else i

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.window == other.window

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.length(), self.window)

    def __lt__(self, other: "Permutation"):
        return self.sort_key() < other.sort_key()

    def __le__(self, other: "Permutation"):
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other: "Permutation"):
        return self.sort_key() > other.sort_key()

    def __ge__(self, other: "Permutation"):
        return self.sort_key() >= other.sort_key()

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self):
        return f"Permutation({list(self.window)})"

    def __str__(self):
        return "[" + ",".join(map(str, self.window)) + "]"

    def __reduce__(self):
        return (Permutation, (self.window,))

    def length(self) -> int:
        if self._len < 0:
            w = self.window
            n = 0
            for i in range(len(w)):
                a = w[i]
                for j in range(i + 1, len(w)):
                    if w[j] < a:
                        n += 1
            self._len = n
        return self._len

    def padded(self, n: int) -> tuple:
        """The window extended by fixed points to length ``n``."""
        w = self.window
        return w + tuple(range(len(w) + 1, n + 1))

    def mul_simple_right(self, i: int) -> "Permutation":
        """``self * s_i``."""
        w = list(self.padded(max(len(self.window), i + 1)))
        w[i - 1], w[i] = w[i], w[i - 1]
        return Permutation._trusted(tuple(w))

    def mul_simple_left(self, i: int) -> "Permutation":
        """``s_i * self``."""
        m = max(len(self.window), i + 1)
        w = tuple(i + 1 if a == i else i if a == i + 1 else a
                  for a in self.padded(m))
        return Permutation._trusted(w)

    def has_right_descent(self, i: int) -> bool:
        w = self.window
        return i < len(w) and w[i - 1] > w[i]

    def has_left_descent(self, i: int) -> bool:
        w = self.window
        if i >= len(w):
            return False
        return w.index(i + 1) < w.index(i)


IDENTITY = Permutation(())


def s(i: int) -> Permutation:
    """The simple reflection ``s_i``."""
    if i < 1:
        raise ValueError("simple reflection index must be >= 1")
    return IDENTITY.mul_simple_right(i)


def from_word(word: Sequence[int]) -> Permutation:
    """Product ``s_{word[0]} * s_{word[1]} * ...``; the word need not be reduced."""
    p = IDENTITY
    for i in word:
        if i < 1:
            raise ValueError("simple reflection index must be >= 1")
        p = p.mul_simple_right(i)
    return p


def compose(p: Permutation, q: Permutation) -> Permutation:
    m = max(len(p.window), len(q.window))
    pw, qw = p.padded(m), q.padded(m)
    return Permutation._trusted(tuple(pw[qw[i] - 1] for i in range(m)))


def inverse(p: Permutation) -> Permutation:
    w = p.window
    inv = [0] * len(w)
    for i, a in enumerate(w, 1):
        inv[a - 1] = i
    return Permutation._trusted(tuple(inv))


def length(p: Permutation) -> int:
    return p.length()


def right_descents(p: Permutation) -> frozenset:
    w = p.window
    return frozenset(i for i in range(1, len(w)) if w[i - 1] > w[i])


def left_descents(p: Permutation) -> frozenset:
    return right_descents(inverse(p))


def support_max(p: Permutation) -> int:
    return len(p.window)


def bruhat_leq(p: Permutation, q: Permutation) -> bool:
    """Bruhat order by comparing sorted prefixes (tableau criterion)."""
    if p.length() > q.length():
        return False
    if p.window == q.window:
        return True
    m = max(len(p.window), len(q.window))
    pw, qw = p.padded(m), q.padded(m)
    a, b = [], []
    for k in range(m - 1):
        _insort(a, pw[k])
        _insort(b, qw[k])
        for x, y in zip(a, b):
            if x > y:
                return False
    return True


def _insort(lst: list, x: int) -> None:
    lo, hi = 0, len(lst)
    while lo < hi:
        mid = (lo + hi) // 2
        if lst[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    lst.insert(lo, x)


def reduced_word(p: Permutation) -> tuple:
    """Reduced word obtained by repeatedly stripping the smallest right descent."""
    word = []
    while p.window:
        w = p.window
        i = next(i for i in range(1, len(w)) if w[i - 1] > w[i])
        word.append(i)
        p = p.mul_simple_right(i)
    return tuple(reversed(word))


def longest_element(n: int) -> Permutation:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(range(n, 0, -1))


def enumerate_sn(n: int) -> Iterator[Permutation]:
    """All elements of S_n, in lexicographic order of their windows."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for w in itertools.permutations(range(1, n + 1)):
        yield Permutation._trusted(w)


def lower_covers(p: Permutation) -> list:
    """Elements ``p*t`` (t a transposition) of length ``length(p) - 1``."""
    w = p.window
    m = len(w)
    out = []
    for i in range(m):
        for j in range(i + 1, m):
            if w[i] > w[j] and not any(w[j] < w[k] < w[i] for k in range(i + 1, j)):
                u = list(w)
                u[i], u[j] = u[j], u[i]
                out.append(Permutation._trusted(tuple(u)))
    return out


def upper_covers(p: Permutation, n: int) -> list:
    """Elements ``p*t`` of ``S_n`` of length ``length(p) + 1``."""
    w = p.padded(n)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if w[i] < w[j] and not any(w[i] < w[k] < w[j] for k in range(i + 1, j)):
                u = list(w)
                u[i], u[j] = u[j], u[i]
                out.append(Permutation._trusted(tuple(u)))
    return out


def bruhat_interval(x: Permutation, y: Permutation) -> set:
    """``{z : x <= z <= y}``; empty when ``x`` and ``y`` are incomparable."""
    if not bruhat_leq(x, y):
        return set()
    seen = {y}
    todo = deque([y])
    lx = x.length()
    while todo:
        z = todo.popleft()
        if z.length() == lx:
            continue
        for c in lower_covers(z):
            if c not in seen and bruhat_leq(x, c):
                seen.add(c)
                todo.append(c)
    return seen


def demazure_product(p: Permutation, q: Permutation) -> Permutation:
    """The 0-Hecke (Demazure) product ``p * q``.

    ``{a*b : a <= p, b <= q}`` is exactly the lower Bruhat interval of this element.
    """
    for i in reduced_word(q):
        if not p.has_right_descent(i):
            p = p.mul_simple_right(i)
    return p


_WORD_RE = re.compile(r"^s(\d+)$")


def parse_permutation(text: str) -> Permutation:
    """Parse ``[2,1]`` (window), ``s1*s2*s1`` (word, not necessarily reduced) or ``e``."""
    t = text.strip().replace(" ", "")
    if t in ("e", "id", "1", "[]", ""):
        return IDENTITY
    if t.startswith("[") and t.endswith("]"):
        try:
            return Permutation(int(a) for a in t[1:-1].split(","))
        except ValueError as exc:
            raise ParseError(f"bad permutation window {text!r}: {exc}") from None
    word = []
    for tok in t.split("*"):
        mt = _WORD_RE.match(tok)
        if not mt or int(mt.group(1)) < 1:
            raise ParseError(f"bad permutation word {text!r}")
        word.append(int(mt.group(1)))
    return from_word(word)


def word_string(p: Permutation) -> str:
    word = reduced_word(p)
    if not word:
        return "e"
    return "*".join(f"s{i}" for i in word)
