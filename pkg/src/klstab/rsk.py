"""Robinson-Schensted correspondence, tableaux, cells and dominance order.

Tableaux use English notation: rows are numbered top to bottom, columns left
to right.  Row insertion of ``w(1), ..., w(n)`` gives the insertion tableau
``P``; ``Q`` records where each new box appeared.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import RankExceeded, ShapeMismatch, SizeMismatch
from .symgroup import Permutation, support_max

__all__ = [
    "Partition", "StandardTableau", "rs", "rs_inverse", "shape", "same_left_cell",
    "same_right_cell", "same_two_sided_cell", "descents_from_tableaux",
    "dominance_leq", "partitions", "count_syt",
]


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        p = tuple(int(a) for a in self.parts)
        if any(a <= 0 for a in p) or any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"not a partition: {p}")
        object.__setattr__(self, "parts", p)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class StandardTableau:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in r) for r in self.rows if len(r))
        object.__setattr__(self, "rows", rows)
        Partition(tuple(len(r) for r in rows))
        entries = sorted(a for r in rows for a in r)
        if entries != list(range(1, len(entries) + 1)):
            raise ValueError("entries must be exactly 1..n")
        for r in rows:
            if any(a >= b for a, b in zip(r, r[1:])):
                raise ValueError("rows must increase")
        for upper, lower in zip(rows, rows[1:]):
            if any(lower[j] <= upper[j] for j in range(len(lower))):
                raise ValueError("columns must increase")

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def row_of(self, entry: int) -> int:
        """1-based row index of ``entry``."""
        for i, r in enumerate(self.rows, 1):
            if entry in r:
                return i
        raise KeyError(entry)

    def __str__(self):
        return "\n".join(" ".join(map(str, r)) for r in self.rows)

    def to_json(self) -> list:
        return [list(r) for r in self.rows]


def rs(w: Permutation, n: int) -> tuple:
    """``(P_w, Q_w)`` for ``w`` viewed in S_n."""
    if support_max(w) > n:
        raise RankExceeded(f"{w} does not lie in S_{n}")
    P: list = []
    Q: list = []
    for step, a in enumerate(w.padded(n), 1):
        r = 0
        while True:
            if r == len(P):
                P.append([a])
                Q.append([step])
                break
            row = P[r]
            j = bisect_right(row, a)
            if j == len(row):
                row.append(a)
                Q[r].append(step)
                break
            a, row[j] = row[j], a
            r += 1
    return StandardTableau(tuple(map(tuple, P))), StandardTableau(tuple(map(tuple, Q)))


def shape(w: Permutation, n: int) -> Partition:
    return rs(w, n)[0].shape


def rs_inverse(P: StandardTableau, Q: StandardTableau) -> Permutation:
    """The unique ``w`` with ``rs(w, n) == (P, Q)``."""
    if P.shape != Q.shape:
        raise ShapeMismatch(f"{P.shape} vs {Q.shape}")
    rows = [list(r) for r in P.rows]
    qrows = [list(r) for r in Q.rows]
    n = P.size
    out = [0] * n
    for step in range(n, 0, -1):
        r = next(i for i, qr in enumerate(qrows) if qr and qr[-1] == step)
        qrows[r].pop()
        a = rows[r].pop()
        for rr in range(r - 1, -1, -1):
            row = rows[rr]
            j = bisect_right(row, a) - 1  # largest entry smaller than a
            a, row[j] = row[j], a
        out[step - 1] = a
    return Permutation(out)


def _common_rank(*ws: Permutation) -> int:
    return max([1] + [support_max(w) for w in ws])


def same_left_cell(a: Permutation, b: Permutation, n: int | None = None) -> bool:
    n = n or _common_rank(a, b)
    return rs(a, n)[1] == rs(b, n)[1]


def same_right_cell(a: Permutation, b: Permutation, n: int | None = None) -> bool:
    n = n or _common_rank(a, b)
    return rs(a, n)[0] == rs(b, n)[0]


def same_two_sided_cell(a: Permutation, b: Permutation, n: int | None = None) -> bool:
    n = n or _common_rank(a, b)
    return shape(a, n) == shape(b, n)


def _descents(T: StandardTableau) -> frozenset:
    row = {}
    for i, r in enumerate(T.rows):
        for a in r:
            row[a] = i
    return frozenset(i for i in range(1, T.size) if row[i + 1] > row[i])


def descents_from_tableaux(P: StandardTableau, Q: StandardTableau) -> tuple:
    """``(lds, rds)``: ``s_i`` is a descent iff ``i+1`` sits strictly below ``i``
    (in ``P`` for the left set, in ``Q`` for the right set)."""
    return _descents(P), _descents(Q)


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    """True iff every partial sum of ``lam`` is at most that of ``mu``."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    a = b = 0
    for j in range(max(len(lam), len(mu))):
        a += lam[j] if j < len(lam) else 0
        b += mu[j] if j < len(mu) else 0
        if a > b:
            return False
    return True


def partitions(n: int, largest: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse lexicographic order, ``(n)`` first."""
    largest = n if largest is None else largest
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + rest.parts)


def count_syt(lam: Sequence[int]) -> int:
    """Number of standard tableaux of shape ``lam`` (hook length formula)."""
    lam = tuple(lam)
    n = sum(lam)
    conj = [sum(1 for r in lam if r > j) for j in range(lam[0])] if lam else []
    hooks = 1
    for i, r in enumerate(lam):
        for j in range(r):
            hooks *= (r - j - 1) + (conj[j] - i - 1) + 1
    num = 1
    for k in range(2, n + 1):
        num *= k
    return num // hooks
