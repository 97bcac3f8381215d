"""Kazhdan-Lusztig basis, polynomials, mu-function and structure constants.

Normalization: ``_H_y = sum_x p_{x,y} H_x`` with ``p_{y,y} = 1`` and
``p_{x,y}`` in ``v Z[v]`` for ``x != y``.  The classical polynomials are
recovered as ``p_{x,y}(v) = v^{l(y)-l(x)} P_{x,y}(v^-2)``.

Everything that does not depend on the ambient rank (``p``, ``mu``, ``gamma``)
is keyed by trimmed permutations and shared between ranks.  Dual-KL data is
rank dependent and always carries its rank explicitly.
"""
from __future__ import annotations

import heapq
import itertools
from typing import Iterator

from .errors import BasisMismatch, RankExceeded
from .hecke import Basis, HeckeElt, _acc, _mult_raw
from .laurent import LaurentPoly, ONE, V, V_INV, ZERO
from .symgroup import (
    IDENTITY, Permutation, bruhat_interval, bruhat_leq, enumerate_sn,
    left_descents, longest_element, right_descents, support_max,
    upper_covers,
)

__all__ = [
    "KLContext", "kl_element", "kl_poly", "mu", "gamma", "expand_in_kl",
    "from_kl", "dual_kl_in_standard", "expand_in_dual_kl", "mult_dual_by_kl_gen",
    "V_PLUS_V_INV", "save_context", "load_context",
]

V_PLUS_V_INV = V + V_INV


class KLContext:
    """Memo tables for KL polynomials, mu-values, structure constants and actions.

    ``rank`` bounds the elements accepted by the public query methods; it can be
    raised at any time since the tables themselves are rank agnostic.

    Concurrency: single writer, many readers.  ``fork`` gives an independent
    overlay for a worker and ``merge`` folds its new entries back; entries are
    deterministic so merging never conflicts.
    """

    def __init__(self, rank: int = 8):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        self._cols: dict = {IDENTITY: {IDENTITY: ONE}}
        self._pairs: dict = {}
        self._mu: dict = {}
        self._gamma: dict = {}
        self._action: dict = {}
        self._theta: dict = {}
        self._form: dict = {}
        self._full_ranks: set = set()
        self._nbrs: dict = {}
        self._intervals: dict = {}
        self.dirty = False

    # -- rank bookkeeping ------------------------------------------------
    def _check(self, *ws: Permutation, rank: int | None = None) -> None:
        r = self.rank if rank is None else rank
        for w in ws:
            if support_max(w) > r:
                raise RankExceeded(f"{w} does not lie in S_{r}")

    # -- KL columns (element recursion) ------------------------------------
    def column(self, w: Permutation) -> dict:
        """``{x: p_{x,w}}`` over the whole lower interval of ``w``.

        Built as ``_H_w = _H_{ws} _H_s - sum_{z < ws, zs < z} mu(z, ws) _H_z``
        with ``s`` the smallest right descent of ``w``.
        """
        col = self._cols.get(w)
        if col is not None:
            return col
        i = next(j for j in range(1, len(w.window)) if w.window[j - 1] > w.window[j])
        w1 = w.mul_simple_right(i)
        c1 = self.column(w1)
        out: dict = {}
        for a, c in c1.items():
            b = a.mul_simple_right(i)
            _acc(out, b, c)
            _acc(out, a, c.shift(1) if b.length() > a.length() else c.shift(-1))
        for z, cz in c1.items():
            m = cz.coeff(1)
            if m and z != w1 and z.has_right_descent(i):
                self._record_mu(z, w1, m)
                for a, c in self.column(z).items():
                    _acc(out, a, c * (-m))
        self._cols[w] = out
        self.dirty = True
        return out

    def ensure_rank(self, k: int) -> None:
        """Materialize the column of every element of S_k."""
        if k in self._full_ranks:
            return
        for w in sorted(enumerate_sn(k), key=Permutation.sort_key):
            self.column(w)
        self._full_ranks.add(k)
        self.dirty = True

    def has_full_rank(self, k: int) -> bool:
        return any(r >= k for r in self._full_ranks)

    # -- single polynomials (interval recursion) ---------------------------
    def interval(self, x: Permutation, y: Permutation) -> list:
        key = (x, y)
        iv = self._intervals.get(key)
        if iv is None:
            iv = sorted(bruhat_interval(x, y), key=Permutation.sort_key)
            self._intervals[key] = iv
        return iv

    def _p(self, x: Permutation, y: Permutation) -> LaurentPoly:
        if x == y:
            return ONE
        col = self._cols.get(y)
        if col is not None:
            return col.get(x, ZERO)
        hit = self._pairs.get((x, y))
        if hit is not None:
            return hit
        if not bruhat_leq(x, y):
            return ZERO
        # left-descent recursion restricted to the interval [x, y]
        wy = y.window
        pos = {a: j for j, a in enumerate(wy, 1)}
        i = next(j for j in range(1, len(wy)) if pos[j + 1] < pos[j])
        y1 = y.mul_simple_left(i)
        sx = x.mul_simple_left(i)
        if sx.length() < x.length():
            r = self._p(sx, y1) + self._p(x, y1).shift(-1)
        else:
            r = self._p(sx, y1) + self._p(x, y1).shift(1)
        if x != y1 and bruhat_leq(x, y1):
            for z in self.interval(x, y1):
                if z == y1 or not z.has_left_descent(i):
                    continue
                if (y1.length() - z.length()) % 2 == 0:
                    continue
                m = self._p(z, y1).coeff(1)
                if m:
                    r = r - self._p(x, z) * m
        self._pairs[(x, y)] = r
        self.dirty = True
        return r

    def kl_poly(self, x: Permutation, y: Permutation) -> LaurentPoly:
        self._check(x, y)
        return self._p(x, y)

    def kl_element(self, w: Permutation) -> HeckeElt:
        self._check(w)
        return HeckeElt._raw(Basis.STANDARD, self.rank, dict(self.column(w)))

    # -- mu ------------------------------------------------------------
    def _record_mu(self, a: Permutation, b: Permutation, m: int) -> None:
        key = (a, b) if a.sort_key() < b.sort_key() else (b, a)
        if key not in self._mu:
            self._mu[key] = m

    def _mu_value(self, x: Permutation, u: Permutation) -> int:
        if x == u:
            return 0
        a, b = (x, u) if x.sort_key() < u.sort_key() else (u, x)
        hit = self._mu.get((a, b))
        if hit is not None:
            return hit
        if a.length() == b.length():
            return 0
        m = self._p(a, b).coeff(1)
        if m:
            self._mu[(a, b)] = m
            self.dirty = True
        return m

    def mu(self, x: Permutation, u: Permutation) -> int:
        """Coefficient of ``v`` in ``p_{x,u}`` (or ``p_{u,x}``); 0 on incomparable pairs."""
        self._check(x, u)
        return self._mu_value(x, u)

    def mu_neighbors(self, x: Permutation, k: int) -> dict:
        """``{u in S_k : mu(x, u) != 0}``, found by scanning all of S_k."""
        self._check(x, rank=k)
        key = (x, k)
        hit = self._nbrs.get(key)
        if hit is not None:
            return hit
        self.ensure_rank(k)
        below = self._cols[x]
        lx = x.length()
        out = {}
        for u in enumerate_sn(k):
            lu = u.length()
            if lu < lx:
                c = below.get(u)
            elif lu > lx:
                c = self._cols[u].get(x)
            else:
                continue
            if c is not None:
                m = c.coeff(1)
                if m:
                    out[u] = m
        self._nbrs[key] = out
        return out

    def stable_mu_neighbors(self, x: Permutation, i: int) -> dict:
        """``{u in S_oo : mu(x,u) != 0, s_i not in rds(u)}`` for ``s_i`` in rds(x).

        Every such ``u`` has ``m(u) <= 2 m(x)`` (a right descent of ``x`` that
        ``u`` lacks bounds the support), so the search runs in S_M with
        ``M = max(2 m(x), m(x) + 1)``.  Above ``x`` only covers and elements
        with ``lds(u) <= lds(x)``, ``rds(u) <= rds(x)`` and odd length gap can
        carry a nonzero mu, which keeps the candidate set small.
        """
        if not x.has_right_descent(i):
            raise ValueError(f"s{i} is not a right descent of {x}")
        M = max(2 * support_max(x), support_max(x) + 1)
        out = {}
        for u, c in self.column(x).items():
            if u != x and not u.has_right_descent(i):
                m = c.coeff(1)
                if m:
                    out[u] = m
        lx = x.length()
        for u in upper_covers(x, M):
            if not u.has_right_descent(i):
                m = self._mu_value(x, u)
                if m:
                    out[u] = m
        lds_x = left_descents(x)
        for u in _with_descents_in(right_descents(x) - {i}, lds_x, M):
            gap = u.length() - lx
            if gap < 3 or gap % 2 == 0 or not bruhat_leq(x, u):
                continue
            m = self._mu_value(x, u)
            if m:
                out[u] = m
        return out

    # -- KL basis changes ----------------------------------------------
    def _expand_kl_raw(self, d: dict) -> dict:
        # eliminate a longest remaining term each step; duplicates in the heap are skipped
        d = dict(d)
        by_window = {w.window: w for w in d}
        heap = [(-w.length(), w.window) for w in d]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, win = heapq.heappop(heap)
            w = by_window[win]
            c = d.get(w)
            if c is None:
                continue
            out[w] = c
            for a, p in self.column(w).items():
                if a not in d:
                    by_window[a.window] = a
                    heapq.heappush(heap, (-a.length(), a.window))
                _acc(d, a, -(c * p))
        return out

    def expand_in_kl(self, h: HeckeElt) -> HeckeElt:
        """Coefficients ``c_w`` with ``h = sum_w c_w _H_w`` (unitriangular solve)."""
        if h.basis is not Basis.STANDARD:
            raise BasisMismatch("expand_in_kl expects the standard basis")
        return HeckeElt._raw(Basis.KL, h.rank, self._expand_kl_raw(h.terms))

    def from_kl(self, h: HeckeElt) -> HeckeElt:
        """Standard-basis form of a KL-basis combination."""
        if h.basis is not Basis.KL:
            raise BasisMismatch("from_kl expects the KL basis")
        out: dict = {}
        for w, c in h.terms.items():
            for a, p in self.column(w).items():
                _acc(out, a, c * p)
        return HeckeElt._raw(Basis.STANDARD, h.rank, out)

    def gamma_raw(self, a: Permutation, b: Permutation) -> dict:
        key = (a, b)
        hit = self._gamma.get(key)
        if hit is None:
            prod = _mult_raw(self.column(a), self.column(b))
            hit = self._expand_kl_raw(prod)
            self._gamma[key] = hit
            self.dirty = True
        return hit

    def gamma(self, a: Permutation, b: Permutation) -> dict:
        """``{c: gamma_{a,b}^c}`` with ``_H_a _H_b = sum_c gamma_{a,b}^c _H_c``."""
        self._check(a, b)
        return dict(self.gamma_raw(a, b))

    # -- dual KL basis -------------------------------------------------
    def dual_kl_in_standard(self, w: Permutation, k: int) -> HeckeElt:
        """Standard-basis expansion of the rank-k dual KL element ``^H_w``.

        Its coefficient at ``H_z`` is the ``(w, z)`` entry of the inverse of the
        rank-k KL matrix, found by forward substitution over ``[w, w_0]``.
        """
        self._check(w, rank=k)
        top = longest_element(k)
        iv = self.interval(w, top)
        q = {w: ONE}
        for z in iv[1:]:
            tot = ZERO
            for t, qt in q.items():
                if t.length() < z.length():
                    p = self._p(t, z)
                    if p:
                        tot = tot + qt * p
            if tot:
                q[z] = -tot
        return HeckeElt._raw(Basis.STANDARD, k, q)

    def expand_in_dual_kl(self, h: HeckeElt, k: int) -> HeckeElt:
        """Coefficient of ``^H_w`` in ``h`` is ``(h, _H_w)``."""
        if h.basis is not Basis.STANDARD:
            raise BasisMismatch("expand_in_dual_kl expects the standard basis")
        for w in h.terms:
            self._check(w, rank=k)
        self.ensure_rank(k)
        out = {}
        for w in enumerate_sn(k):
            col = self._cols[w]
            tot = ZERO
            for z, c in h.terms.items():
                p = col.get(z)
                if p is not None:
                    tot = tot + c * p
            if tot:
                out[w] = tot
        return HeckeElt._raw(Basis.DUAL_KL, k, out)

    def dual_times_gen(self, x: Permutation, i: int, k: int) -> dict:
        """Raw ``{u: coeff}`` of ``^H_x _H_{s_i}``; ``k = 0`` means the stabilized action."""
        key = (x, i, k)
        hit = self._action.get(key)
        if hit is not None:
            return hit
        if not x.has_right_descent(i):
            out = {}
        else:
            if k:
                nbrs = {u: m for u, m in self.mu_neighbors(x, k).items()
                        if not u.has_right_descent(i)}
            else:
                nbrs = self.stable_mu_neighbors(x, i)
            out = {x: V_PLUS_V_INV}
            for u, m in nbrs.items():
                out[u] = LaurentPoly.constant(m)
        self._action[key] = out
        self.dirty = True
        return out

    def mult_dual_by_kl_gen(self, x: Permutation, i: int, k: int,
                            stabilized: bool = False) -> HeckeElt:
        """``^H_x _H_{s_i}`` in the dual KL basis of H_k (rank 0 when stabilized)."""
        if stabilized:
            return HeckeElt._raw(Basis.DUAL_KL, 0, dict(self.dual_times_gen(x, i, 0)))
        self._check(x, rank=k)
        if i < 1 or i >= k:
            raise RankExceeded(f"s{i} does not lie in S_{k}")
        return HeckeElt._raw(Basis.DUAL_KL, k, dict(self.dual_times_gen(x, i, k)))

    # -- fork / merge --------------------------------------------------
    def fork(self) -> "KLContext":
        """An independent copy whose new entries can later be merged back."""
        other = KLContext(self.rank)
        for name in ("_cols", "_pairs", "_mu", "_gamma", "_action", "_theta", "_form", "_nbrs"):
            setattr(other, name, dict(getattr(self, name)))
        other._full_ranks = set(self._full_ranks)
        return other

    def merge(self, other: "KLContext") -> None:
        for name in ("_cols", "_pairs", "_mu", "_gamma", "_action", "_theta", "_form", "_nbrs"):
            mine = getattr(self, name)
            for k, val in getattr(other, name).items():
                if k not in mine:
                    mine[k] = val
                    self.dirty = True
        self._full_ranks |= other._full_ranks

    # -- table views -----------------------------------------------------
    def kl_table(self) -> dict:
        """Every known ``(x, y) -> p_{x,y}``."""
        out = dict(self._pairs)
        for y, col in self._cols.items():
            for x, p in col.items():
                out[(x, y)] = p
        return out

    def tables_equal(self, other: "KLContext") -> bool:
        return (self._cols == other._cols and self._pairs == other._pairs
                and self._mu == other._mu and self._gamma == other._gamma
                and self._action == other._action and self._theta == other._theta
                and self._form == other._form
                and self._full_ranks == other._full_ranks)


def _with_descents_in(R: frozenset, L: frozenset, M: int) -> Iterator[Permutation]:
    """Elements of S_M with right descents in ``R`` and left descents in ``L``."""
    cuts = sorted(r for r in R if r < M) + [M]
    sizes = [b - a for a, b in zip([0] + cuts[:-1], cuts)]

    def fill(remaining: tuple, idx: int):
        if idx == len(sizes):
            yield ()
            return
        for block in itertools.combinations(remaining, sizes[idx]):
            chosen = set(block)
            rest = tuple(a for a in remaining if a not in chosen)
            for tail in fill(rest, idx + 1):
                yield block + tail

    for win in fill(tuple(range(1, M + 1)), 0):
        pos = [0] * (M + 2)
        for j, a in enumerate(win, 1):
            pos[a] = j
        if all(pos[j + 1] > pos[j] or j in L for j in range(1, M)):
            yield Permutation._trusted(win)


# module-level spellings of the context methods
def kl_element(ctx: KLContext, w: Permutation) -> HeckeElt:
    return ctx.kl_element(w)


def kl_poly(ctx: KLContext, x: Permutation, y: Permutation) -> LaurentPoly:
    return ctx.kl_poly(x, y)


def mu(ctx: KLContext, x: Permutation, u: Permutation) -> int:
    return ctx.mu(x, u)


def gamma(ctx: KLContext, a: Permutation, b: Permutation) -> dict:
    return ctx.gamma(a, b)


def expand_in_kl(ctx: KLContext, h: HeckeElt) -> HeckeElt:
    return ctx.expand_in_kl(h)


def from_kl(ctx: KLContext, h: HeckeElt) -> HeckeElt:
    return ctx.from_kl(h)


def dual_kl_in_standard(ctx: KLContext, w: Permutation, k: int) -> HeckeElt:
    return ctx.dual_kl_in_standard(w, k)


def expand_in_dual_kl(ctx: KLContext, h: HeckeElt, k: int) -> HeckeElt:
    return ctx.expand_in_dual_kl(h, k)


def mult_dual_by_kl_gen(ctx: KLContext, x: Permutation, i: int, k: int,
                        stabilized: bool = False) -> HeckeElt:
    return ctx.mult_dual_by_kl_gen(x, i, k, stabilized)


def save_context(ctx: KLContext, path) -> None:
    from .cache import save_context as _save
    _save(ctx, path)


def load_context(path, rank: int | None = None) -> KLContext:
    from .cache import load_context as _load
    return _load(path, rank)
