"""Products ``^H_x _H_y`` in the dual KL basis and their behaviour as the rank grows.

Two independent computations of ``[^H_x _H_y : ^H_w]`` at rank ``k``:

* the recursion: expand ``_H_y`` along a reduced word, apply the action of
  each ``_H_s`` on dual KL elements (a mu-function formula), and subtract the
  lower terms of ``_H_{y'} _H_s`` using structure constants;
* the form: the coefficient equals ``(^H_x _H_y, _H_w) = (^H_x, _H_w _H_{y^-1})``,
  i.e. the coefficient of ``_H_x`` in ``_H_w _H_{y^-1}``.

``theta_on_simple`` runs both and refuses to answer if they differ.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import RankExceeded, RouteDisagreement
from .hecke import _acc
from .kl import KLContext
from .laurent import LaurentPoly, ONE
from .render import render_combination
from .rsk import dominance_leq, shape
from .symgroup import (
    IDENTITY, Permutation, bruhat_leq, demazure_product, enumerate_sn,
    inverse, reduced_word, right_descents, s, support_max,
)

__all__ = [
    "DualExpansion", "StabilityReport", "DEFAULT_CEILING", "theta_recursive",
    "theta_form", "theta_on_simple", "stabilized_theta", "act", "stability_scan",
    "support_bound", "check_mu_support_lemma", "check_cell_constraint",
]

log = logging.getLogger(__name__)

DEFAULT_CEILING = 8


@dataclass
class DualExpansion:
    """``sum_w coeffs[w] ^H_w`` computed for ``^H_x _H_y`` at ``rank``.

    A stabilized (rank-independent) expansion has ``rank == 0`` and
    ``stabilized`` set; ``certified_rank`` then records the smallest rank at
    which every coefficient is guaranteed to have reached its limit.
    """
    x: Permutation
    y: Permutation
    rank: int
    coeffs: dict
    stabilized: bool = False
    certified_rank: int | None = None

    def __post_init__(self):
        self.coeffs = {w: c for w, c in self.coeffs.items() if c}
        if not self.stabilized:
            for w in self.coeffs:
                if support_max(w) > self.rank:
                    raise RankExceeded(f"{w} does not lie in S_{self.rank}")

    def coeff(self, w: Permutation) -> LaurentPoly:
        return self.coeffs.get(w, LaurentPoly())

    def support(self) -> list:
        return sorted(self.coeffs, key=Permutation.sort_key)

    def max_support(self) -> int:
        return max((support_max(w) for w in self.coeffs), default=0)

    def __str__(self):
        return render_combination(self.coeffs, "^H")

    def to_json(self) -> dict:
        d = {
            "x": list(self.x.window),
            "y": list(self.y.window),
            "rank": 0 if self.stabilized else self.rank,
            "stabilized": self.stabilized,
            "terms": [[list(w.window), self.coeffs[w].to_json()] for w in self.support()],
        }
        if self.stabilized:
            d["certified_rank"] = self.certified_rank
        return d

    @classmethod
    def from_json(cls, data: dict) -> "DualExpansion":
        return cls(Permutation(data["x"]), Permutation(data["y"]), data["rank"],
                   {Permutation(w): LaurentPoly.from_json(c) for w, c in data["terms"]},
                   stabilized=data.get("stabilized", False),
                   certified_rank=data.get("certified_rank"))


@dataclass
class StabilityReport:
    x: Permutation
    y: Permutation
    ranks: list
    expansions: dict
    stabilized_from: int | None
    support_bound: int
    max_support_seen: int
    support_bound_ok: bool
    rank_stable_ok: bool
    first_discrepancy: dict | None = None
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "x": list(self.x.window),
            "y": list(self.y.window),
            "ranks": list(self.ranks),
            "expansions": {str(k): [[list(w.window), e.coeffs[w].to_json()] for w in e.support()]
                           for k, e in sorted(self.expansions.items())},
            "stabilized_from": self.stabilized_from,
            "support_bound": self.support_bound,
            "max_support_seen": self.max_support_seen,
            "support_bound_ok": self.support_bound_ok,
            "rank_stable_ok": self.rank_stable_ok,
            "first_discrepancy": self.first_discrepancy,
            "violations": self.violations,
        }


def support_bound(x: Permutation, y: Permutation) -> int:
    """``2^l(y) * n`` with ``n = max(m(x), m(y), 1)``."""
    return 2 ** y.length() * max(support_max(x), support_max(y), 1)


def _search_bound(u: Permutation) -> int:
    return max(2 * support_max(u), support_max(u) + 1)


# -- route A: recursion along a reduced word ---------------------------
def theta_recursive(ctx: KLContext, x: Permutation, y: Permutation, k: int,
                    ceiling: int | None = None) -> dict:
    """``{w: [^H_x _H_y : ^H_w]}`` at rank ``k``; ``k = 0`` gives the stabilized action.

    With ``k = 0`` and a ``ceiling``, any step that would have to search beyond
    S_ceiling raises ``RankExceeded``.
    """
    key = (x, y, k)
    hit = ctx._theta.get(key)
    if hit is not None:
        return hit
    if y == IDENTITY:
        out = {x: ONE}
    else:
        i = reduced_word(y)[-1]
        y1 = y.mul_simple_right(i)
        prev = theta_recursive(ctx, x, y1, k, ceiling)
        out: dict = {}
        for u, c in prev.items():
            if k == 0 and ceiling is not None and u.has_right_descent(i) \
                    and _search_bound(u) > ceiling:
                raise RankExceeded(
                    f"the stabilized action of _H_s{i} on ^H_{u} searches S_{_search_bound(u)},"
                    f" above the feasibility ceiling {ceiling}")
            for w, d in ctx.dual_times_gen(u, i, k).items():
                _acc(out, w, c * d)
        for c_, g in ctx.gamma_raw(y1, s(i)).items():
            if c_ != y:
                for w, d in theta_recursive(ctx, x, c_, k, ceiling).items():
                    _acc(out, w, -(g * d))
    ctx._theta[key] = out
    ctx.dirty = True
    return out


# -- route B: the bilinear form ----------------------------------------
def theta_form(ctx: KLContext, x: Permutation, y: Permutation, k: int,
               prune: bool = True) -> dict:
    """``{w: coefficient of _H_x in _H_w _H_{y^-1}}`` over ``w`` in S_k.

    With ``prune`` only candidates that can contribute are visited:
    ``m(w) <= 2^l(y) n``, ``x <= w * y^-1`` (Demazure product bounds the
    support of the product) and ``shape(w)`` dominating ``shape(x)``.
    """
    key = (x, y, k)
    if prune:
        hit = ctx._form.get(key)
        if hit is not None:
            return hit
    yinv = inverse(y)
    bound = support_bound(x, y)
    shape_x = shape(x, k)
    out = {}
    for w in enumerate_sn(k):
        if prune:
            if support_max(w) > bound:
                continue
            if not bruhat_leq(x, demazure_product(w, yinv)):
                continue
            if not dominance_leq(shape_x, shape(w, k)):
                continue
        c = ctx.gamma_raw(w, yinv).get(x)
        if c:
            out[w] = c
    if prune:
        ctx._form[key] = out
        ctx.dirty = True
    return out


def _check_rank(x: Permutation, y: Permutation, k: int, ceiling: int) -> None:
    if k > ceiling:
        raise RankExceeded(f"rank {k} is above the feasibility ceiling {ceiling}")
    for p in (x, y):
        if support_max(p) > k:
            raise RankExceeded(f"{p} does not lie in S_{k}")


def theta_on_simple(ctx: KLContext, x: Permutation, y: Permutation, k: int,
                    ceiling: int = DEFAULT_CEILING) -> DualExpansion:
    """``^H_x _H_y`` in the dual KL basis of H_k, cross-checked by both routes."""
    _check_rank(x, y, k, ceiling)
    a = theta_recursive(ctx, x, y, k)
    b = theta_form(ctx, x, y, k)
    if a != b:
        diff = {str(w): (str(a.get(w, 0)), str(b.get(w, 0)))
                for w in set(a) | set(b) if a.get(w) != b.get(w)}
        raise RouteDisagreement(f"x={x} y={y} k={k}: {diff}")
    return DualExpansion(x, y, k, dict(a))


def stabilized_theta(ctx: KLContext, x: Permutation, y: Permutation,
                     ceiling: int = DEFAULT_CEILING) -> DualExpansion:
    """The rank-independent limit of ``^H_x _H_y``.

    The action of each ``_H_s`` is evaluated with its mu-sum confined to
    ``m(u) <= 2 m(x)``, which is exact at every rank; the result equals the
    rank-k expansion for every ``k >= certified_rank``.
    """
    kstar = 2 ** y.length() * max(support_max(x), support_max(y), 2) + 1
    coeffs = theta_recursive(ctx, x, y, 0, ceiling)
    return DualExpansion(x, y, 0, dict(coeffs), stabilized=True, certified_rank=kstar)


def act(ctx: KLContext, coeffs: dict, y: Permutation, k: int = 0,
        ceiling: int | None = DEFAULT_CEILING) -> dict:
    """Right action of ``_H_y`` on ``sum_u coeffs[u] ^H_u`` (rank k, or stabilized for k=0)."""
    out: dict = {}
    for u, c in coeffs.items():
        for w, d in theta_recursive(ctx, u, y, k, ceiling).items():
            _acc(out, w, c * d)
    return out


# -- scans and checks ----------------------------------------------------
def check_cell_constraint(expansion: DualExpansion) -> list:
    """Every ``w`` in the support must satisfy ``shape(w)`` dominates ``shape(x)``."""
    if expansion.stabilized:
        n = max([support_max(expansion.x), 1] + [support_max(w) for w in expansion.coeffs])
    else:
        n = expansion.rank
    lam_x = shape(expansion.x, n)
    out = []
    for w in expansion.support():
        lam_w = shape(w, n)
        if not dominance_leq(lam_x, lam_w):
            out.append({"kind": "cell", "w": list(w.window), "rank": n,
                        "shape_w": list(lam_w.parts), "shape_x": list(lam_x.parts)})
    return out


def stability_scan(ctx: KLContext, x: Permutation, y: Permutation, ranks,
                   ceiling: int = DEFAULT_CEILING) -> StabilityReport:
    """Compute ``^H_x _H_y`` at every rank and test rank stability and the support bound."""
    ranks = list(ranks)
    if ranks != sorted(ranks) or not ranks:
        raise ValueError("ranks must be a non-empty ascending list")
    if ranks[0] < max(support_max(x), support_max(y)):
        raise RankExceeded(f"rank {ranks[0]} is too small for x={x}, y={y}")
    expansions = {}
    for k in ranks:
        log.info("scan %s %s at rank %d", x, y, k)
        expansions[k] = theta_on_simple(ctx, x, y, k, ceiling)

    violations = []
    first = None
    everything = set()
    for e in expansions.values():
        everything |= set(e.coeffs)
    for w in sorted(everything, key=Permutation.sort_key):
        n_w = max(support_max(x), support_max(y), support_max(w))
        later = [k for k in ranks if k > n_w]
        vals = [expansions[k].coeff(w) for k in later]
        if any(v != vals[0] for v in vals[1:]):
            item = {"kind": "rank_stability", "w": list(w.window), "ranks": later,
                    "values": [str(v) for v in vals]}
            violations.append(item)
            first = first or item

    bound = support_bound(x, y)
    max_seen = max(e.max_support() for e in expansions.values())
    for k, e in expansions.items():
        for w in e.support():
            if support_max(w) > bound:
                violations.append({"kind": "support_bound", "w": list(w.window), "rank": k,
                                   "bound": bound})
        violations.extend(check_cell_constraint(e))

    stabilized_from = None
    for j, k in enumerate(ranks):
        if all(expansions[r].coeffs == expansions[k].coeffs for r in ranks[j:]):
            stabilized_from = k
            break

    return StabilityReport(
        x=x, y=y, ranks=ranks, expansions=expansions,
        stabilized_from=stabilized_from, support_bound=bound,
        max_support_seen=max_seen, support_bound_ok=max_seen <= bound,
        rank_stable_ok=first is None, first_discrepancy=first, violations=violations,
    )


def check_mu_support_lemma(ctx: KLContext, n: int) -> list:
    """Pairs in S_n with ``mu(a,b) != 0``, ``rds(a) - rds(b)`` nonempty and ``m(b) > 2 m(a)``."""
    ctx.ensure_rank(n)
    bad = []
    for b in enumerate_sn(n):
        for a, p in ctx.column(b).items():
            if a == b or not p.coeff(1):
                continue
            for lo, hi in ((a, b), (b, a)):
                if right_descents(lo) - right_descents(hi) and \
                        support_max(hi) > 2 * support_max(lo):
                    bad.append((lo, hi))
    return bad
