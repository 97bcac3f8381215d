"""Command-line front end.

Exit codes: 0 ok, 1 a verification suite failed, 2 bad input, 3 the request is
beyond the rank ceiling, 4 the two independent product computations disagree.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .cache import FORMAT_VERSION, load_context, save_context
from .errors import (
    ChecksumMismatch, FormatVersionMismatch, ParseError, RankExceeded, RouteDisagreement,
)
from .hecke import Basis, HeckeElt, mult_std
from .kl import KLContext
from .laurent import LaurentPoly, ONE
from .render import render_combination
from .rsk import count_syt, descents_from_tableaux, partitions, rs, rs_inverse
from .stab import (
    DEFAULT_CEILING, act, check_cell_constraint, check_mu_support_lemma, stability_scan,
    stabilized_theta, theta_on_simple,
)
from .symgroup import (
    Permutation, bruhat_leq, enumerate_sn, left_descents, lower_covers, parse_permutation,
    right_descents, s, support_max, word_string,
)

log = logging.getLogger("klstab")

CACHE_ENV = "KLSTAB_CACHE"
JSON_SCHEMA_VERSION = FORMAT_VERSION

EXIT_OK, EXIT_SUITE, EXIT_PARSE, EXIT_FEASIBILITY, EXIT_INCONSISTENT = 0, 1, 2, 3, 4


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "klstab" / "context.klcx"


# -- argument helpers ---------------------------------------------------------
def perm_arg(text: str) -> Permutation:
    try:
        return parse_permutation(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def ranks_arg(text: str) -> list:
    try:
        if ".." in text:
            a, b = text.split("..")
            out = list(range(int(a), int(b) + 1))
        else:
            out = sorted({int(t) for t in text.split(",")})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rank range {text!r}; use a..b or a,b,c") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty rank range {text!r}")
    return out


def _split_top(text: str) -> list:
    # split on + and - that are outside parentheses and brackets
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip():
            parts.append(cur)
            cur = "-" if ch == "-" else ""
            continue
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def parse_element(text: str) -> dict:
    """``"(v^-1 + v)*s1 + s2*s1 - [2,3,1]"`` to ``{perm: coeff}``."""
    out: dict = {}
    for term in _split_top(text):
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:].strip()
        c = ONE
        if term.startswith("("):
            close = term.index(")")
            try:
                c = LaurentPoly.parse(term[1:close])
            except ParseError as exc:
                raise ParseError(f"bad coefficient in {text!r}: {exc}") from None
            term = term[close + 1:].lstrip(" *")
        else:
            head, _, rest = term.partition("*")
            if head.isdigit() and rest:
                c, term = LaurentPoly.constant(int(head)), rest
        w = parse_permutation(term)
        out[w] = out.get(w, LaurentPoly()) + c * sign
    return {w: c for w, c in out.items() if c}


# -- context handling ---------------------------------------------------------
class Session:
    """The shared KL context plus the cache file it came from."""

    def __init__(self, args):
        self.path = None if args.no_cache else Path(args.cache or default_cache_path())
        self.ceiling = args.rank_ceiling
        self.ctx = None
        if self.path is not None and self.path.exists():
            t0 = time.perf_counter()
            try:
                self.ctx = load_context(self.path, rank=self.ceiling)
                log.info("loaded cache %s in %.2fs", self.path, time.perf_counter() - t0)
            except (FormatVersionMismatch, ChecksumMismatch) as exc:
                log.warning("ignoring unusable cache %s: %s", self.path, exc)
        if self.ctx is None:
            self.ctx = KLContext(self.ceiling)

    def feasible(self, k: int) -> None:
        if k > self.ceiling:
            raise RankExceeded(f"rank {k} is above the rank ceiling {self.ceiling}")

    def close(self) -> None:
        if self.path is not None and self.ctx.dirty:
            t0 = time.perf_counter()
            save_context(self.ctx, self.path)
            log.info("saved cache %s in %.2fs", self.path, time.perf_counter() - t0)


def _rank_of(*ws: Permutation) -> int:
    return max([2] + [support_max(w) for w in ws])


def emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data))
    else:
        print(text)


def _terms_json(terms: dict) -> list:
    return [[list(w.window), terms[w].to_json()] for w in sorted(terms, key=Permutation.sort_key)]


# -- commands -----------------------------------------------------------------
def cmd_klpoly(args, ses: Session) -> int:
    ses.feasible(_rank_of(args.x, args.y))
    p = ses.ctx.kl_poly(args.x, args.y)
    emit(args, str(p), {"x": list(args.x.window), "y": list(args.y.window), "p": p.to_json()})
    return EXIT_OK


def cmd_mu(args, ses: Session) -> int:
    ses.feasible(_rank_of(args.x, args.y))
    m = ses.ctx.mu(args.x, args.y)
    emit(args, str(m), {"x": list(args.x.window), "y": list(args.y.window), "mu": m})
    return EXIT_OK


def cmd_theta(args, ses: Session) -> int:
    if args.stabilized:
        e = stabilized_theta(ses.ctx, args.x, args.y, ceiling=ses.ceiling)
    else:
        ses.feasible(args.rank)
        e = theta_on_simple(ses.ctx, args.x, args.y, args.rank, ceiling=ses.ceiling)
    data = e.to_json()
    data["schema"] = JSON_SCHEMA_VERSION
    emit(args, str(e), data)
    return EXIT_OK


def render_report(rep) -> str:
    lines = [f"x = {word_string(rep.x)}   y = {word_string(rep.y)}"]
    for k in rep.ranks:
        lines.append(f"rank {k}: {rep.expansions[k]}")
    lines.append(f"stabilized from rank: {rep.stabilized_from if rep.stabilized_from else 'not within scanned ranks'}")
    lines.append(f"support bound 2^l(y)*n = {rep.support_bound}, max support seen = {rep.max_support_seen}"
                 f" ({'ok' if rep.support_bound_ok else 'VIOLATED'})")
    lines.append(f"rank stability: {'ok' if rep.rank_stable_ok else 'VIOLATED'}")
    lines.append(f"violations: {len(rep.violations)}")
    for v in rep.violations:
        lines.append("  " + json.dumps(v))
    return "\n".join(lines)


def cmd_scan(args, ses: Session) -> int:
    ses.feasible(max(args.ranks))
    rep = stability_scan(ses.ctx, args.x, args.y, args.ranks, ceiling=ses.ceiling)
    data = rep.to_json()
    data["schema"] = JSON_SCHEMA_VERSION
    emit(args, render_report(rep), data)
    return EXIT_OK


def cmd_rsk(args, ses: Session) -> int:
    n = args.rank if args.rank is not None else _rank_of(args.w)
    if support_max(args.w) > n:
        raise RankExceeded(f"{args.w} does not lie in S_{n}")
    P, Q = rs(args.w, n)
    text = f"shape {P.shape}\nP:\n{P}\nQ:\n{Q}"
    emit(args, text, {"w": list(args.w.window), "rank": n, "shape": list(P.shape.parts),
                      "P": P.to_json(), "Q": Q.to_json()})
    return EXIT_OK


def cmd_cells(args, ses: Session) -> int:
    n = args.rank
    ses.feasible(n)
    by_shape: dict = {}
    for w in sorted(enumerate_sn(n), key=Permutation.sort_key):
        P, Q = rs(w, n)
        by_shape.setdefault(P.shape.parts, {}).setdefault(Q.rows, []).append(w)
    lines, data = [], []
    for lam in partitions(n):
        left = by_shape[lam.parts]
        cells = [left[q] for q in sorted(left)]
        size = sum(map(len, cells))
        lines.append(f"{lam}: size {size}, {len(cells)} left cells")
        for c in cells:
            lines.append("  {" + ", ".join(word_string(w) for w in c) + "}")
        data.append({"shape": list(lam.parts), "size": size,
                     "left_cells": [[list(w.window) for w in c] for c in cells]})
    emit(args, "\n".join(lines), {"rank": n, "two_sided_cells": data})
    return EXIT_OK


def cmd_mult(args, ses: Session) -> int:
    a, b = parse_element(args.a), parse_element(args.b)
    n = args.rank if args.rank is not None else _rank_of(*a, *b)
    ses.feasible(n)
    ctx = ses.ctx
    if args.basis == "standard":
        h = mult_std(HeckeElt(Basis.STANDARD, n, a), HeckeElt(Basis.STANDARD, n, b))
        terms, symbol = h.terms, "H"
    elif args.basis == "kl":
        HeckeElt(Basis.KL, n, a), HeckeElt(Basis.KL, n, b)  # rank check
        terms = {}
        for x, c in a.items():
            for y, d in b.items():
                for z, g in ctx.gamma_raw(x, y).items():
                    terms[z] = terms.get(z, LaurentPoly()) + c * d * g
        terms, symbol = {z: c for z, c in terms.items() if c}, "_H"
    else:
        # dual KL element on the left, KL element on the right
        HeckeElt(Basis.DUAL_KL, n, a), HeckeElt(Basis.KL, n, b)
        terms = {}
        for y, d in b.items():
            for z, c in act(ctx, a, y, n, None).items():
                terms[z] = terms.get(z, LaurentPoly()) + c * d
        terms, symbol = {z: c for z, c in terms.items() if c}, "^H"
    emit(args, render_combination(terms, symbol),
         {"basis": {"standard": "standard", "kl": "kl", "dual": "dual_kl"}[args.basis],
          "rank": n, "terms": _terms_json(terms)})
    return EXIT_OK


# -- verification suites ----------------------------------------------------------
def suite_mu_properties(ctx: KLContext, n: int):
    ctx.ensure_rank(n)
    elems = sorted(enumerate_sn(n), key=Permutation.sort_key)
    checks, bad = 0, []
    for y in elems:
        covers = set(lower_covers(y))
        for x in elems:
            if x == y:
                continue
            checks += 1
            m = ctx.mu(x, y)
            if m != ctx.mu(y, x):
                bad.append({"kind": "symmetry", "x": list(x.window), "y": list(y.window)})
            comparable = bruhat_leq(x, y) or bruhat_leq(y, x)
            if not comparable and m:
                bad.append({"kind": "incomparable", "x": list(x.window), "y": list(y.window)})
            if x in covers and m != 1:
                bad.append({"kind": "cover", "x": list(x.window), "y": list(y.window), "mu": m})
            if m and bruhat_leq(x, y) and y.length() - x.length() > 1:
                if not (left_descents(y) <= left_descents(x)
                        and right_descents(y) <= right_descents(x)):
                    bad.append({"kind": "descents", "x": list(x.window), "y": list(y.window)})
    return checks, bad


def suite_lemma(ctx: KLContext, n: int):
    pairs = check_mu_support_lemma(ctx, n)
    checks = math.factorial(n) ** 2
    return checks, [{"kind": "lemma", "a": list(a.window), "b": list(b.window)} for a, b in pairs]


def suite_cell_constraint(ctx: KLContext, n: int):
    checks, bad = 0, []
    for x in sorted(enumerate_sn(n), key=Permutation.sort_key):
        for i in range(1, n):
            e = theta_on_simple(ctx, x, s(i), n, ceiling=n)
            checks += 1
            for v in check_cell_constraint(e):
                v.update(x=list(x.window), y=[*s(i).window])
                bad.append(v)
    return checks, bad


def suite_positivity(ctx: KLContext, n: int):
    ctx.ensure_rank(n)
    elems = sorted(enumerate_sn(n), key=Permutation.sort_key)
    checks, bad = 0, []
    for y in elems:
        for x, p in ctx.column(y).items():
            checks += 1
            if not p.is_nonnegative() or (x != y and not p.in_v_times_N()):
                bad.append({"kind": "p", "x": list(x.window), "y": list(y.window), "p": str(p)})
    # all products up to S_4, products with short right factors beyond
    right = elems if n <= 4 else [b for b in elems if b.length() <= 2]
    for a in elems:
        for b in right:
            for c, g in ctx.gamma_raw(a, b).items():
                checks += 1
                if not g.is_nonnegative():
                    bad.append({"kind": "gamma", "a": list(a.window), "b": list(b.window),
                                "c": list(c.window), "gamma": str(g)})
    return checks, bad


def suite_rs(ctx: KLContext, n: int):
    checks, bad = 0, []
    seen = set()
    for w in enumerate_sn(n):
        P, Q = rs(w, n)
        checks += 1
        seen.add((P.rows, Q.rows))
        if rs_inverse(P, Q) != w:
            bad.append({"kind": "inverse", "w": list(w.window)})
        lds, rds = descents_from_tableaux(P, Q)
        if lds != left_descents(w) or rds != right_descents(w):
            bad.append({"kind": "descents", "w": list(w.window)})
    total = sum(count_syt(lam) ** 2 for lam in partitions(n))
    if total != math.factorial(n) or len(seen) != math.factorial(n):
        bad.append({"kind": "count", "sum_f2": total, "distinct": len(seen)})
    return checks, bad


SUITES = {
    "mu-properties": suite_mu_properties,
    "lemma-3.1": suite_lemma,
    "cell-constraint": suite_cell_constraint,
    "positivity": suite_positivity,
    "rs-bijectivity": suite_rs,
}


def cmd_verify(args, ses: Session) -> int:
    ses.feasible(args.rank)
    checks, bad = SUITES[args.suite](ses.ctx, args.rank)
    ok = not bad
    text = [f"suite {args.suite} at rank {args.rank}: {'pass' if ok else 'FAIL'}"
            f" ({checks} checks, {len(bad)} violations)"]
    text += ["  " + json.dumps(v) for v in bad[:50]]
    emit(args, "\n".join(text), {"suite": args.suite, "rank": args.rank, "passed": ok,
                                 "checks": checks, "violations": bad})
    return EXIT_OK if ok else EXIT_SUITE


# -- parser ---------------------------------------------------------------------
def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON instead of text")
    p.add_argument("--cache", metavar="PATH", default=d(None),
                   help=f"cache file (default: ${CACHE_ENV} or ~/.cache/klstab/context.klcx)")
    p.add_argument("--no-cache", action="store_true", default=d(False),
                   help="neither read nor write the cache file")
    p.add_argument("--rank-ceiling", type=int, metavar="N", default=d(DEFAULT_CEILING),
                   help=f"refuse ranks above N (default {DEFAULT_CEILING})")
    p.add_argument("-v", "--verbose", action="count", default=d(0), help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="klstab",
        description="Kazhdan-Lusztig combinatorics of the symmetric group: KL polynomials, "
                    "mu-values, cells and products in the dual KL basis across ranks.",
        epilog="Permutations are given as windows ([2,3,1]), words (s1*s2*s1, need not be "
               "reduced) or e.  Exit codes: 0 ok, 1 suite failed, 2 bad input, "
               "3 above the rank ceiling, 4 internal inconsistency.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("klpoly", parents=[common], help="KL polynomial p_{x,y}")
    p.add_argument("x", type=perm_arg)
    p.add_argument("y", type=perm_arg)
    p.set_defaults(func=cmd_klpoly)

    p = sub.add_parser("mu", parents=[common], help="mu(x, y)")
    p.add_argument("x", type=perm_arg)
    p.add_argument("y", type=perm_arg)
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("theta", parents=[common], help="^H_x _H_y in the dual KL basis")
    p.add_argument("x", type=perm_arg)
    p.add_argument("y", type=perm_arg)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rank", type=int, help="compute in H_k")
    g.add_argument("--stabilized", action="store_true", help="the rank-independent limit")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("scan", parents=[common], help="compare ^H_x _H_y across ranks")
    p.add_argument("x", type=perm_arg)
    p.add_argument("y", type=perm_arg)
    p.add_argument("--ranks", type=ranks_arg, required=True, help="a..b or a,b,c")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("rsk", parents=[common], help="Robinson-Schensted tableaux of w")
    p.add_argument("w", type=perm_arg)
    p.add_argument("--rank", type=int, help="view w in S_n (default m(w))")
    p.set_defaults(func=cmd_rsk)

    p = sub.add_parser("cells", parents=[common], help="two-sided and left cells of S_n")
    p.add_argument("--rank", type=int, required=True)
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("mult", parents=[common], help="multiply two Hecke algebra elements",
                       description="Elements are sums such as '(v^-1 + v)*s1 + s2*s1 - [3,1,2]'. "
                                   "With --basis dual the left factor is in the dual KL basis "
                                   "and the right one in the KL basis.")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--basis", choices=("standard", "kl", "dual"), default="standard")
    p.add_argument("--rank", type=int)
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--rank", type=int, required=True)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.rank_ceiling < 2:
        ap.error("--rank-ceiling must be at least 2")
    logging.basicConfig(level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    ses = None
    try:
        ses = Session(args)
        code = args.func(args, ses)
    except (ParseError, ValueError) as exc:
        print(f"klstab: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RankExceeded as exc:
        print(f"klstab: infeasible: {exc}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except RouteDisagreement as exc:
        print(f"klstab: internal inconsistency, please report this as a bug: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if ses is not None:
        try:
            ses.close()
        except OSError as exc:
            log.warning("could not write cache %s: %s", ses.path, exc)
    return code


if __name__ == "__main__":
    sys.exit(main())
